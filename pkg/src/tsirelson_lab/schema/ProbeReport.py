from typing import Annotated, Any

from pydantic import BaseModel, Field

CSV_COLUMNS: tuple[str, ...] = ("probe", "space", "n", "estimate", "stderr", "ratio", "seed", "samples")


class ProbeRow(BaseModel):
    n: Annotated[int, Field(description="Family size, block count or spread factor, per probe.")]
    estimate: Annotated[float, Field(description="Main measured quantity.")]
    stderr: Annotated[float, Field(default=0.0, ge=0.0, description="Standard error; 0 for exact quantities.")]
    ratio: Annotated[float, Field(description="Derived ratio tracked by the probe.")]
    seed: Annotated[int, Field(default=0, description="Seed of the row's random stream.")]
    samples: Annotated[int, Field(default=0, ge=0, description="Monte Carlo sample count; 0 for exact rows.")]
    extras: Annotated[dict[str, float], Field(default_factory=dict, description="Probe specific named columns.")]


class ProbeReport(BaseModel):
    """Tabular record of one experiment."""

    probe: Annotated[str, Field(description="Probe name, e.g. 'upper-h'.")]
    space: Annotated[str, Field(description="Space the probe measured in.")]
    config: Annotated[dict[str, Any], Field(default_factory=dict, description="Parameters of the run.")]
    rows: Annotated[list[ProbeRow], Field(default_factory=list)]
    series: Annotated[list[tuple[str, str]], Field(
        default_factory=lambda: [("n", "ratio")], description="Declared (x, y) plot series, by column name.")]

    @property
    def extra_columns(self) -> list[str]:
        names: list[str] = []
        for row in self.rows:
            for key in row.extras:
                if key not in names:
                    names.append(key)
        return names

    def column(self, name: str) -> list[float]:
        if name in CSV_COLUMNS[2:]:
            return [getattr(row, name) for row in self.rows]
        return [row.extras.get(name, float("nan")) for row in self.rows]

    def merged(self, other: "ProbeReport") -> "ProbeReport":
        return self.model_copy(update={"rows": [*self.rows, *other.rows]})
