from typing import Annotated, Iterator, Sequence

from pydantic import ConfigDict, Field, RootModel, model_validator

from .IndexSet import IndexSet


def is_admissible(parts: Sequence[IndexSet]) -> bool:
    """k <= E_1 < E_2 < ... < E_k (Schreier admissibility)."""
    if not parts:
        return False
    if len(parts) > parts[0].min_index:
        return False
    return all(a.lt(b) for a, b in zip(parts, parts[1:]))


class AdmissiblePartition(RootModel[tuple[IndexSet, ...]]):
    """A family k <= E_1 < ... < E_k of finite index sets, serialized as the plain list of its parts."""

    model_config = ConfigDict(frozen=True)

    root: Annotated[tuple[IndexSet, ...], Field(min_length=1, description="Successive index sets E_1 < ... < E_k.")]

    @model_validator(mode="after")
    def _check_admissible(self) -> "AdmissiblePartition":
        if not is_admissible(self.root):
            raise ValueError(f"Not admissible: {len(self.root)} parts must be successive and start at index "
                             f">= {len(self.root)}")
        return self

    @property
    def parts(self) -> tuple[IndexSet, ...]:
        return self.root

    @property
    def k(self) -> int:
        return len(self.root)

    def __len__(self) -> int:
        return len(self.root)

    def __iter__(self) -> Iterator[IndexSet]:
        return iter(self.root)

    def __getitem__(self, item):
        return self.root[item]
