from typing import Annotated

from pydantic import BaseModel, Field, computed_field

from .FinVector import FinVector


class BoundPair(BaseModel):
    """A certified enclosure lower <= value <= upper.

    ``witness`` is a feasible point of the primal unit ball whose pairing with the target equals ``lower``.
    """

    lower: Annotated[float, Field(ge=0.0, description="Certified lower bound.")]
    upper: Annotated[float, Field(ge=0.0, description="Certified upper bound.")]
    witness: Annotated[FinVector, Field(description="Unit-ball point attaining the lower bound.")]
    iterations: Annotated[int, Field(default=0, ge=0, description="Outer iterations spent tightening the bounds.")]

    @computed_field
    @property
    def gap(self) -> float:
        return self.upper - self.lower

    def scaled(self, factor: float) -> "BoundPair":
        """Bounds of factor * target; the witness flips sign with the factor."""
        witness = self.witness
        if factor < 0:
            witness = FinVector.from_arrays(witness.indices, -witness.values)
        return BoundPair(lower=self.lower * abs(factor), upper=self.upper * abs(factor),
                         witness=witness, iterations=self.iterations)
