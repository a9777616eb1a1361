from typing import Annotated, Literal, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator


class Interval(BaseModel):
    """The index set {lo, lo+1, ..., hi}."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["interval"] = "interval"
    lo: Annotated[int, Field(ge=1, description="Smallest index.")]
    hi: Annotated[int, Field(ge=1, description="Largest index.")]

    @model_validator(mode="after")
    def _check_order(self) -> "Interval":
        if self.lo > self.hi:
            raise ValueError(f"Interval needs lo <= hi, got [{self.lo}, {self.hi}]")
        return self

    @property
    def min_index(self) -> int:
        return self.lo

    @property
    def max_index(self) -> int:
        return self.hi

    def contains(self, index: int) -> bool:
        return self.lo <= index <= self.hi

    def mask(self, indices: np.ndarray) -> np.ndarray:
        return (indices >= self.lo) & (indices <= self.hi)

    def lt(self, other: "IndexSet") -> bool:
        """E < F: every index of E is smaller than every index of F."""
        return self.max_index < other.min_index

    def issubset(self, other: "IndexSet") -> bool:
        if isinstance(other, Interval):
            return other.lo <= self.lo and self.hi <= other.hi
        return all(other.contains(i) for i in range(self.lo, self.hi + 1))


class Explicit(BaseModel):
    """An arbitrary nonempty finite index set."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["explicit"] = "explicit"
    indices: Annotated[tuple[int, ...], Field(min_length=1, description="Strictly increasing positive indices.")]

    @model_validator(mode="after")
    def _check_indices(self) -> "Explicit":
        if self.indices[0] < 1:
            raise ValueError(f"Indices are 1-based, got {self.indices[0]}")
        for a, b in zip(self.indices, self.indices[1:]):
            if b <= a:
                raise ValueError(f"Indices must be strictly increasing, got {b} after {a}")
        return self

    @property
    def min_index(self) -> int:
        return self.indices[0]

    @property
    def max_index(self) -> int:
        return self.indices[-1]

    def contains(self, index: int) -> bool:
        return index in self.indices

    def mask(self, indices: np.ndarray) -> np.ndarray:
        return np.isin(indices, np.asarray(self.indices, dtype=np.int64))

    def lt(self, other: "IndexSet") -> bool:
        return self.max_index < other.min_index

    def issubset(self, other: "IndexSet") -> bool:
        return all(other.contains(i) for i in self.indices)


IndexSet = Annotated[Union[Interval, Explicit], Field(discriminator="kind")]
