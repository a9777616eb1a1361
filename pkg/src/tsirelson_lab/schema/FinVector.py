import math
from typing import Annotated, Iterable

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator


class FinVector(BaseModel):
    """Finitely supported real sequence x = sum_n a_n t_n, stored as sorted (index, value) pairs.

    Indices are 1-based and strictly increasing; no stored value is zero. The empty vector is the zero vector.
    Instances are immutable and hashable.
    """

    model_config = ConfigDict(frozen=True)

    coords: Annotated[tuple[tuple[int, float], ...], Field(
        description="Pairs (index, value), indices strictly increasing and positive, values nonzero and finite.")] = ()

    @field_validator("coords")
    @classmethod
    def _check_coords(cls, coords: tuple[tuple[int, float], ...]) -> tuple[tuple[int, float], ...]:
        previous = 0
        for index, value in coords:
            if index < 1:
                raise ValueError(f"Indices are 1-based, got {index}")
            if index <= previous:
                raise ValueError(f"Indices must be strictly increasing, got {index} after {previous}")
            if value == 0.0:
                raise ValueError(f"Stored values must be nonzero, got 0 at index {index}")
            if not math.isfinite(value):
                raise ValueError(f"Values must be finite, got {value} at index {index}")
            previous = index
        return coords

    @classmethod
    def zero(cls) -> "FinVector":
        return cls.model_construct(coords=())

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[int, float]]) -> "FinVector":
        """Builds a vector from unordered pairs; zero values are dropped, repeated indices rejected."""
        items = sorted((int(i), float(v)) for i, v in pairs)
        for (i, _), (j, _) in zip(items, items[1:]):
            if i == j:
                raise ValueError(f"Index {i} given more than once")
        return cls(coords=tuple((i, v) for i, v in items if v != 0.0))

    @classmethod
    def from_arrays(cls, indices: np.ndarray | list[int], values: np.ndarray | list[float]) -> "FinVector":
        """Fast path for already sorted, distinct indices; zero values are dropped."""
        indices = np.asarray(indices, dtype=np.int64)
        values = np.asarray(values, dtype=np.float64)
        keep = values != 0.0
        return cls.model_construct(coords=tuple(zip(indices[keep].tolist(), values[keep].tolist())))

    @classmethod
    def basis_sum(cls, indices: Iterable[int], value: float = 1.0) -> "FinVector":
        """sum_{i in indices} value * t_i."""
        return cls.from_pairs((i, value) for i in indices)

    @property
    def indices(self) -> np.ndarray:
        return np.fromiter((i for i, _ in self.coords), dtype=np.int64, count=len(self.coords))

    @property
    def values(self) -> np.ndarray:
        return np.fromiter((v for _, v in self.coords), dtype=np.float64, count=len(self.coords))

    @property
    def support_size(self) -> int:
        return len(self.coords)

    def is_zero(self) -> bool:
        return not self.coords

    def get(self, index: int) -> float:
        for i, v in self.coords:
            if i == index:
                return v
            if i > index:
                break
        return 0.0

    def to_literal(self) -> dict:
        """The vector literal {"coords": [[index, value], ...]}."""
        return {"coords": [[i, v] for i, v in self.coords]}
