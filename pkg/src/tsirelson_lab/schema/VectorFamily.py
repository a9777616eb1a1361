from typing import Annotated

from pydantic import BaseModel, ConfigDict, Field, field_validator

from .FinVector import FinVector
from .Space import Space


class VectorFamily(BaseModel):
    """A finite family {x_1, ..., x_n} and the space whose norm measures it."""

    model_config = ConfigDict(frozen=True)

    members: Annotated[tuple[FinVector, ...], Field(min_length=1, description="The vectors x_j.")]
    space: Annotated[Space, Field(default=Space.T2, description="'t2' or 'st2'.")]

    @field_validator("space")
    @classmethod
    def _check_space(cls, space: Space) -> Space:
        if space not in (Space.T2, Space.ST2):
            raise ValueError(f"Families live in 't2' or 'st2', got '{space.value}'")
        return space

    @property
    def n(self) -> int:
        return len(self.members)
