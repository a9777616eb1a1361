from typing import Annotated

from pydantic import BaseModel, Field

from .FinVector import FinVector
from .NormResult import NormResult


class SymNormResult(BaseModel):
    """The S(T^2) value of x, represented by ||Dx||_{T^2}."""

    value: Annotated[float, Field(ge=0.0, description="||Dx|| in T^2.")]
    rearranged: Annotated[FinVector, Field(description="The decreasing rearrangement Dx.")]
    inner: Annotated[NormResult, Field(description="The T^2 evaluation of Dx, with its certificate.")]
