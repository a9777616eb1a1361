from typing import Annotated

from pydantic import BaseModel, Field

from .NormCertificate import NormCertificate


class NormResult(BaseModel):
    value: Annotated[float, Field(ge=0.0, description="Norm value.")]
    certificate: Annotated[NormCertificate, Field(description="Norming tree attaining the value.")]
    iterations: Annotated[int, Field(ge=0, description="Number of fixed-point sweeps performed.")]
