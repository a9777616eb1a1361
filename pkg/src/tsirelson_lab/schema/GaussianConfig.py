from typing import Annotated

from pydantic import BaseModel, ConfigDict, Field


class GaussianConfig(BaseModel):
    """Monte Carlo settings; (samples, seed) fixes the Gaussian stream exactly."""

    model_config = ConfigDict(frozen=True)

    samples: Annotated[int, Field(default=2000, ge=1, description="Number of Gaussian draws.")]
    seed: Annotated[int, Field(default=0, ge=0, lt=2 ** 64, description="Key of the counter-based stream.")]
    workers: Annotated[int, Field(
        default=1, ge=0, description="Worker processes evaluating norms; 0 means one per physical core.")]
