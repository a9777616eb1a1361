from enum import Enum
from typing import Annotated, Any, Optional

from pydantic import BaseModel, Field, model_validator

from .Space import Space

# Largest support the command line accepts through --max-support.
MAX_SUPPORT_HARD_LIMIT = 1 << 20


class Command(str, Enum):
    NORM = "norm"
    SNORM = "snorm"
    DUALNORM = "dualnorm"
    REARRANGE = "rearrange"
    SPREAD = "spread"
    PROBE = "probe"
    HIERARCHY = "hierarchy"
    PLOT_DATA = "plot-data"


class RunConfig(BaseModel):
    """One command line invocation, validated before anything is computed."""

    command: Annotated[Command, Field(description="Subcommand to run.")]
    space: Annotated[Space, Field(default=Space.T2, description="Space the command works in.")]
    inputs: Annotated[list[str], Field(default_factory=list, description="Input vector (or report) paths.")]
    output: Annotated[Optional[str], Field(default=None, description="Output path; stdout when omitted.")]
    certificate: Annotated[Optional[str], Field(default=None, description="Where to write the norm certificate.")]
    seed: Annotated[int, Field(default=0, ge=0, lt=2 ** 64, description="Seed of the Gaussian stream.")]
    samples: Annotated[int, Field(default=2000, ge=1, description="Monte Carlo sample count.")]
    workers: Annotated[int, Field(default=1, ge=0, description="Worker processes, 0 = physical cores.")]
    tol: Annotated[float, Field(default=1e-9, gt=0.0, description="Absolute tolerance of norm comparisons.")]
    gap_target: Annotated[float, Field(default=1e-6, gt=0.0, description="Dual enclosure gap target.")]
    max_support: Annotated[Optional[int], Field(
        default=None, ge=1, le=MAX_SUPPORT_HARD_LIMIT, description="Support cap of the norm engine.")]
    probe: Annotated[Optional[str], Field(default=None, description="Probe name for the 'probe' command.")]
    params: Annotated[dict[str, Any], Field(
        default_factory=dict, description="Command specific parameters (k, j, n, block_len, ...).")]

    @model_validator(mode="after")
    def _check_command(self) -> "RunConfig":
        if self.command in (Command.NORM, Command.SNORM, Command.DUALNORM, Command.REARRANGE, Command.SPREAD,
                            Command.PLOT_DATA) and not self.inputs:
            raise ValueError(f"Command '{self.command.value}' needs an input path")
        if self.command == Command.NORM and self.space == Space.ST2:
            raise ValueError("Command 'norm' works in 't' or 't2'; use 'snorm' for 'st2'")
        if self.command == Command.DUALNORM and self.space == Space.T:
            raise ValueError("Command 'dualnorm' works in 't2' or 'st2'")
        if self.command == Command.PROBE and not self.probe:
            raise ValueError("Command 'probe' needs a probe name")
        return self
