# core/run_config.py
from pathlib import Path
from typing import Literal, Optional

from pydantic import BaseModel, Field, model_validator

from core.errors import FormatError
from core.verdicts import Metric, Mode, ScenarioName

Command = Literal["scenario", "analyze", "witness", "validate", "export", "sweep"]


class RunConfig(BaseModel):
    """
    A passive container for one CLI invocation.
    This does NOT execute logic.
    This does NOT load files.
    """

    command: Command
    format: Literal["table", "json"] = "table"

    # scenario / export
    scenario: Optional[ScenarioName] = None
    mode: Optional[Mode] = None
    outdir: Optional[Path] = None

    # analysis knobs
    metric: Metric = Metric.TRACE_NORM
    verdict_tol: Optional[float] = Field(None, ge=0)
    lenient: bool = False
    repair_polar: bool = False

    # files
    unitary_path: Optional[Path] = None
    state1_path: Optional[Path] = None
    state2_path: Optional[Path] = None
    state_path: Optional[Path] = None
    kraus_path: Optional[Path] = None
    start1_path: Optional[Path] = None
    start2_path: Optional[Path] = None

    # bipartition: "2:1" or an explicit system list "0,2"
    split: Optional[str] = None
    system: Optional[str] = None

    # witness / sweep
    correlated: bool = False
    restarts: int = Field(8, ge=1)
    iters: int = Field(400, ge=1)
    step: float = Field(0.25, gt=0)
    seed: int = 0
    instances: int = Field(500, ge=1)

    @model_validator(mode="after")
    def check_consistency(self):
        cmd = self.command

        if self.mode is not None and cmd not in ("scenario", "export"):
            raise FormatError("--mode applies only to built-in scenarios")
        if cmd in ("scenario", "export") and self.scenario is None:
            raise FormatError(f"{cmd} needs a scenario name")
        if cmd == "export" and self.outdir is None:
            raise FormatError("export needs --outdir")

        if cmd in ("analyze", "witness"):
            if self.unitary_path is None:
                raise FormatError(f"{cmd} needs --unitary")
            if (self.split is None) == (self.system is None):
                raise FormatError("give exactly one of --split or --system")
        if cmd == "analyze" and (self.state1_path is None or self.state2_path is None):
            raise FormatError("analyze needs --state1 and --state2")
        if (self.start1_path is None) != (self.start2_path is None):
            raise FormatError("--start1 and --start2 go together")

        if cmd == "validate":
            given = [p for p in (self.unitary_path, self.state_path, self.kraus_path) if p is not None]
            if len(given) != 1:
                raise FormatError("validate takes exactly one of --unitary, --state or --kraus")
        return self

    @property
    def effective_mode(self) -> Mode:
        return self.mode or Mode.EXACT
