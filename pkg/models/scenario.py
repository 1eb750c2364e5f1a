# models/scenario.py
from typing import Any, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator

from configurations.config import Tolerances
from core.matkernel import as_matrix
from core.verdicts import Mode, ScenarioName
from models.report import AnalysisReport
from models.state import Bipartition, DensityMatrix, PureState


class Scenario(BaseModel):
    """
    A built-in experiment: global unitary, split and joint input pair.
    The environment starts in |0…0⟩ for the induced channels.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    name: ScenarioName
    mode: Mode
    u: np.ndarray
    split: Bipartition
    ket1: PureState
    ket2: PureState
    s1: DensityMatrix
    s2: DensityMatrix

    @field_validator("u", mode="before")
    @classmethod
    def coerce_u(cls, v: Any) -> np.ndarray:
        arr = as_matrix(v)
        arr.setflags(write=False)
        return arr

    @property
    def tolerances(self) -> Tolerances:
        if self.mode.is_paper():
            return Tolerances.paper()
        return Tolerances.strict()

    @property
    def split_spec(self) -> str:
        return f"{len(self.split.system_qubits)}:{len(self.split.environment_qubits)}"


# Printed six-distance tables, in printed order:
# system in/out, environment in/out, full in/out.
PRINTED_DISTANCES: dict[ScenarioName, tuple[float, float, float, float, float, float]] = {
    ScenarioName.BELL: (0.500000, 0.499849, 0.500000, 0.499849, 0.707107, 0.706893),
    ScenarioName.GHZ: (1.000000, 0.999698, 1.000000, 0.000000, 1.000000, 0.999698),
    ScenarioName.W: (0.500000, 0.693130, 0.500000, 0.117708, 0.707107, 0.706249),
}


class ScenarioReport(BaseModel):
    name: ScenarioName
    mode: Mode
    analysis: AnalysisReport
    # max |computed − printed| over the six trace distances (trace metric only)
    printed_deviation: Optional[float] = None
