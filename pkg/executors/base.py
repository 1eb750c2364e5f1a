from abc import ABC, abstractmethod

from configurations.config import Tolerances
from core.run_config import RunConfig
from models.channel import UnitaryDilation
from models.state import Bipartition
from services.channels import make_dilation, repair_polar
from services.codec import load_unitary


class BaseExecutor(ABC):
    """
    Base contract for all executors.
    Executors take a RunConfig and return a response dict:
    {"type": <command>, "data": <report>, "text": <table rendering>}.
    No argument parsing and no printing here.
    """

    @abstractmethod
    def execute(self, config: RunConfig) -> dict:
        pass


def tolerances_for(config: RunConfig) -> Tolerances:
    if config.lenient:
        return Tolerances.paper(config.verdict_tol)
    return Tolerances.strict(config.verdict_tol)


def load_dilation(config: RunConfig, tolerances: Tolerances) -> UnitaryDilation:
    """Unitary file + split flags → dilation with env_init |0…0⟩."""
    u = load_unitary(config.unitary_path)
    if config.repair_polar:
        u = repair_polar(u)
    n_qubits = u.shape[0].bit_length() - 1
    split = Bipartition.parse(n_qubits, split=config.split, system=config.system)
    return make_dilation(u, split, unitarity_tol=tolerances.unitarity)
