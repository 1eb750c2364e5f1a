import logging

from core.errors import NotUnitaryError
from core.matkernel import hermitian_eigvals, unitarity_deviation
from core.run_config import RunConfig
from executors.base import BaseExecutor, tolerances_for
from services.channels import choi_matrix, is_unital
from services.codec import load_kraus, load_state, load_unitary, render_mapping
from services.states import purity

logger = logging.getLogger("divisi.executors")


class ValidateExecutor(BaseExecutor):
    """
    Checks one file against its invariants. Failures raise; a returned
    report always has valid = true.
    """

    def execute(self, config: RunConfig) -> dict:
        tol = tolerances_for(config)

        if config.unitary_path is not None:
            data = self._unitary(config, tol.unitarity)
        elif config.state_path is not None:
            data = self._state(config, tol.lenient)
        else:
            data = self._kraus(config, tol.completeness, tol.unital)

        logger.info(f"[VALIDATE] kind={data['kind']} valid=True")
        return {"type": "validate", "data": data, "text": render_mapping(data)}

    def _unitary(self, config: RunConfig, tol: float) -> dict:
        u = load_unitary(config.unitary_path)
        deviation = unitarity_deviation(u)
        if deviation > tol:
            raise NotUnitaryError(deviation, tol)
        return {
            "kind": "unitary",
            "qubits": u.shape[0].bit_length() - 1,
            "unitarity_deviation": deviation,
            "tolerance": tol,
            "valid": True,
        }

    def _state(self, config: RunConfig, lenient: bool) -> dict:
        rho = load_state(config.state_path, lenient=lenient)
        eigvals = hermitian_eigvals(rho.mat)
        return {
            "kind": "state",
            "qubits": rho.qubits,
            "trace": float(rho.mat.trace().real),
            "min_eigenvalue": float(eigvals[0]),
            "purity": purity(rho),
            "valid": True,
        }

    def _kraus(self, config: RunConfig, completeness_tol: float, unital_tol: float) -> dict:
        k = load_kraus(config.kraus_path, completeness_tol=completeness_tol)
        choi_min = float(hermitian_eigvals(choi_matrix(k))[0])
        data = {
            "kind": "kraus",
            "in_qubits": k.in_qubits,
            "out_qubits": k.out_qubits,
            "ops": len(k.ops),
            "completeness_deviation": k.completeness_deviation,
            "choi_min_eigenvalue": choi_min,
        }
        if k.is_square:
            data["unital"] = is_unital(k, unital_tol).unital
        data["valid"] = True
        return data
