# core/errors.py
"""
Domain failures.

Every failure carries a stable `code` so the CLI can map it onto an exit
status and a failure envelope without inspecting message text.

None of these subclass ValueError: pydantic validators raise them and
pydantic lets them through unwrapped, payload intact.
"""

from typing import Optional


class DivisiError(Exception):
    code = "divisi_error"


# -----------------------------
# Usage / parse failures (exit 2)
# -----------------------------
class FormatError(DivisiError):
    """Malformed JSON or an unreadable matrix/state file."""

    code = "format_error"


class UnknownScenarioError(DivisiError):
    code = "unknown_scenario"


# -----------------------------
# Domain failures (exit 3)
# -----------------------------
class DimensionMismatch(DivisiError):
    code = "dimension_mismatch"

    def __init__(self, message: str, *shapes: tuple):
        super().__init__(message)
        self.shapes = shapes


class ValidationFailure(DivisiError):
    """
    A value violates a named invariant.

    `invariant` names what was violated, `deviation` is the measured
    distance from compliance (when there is one).
    """

    code = "validation_failure"

    def __init__(
        self,
        message: str,
        *,
        invariant: str,
        deviation: Optional[float] = None,
    ):
        super().__init__(message)
        self.invariant = invariant
        self.deviation = deviation


class NotHermitianError(ValidationFailure):
    code = "not_hermitian"

    def __init__(self, asymmetry: float, tol: float):
        super().__init__(
            f"matrix is not Hermitian: max asymmetry {asymmetry:.3e} > {tol:.1e}",
            invariant="hermiticity",
            deviation=asymmetry,
        )
        self.asymmetry = asymmetry


class NotUnitaryError(ValidationFailure):
    code = "not_unitary"

    def __init__(self, deviation: float, tol: float):
        super().__init__(
            f"matrix is not unitary: unitarity deviation ||U^dag U - I||_max = "
            f"{deviation:.3e} > {tol:.1e}",
            invariant="unitarity",
            deviation=deviation,
        )


class CompletenessError(ValidationFailure):
    code = "kraus_incomplete"

    def __init__(self, deviation: float, tol: float):
        super().__init__(
            f"Kraus set is not trace preserving: ||sum K^dag K - I||_max = "
            f"{deviation:.3e} > {tol:.1e}",
            invariant="completeness",
            deviation=deviation,
        )


class InvariantViolation(ValidationFailure):
    code = "invariant_violation"


class ConvergenceError(DivisiError):
    code = "no_convergence"
