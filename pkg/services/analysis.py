# services/analysis.py
import logging

from configurations.config import Tolerances
from core.verdicts import Metric
from models.channel import UnitaryDilation
from models.report import AnalysisReport
from models.state import DensityMatrix
from services.channels import dilation_to_kraus, environment_channel, is_unital
from services.divisibility import probe_step, theorem2_report

logger = logging.getLogger("divisi.analysis")


def analyze(
    d: UnitaryDilation,
    s1: DensityMatrix,
    s2: DensityMatrix,
    metric: Metric = Metric.TRACE_NORM,
    tolerances: Tolerances | None = None,
) -> AnalysisReport:
    """
    The full one-step analysis of a dilation and a joint input pair:
    six distances with verdicts, the Theorem-2 ledger, and unitality of
    the induced system and environment channels.

    Built-in scenarios and user files both go through here, so the two
    paths cannot disagree.
    """
    tol = tolerances or Tolerances.strict()

    step = probe_step(d, s1, s2, metric, tolerance=tol.verdict)
    ledger = theorem2_report(d, s1, s2, invariance_tol=tol.invariance)
    system_unitality = is_unital(dilation_to_kraus(d), tol.unital)
    environment_unitality = is_unital(environment_channel(d), tol.unital)

    logger.info(
        f"[ANALYZE] sys={step.sys_verdict.value} env={step.env_verdict.value} "
        f"full={step.full_verdict.value} sys_unital={system_unitality.unital} "
        f"env_unital={environment_unitality.unital}"
    )
    if step.both_indivisible:
        logger.warning(f"[ANALYZE] both subsystems grew: sys={step.sys_growth:.9f}")

    return AnalysisReport(
        step=step,
        theorem2=ledger,
        system_unitality=system_unitality,
        environment_unitality=environment_unitality,
    )
