# core/verdicts.py
from enum import Enum


class Verdict(str, Enum):
    """
    One-step classification of an evolution for a given input pair.
    """

    P_DIVISIBLE_STEP = "PDivisibleStep"
    P_INDIVISIBLE_STEP = "PIndivisibleStep"

    def is_indivisible(self) -> bool:
        return self is Verdict.P_INDIVISIBLE_STEP

    @classmethod
    def from_distances(cls, d_in: float, d_out: float, tol: float) -> "Verdict":
        if d_out > d_in + tol:
            return cls.P_INDIVISIBLE_STEP
        return cls.P_DIVISIBLE_STEP


class Metric(str, Enum):
    TRACE_NORM = "trace"
    HILBERT_SCHMIDT = "hs"

    @property
    def label(self) -> str:
        if self is Metric.TRACE_NORM:
            return "trace distance"
        return "Hilbert-Schmidt distance"


class Mode(str, Enum):
    EXACT = "exact"
    PAPER = "paper"

    def is_paper(self) -> bool:
        return self is Mode.PAPER


class Subsystem(str, Enum):
    SYSTEM = "system"
    ENVIRONMENT = "environment"


class ScenarioName(str, Enum):
    BELL = "bell"
    GHZ = "ghz"
    W = "w"
