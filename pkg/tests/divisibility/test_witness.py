import numpy as np
import pytest

from core.errors import DimensionMismatch
from models.report import WitnessConfig
from models.state import Bipartition, PureState
from services.channels import make_dilation
from services.divisibility import probe_step
from services.sampling import random_unitary
from services.scenarios import build_scenario, scenario_dilation
from services.witness import witness_search

SPLITS = [Bipartition.prefix(1, 1), Bipartition.prefix(2, 1), Bipartition.prefix(1, 2)]


# ---------------------------------------------------------------------
# Helpers
# ---------------------------------------------------------------------
def w_paper_pair() -> tuple[PureState, PureState]:
    s = build_scenario("w")
    return s.ket1, s.ket2


# ---------------------------------------------------------------------
# TESTS: data processing (product inputs)
# ---------------------------------------------------------------------
def test_product_inputs_never_grow(rng):
    cfg = WitnessConfig(restarts=2, iters=30, seed=3)
    for n in range(500):
        split = SPLITS[n % len(SPLITS)]
        d = make_dilation(random_unitary(2**split.n_qubits, rng), split)
        result = witness_search(d, cfg)
        assert result.growth <= 1e-9


def test_identity_unitary_has_zero_growth():
    d = make_dilation(np.eye(8), Bipartition.prefix(2, 1))
    for correlated in (False, True):
        result = witness_search(d, WitnessConfig(restarts=2, iters=40, correlated=correlated))
        assert abs(result.growth) <= 1e-12


# ---------------------------------------------------------------------
# TESTS: correlated inputs
# ---------------------------------------------------------------------
def test_w_witness_is_at_least_the_printed_pair():
    d = scenario_dilation(build_scenario("w"))
    cfg = WitnessConfig(restarts=2, iters=50, correlated=True, initial_pair=w_paper_pair())
    result = witness_search(d, cfg)
    assert result.growth >= 0.193
    assert result.correlated

    # the reported pair reproduces the reported distances
    step = probe_step(d, *result.pair)
    assert step.d_sys_in == pytest.approx(result.d_sys_in, abs=1e-9)
    assert step.d_sys_out == pytest.approx(result.d_sys_out, abs=1e-9)


def test_search_is_deterministic_and_schedule_independent():
    d = scenario_dilation(build_scenario("w"))
    serial = witness_search(d, WitnessConfig(restarts=3, iters=40, seed=11, correlated=True))
    again = witness_search(d, WitnessConfig(restarts=3, iters=40, seed=11, correlated=True))
    threaded = witness_search(d, WitnessConfig(restarts=3, iters=40, seed=11, correlated=True, workers=3))

    for other in (again, threaded):
        assert other.growth == serial.growth
        assert other.restart == serial.restart
        np.testing.assert_array_equal(other.pair[0].mat, serial.pair[0].mat)


def test_initial_pair_must_match_search_space():
    d = scenario_dilation(build_scenario("w"))
    # joint-space kets for a product (system-space) search
    cfg = WitnessConfig(restarts=1, iters=5, correlated=False, initial_pair=w_paper_pair())
    with pytest.raises(DimensionMismatch):
        witness_search(d, cfg)
