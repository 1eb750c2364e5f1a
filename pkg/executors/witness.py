from core.run_config import RunConfig
from executors.base import BaseExecutor, load_dilation, tolerances_for
from models.report import WitnessConfig
from services.codec import load_pure, render_witness_table
from services.witness import witness_search


class WitnessExecutor(BaseExecutor):
    """Seeded witness search on a user-supplied unitary."""

    def execute(self, config: RunConfig) -> dict:
        tol = tolerances_for(config)
        dilation = load_dilation(config, tol)

        initial_pair = None
        if config.start1_path is not None:
            initial_pair = (load_pure(config.start1_path), load_pure(config.start2_path))

        cfg = WitnessConfig(
            restarts=config.restarts,
            iters=config.iters,
            step=config.step,
            seed=config.seed,
            correlated=config.correlated,
            initial_pair=initial_pair,
        )
        result = witness_search(dilation, cfg)
        return {
            "type": "witness",
            "data": result,
            "text": render_witness_table(result),
        }
