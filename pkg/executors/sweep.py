from core.run_config import RunConfig
from executors.base import BaseExecutor
from services.codec import render_mapping
from services.divisibility import exclusivity_sweep
from services.utils import deep_serialize


class SweepExecutor(BaseExecutor):
    """Random-instance counts for subsystem exclusivity and the Theorem-2 inequalities."""

    def execute(self, config: RunConfig) -> dict:
        summary = exclusivity_sweep(instances=config.instances, seed=config.seed)
        return {
            "type": "sweep",
            "data": summary,
            "text": render_mapping(deep_serialize(summary)),
        }
