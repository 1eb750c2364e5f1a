from core.run_config import RunConfig
from executors.base import BaseExecutor, load_dilation, tolerances_for
from services.analysis import analyze
from services.codec import load_state, render_table


class AnalyzeExecutor(BaseExecutor):
    """
    Runs the scenario analysis on user-supplied files.
    Same pipeline and same rendering as the built-ins.
    """

    def execute(self, config: RunConfig) -> dict:
        tol = tolerances_for(config)
        dilation = load_dilation(config, tol)
        s1 = load_state(config.state1_path, lenient=tol.lenient)
        s2 = load_state(config.state2_path, lenient=tol.lenient)

        report = analyze(dilation, s1, s2, config.metric, tol)
        return {
            "type": "analyze",
            "data": report,
            "text": render_table(report),
        }
