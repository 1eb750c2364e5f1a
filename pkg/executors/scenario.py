from core.run_config import RunConfig
from executors.base import BaseExecutor
from services.codec import render_mapping, render_scenario_table
from services.scenarios import build_scenario, export_scenario, run_scenario


class ScenarioExecutor(BaseExecutor):
    """Builds and runs one built-in scenario."""

    def execute(self, config: RunConfig) -> dict:
        scenario = build_scenario(config.scenario, config.effective_mode)
        report = run_scenario(scenario, config.metric, config.verdict_tol)
        return {
            "type": "scenario",
            "data": report,
            "text": render_scenario_table(report),
        }


class ExportExecutor(BaseExecutor):
    """Writes a built-in scenario in the generic file formats."""

    def execute(self, config: RunConfig) -> dict:
        scenario = build_scenario(config.scenario, config.effective_mode)
        written = export_scenario(scenario, config.outdir)
        data = {
            "name": scenario.name.value,
            "mode": scenario.mode.value,
            "split": scenario.split_spec,
            "files": {key: str(path) for key, path in written.items()},
        }
        summary = {"name": data["name"], "mode": data["mode"], "split": data["split"]}
        summary.update(data["files"])
        return {"type": "export", "data": data, "text": render_mapping(summary)}
