from dataclasses import dataclass, field
from typing import Any, Dict, Optional


@dataclass
class EvaluationReport:
    """Metric bundle of one run: detection metrics per model plus optional extras.

    Wall times are kept apart from the metrics so the metrics file is
    reproducible byte for byte.
    """
    dataset: str
    scenario: str
    models: Dict[str, Dict[str, float]] = field(default_factory=dict)
    timings: Dict[str, Dict[str, float]] = field(default_factory=dict)
    extras: Dict[str, Any] = field(default_factory=dict)

    def add_model(self, model: str, metrics: Dict[str, float], timings: Optional[Dict[str, float]] = None) -> None:
        self.models[model] = {name: float(value) for name, value in metrics.items()}
        if timings:
            self.timings[model] = {name: float(value) for name, value in timings.items()}

    def metrics_dict(self) -> Dict[str, Any]:
        data = {"dataset": self.dataset, "scenario": self.scenario, "models": self.models}
        if self.extras:
            data["extras"] = self.extras
        return data

    def timings_dict(self) -> Dict[str, Any]:
        return {"dataset": self.dataset, "scenario": self.scenario, "timings": self.timings}
