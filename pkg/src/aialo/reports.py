"""Per-run result records shared by all algorithms and the benchmark harness."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(eq=False)
class RunReport:
    """Outcome of one algorithm run on one instance.

    Algorithms fill the sampling and output fields; ``correct``, the
    binding/non-binding means and ``wall_time`` are recomputed by the harness
    against the true instance and never self-reported.
    """

    algorithm: str
    seed: int
    total_samples: int
    per_parameter_samples: np.ndarray
    output: np.ndarray | None
    failed: bool
    iterations: int
    round_samples: list[int] | None = None
    correct: bool | None = None
    binding_mean: float | None = None
    nonbinding_mean: float | None = None
    is_oracle: bool = False
    wall_time: float = 0.0
    # Optional diagnostics, populated only when a run is asked to record them.
    centers: np.ndarray | None = None
    confidence_event_held: bool | None = None
    verdicts: list = field(default_factory=list)

    def __post_init__(self):
        if int(self.per_parameter_samples.sum()) != self.total_samples:
            raise ValueError("total_samples must equal the sum of per-parameter samples")

    def to_json_dict(self) -> dict:
        """JSON-friendly view; volatile fields (wall_time) are omitted so that
        serialized reports are byte-reproducible under a fixed seed."""
        return {
            "algorithm": self.algorithm,
            "seed": self.seed,
            "total_samples": int(self.total_samples),
            "per_parameter_samples": [int(v) for v in self.per_parameter_samples],
            "output": None if self.output is None else [float(v) for v in self.output],
            "failed": bool(self.failed),
            "iterations": int(self.iterations),
            "round_samples": self.round_samples,
            "correct": self.correct,
            "binding_mean": self.binding_mean,
            "nonbinding_mean": self.nonbinding_mean,
            "is_oracle": bool(self.is_oracle),
        }
