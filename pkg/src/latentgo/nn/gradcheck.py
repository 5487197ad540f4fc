"""Central finite differences against analytic gradients."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

Params = dict[str, np.ndarray]
LossFn = Callable[[Params], tuple[float, Params]]


@dataclass
class GradCheckReport:
    per_param: dict[str, float]
    overall: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.overall < self.tolerance

    def __str__(self) -> str:
        worst = max(self.per_param, key=self.per_param.get) if self.per_param else "-"
        status = "PASS" if self.passed else "FAIL"
        return f"gradcheck {status}: max rel err {self.overall:.3g} (worst: {worst})"


def _rel_err(a: float, n: float) -> float:
    return abs(a - n) / max(abs(a), abs(n), 1e-4)


def grad_check(
    fn: LossFn,
    params: Params,
    epsilon: float = 1e-5,
    tolerance: float = 1e-4,
) -> GradCheckReport:
    """Compare fn's analytic gradients against central differences, element by
    element.  ``fn(params) -> (loss, grads)`` must be deterministic."""
    _, grads = fn(params)
    per_param: dict[str, float] = {}
    for name, p in params.items():
        g = grads.get(name)
        if g is None:
            raise KeyError(f"fn returned no gradient for {name!r}")
        worst = 0.0
        flat = p.reshape(-1)
        gflat = np.asarray(g, dtype=np.float64).reshape(-1)
        for i in range(flat.size):
            orig = flat[i]
            flat[i] = orig + epsilon
            up, _ = fn(params)
            flat[i] = orig - epsilon
            down, _ = fn(params)
            flat[i] = orig
            numeric = (up - down) / (2.0 * epsilon)
            worst = max(worst, _rel_err(float(gflat[i]), numeric))
        per_param[name] = worst
    overall = max(per_param.values()) if per_param else 0.0
    return GradCheckReport(per_param, overall, tolerance)
