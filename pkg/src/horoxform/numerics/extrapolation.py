"""Richardson extrapolation to a zero step."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import PreconditionError


@dataclass(frozen=True)
class RichardsonResult:
    value: float
    error: float
    warning: bool
    table: tuple

    def __float__(self):
        return float(self.value)


def richardson_limit(values, steps, p: int = 1, terms: int | None = None) -> RichardsonResult:
    """Extrapolate ``v(h) = L + a_p h^p + a_(p+1) h^(p+1) + ...`` to ``h = 0``.

    Estimate ``j`` uses the ``j+1`` smallest steps; the reported error is
    the difference between the last two estimates.  The warning flag is
    raised if successive corrections fail to shrink.
    """
    v = np.asarray(values, dtype=float)
    h = np.asarray(steps, dtype=float)
    if v.size < 2 or v.shape != h.shape:
        raise PreconditionError("need at least two (step, value) pairs of equal length")
    if np.any(h <= 0):
        raise PreconditionError("steps must be positive")
    order = np.argsort(h)
    v, h = v[order], h[order]
    kmax = v.size if terms is None else min(v.size, terms + 1)
    scale = h[-1]
    estimates = []
    for j in range(1, kmax):
        hh = h[: j + 1] / scale
        mat = np.column_stack([np.ones(j + 1)] + [hh ** (p + i) for i in range(j)])
        sol = np.linalg.solve(mat, v[: j + 1])
        estimates.append(float(sol[0]))
    diffs = [abs(estimates[0] - v[0])] + [abs(estimates[i] - estimates[i - 1]) for i in range(1, len(estimates))]
    warning = any(diffs[i] > diffs[i - 1] * 1.0000001 and diffs[i] > 1e-14 * abs(estimates[-1])
                  for i in range(1, len(diffs)))
    return RichardsonResult(estimates[-1], diffs[-1], bool(warning), tuple(estimates))
