"""Approximate entropy, a regularity statistic for time series.

ApEn(m, r, N) measures how often runs of ``m`` consecutive observations
that match within tolerance ``r`` still match when extended by one more
observation. Templates x(i) = (u_i, ..., u_{i+m-1}) are compared with the
Chebyshev (max-coordinate) distance, counting self-matches, and scored as

    phi(m) = mean over i of ln( matches_i / n_templates )

with the statistic defined as ``phi(m) - phi(m+1)``. Low values indicate
repetitive, predictable patterns; larger values indicate irregularity.
The conventional parameterization is m=2 with r equal to 20% of the sample
standard deviation of the analyzed window (Pincus, 1991).

Because self-matches are counted, every match count is at least 1, all
logarithms are finite, and slightly negative results are possible for very
regular series.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .errors import InvalidParameterError, TooShortError, ZeroToleranceError

# Pairwise distance blocks are evaluated in chunks of at most this many
# float64 cells, which bounds peak memory at ~32 MB regardless of N.
_CHUNK_CELLS = 4_194_304


class RMode(str, Enum):
    RELATIVE = "relative"  # r = r_value * sample SD of the analyzed window
    ABSOLUTE = "absolute"


@dataclass(frozen=True)
class ApenParams:
    """Pattern length and tolerance; defaults m=2, r = 0.2 * SD."""

    m: int = 2
    r_mode: RMode = RMode.RELATIVE
    r_value: float = 0.2

    def __post_init__(self):
        object.__setattr__(self, "r_mode", RMode(self.r_mode))
        if (
            isinstance(self.m, bool)
            or not isinstance(self.m, (int, np.integer))
            or self.m < 1
        ):
            raise InvalidParameterError("m must be an integer >= 1")
        object.__setattr__(self, "m", int(self.m))
        r = float(self.r_value)
        if not np.isfinite(r) or r <= 0.0:
            raise InvalidParameterError("r_value must be a positive real")
        object.__setattr__(self, "r_value", r)

    def resolve_r(self, values) -> float:
        """Tolerance in data units for the given window."""
        if self.r_mode is RMode.ABSOLUTE:
            return self.r_value
        r = self.r_value * float(np.asarray(values, dtype=np.float64).std(ddof=1))
        if not np.isfinite(r) or r <= 0.0:
            raise ZeroToleranceError("relative tolerance resolves to zero on a constant window")
        return r


def _phi(arr: np.ndarray, m: int, r: float) -> float:
    templates = sliding_window_view(arr, m)
    t = templates.shape[0]
    counts = np.empty(t, dtype=np.int64)
    chunk = max(1, _CHUNK_CELLS // t)
    for start in range(0, t, chunk):
        block = templates[start : start + chunk]
        dist = np.abs(block[:, 0][:, None] - templates[:, 0][None, :])
        for k in range(1, m):
            np.maximum(dist, np.abs(block[:, k][:, None] - templates[:, k][None, :]), out=dist)
        counts[start : start + chunk] = (dist <= r).sum(axis=1)
    return float(np.mean(np.log(counts / t)))


def apen(values, params: ApenParams | None = None) -> float:
    """ApEn of ``values`` under ``params`` (defaults: m=2, r = 0.2 * SD).

    Parameters
    ----------
    values : sequence of float
        At least m + 2 observations, equally spaced in time.
    params : ApenParams, optional
        Pattern length and tolerance configuration.

    Returns
    -------
    float
        phi(m) - phi(m+1). Deterministic: identical input and parameters
        give bit-identical output. O(N^2 * m) time, bounded memory.
    """
    p = params if params is not None else ApenParams()
    arr = np.ascontiguousarray(values, dtype=np.float64)
    n = arr.size
    if n < p.m + 2:
        raise TooShortError(f"need at least m + 2 = {p.m + 2} observations, got {n}")
    if not np.isfinite(arr).all():
        raise InvalidParameterError("values must be finite")
    r = p.resolve_r(arr)
    return _phi(arr, p.m, r) - _phi(arr, p.m + 1, r)


def rolling_apen(values, window: int, params: ApenParams | None = None, *, dates=None):
    """ApEn over every full window of ``window`` observations.

    A relative tolerance is re-resolved from each window's own standard
    deviation. Windows are independent and may be evaluated in parallel.
    """
    from .stats import rolling  # deferred import; stats dispatches back here

    p = params if params is not None else ApenParams()
    return rolling(values, window, "apen", dates=dates, apen_params=p)
