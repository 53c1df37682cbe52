import math
from typing import Iterable, List, Sequence, Tuple
import numpy as np
from scipy import special
from chargedfock.scalar import Scalar


SAFETY_FACTOR = 2


def loglog_slope(series: Iterable[Tuple[float, float]], window: Tuple[float, float] = None) -> float:
    """Least-squares slope of log(value) against log(n) over the window."""
    points = []
    for n, value in series:
        if window is not None and not window[0] <= n <= window[1]:
            continue
        value = float(value)
        if n <= 0 or value <= 0:
            raise ValueError(f"loglog_slope needs positive data, got ({n}, {value})")
        points.append((math.log(n), math.log(value)))
    if len(points) < 3:
        raise ValueError(f"loglog_slope needs at least 3 points in the window, got {len(points)}")
    x, y = np.array(points).T
    slope, _ = np.polyfit(x, y, 1)
    return float(slope)


def tail_budget(last_band_norms: Sequence[float], fitted_slope: float, last_band: int = None) -> float:
    """
    Integral bound on sum_{n>N} c n^slope given the value at the last included
    band N: value * N / (-1 - slope). Non-summable slopes give inf.
    """
    if len(last_band_norms) == 0:
        return 0.0
    if fitted_slope >= -1:
        return math.inf
    n = len(last_band_norms) if last_band is None else last_band
    return float(last_band_norms[-1]) * n / (-1 - fitted_slope)


def band_tail_budget(band_norms: Sequence[Tuple[int, float]], fit_bands: int = 6) -> float:
    """Tail budget of a banded sum from a fit over its last positive bands."""
    positive = [(n, v) for n, v in band_norms if n > 0 and v > 0]
    if not positive:
        return 0.0
    tail = positive[-fit_bands:]
    if len(tail) < 3:
        return math.inf
    slope = loglog_slope(tail)
    return tail_budget([v for _, v in tail], slope, last_band=tail[-1][0])


def quadratic_lambda_fit(r_half: Scalar, r_one: Scalar) -> Tuple[Scalar, Scalar]:
    """
    Splits r(lambda) = a lambda + b lambda^2 from its values at 1/2 and 1.
    Returns (a, b); exact for exact inputs.
    """
    b = 2 * (r_one - 2 * r_half)
    a = r_one - b
    return a, b


def binomial_norm_sq(two_d: float, n: int) -> float:
    """C(2d + n - 1, n) through log-gamma, for bands beyond exact reach."""
    if n == 0:
        return 1.0
    return float(np.exp(special.gammaln(two_d + n) - special.gammaln(n + 1) - special.gammaln(two_d)))


def partial_sum_differences(partial_sums: Sequence[float], windows: Iterable[int]) -> List[Tuple[int, float]]:
    """(N, S_{2N} - S_N) for every N with 2N inside the series."""
    rows = []
    for n in windows:
        if 2 * n < len(partial_sums):
            rows.append((n, float(partial_sums[2 * n]) - float(partial_sums[n])))
    return rows
