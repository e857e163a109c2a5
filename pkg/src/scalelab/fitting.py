"""Power-law regression: plain log-log, offset-free, and with fitted offset.

The offset form y = prefactor * x**exponent + offset is fitted by profiling:
for a candidate offset the inner problem is exact log-log least squares on
(x, y - offset), so the outer problem reduces to a one-dimensional
golden-section search minimizing the y-space residual.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "PowerLawFit",
    "fit_power_law",
    "fit_power_law_with_offset",
    "fit_kaplan_form",
    "sum_squared_error",
]

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
_INV_PHI_SQ = (3.0 - math.sqrt(5.0)) / 2.0


@dataclass(frozen=True)
class PowerLawFit:
    """y = prefactor * x**exponent (+ offset); r_squared from log-space residuals."""

    prefactor: float
    exponent: float
    offset: float | None
    r_squared: float
    n_points: int

    def predict(self, x):
        base = self.prefactor * np.asarray(x, dtype=float) ** self.exponent
        out = base + (self.offset or 0.0)
        return float(out) if np.isscalar(x) else out

    def to_report(self, form: str, basis: str) -> dict:
        return {
            "form": form,
            "basis": basis,
            "prefactor": self.prefactor,
            "exponent": self.exponent,
            "offset": self.offset,
            "r_squared": self.r_squared,
            "n_points": self.n_points,
        }


def _loglog_ols(x: np.ndarray, y: np.ndarray) -> tuple[float, float, float]:
    """OLS on (ln x, ln y); returns (prefactor, exponent, r_squared)."""
    log_x, log_y = np.log(x), np.log(y)
    exponent, intercept = np.polyfit(log_x, log_y, 1)
    resid = log_y - (intercept + exponent * log_x)
    ss_tot = np.sum((log_y - log_y.mean()) ** 2)
    r_squared = 1.0 if ss_tot == 0.0 else 1.0 - np.sum(resid**2) / ss_tot
    return float(np.exp(intercept)), float(exponent), float(r_squared)


def _validated_xy(x, y, min_points: int) -> tuple[np.ndarray, np.ndarray]:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("x and y must be 1-d arrays of equal length")
    if x.size < min_points:
        raise ValueError(f"need >={min_points} points, got {x.size}")
    if np.any(x <= 0):
        raise ValueError("x values must be > 0")
    if np.unique(x).size < 2:
        raise ValueError("need >=2 distinct x values")
    return x, y


def fit_power_law(x, y) -> PowerLawFit:
    """Plain log-log least squares; requires strictly positive data."""
    x, y = _validated_xy(x, y, min_points=2)
    if np.any(y <= 0):
        raise ValueError("y values must be > 0")
    prefactor, exponent, r_squared = _loglog_ols(x, y)
    return PowerLawFit(prefactor, exponent, None, r_squared, int(x.size))


def fit_kaplan_form(c, loss) -> PowerLawFit:
    """Offset-free compute-loss fit loss = (c/c_0)**exponent, exponent < 0 on frontier data."""
    return fit_power_law(c, loss)


def _golden_section(f, lo: float, hi: float, tol: float, max_iter: int = 200) -> float:
    h = hi - lo
    c = lo + _INV_PHI_SQ * h
    d = lo + _INV_PHI * h
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if h <= tol:
            break
        if fc < fd:
            hi, d, fd = d, c, fc
            h *= _INV_PHI
            c = lo + _INV_PHI_SQ * h
            fc = f(c)
        else:
            lo, c, fc = c, d, fd
            h *= _INV_PHI
            d = lo + _INV_PHI * h
            fd = f(d)
    return 0.5 * (lo + hi)


def fit_power_law_with_offset(x, y, fixed_offset: float | None = None) -> PowerLawFit:
    """Fit y = prefactor * x**exponent + offset on decreasing frontier data.

    The offset is profiled over [0, min(y)) by golden-section search on the
    y-space sum of squared residuals (200 iterations, tolerance
    1e-10*min(y)); each candidate offset is scored with the exact inner
    log-log fit.  Passing ``fixed_offset`` skips the search, which with
    ``fixed_offset=0`` reproduces ``fit_power_law`` exactly.
    """
    x, y = _validated_xy(x, y, min_points=3)
    order = np.argsort(x)
    x, y = x[order], y[order]

    def inner(offset: float) -> tuple[float, float, float]:
        return _loglog_ols(x, y - offset)

    def y_space_sse(offset: float) -> float:
        prefactor, exponent, _ = inner(offset)
        return float(np.sum((offset + prefactor * x**exponent - y) ** 2))

    if fixed_offset is not None:
        if fixed_offset < 0:
            raise ValueError("fixed_offset must be >= 0")
        if np.any(y - fixed_offset <= 0):
            raise ValueError("y - fixed_offset must be > 0")
        offset = float(fixed_offset)
    else:
        if np.any(np.diff(y) >= 0):
            raise ValueError(
                "y must be strictly decreasing in x to profile an offset "
                "(non-power-law data)"
            )
        y_min = float(y.min())
        if y_min <= 0:
            raise ValueError("min(y) must be > 0 when fitting a positive offset")
        hi = y_min * (1.0 - 1e-12)
        candidate = _golden_section(y_space_sse, 0.0, hi, tol=1e-10 * y_min)
        if not math.isfinite(y_space_sse(candidate)):
            raise ArithmeticError("offset search failed to bracket a minimum")
        # Never do worse than the offset-free nested model.
        offset = candidate if y_space_sse(candidate) <= y_space_sse(0.0) else 0.0

    prefactor, exponent, r_squared = inner(offset)
    return PowerLawFit(prefactor, exponent, offset, r_squared, int(x.size))


def sum_squared_error(fit: PowerLawFit, x, y) -> float:
    """y-space residual of a fit against data; used for form comparisons."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    return float(np.sum((fit.predict(x) - y) ** 2))
