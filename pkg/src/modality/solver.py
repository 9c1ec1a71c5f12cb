"""Critical bandwidth search.

``critical_bandwidth(x, k)`` finds the smallest kernel bandwidth at which
the density estimate of ``x`` stops showing ``k`` modes, i.e. the infimum
of bandwidths whose estimate has at most ``k - 1`` modes. Large values
mean heavy smoothing is needed to merge the k-th mode away, which is the
signature of strong multimodal structure; ``k=2`` probes bimodality.

The default path brackets the discrete mode-count transition around the
rule-of-thumb bandwidth and bisects. An optional Brent path tracks the
continuous valley-to-peak ratio instead and falls back to bisection when
the transition cannot be verified.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, replace

import numpy as np
from scipy.optimize import brentq

from .errors import CIUnreliableError, UnsupportedMethodError, ValidationError
from .kde import as_sample, default_grid, kde_auto, silverman_bandwidth
from .modes import _modes_of_curve, count_modes
from .rng import derive_seed, resample_with_replacement

__all__ = [
    "SolverOptions",
    "CritBandResult",
    "critical_bandwidth",
    "critical_bandwidth_brent",
    "critical_bandwidth_ci",
    "DEFAULT_CI_RESAMPLES",
]

# Shrinking below this fraction of the starting bandwidth without finding
# the transition means the target mode count never appears.
_BRACKET_FLOOR_RATIO = 1e-6

# The upper bracket never grows past this multiple of the data range.
_BRACKET_CAP_RANGES = 2.0

# Valley-to-peak gap at which the Brent objective declares two peaks merged.
_MERGE_EPS = 1e-3

DEFAULT_CI_RESAMPLES = 999

_LARGE_SAMPLE = 5000


@dataclass(frozen=True)
class SolverOptions:
    """Tuning knobs for the bandwidth search."""

    method: str = "auto"
    rel_tol: float = 1e-4
    max_iter: int = 200
    bracket_growth: float = 2.0

    def __post_init__(self):
        if self.method not in ("auto", "binary", "brent"):
            raise ValidationError(f"method: expected auto|binary|brent, got {self.method!r}")
        if not 0.0 < self.rel_tol < 0.1:
            raise ValidationError(f"rel_tol: must be in (0, 0.1), got {self.rel_tol}")
        if self.max_iter < 10:
            raise ValidationError(f"max_iter: must be >= 10, got {self.max_iter}")
        if not self.bracket_growth > 1.0:
            raise ValidationError(f"bracket_growth: must be > 1, got {self.bracket_growth}")


@dataclass(frozen=True)
class CritBandResult:
    """Outcome of a critical bandwidth search.

    ``success`` means the mode-count transition was verified on both
    sides: at most ``k - 1`` modes at ``h_crit`` and at least ``k`` just
    below it. The ``ci_*`` fields are populated only by the bootstrap
    interval path.
    """

    h_crit: float
    success: bool
    k: int
    iterations: int
    ci_low: float | None = None
    ci_high: float | None = None
    std_error: float | None = None
    ci_method: str | None = None
    ci_failures: int | None = None


class _ModeCounter:
    """Counts KDE modes at a bandwidth, tracking evaluations."""

    def __init__(self, x: np.ndarray):
        self.x = x
        self.evals = 0

    def curve(self, h: float):
        self.evals += 1
        return kde_auto(self.x, default_grid(self.x, h), h)

    def __call__(self, h: float) -> int:
        return count_modes(self.curve(h))


def _validate_inputs(x, k: int) -> np.ndarray:
    x = as_sample(x, min_size=3)
    if not (isinstance(k, (int, np.integer)) and k >= 1):
        raise ValidationError(f"k: must be an integer >= 1, got {k!r}")
    if x[0] == x[-1]:
        raise ValidationError("sample: zero scale (all observations identical)")
    return x


def _bracket(counter: _ModeCounter, h0: float, max_modes: int, opts: SolverOptions):
    """Find [h_lo, h_hi] with count(h_lo) > max_modes >= count(h_hi).

    Returns (h_lo, h_hi, failed_at) where ``failed_at`` is None on
    success, "floor" when the count never exceeded the target down to
    the floor, and "cap" when it never dropped to the target below the
    cap.
    """
    x = counter.x
    if counter(h0) <= max_modes:
        h_hi = h0
        h_lo = h0 / opts.bracket_growth
        while counter(h_lo) <= max_modes:
            h_hi = h_lo
            h_lo /= opts.bracket_growth
            if h_lo < _BRACKET_FLOOR_RATIO * h0:
                return h_lo, h_hi, "floor"
        return h_lo, h_hi, None
    h_lo = h0
    cap = _BRACKET_CAP_RANGES * (x[-1] - x[0])
    h_hi = min(h0 * opts.bracket_growth, cap)
    while counter(h_hi) > max_modes:
        if h_hi >= cap:
            return h_lo, h_hi, "cap"
        h_lo = h_hi
        h_hi = min(h_hi * opts.bracket_growth, cap)
    return h_lo, h_hi, None


def _bisect(counter: _ModeCounter, h_lo: float, h_hi: float, max_modes: int,
            opts: SolverOptions) -> tuple[float, bool]:
    """Shrink the bracket until (h_hi - h_lo) / h_hi < rel_tol."""
    while (h_hi - h_lo) / h_hi >= opts.rel_tol:
        if counter.evals >= opts.max_iter:
            return h_hi, False
        mid = 0.5 * (h_lo + h_hi)
        if counter(mid) <= max_modes:
            h_hi = mid
        else:
            h_lo = mid
    return h_hi, True


def _verify_transition(counter: _ModeCounter, h: float, max_modes: int,
                       opts: SolverOptions) -> bool:
    below = h * (1.0 - 10.0 * opts.rel_tol)
    return counter(h) <= max_modes and counter(below) > max_modes


def _solve_binary(counter: _ModeCounter, k: int, opts: SolverOptions) -> CritBandResult:
    max_modes = k - 1
    h0 = silverman_bandwidth(counter.x)
    h_lo, h_hi, failed_at = _bracket(counter, h0, max_modes, opts)
    if failed_at == "floor":
        # target count never exceeded: the infimum lies below the floor
        return CritBandResult(h_crit=h_lo, success=False, k=k, iterations=counter.evals)
    if failed_at == "cap":
        return CritBandResult(h_crit=h_hi, success=False, k=k, iterations=counter.evals)
    h_crit, converged = _bisect(counter, h_lo, h_hi, max_modes, opts)
    success = converged and _verify_transition(counter, h_crit, max_modes, opts)
    return CritBandResult(h_crit=h_crit, success=success, k=k, iterations=counter.evals)


def critical_bandwidth(x, k: int = 2, opts: SolverOptions | None = None) -> CritBandResult:
    """Smallest bandwidth at which the KDE of ``x`` has fewer than ``k`` modes.

    The returned ``h_crit`` is the upper end of the final bracket, so the
    estimate at ``h_crit`` always satisfies the at-most-``k - 1`` mode
    bound; ``success`` additionally confirms the count exceeds the bound
    just below. ``k=1`` has no attainable target (every density has at
    least one mode) and reports ``success=False``.
    """
    opts = opts or SolverOptions()
    x = _validate_inputs(x, k)
    if opts.method == "brent":
        return critical_bandwidth_brent(x, k, opts)
    return _solve_binary(_ModeCounter(x), k, opts)


def _merge_gap(counter: _ModeCounter, h: float) -> float:
    """Continuous merge objective: valley-to-smaller-peak gap minus eps.

    Positive once the two leading peaks have effectively merged (or the
    estimate is already unimodal), negative while a clear valley remains.
    """
    curve = counter.curve(h)
    modes, starts, ends = _modes_of_curve(curve)
    if modes.count < 2:
        return 1.0 - _MERGE_EPS
    order = np.lexsort((np.arange(modes.count), -modes.heights))
    i, j = sorted(order[:2])
    valley = curve.density[ends[i] + 1 : starts[j]].min()
    ratio = valley / min(modes.heights[i], modes.heights[j])
    return float(ratio) - (1.0 - _MERGE_EPS)


def critical_bandwidth_brent(x, k: int = 2, opts: SolverOptions | None = None) -> CritBandResult:
    """Brent-based variant of :func:`critical_bandwidth`, k=2 only.

    Tracks the valley-to-peak ratio of the two leading peaks, which rises
    continuously toward 1 as they merge, and root-finds the near-merge
    point. The root is then polished against the discrete mode count; if
    no verified transition surrounds it (the objective can jump when the
    identity of the two leading peaks switches), the solver falls back to
    the plain bracketed bisection, with all evaluations counted.
    """
    opts = opts or SolverOptions()
    x = _validate_inputs(x, k)
    if k != 2:
        raise UnsupportedMethodError("brent path supports k=2 only (needs exactly two leading peaks)")
    counter = _ModeCounter(x)
    max_modes = 1
    h0 = silverman_bandwidth(x)
    h_lo, h_hi, failed_at = _bracket(counter, h0, max_modes, opts)
    if failed_at is not None:
        return _solve_binary(_ModeCounter(x), k, opts)

    f_lo = _merge_gap(counter, h_lo)
    f_hi = _merge_gap(counter, h_hi)
    root = None
    if f_lo < 0.0 < f_hi:
        try:
            root = brentq(lambda h: _merge_gap(counter, h), h_lo, h_hi,
                          rtol=opts.rel_tol, maxiter=opts.max_iter)
        except (ValueError, RuntimeError):
            root = None

    if root is not None:
        # polish: widen a tight window around the root until it straddles
        # the discrete transition, then bisect as usual
        lo = max(root * (1.0 - 10.0 * opts.rel_tol), h_lo)
        hi = min(root * (1.0 + 10.0 * opts.rel_tol), h_hi)
        c_lo = counter(lo)
        while c_lo <= max_modes and lo > h_lo:
            lo = max(lo / opts.bracket_growth, h_lo)
            c_lo = counter(lo)
        c_hi = counter(hi)
        while c_hi > max_modes and hi < h_hi:
            hi = min(hi * opts.bracket_growth, h_hi)
            c_hi = counter(hi)
        if c_lo > max_modes and c_hi <= max_modes and counter.evals < opts.max_iter:
            h_crit, converged = _bisect(counter, lo, hi, max_modes, opts)
            if converged and _verify_transition(counter, h_crit, max_modes, opts):
                return CritBandResult(h_crit=h_crit, success=True, k=k,
                                      iterations=counter.evals)

    # unverified or discontinuous objective: binary fallback
    return _solve_binary(counter, k, opts)


def critical_bandwidth_ci(x, k: int = 2, resamples: int | None = None, seed: int = 0,
                          opts: SolverOptions | None = None) -> CritBandResult:
    """Point estimate plus a percentile bootstrap interval for ``h_crit``.

    Each replicate resamples the data with replacement (sub-seeded from
    ``(seed, replicate index)``) and re-runs the search. Replicates whose
    solve does not verify are excluded and counted in ``ci_failures``;
    more than half failing raises :class:`CIUnreliableError`. The 95%
    interval is widened, if needed, to contain the point estimate.
    """
    opts = opts or SolverOptions()
    x = _validate_inputs(x, k)
    if resamples is None:
        resamples = DEFAULT_CI_RESAMPLES
        if x.size > _LARGE_SAMPLE:
            warnings.warn(
                f"bootstrap with the default {DEFAULT_CI_RESAMPLES} resamples on "
                f"n={x.size} will be slow; pass resamples explicitly to silence",
                stacklevel=2,
            )
    if resamples < 99:
        raise ValidationError(f"resamples: must be >= 99, got {resamples}")

    point = critical_bandwidth(x, k, opts)
    values = []
    failures = 0
    for i in range(resamples):
        y = resample_with_replacement(x, derive_seed(seed, "ci", i))
        r = critical_bandwidth(y, k, opts)
        if r.success:
            values.append(r.h_crit)
        else:
            failures += 1
    if len(values) < 0.5 * resamples:
        raise CIUnreliableError(
            f"bootstrap interval unreliable: {failures} of {resamples} replicates failed",
            failures=failures,
        )
    values = np.asarray(values)
    ci_low, ci_high = np.percentile(values, [2.5, 97.5])
    ci_low = min(float(ci_low), point.h_crit)
    ci_high = max(float(ci_high), point.h_crit)
    return replace(
        point,
        ci_low=ci_low,
        ci_high=ci_high,
        std_error=float(np.std(values, ddof=1)),
        ci_method="percentile",
        ci_failures=failures,
    )
