"""Multimodality hypothesis tests and diagnostics.

Three complementary views of the same question:

* ``silverman_test`` — smoothed-bootstrap calibration of the critical
  bandwidth: resample from the just-unimodal density estimate and ask how
  often the resample needs at least as much smoothing as the data did.
* ``dip_test`` — sup-norm distance from the empirical CDF to the nearest
  unimodal CDF, calibrated by Monte Carlo against the uniform null.
* ``excess_mass`` — probability mass above a moving threshold, split by
  super-level intervals; a large two-interval excess signals bimodality.

Monte Carlo p-values use the add-one convention (1 + exceedances) over
(1 + resamples), so they live in (0, 1] and can never be exactly zero.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import TestInconclusiveError, ValidationError
from .kde import as_sample, default_grid, kde_auto, silverman_bandwidth
from .modes import count_modes
from .rng import random_open01, standard_normals, substream
from .solver import SolverOptions, critical_bandwidth

__all__ = [
    "TestResult",
    "ExcessMassCurve",
    "silverman_test",
    "dip_statistic",
    "dip_test",
    "excess_mass",
    "EXCESS_MASS_LEVELS",
]

# Number of uniformly spaced thresholds for the excess-mass ladder.
EXCESS_MASS_LEVELS = 200


@dataclass(frozen=True)
class TestResult:
    """Outcome of a Monte Carlo test.

    ``method`` is one of "silverman", "dip", "excess_mass"; ``h_crit`` is
    populated by the Silverman test only.
    """

    statistic: float
    p_value: float
    resamples: int
    method: str
    h_crit: float | None = None


@dataclass(frozen=True)
class ExcessMassCurve:
    """Excess mass over a ladder of density thresholds.

    ``mass[i]`` is the total mass above ``thresholds[i]`` across all
    super-level intervals; ``delta`` is the largest gain from allowing a
    second interval, max over p of E2(p) - E1(p).
    """

    thresholds: np.ndarray
    mass: np.ndarray
    delta: float


def silverman_test(x, mod0: int = 1, resamples: int = 999, seed: int = 0,
                   opts: SolverOptions | None = None) -> TestResult:
    """Smoothed-bootstrap test of "at most ``mod0`` modes".

    The statistic is the critical bandwidth at which the data collapse to
    at most ``mod0`` modes. Each replicate draws n points from the
    density estimate at that bandwidth (data point plus kernel noise,
    shrunk about the mean by (1 + h^2/var)^(-1/2) to preserve the sample
    variance) and counts how often the replicate still shows more than
    ``mod0`` modes at the same bandwidth -- by mode-count monotonicity in
    the bandwidth, exactly the event that its own critical bandwidth is
    at least the observed one.
    """
    x = as_sample(x, min_size=10)
    if not (isinstance(mod0, (int, np.integer)) and mod0 >= 1):
        raise ValidationError(f"mod0: must be an integer >= 1, got {mod0!r}")
    if resamples < 99:
        raise ValidationError(f"resamples: must be >= 99, got {resamples}")
    opts = opts or SolverOptions()

    solved = critical_bandwidth(x, k=mod0 + 1, opts=opts)
    if not solved.success:
        raise TestInconclusiveError(
            f"critical bandwidth search did not verify a transition for mod0={mod0}"
        )
    h = solved.h_crit
    n = x.size
    center = x.mean()
    shrink = 1.0 / np.sqrt(1.0 + h * h / np.var(x, ddof=1))

    exceed = 0
    for i in range(resamples):
        rng = substream(seed, "silverman", i)
        idx = rng.integers(0, n, size=n)
        noise = standard_normals(rng, n)
        y = center + (x[idx] + h * noise - center) * shrink
        y = np.sort(y)
        curve = kde_auto(y, default_grid(y, h), h)
        if count_modes(curve) > mod0:
            exceed += 1
    p = (1.0 + exceed) / (resamples + 1.0)
    return TestResult(statistic=h, p_value=p, resamples=resamples,
                      method="silverman", h_crit=h)


def dip_statistic(x) -> float:
    """Exact dip: sup-distance from the ECDF to the best unimodal CDF.

    Computed by alternately fitting the greatest convex minorant and
    least concave majorant and shrinking to the modal interval until the
    deviation stops improving. Values lie in [1/(2n), 1/4]; large values
    mean the ECDF cannot be tracked by any rising-then-falling density.
    """
    x = as_sample(x, min_size=2)
    n = x.size
    low, high = 0, n - 1
    best = 1.0  # in units of 1/(2n); never below the attainable floor

    # mn[j]: previous touchpoint of the greatest convex minorant up to j
    mn = np.zeros(n, dtype=np.int64)
    for j in range(1, n):
        mn[j] = j - 1
        while True:
            mnj = mn[j]
            mnmnj = mn[mnj]
            if mnj == 0 or (x[j] - x[mnj]) * (mnj - mnmnj) < (x[mnj] - x[mnmnj]) * (j - mnj):
                break
            mn[j] = mnmnj
    # mj[k]: next touchpoint of the least concave majorant from k on
    mj = np.zeros(n, dtype=np.int64)
    mj[n - 1] = n - 1
    for k in range(n - 2, -1, -1):
        mj[k] = k + 1
        while True:
            mjk = mj[k]
            mjmjk = mj[mjk]
            if mjk == n - 1 or (x[k] - x[mjk]) * (mjk - mjmjk) < (x[mjk] - x[mjmjk]) * (k - mjk):
                break
            mj[k] = mjmjk

    while True:
        gcm = [high]
        while gcm[-1] > low:
            gcm.append(int(mn[gcm[-1]]))
        lcm = [low]
        while lcm[-1] < high:
            lcm.append(int(mj[lcm[-1]]))
        l_gcm = len(gcm) - 1
        l_lcm = len(lcm) - 1
        ig, ih = l_gcm, l_lcm
        ix, iv = l_gcm - 1, 1

        # largest separation between the two fits inside [low, high]
        d = 0.0
        if l_gcm != 1 or l_lcm != 1:
            while True:
                gcmix = gcm[ix]
                lcmiv = lcm[iv]
                if gcmix > lcmiv:
                    gcmi1 = gcm[ix + 1]
                    dx = (lcmiv - gcmi1 + 1) - (x[lcmiv] - x[gcmi1]) * (gcmix - gcmi1) / (x[gcmix] - x[gcmi1])
                    iv += 1
                    if dx >= d:
                        d = dx
                        ig = ix + 1
                        ih = iv - 1
                else:
                    lcmiv1 = lcm[iv - 1]
                    dx = (x[gcmix] - x[lcmiv1]) * (lcmiv - lcmiv1) / (x[lcmiv] - x[lcmiv1]) - (gcmix - lcmiv1 - 1)
                    ix -= 1
                    if dx >= d:
                        d = dx
                        ig = ix + 1
                        ih = iv
                if ix < 0:
                    ix = 0
                if iv > l_lcm:
                    iv = l_lcm
                if gcm[ix] == lcm[iv]:
                    break
        else:
            d = 1.0
        if d < best:
            break

        # deviations of the ECDF from each fit over the selected stretches
        dip_l = 0.0
        for j in range(ig, l_gcm):
            jb, je = gcm[j + 1], gcm[j]
            if je - jb > 1 and x[je] != x[jb]:
                c = (je - jb) / (x[je] - x[jb])
                idx = np.arange(jb, je + 1)
                t = (idx - jb + 1) - (x[idx] - x[jb]) * c
                dip_l = max(dip_l, 1.0, float(t.max()))
            else:
                dip_l = max(dip_l, 1.0)
        dip_u = 0.0
        for j in range(ih, l_lcm):
            jb, je = lcm[j], lcm[j + 1]
            if je - jb > 1 and x[je] != x[jb]:
                c = (je - jb) / (x[je] - x[jb])
                idx = np.arange(jb, je + 1)
                t = (x[idx] - x[jb]) * c - (idx - jb - 1)
                dip_u = max(dip_u, 1.0, float(t.max()))
            else:
                dip_u = max(dip_u, 1.0)

        best = max(best, dip_l, dip_u)
        if low == gcm[ig] and high == lcm[ih]:
            break
        low = gcm[ig]
        high = lcm[ih]

    return best / (2.0 * n)


def dip_test(x, resamples: int = 999, seed: int = 0) -> TestResult:
    """Dip test of unimodality, calibrated against uniform null samples.

    The dip's null distribution is stochastically largest under the
    uniform, so calibrating there gives a conservative test for any
    unimodal null without lookup tables.
    """
    x = as_sample(x, min_size=4)
    if resamples < 199:
        raise ValidationError(f"resamples: must be >= 199, got {resamples}")
    d = dip_statistic(x)
    exceed = 0
    for i in range(resamples):
        u = random_open01(substream(seed, "dip", i), x.size)
        if dip_statistic(u) >= d:
            exceed += 1
    p = (1.0 + exceed) / (resamples + 1.0)
    return TestResult(statistic=d, p_value=p, resamples=resamples, method="dip")


def _interval_masses(pts: np.ndarray, density: np.ndarray, p: float) -> list[float]:
    """Masses of (density - p) over each maximal interval where density > p.

    Interval endpoints between grid points come from linear interpolation
    of the crossing, so each partial cell contributes its triangular
    sliver.
    """
    above = density > p
    if not above.any():
        return []
    delta = pts[1] - pts[0]
    d = density - p
    edges = np.flatnonzero(np.diff(above.astype(np.int8)))
    starts = [0] if above[0] else []
    starts += list(edges[~above[edges]] + 1)
    ends = list(edges[above[edges]])
    if above[-1]:
        ends.append(len(d) - 1)
    masses = []
    for i, j in zip(starts, ends):
        m = float(np.trapezoid(d[i : j + 1], pts[i : j + 1])) if j > i else 0.0
        if i > 0:
            t = d[i] / (d[i] - d[i - 1])  # fraction of the cell above p
            m += 0.5 * d[i] * t * delta
        if j < len(d) - 1:
            t = d[j] / (d[j] - d[j + 1])
            m += 0.5 * d[j] * t * delta
        masses.append(m)
    return masses


def excess_mass(x, h: float | None = None) -> ExcessMassCurve:
    """Excess mass of the KDE over a uniform ladder of thresholds."""
    x = as_sample(x, min_size=5)
    if h is None:
        h = silverman_bandwidth(x)
    curve = kde_auto(x, default_grid(x, h), h)
    pts = curve.grid.points
    density = curve.density
    thresholds = np.linspace(0.0, density.max(), EXCESS_MASS_LEVELS)
    total = np.empty(thresholds.size)
    delta = 0.0
    for i, p in enumerate(thresholds):
        masses = sorted(_interval_masses(pts, density, p), reverse=True)
        total[i] = sum(masses)
        if len(masses) >= 2:
            delta = max(delta, masses[1])  # E2 - E1 = second-largest mass
    return ExcessMassCurve(thresholds=thresholds, mass=total, delta=float(delta))
