import numpy as np
import pytest
from scipy.optimize import linprog

from modality import (
    ValidationError,
    dip_statistic,
    dip_test,
    excess_mass,
    silverman_test,
)
from modality.errors import TestInconclusiveError as InconclusiveTestError
from modality.rng import random_open01, substream


# --- independent dip oracle -------------------------------------------------
#
# Minimax fit of a piecewise-linear unimodal CDF to the ECDF, solved as one
# LP per candidate mode placement (each data knot, allowing the CDF's one
# jump there, and each gap including the virtual tail segments). Exact for
# this class because the optimal unimodal CDF against a step function can
# be taken piecewise linear with knots at the data points.

def dip_oracle(x):
    x = np.sort(np.asarray(x, dtype=float))
    n = x.size
    big = 1e7 * (x[-1] - x[0])
    nv = 1 + 2 * n  # [d, u_0..u_{n-1}, v_0..v_{n-1}]

    def U(i):
        return 1 + i

    def V(i):
        return 1 + n + i

    def slope_expr(i):
        if i == -1:
            return [(U(0), 1.0)], 0.0, big
        if i == n - 1:
            return [(V(n - 1), -1.0)], 1.0, big
        return [(U(i + 1), 1.0), (V(i), -1.0)], 0.0, x[i + 1] - x[i]

    def solve(mode_knot=None, mode_gap=None):
        A_ub, b_ub, A_eq, b_eq = [], [], [], []

        def le(coefs, rhs):
            row = np.zeros(nv)
            for idx, c in coefs:
                row[idx] += c
            A_ub.append(row)
            b_ub.append(rhs)

        for i in range(n):
            le([(V(i), 1.0), (0, -1.0)], (i + 1) / n)
            le([(V(i), -1.0), (0, -1.0)], -(i + 1) / n)
            le([(U(i), 1.0), (0, -1.0)], i / n)
            le([(U(i), -1.0), (0, -1.0)], -i / n)
            le([(U(i), 1.0), (V(i), -1.0)], 0.0)
            if i + 1 < n:
                le([(V(i), 1.0), (U(i + 1), -1.0)], 0.0)
            if i != mode_knot:
                row = np.zeros(nv)
                row[U(i)], row[V(i)] = 1.0, -1.0
                A_eq.append(row)
                b_eq.append(0.0)

        left_last, right_first = (
            (mode_knot - 1, mode_knot) if mode_knot is not None else (mode_gap, mode_gap)
        )
        for i in range(-1, left_last):
            (ca, consta, wa), (cb, constb, wb) = slope_expr(i), slope_expr(i + 1)
            le([(j, c * wb) for j, c in ca] + [(j, -c * wa) for j, c in cb],
               wa * constb - wb * consta)
        for i in range(right_first, n - 1):
            (ca, consta, wa), (cb, constb, wb) = slope_expr(i), slope_expr(i + 1)
            le([(j, -c * wb) for j, c in ca] + [(j, c * wa) for j, c in cb],
               wb * consta - wa * constb)

        c = np.zeros(nv)
        c[0] = 1.0
        res = linprog(
            c, A_ub=np.array(A_ub), b_ub=np.array(b_ub),
            A_eq=np.array(A_eq) if A_eq else None,
            b_eq=np.array(b_eq) if b_eq else None,
            bounds=[(0, None)] + [(0.0, 1.0)] * (2 * n), method="highs",
        )
        return res.fun if res.success else np.inf

    best = np.inf
    for m in range(n):
        best = min(best, solve(mode_knot=m))
    for g in range(-1, n):
        best = min(best, solve(mode_gap=g))
    return best


@pytest.mark.parametrize(
    "x,expected",
    [
        ([0.0, 1.0], 0.25),                 # n=2: jump placement forces 1/4
        ([0.0, 1.0, 2.0], 1.0 / 6.0),       # equal spacing attains the 1/(2n) floor
        ([0.0, 1.0, 2.0, 3.0], 0.125),
        ([0.0, 0.1, 0.9, 1.0], 2.0 / 9.0),  # clustered pairs
    ],
)
def test_dip_known_small_values(x, expected):
    x = np.array(x)
    assert dip_oracle(x) == pytest.approx(expected, abs=1e-9)
    assert dip_statistic(x) == pytest.approx(expected, abs=1e-12)


def test_dip_matches_oracle_on_random_samples():
    rng = np.random.default_rng(7)
    for _ in range(60):
        n = int(rng.integers(2, 9))
        x = np.sort(rng.normal(0.0, 1.0, n))
        if np.min(np.diff(x), initial=np.inf) < 1e-9:
            continue
        assert dip_statistic(x) == pytest.approx(dip_oracle(x), abs=1e-9)


def test_dip_equally_spaced_is_small():
    x = np.arange(1.0, 51.0)
    d = dip_statistic(x)
    assert d == pytest.approx(0.01, abs=1e-12)  # 1/(2n)
    assert d < 0.02


def test_dip_bimodal_exceeds_unimodal(well_separated, normal_500):
    assert dip_statistic(well_separated) > 0.05
    assert dip_statistic(normal_500) < 0.03


def test_dip_bounds():
    rng = np.random.default_rng(13)
    for _ in range(50):
        n = int(rng.integers(2, 300))
        x = rng.normal(0.0, 1.0, n)
        d = dip_statistic(x)
        assert 1.0 / (2.0 * n) - 1e-12 <= d <= 0.25 + 1e-12


def test_dip_affine_invariance():
    rng = np.random.default_rng(17)
    for _ in range(20):
        x = rng.normal(0.0, 1.0, int(rng.integers(5, 120)))
        d = dip_statistic(x)
        assert dip_statistic(3.5 * x - 11.0) == pytest.approx(d, abs=1e-12)


def test_dip_depends_on_spacing_not_just_ranks():
    # monotone (non-affine) warping changes the statistic: certified by
    # the oracle on both configurations
    even = np.array([0.0, 0.1, 0.9, 1.0])
    squeezed = np.array([0.0, 0.001, 2.999, 3.0])
    assert dip_statistic(squeezed) > dip_statistic(even)
    assert dip_oracle(squeezed) > dip_oracle(even)


def test_dip_test_unimodal_fails_to_reject(normal_500):
    result = dip_test(normal_500, resamples=499, seed=0)
    assert result.p_value > 0.1
    assert result.method == "dip"


def test_dip_test_bimodal_rejects(well_separated):
    result = dip_test(well_separated, resamples=499, seed=0)
    assert result.p_value < 0.01


def test_dip_test_self_calibration_under_uniform_null():
    # rejection rate at alpha = 0.1 over 200 uniform-null trials
    alpha = 0.1
    rejections = 0
    trials = 200
    for t in range(trials):
        u = random_open01(substream(1000 + t, "null-trial"), 40)
        if dip_test(u, resamples=199, seed=t).p_value <= alpha:
            rejections += 1
    assert 0.05 <= rejections / trials <= 0.15


def test_dip_test_validation(normal_500):
    with pytest.raises(ValidationError):
        dip_test(normal_500, resamples=100)
    with pytest.raises(ValidationError):
        dip_test(np.array([1.0, 2.0, 3.0]))


def test_silverman_test_bands(well_separated, barely_separated, near_unimodal):
    strong = silverman_test(well_separated, mod0=1, resamples=999, seed=0)
    assert strong.p_value < 0.01
    assert strong.h_crit == strong.statistic
    weak = silverman_test(barely_separated, mod0=1, resamples=999, seed=0)
    assert weak.p_value > 0.05
    mid = silverman_test(near_unimodal, mod0=1, resamples=999, seed=0)
    assert 0.01 < mid.p_value < 0.25


def test_silverman_test_trimodal_mod0(trimodal):
    # at most 2 modes strongly rejected; at most 3 comfortably retained
    reject2 = silverman_test(trimodal, mod0=2, resamples=199, seed=0)
    assert reject2.p_value < 0.05
    keep3 = silverman_test(trimodal, mod0=3, resamples=199, seed=0)
    assert keep3.p_value > 0.05


def test_silverman_test_determinism(well_separated):
    a = silverman_test(well_separated, mod0=1, resamples=99, seed=3)
    b = silverman_test(well_separated, mod0=1, resamples=99, seed=3)
    assert a == b


def test_silverman_test_validation(normal_500):
    with pytest.raises(ValidationError):
        silverman_test(normal_500, mod0=0)
    with pytest.raises(ValidationError):
        silverman_test(normal_500, resamples=50)
    with pytest.raises(ValidationError):
        silverman_test(np.arange(5.0))


def test_silverman_test_inconclusive_when_solver_fails():
    # two distinct values can never show three modes, so the mod0=2
    # statistic (the 3-to-2 merge bandwidth) does not exist
    x = np.array([0.0] * 5 + [1.0] * 5)
    with pytest.raises(InconclusiveTestError):
        silverman_test(x, mod0=2, resamples=99, seed=0)


def test_excess_mass_zero_threshold_is_total_mass(well_separated):
    curve = excess_mass(well_separated)
    assert curve.mass[0] == pytest.approx(1.0, abs=0.02)
    assert curve.mass[-1] == pytest.approx(0.0, abs=1e-12)


def test_excess_mass_monotone_and_nonnegative(well_separated, normal_500):
    for x in (well_separated, normal_500):
        curve = excess_mass(x)
        assert np.all(np.diff(curve.mass) <= 1e-12)
        assert curve.delta >= 0.0
        assert curve.thresholds[0] == 0.0
        assert curve.thresholds.size == 200


def test_excess_mass_orders_bimodal_above_unimodal(well_separated, normal_500):
    bimodal = excess_mass(well_separated)
    unimodal = excess_mass(normal_500[: well_separated.size])
    assert bimodal.delta > unimodal.delta


def test_excess_mass_explicit_bandwidth(well_separated):
    wide = excess_mass(well_separated, h=5.0)
    assert wide.delta == pytest.approx(0.0, abs=1e-6)  # oversmoothed to one bump
