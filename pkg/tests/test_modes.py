import numpy as np
import pytest

from modality import (
    DensityCurve,
    Grid,
    NotBimodalError,
    count_modes,
    find_modes,
    find_trough,
    sample_mixture,
    silverman_bandwidth,
)
from tests.conftest import EXTREME_SEPARATION, UNEQUAL_WEIGHTS


def _curve(values, lo=0.0, hi=1.0):
    values = np.asarray(values, dtype=float)
    return DensityCurve(
        grid=Grid(np.linspace(lo, hi, values.size)), density=values, h=1.0, method="direct"
    )


def test_count_modes_simple_peaks():
    assert count_modes(_curve([0, 1, 0, 2, 0])) == 2
    assert count_modes(_curve([0, 1, 2, 3, 2, 1, 0])) == 1
    assert count_modes(_curve([3, 2, 1, 2, 3])) == 0  # only boundary maxima


def test_endpoints_are_never_modes():
    assert count_modes(_curve([5, 1, 1, 1, 4])) == 0


def test_plateau_merges_to_single_mode():
    assert count_modes(_curve([0, 2, 2, 2, 0])) == 1
    # plateau that keeps rising afterwards is not a mode
    assert count_modes(_curve([0, 1, 1, 2, 0])) == 1


def test_plateau_location_is_midpoint():
    from modality.modes import _modes_of_curve

    curve = _curve([0, 2, 2, 2, 0], lo=0.0, hi=4.0)
    modes = _modes_of_curve(curve)[0]
    assert modes.locations.tolist() == [2.0]


def test_tiny_far_tail_mode_is_filtered():
    values = np.zeros(101)
    values[48:53] = [0.5, 0.9, 1.0, 0.9, 0.5]
    values[90] = 1e-8  # micro-mode far below the prominence floor
    assert count_modes(_curve(values)) == 1


def test_saddle_depth_separates_merged_from_distinct():
    rise = np.linspace(0.0, 1.0, 50)
    shallow = np.concatenate([rise, [1.0 - 1e-5], rise[::-1]])
    assert count_modes(_curve(shallow)) == 1
    deep = np.concatenate([rise, [0.9], rise[::-1]])
    assert count_modes(_curve(deep)) == 2


def test_count_modes_unimodal_reference(normal_500):
    h = silverman_bandwidth(normal_500)
    assert find_modes(normal_500, h).count == 1


def test_count_modes_bimodal_and_trimodal(well_separated, trimodal):
    assert find_modes(well_separated, silverman_bandwidth(well_separated)).count == 2
    assert find_modes(trimodal, silverman_bandwidth(trimodal)).count == 3


def test_unequal_weights_is_two_modes_not_hundreds():
    for seed in range(10):
        x = sample_mixture(UNEQUAL_WEIGHTS, seed)
        assert find_modes(x, silverman_bandwidth(x)).count == 2


def test_find_modes_well_separated_locations(well_separated):
    modes = find_modes(well_separated, silverman_bandwidth(well_separated))
    assert modes.count == 2
    assert abs(modes.locations[0] - (-2.0)) < 0.3
    assert abs(modes.locations[1] - 2.0) < 0.3
    assert np.all(modes.heights > 0)


def test_single_observation_mode_at_point():
    x = np.array([0.0])
    for h in (0.5, 2.0):
        modes = find_modes(x, h)
        assert modes.count == 1
        grid_spacing = 6.0 * h / 799
        assert abs(modes.locations[0]) <= grid_spacing


def test_mode_count_monotone_in_bandwidth():
    rng = np.random.default_rng(31)
    from modality import default_grid, kde_auto

    for _ in range(20):
        n = int(rng.integers(30, 400))
        x = np.sort(np.concatenate([
            rng.normal(-2.0, 0.5, n // 2), rng.normal(2.0, 0.8, n - n // 2)
        ]))
        span = x[-1] - x[0]
        counts = [
            count_modes(kde_auto(x, default_grid(x, h), h))
            for h in np.geomspace(span / 150, span, 30)
        ]
        assert all(a >= b for a, b in zip(counts[:-1], counts[1:]))
        assert counts[-1] == 1  # h at the data range smooths to one mode


def test_find_trough_symmetric(well_separated):
    h = silverman_bandwidth(well_separated)
    trough = find_trough(well_separated, h)
    grid_spacing = (well_separated[-1] - well_separated[0] + 6 * h) / 799
    assert abs(trough.location) <= 2 * grid_spacing + 0.05
    assert 0.0 < trough.ratio < 1.0


def test_find_trough_extreme_separation_matches_analytic_ratio():
    # population oracle: for 0.5*N(-5,0.5)+0.5*N(5,0.5) smoothed by h the
    # valley-to-peak ratio is 2*exp(-12.5 / (0.25 + h^2))
    x = sample_mixture(EXTREME_SEPARATION, 0)
    h = silverman_bandwidth(x)
    expected = 2.0 * np.exp(-12.5 / (0.25 + h * h))
    trough = find_trough(x, h)
    assert trough.ratio == pytest.approx(expected, abs=0.012)
    assert trough.ratio < 0.05


def test_find_trough_near_unimodal_is_shallow(near_unimodal):
    trough = find_trough(near_unimodal, silverman_bandwidth(near_unimodal))
    assert trough.ratio > 0.5


def test_find_trough_lies_between_modes(trimodal):
    h = silverman_bandwidth(trimodal)
    modes = find_modes(trimodal, h)
    trough = find_trough(trimodal, h)
    top_two = sorted(modes.locations[np.argsort(modes.heights)[-2:]])
    assert top_two[0] < trough.location < top_two[1]
    assert trough.height <= modes.heights.max()


def test_find_trough_requires_two_modes(normal_500):
    with pytest.raises(NotBimodalError):
        find_trough(normal_500, silverman_bandwidth(normal_500))
