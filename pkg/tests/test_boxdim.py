import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from quasidim.boxdim import (RNG_ALGORITHM, box_counts, box_dimension, dyadic_scales,
                             julia_membership, sample_julia)
from quasidim.errors import DegenerateFit, RegimeError


def test_circle_cloud_on_unit_circle():
    cloud = sample_julia(0, 5000, seed=3)
    assert cloud.points.shape == (5000,)
    assert np.abs(np.abs(cloud.points) - 1).max() < 1e-12
    assert cloud.rng == RNG_ALGORITHM
    assert (cloud.count, cloud.seed, cloud.burn_in) == (5000, 3, 1000)


def test_seeded_determinism():
    a = sample_julia(0.1j, 2000, seed=11)
    b = sample_julia(0.1j, 2000, seed=11)
    c = sample_julia(0.1j, 2000, seed=12)
    assert np.array_equal(a.points, b.points)
    assert not np.array_equal(a.points, c.points)


def test_points_pass_membership_proxy():
    cloud = sample_julia(-0.12 + 0.08j, 20000, seed=1)
    assert julia_membership(cloud.c, cloud.points).all()


def test_membership_rejects_far_points():
    assert not julia_membership(0.1, np.array([3.0 + 0j, 1.5 + 1.5j])).any()
    assert julia_membership(0, np.array([0.2 + 0j])).all()


def test_forward_invariance():
    c = 0.07 - 0.1j
    z = sample_julia(c, 5000, seed=5).points
    image = z * z + c
    # the image lies on the same set: each image point is near some sample
    ref = np.sort_complex(sample_julia(c, 200000, seed=6).points)
    dist = np.array([np.abs(ref - w).min() for w in image[:200]])
    assert dist.max() < 0.02


def test_sampling_guards():
    with pytest.raises(RegimeError):
        sample_julia(2.5, 10)
    with pytest.raises(ValueError):
        sample_julia(0.1, 0)
    with pytest.raises(ValueError):
        sample_julia(0.1, 10, burn_in=-1)


def test_circle_box_dimension():
    cloud = sample_julia(0, 200000, seed=2)
    est = box_dimension(cloud, dyadic_scales(3, 9))
    assert est.slope == pytest.approx(1.0, abs=0.03)
    assert est.r_squared > 0.999


def test_filled_square_dimension():
    rng = np.random.default_rng(4)
    pts = rng.random(400000) + 1j * rng.random(400000)
    est = box_dimension(pts, dyadic_scales(2, 7))
    assert abs(est.slope - 2) < 0.05


def test_counts_monotone_in_scale():
    pts = sample_julia(0.13 + 0.09j, 30000, seed=7).points
    counts = box_counts(pts, dyadic_scales(1, 10))
    assert np.all(np.diff(counts) >= 0)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2 ** 16), st.integers(-8, 8), st.integers(-8, 8))
def test_dyadic_translation_invariance(seed, a, b):
    rng = np.random.default_rng(seed)
    pts = rng.normal(size=300) + 1j * rng.normal(size=300)
    scales = dyadic_scales(0, 5)
    shifted = pts + complex(a, b)
    assert np.array_equal(box_counts(pts, scales), box_counts(shifted, scales))


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2 ** 16))
def test_adding_points_never_lowers_counts(seed):
    rng = np.random.default_rng(seed)
    pts = rng.random(200) + 1j * rng.random(200)
    more = np.concatenate([pts, rng.random(50) + 1j * rng.random(50)])
    scales = dyadic_scales(1, 6)
    assert np.all(box_counts(more, scales) >= box_counts(pts, scales))


def test_degenerate_fit():
    with pytest.raises(DegenerateFit):
        box_dimension(np.array([0.1 + 0.1j, 0.11 + 0.1j]), [1.0, 0.5])
    with pytest.raises(ValueError):
        box_dimension(np.array([], dtype=complex), [1.0, 0.5])
    with pytest.raises(ValueError):
        box_dimension(np.array([0.1j]), [1.0])


def test_scales_sorted_and_counts_exact():
    pts = np.array([0.1 + 0.1j, 0.9 + 0.1j, 0.1 + 0.9j, 0.9 + 0.9j])
    est = box_dimension(pts, [0.5, 1.0, 0.25])
    assert list(est.scales) == [1.0, 0.5, 0.25]
    assert list(est.counts) == [1, 4, 4]


def test_dyadic_scales():
    assert dyadic_scales(2, 4) == [0.25, 0.125, 0.0625]
    assert math.log2(dyadic_scales(11, 11)[0]) == -11
