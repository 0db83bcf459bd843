import math

import numpy as np
import pytest

from spinrad.cutoff import CutoffProfile
from spinrad.errors import DomainError
from spinrad.kernel import a11_origin, kernel_matrix, kernel_oracle_3d, \
    kernel_oracle_3d_complex

A11_GAUSS = 1.0 / (12.0 * math.pi ** 1.5)


def random_displacements(seed, count, radius=5.0):
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        v = rng.normal(size=3)
        out.append(v * rng.uniform(0.1, radius) / np.linalg.norm(v))
    return out


def test_origin_is_isotropic(profile):
    K = kernel_matrix(profile, [0.0, 0.0, 0.0]).entries
    assert np.allclose(K, K[0, 0] * np.eye(3), atol=1e-12)
    assert K[0, 0] == pytest.approx(A11_GAUSS, rel=1e-8)


def test_a11_origin_closed_form_and_scaling(profile):
    assert a11_origin(profile) == pytest.approx(A11_GAUSS, rel=1e-8)
    assert a11_origin(CutoffProfile("gaussian", 2.0)) == pytest.approx(
        8.0 * a11_origin(profile), rel=1e-8)
    assert a11_origin(profile) == pytest.approx(
        kernel_matrix(profile, [0.0, 0.0, 0.0]).entries[0, 0], rel=1e-8)


def test_trace_at_origin(profile):
    K = kernel_matrix(profile, [0.0, 0.0, 0.0]).entries
    assert np.trace(K) == pytest.approx(3.0 * a11_origin(profile), rel=1e-8)


def test_symmetry_and_evenness(profile):
    for x in random_displacements(7, 5):
        K = kernel_matrix(profile, x).entries
        assert np.abs(K - K.T).max() <= 1e-9
        assert np.abs(K - kernel_matrix(profile, -np.asarray(x)).entries).max() \
            <= 1e-9


def test_far_field_dipole_tail(profile):
    # beyond the cutoff scale the kernel approaches the trace-free
    # point-dipole tail -(delta - 3 xhat xhat)/(4 pi r^3)
    r = 20.0
    K = kernel_matrix(profile, [r, 0.0, 0.0]).entries
    tail = np.diag([2.0, -1.0, -1.0]) / (4.0 * math.pi * r ** 3)
    assert np.abs(K - tail).max() <= 1e-9
    assert abs(np.trace(K)) <= 1e-9


def test_matches_oracle(profile):
    for x in random_displacements(11, 10):
        K = kernel_matrix(profile, x).entries
        O = kernel_oracle_3d(profile, x).entries
        assert np.abs(K - O).max() <= 1e-6


def test_oracle_origin_value(profile):
    O = kernel_oracle_3d(profile, [0.0, 0.0, 0.0]).entries
    assert abs(O[0, 0] - A11_GAUSS) <= 1e-6
    assert np.abs(O - np.diag(np.diag(O))).max() <= 1e-9


def test_oracle_imaginary_part_cancels(profile):
    raw = kernel_oracle_3d_complex(profile, [0.7, -0.4, 1.1], 32)
    assert np.abs(raw.imag).max() <= 1e-12


def test_oracle_rejects_tiny_node_count(profile):
    with pytest.raises(DomainError):
        kernel_oracle_3d(profile, [0.0, 0.0, 0.0], n=4)


def test_row_transversality(profile):
    # sum_m d_m A_jm = 0, by central finite differences
    h = 1e-4
    for x in random_displacements(13, 3, radius=2.0):
        div = np.zeros(3)
        for m in range(3):
            xp, xm = np.array(x, float), np.array(x, float)
            xp[m] += h
            xm[m] -= h
            Kp = kernel_matrix(profile, xp).entries
            Km = kernel_matrix(profile, xm).entries
            div += (Kp[:, m] - Km[:, m]) / (2.0 * h)
        assert np.abs(div).max() <= 1e-5
