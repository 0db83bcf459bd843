import math

import numpy as np
import pytest
from scipy import integrate
import scipy.sparse as sp

from spinrad.cutoff import phi_eval
from spinrad.errors import DomainError, ResourceError
from spinrad.fock import ModeGrid, build_fock_space, build_hamiltonian, \
    build_mode_grid, coupling_vector, discrete_am, discrete_kernel_matrix, \
    ground_state, mode_coefficients, multiplicity_scan, photon_number, \
    quadratic_fit, variational_trial_check
from spinrad.spin_operator import SpinSystem, assemble_am

from conftest import random_state


def test_grid_antipodal_symmetry(default_grid):
    g = default_grid
    assert np.allclose(g.k[g.antipode], -g.k, atol=1e-12)
    assert np.array_equal(g.w[g.antipode], g.w)


def test_grid_transversality(default_grid):
    g = default_grid
    assert np.abs(np.einsum("nad,nd->na", g.eps, g.k)).max() <= 1e-14
    dots = np.einsum("nd,nd->n", g.eps[:, 0], g.eps[:, 1])
    assert np.abs(dots).max() <= 1e-14


def test_grid_weight_sum(profile, default_grid):
    # oracle: 1D radial quadrature of int |phi|^2 dk
    oracle = 4.0 * math.pi * integrate.quad(
        lambda r: phi_eval(profile, r) ** 2 * r * r, 0.0,
        profile.far_radius())[0]
    total = float(np.sum(default_grid.w * phi_eval(profile,
                                                   default_grid.omega) ** 2))
    assert total == pytest.approx(oracle, rel=1e-6)
    assert oracle == pytest.approx(math.pi ** 1.5, rel=1e-10)


def test_grid_validation(profile):
    with pytest.raises(DomainError):
        build_mode_grid(profile, 1, 12)
    with pytest.raises(DomainError):
        build_mode_grid(profile, 8, 7)


def test_mode_coefficients_structure(profile, small_grid):
    c = mode_coefficients(profile, small_grid, [0.0, 0.0, 0.0], 3)
    assert c.shape == (small_grid.n_modes, 2)
    # amplitude decays like phi at large |k|
    far = small_grid.omega > 0.8 * profile.far_radius()
    assert np.abs(c[far]).max() <= 1e-10
    with pytest.raises(DomainError):
        mode_coefficients(profile, small_grid, [0.0, 0.0, 0.0], 0)


def test_mode_coefficients_self_consistency(profile, small_grid):
    # weighted |amplitude|^2 / omega sums to the discrete kernel diagonal
    for m in (1, 2, 3):
        v = coupling_vector(profile, small_grid, [0.0, 0.0, 0.0], m)
        total = float(np.sum(np.abs(v) ** 2
                             / np.repeat(small_grid.omega, 2)))
        # <omega^-1 B_m, B_m> = |k| (2 pi)^-3 |phi|^2 |k x e_m|^2/|k|^2 summed
        diag = discrete_kernel_matrix(profile, small_grid,
                                      [0.0, 0.0, 0.0])[m - 1, m - 1]
        assert total == pytest.approx(diag, rel=1e-12)


def test_discrete_am_matches_continuum(profile, default_grid, two_spin_system):
    Ac = assemble_am(two_spin_system, profile).matrix
    Ad = discrete_am(two_spin_system, profile, default_grid).matrix
    rel = np.linalg.norm(Ad - Ac) / np.linalg.norm(Ac)
    assert rel <= 1e-3
    finer = build_mode_grid(profile, 40, 20)
    rel2 = np.linalg.norm(discrete_am(two_spin_system, profile, finer).matrix
                          - Ac) / np.linalg.norm(Ac)
    assert rel2 < rel


def test_discrete_am_zero_and_single(profile, default_grid):
    zero = SpinSystem(positions=[[0, 0, 0], [1, 0, 0]], moments=[0.0, 0.0])
    assert np.abs(discrete_am(zero, profile, default_grid).matrix).max() == 0.0
    single = SpinSystem(positions=[[0.0, 0.0, 0.0]], moments=[0.6])
    Ad = discrete_am(single, profile, default_grid).matrix
    a0 = discrete_kernel_matrix(profile, default_grid, [0.0, 0.0, 0.0])[0, 0]
    assert np.abs(Ad + 1.5 * a0 * 0.36 * np.eye(2)).max() <= 1e-12


def test_discrete_am_rejects_asymmetric_grid(profile, small_grid,
                                             two_spin_system):
    bad = ModeGrid(k=small_grid.k + [0.05, 0.0, 0.0], w=small_grid.w,
                   eps=small_grid.eps, antipode=small_grid.antipode)
    with pytest.raises(DomainError):
        discrete_am(two_spin_system, profile, bad)


def test_hamiltonian_structure(profile, small_grid, two_spin_system):
    toy = build_hamiltonian(two_spin_system, profile, small_grid, 2)
    H = toy.matrix()
    assert abs(H - H.conj().T).max() <= 1e-13
    # vacuum expectation vanishes for every X
    rng = np.random.default_rng(1)
    for _ in range(5):
        e0x = toy.vacuum_embed(random_state(rng, 4))
        assert abs(np.vdot(e0x, H @ e0x)) <= 1e-15
    # free part: M = 0 leaves the diagonal free field with ground energy 0
    free = toy.matrix(0.0)
    assert (free != sp.diags(free.diagonal())).nnz == 0
    assert free.diagonal().min() == 0.0


def test_interaction_changes_photon_number_by_one(profile, small_grid,
                                                  two_spin_system):
    toy = build_hamiltonian(two_spin_system, profile, small_grid, 2)
    n_diag = toy.photon_number_diag()
    coo = toy.h_int.tocoo()
    jumps = np.abs(n_diag[coo.row] - n_diag[coo.col])
    assert set(np.unique(jumps)) <= {1}


def test_fock_space_budget(profile, default_grid):
    with pytest.raises(ResourceError):
        build_fock_space(default_grid, 3, spin_dim=4)


def test_ground_state_diagonal_and_free(profile, small_grid, two_spin_system):
    D = sp.diags(np.array([3.0, -2.0, 5.0, 0.5]))
    vals, vecs, res = ground_state(D, k_pairs=1)
    assert vals[0] == pytest.approx(-2.0, abs=1e-14)
    toy = build_hamiltonian(two_spin_system.with_moments([0.0, 0.0]), profile,
                            small_grid, 1)
    vals, vecs, res = ground_state(toy.matrix(), tol=1e-10, k_pairs=2,
                                   spin_dim=4)
    assert np.abs(vals).max() <= 1e-10
    assert res.max() <= 1e-10


def test_ground_state_deterministic(profile, default_grid, two_spin_system):
    toy = build_hamiltonian(two_spin_system, profile, default_grid, 1)
    H = toy.matrix(0.3)
    v1 = ground_state(H, k_pairs=2, seed=77, spin_dim=4)
    v2 = ground_state(H, k_pairs=2, seed=77, spin_dim=4)
    assert np.array_equal(v1[0], v2[0])
    assert np.array_equal(v1[1], v2[1])


def test_variational_trial_identity(profile, small_grid, two_spin_system):
    rng = np.random.default_rng(2)
    for _ in range(5):
        X = random_state(rng, 4)
        tc = variational_trial_check(two_spin_system, profile, small_grid, 2, X)
        assert tc.residual <= 1e-10
        assert tc.u_norm_dh <= tc.k_bound \
            * np.linalg.norm(two_spin_system.moments) + 1e-12


def test_variational_trial_zero_moments(profile, small_grid):
    system = SpinSystem(positions=[[0, 0, 0], [1, 0, 0]], moments=[0.0, 0.0])
    tc = variational_trial_check(system, profile, small_grid, 2,
                                 np.array([1.0, 0, 0, 0]))
    assert tc.lhs == 0.0 and tc.rhs == 0.0


def test_photon_number_basics(profile, small_grid, two_spin_system):
    toy = build_hamiltonian(two_spin_system, profile, small_grid, 1)
    rng = np.random.default_rng(3)
    e0x = toy.vacuum_embed(random_state(rng, 4))
    assert photon_number(toy, e0x) == 0.0
    one = np.zeros(toy.dim, dtype=complex)
    one[4 * 3] = 1.0  # first spin index of the third one-photon state
    assert photon_number(toy, one) == 1.0


def test_quadratic_fit_contract(profile, default_grid, two_spin_system):
    fit = quadratic_fit(two_spin_system, profile, default_grid, 1,
                        [0.4, 0.2, 0.1, 0.05])
    assert abs(fit.c2 - fit.a_disc_min) <= 0.02 * abs(fit.a_disc_min)
    assert fit.tolerance_limited or fit.residual_slope >= 2.7
    slope = np.polyfit(np.log(fit.scales), np.log(fit.photon_numbers), 1)[0]
    assert abs(slope - 2.0) <= 0.1
    with pytest.raises(DomainError):
        quadratic_fit(two_spin_system, profile, default_grid, 1, [0.4, 0.2])


def test_multiplicity_scan(profile, default_grid):
    single = SpinSystem(positions=[[0.0, 0.0, 0.0]], moments=[1.0])
    rows = multiplicity_scan(single, profile, default_grid, 1, [0.2, 0.1])
    for r in rows:
        assert r.mult_h == 2
        assert r.mult_h <= r.mult_a1
    assert rows[-1].min_overlap >= 0.99
    pair = SpinSystem(positions=[[0, 0, 0], [0.9, -0.3, 0.4]],
                      moments=[1.0, 1.0])
    rows = multiplicity_scan(pair, profile, default_grid, 1, [0.2, 0.1])
    for r in rows:
        assert r.mult_h <= r.mult_a1
    assert rows[-1].min_overlap >= 0.99
    with pytest.raises(DomainError):
        multiplicity_scan(pair.with_moments([1.0, 0.5]), profile,
                          default_grid, 1, [0.1])
