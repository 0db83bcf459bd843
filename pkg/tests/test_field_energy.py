import numpy as np
import pytest

from spinrad.errors import DomainError
from spinrad.field_energy import classical_current, \
    classical_decomposition_check, field_energy, higher_spin_constant, \
    jclass_fourier, jvect_fourier, vector_current
from spinrad.spin_algebra import omega_state, product_state, spin_matrices, \
    su2_rotate
from spinrad.spin_operator import SpinSystem, assemble_am, quadratic_form

from conftest import random_state


def random_system(rng, P, s=0.5):
    positions = rng.normal(size=(P, 3))
    moments = rng.uniform(-1.0, 1.0, size=P)
    return SpinSystem(positions=positions, moments=moments, s=s)


def orbit_product_state(rng, P, s):
    X0 = omega_state(s)
    return product_state([su2_rotate(s, rng.normal(size=3) * 2.0) @ X0
                          for _ in range(P)], s)


def test_vector_current_vanishes_at_zero_xi(profile, two_spin_system):
    rng = np.random.default_rng(0)
    X = random_state(rng, 4)
    j = jvect_fourier(two_spin_system, profile, X, [0.0, 0.0, 0.0])
    assert np.abs(j).max() == 0.0
    jz = jvect_fourier(two_spin_system.with_moments([0.0, 0.0]), profile, X,
                       [0.3, 0.1, -0.5])
    assert np.abs(jz).max() == 0.0


def test_vector_current_single_spin_structure(profile):
    # P=1 at origin, xi along e3: j = i phi(q) M q (-sigma2 X, sigma1 X, 0)
    system = SpinSystem(positions=[[0.0, 0.0, 0.0]], moments=[0.9], s=0.5)
    sig = spin_matrices(0.5).sigma
    X = np.array([1.0, 0.0], dtype=complex)
    q = 0.8
    j = jvect_fourier(system, profile, X, [0.0, 0.0, q])
    from spinrad.cutoff import phi_eval
    pref = 1j * phi_eval(profile, q) * 0.9 * q
    assert np.allclose(j[0], -pref * (sig[1] @ X))
    assert np.allclose(j[1], pref * (sig[0] @ X))
    assert np.abs(j[2]).max() <= 1e-15


def test_transversality(profile, two_spin_system):
    rng = np.random.default_rng(2)
    X = random_state(rng, 4)
    S = rng.normal(size=(2, 3))
    S /= np.linalg.norm(S, axis=1)[:, None]
    for _ in range(10):
        xi = rng.normal(size=3) * rng.uniform(0.1, 3.0)
        jv = jvect_fourier(two_spin_system, profile, X, xi)
        assert np.abs(np.tensordot(xi, jv, axes=(0, 0))).max() <= 1e-10
        jc = jclass_fourier(two_spin_system, profile, S, xi)
        assert abs(np.dot(xi, jc)) <= 1e-10


def test_classical_current_parallel_orientation(profile):
    system = SpinSystem(positions=[[0.0, 0.0, 0.0]], moments=[1.0], s=0.5)
    j = jclass_fourier(system, profile, [[0.0, 0.0, 1.0]], [0.0, 0.0, 1.3])
    assert np.abs(j).max() <= 1e-15
    j2 = jclass_fourier(system, profile, [[1.0, 0.0, 0.0]], [0.0, 0.0, 1.3])
    assert np.abs(j2).max() > 1e-3


def test_classical_current_rejects_non_unit(profile, two_spin_system):
    with pytest.raises(DomainError):
        jclass_fourier(two_spin_system, profile,
                       [[0.0, 0.0, 2.0], [1.0, 0.0, 0.0]], [0.1, 0.2, 0.3])


def test_expectation_bridge(profile):
    # classical current of a product state = spin expectation of the
    # vector-valued current, at every sampled xi
    rng = np.random.default_rng(8)
    system = random_system(rng, 2)
    ps = product_state([random_state(rng, 2) for _ in range(2)], 0.5)
    for _ in range(10):
        xi = rng.normal(size=3) * rng.uniform(0.1, 3.0)
        jv = jvect_fourier(system, profile, ps.vector, xi)
        jc = jclass_fourier(system, profile, ps.spin_vectors, xi)
        expect = np.array([np.vdot(ps.vector, jv[a]) for a in range(3)])
        assert np.abs(expect - jc).max() <= 1e-10


def test_zero_current_zero_energy(profile, two_spin_system):
    cur = classical_current(two_spin_system.with_moments([0.0, 0.0]), profile,
                            [[0, 0, 1.0], [1.0, 0, 0]])
    assert field_energy(cur) == 0.0


def test_energy_quadratic_in_moments(profile, two_spin_system):
    S = [[0.0, 0.0, 1.0], [1.0, 0.0, 0.0]]
    e1 = field_energy(classical_current(two_spin_system, profile, S))
    doubled = two_spin_system.with_moments(2.0 * two_spin_system.moments)
    e2 = field_energy(classical_current(doubled, profile, S))
    assert e2 == pytest.approx(4.0 * e1, rel=1e-12)


def test_energy_angular_convergence(profile, two_spin_system):
    rng = np.random.default_rng(9)
    X = random_state(rng, 4)
    cur = vector_current(two_spin_system, profile, X)
    e = field_energy(cur)
    e_fine = field_energy(cur, n_theta=64, n_phi=128)
    assert abs(e - e_fine) <= 1e-8 * max(1.0, e)


def test_field_energy_identity(profile):
    # <A_M X, X> = -(vector field energy), on independent numerical paths
    rng = np.random.default_rng(10)
    for _ in range(20):
        system = random_system(rng, rng.integers(1, 4))
        A = assemble_am(system, profile)
        X = random_state(rng, system.spin_dim)
        qf = quadratic_form(A, X)
        energy = field_energy(vector_current(system, profile, X))
        assert abs(qf + energy) <= 1e-6 * max(1.0, abs(qf))


@pytest.mark.parametrize("s", [0.5, 1.0, 1.5])
def test_classical_decomposition(profile, s):
    assert higher_spin_constant(0.5) == 1.0
    rng = np.random.default_rng(12)
    for _ in range(3):
        system = random_system(rng, 2, s=s)
        ps = orbit_product_state(rng, 2, s)
        lhs, rhs, resid = classical_decomposition_check(system, profile, ps)
        assert resid <= 1e-6 * max(1.0, abs(lhs))
