"""Desk-scale truncated Fock realization of the spin-photon Hamiltonian.

The photon momentum integral is discretized on an antipodally symmetric
spherical-product grid; each (mode, polarization) pair becomes one bosonic
oscillator.  The Hamiltonian

    H = dGamma(omega) (x) I + sum_{lam,m} M[lam] Phi_S(B_{m,x[lam]}) (x) sigma_m^[lam]

is assembled sparse on the occupation basis with total photon number
<= n_max, tensored with the spin space (Fock index major).  The antipodal
symmetry is the discrete analogue of the k -> -k evenness of the continuum
kernel; without it the discrete A_M would not be Hermitian.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations_with_replacement

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .cutoff import CutoffProfile, phi_eval
from .errors import ConvergenceError, DomainError, ResourceError
from .spin_operator import HermitianSpinOperator, SpinSystem, _assemble, \
    _check_operator, site_spin_operators

# Hard ceiling on dim(Fock) * dim(spin) for assembled operators.
MAX_TOTAL_DIM = 400_000

ANTIPODE_TOL = 0.0  # symmetry is enforced exactly at construction


@dataclass(frozen=True)
class ModeGrid:
    """Finite antipodally symmetric photon-mode set with quadrature weights."""

    k: np.ndarray        # (N, 3) wavevectors
    w: np.ndarray        # (N,) positive weights for int dk
    eps: np.ndarray      # (N, 2, 3) orthonormal transverse polarizations
    antipode: np.ndarray  # (N,) index of the mode at -k

    @property
    def n_modes(self) -> int:
        return len(self.w)

    @property
    def omega(self) -> np.ndarray:
        return np.linalg.norm(self.k, axis=1)


def build_mode_grid(profile: CutoffProfile, n_radial: int,
                    n_angular: int) -> ModeGrid:
    """Spherical-product quadrature grid closed under k -> -k.

    Radial: n_radial Gauss-Legendre nodes on (0, r_far).  Angular:
    (n_angular/2) Gauss-Legendre polar nodes x n_angular uniform azimuths.
    """
    if n_radial < 2:
        raise DomainError("need n_radial >= 2")
    if n_angular < 6 or n_angular % 2:
        raise DomainError("need even n_angular >= 6")
    r_far = profile.far_radius()
    rn, rw = np.polynomial.legendre.leggauss(n_radial)
    rn = 0.5 * r_far * (rn + 1.0)
    rw = 0.5 * r_far * rw
    n_theta = n_angular // 2
    cn, cw = np.polynomial.legendre.leggauss(n_theta)
    # symmetrize so the antipodal map is exact in floating point
    cn = 0.5 * (cn - cn[::-1])
    cw = 0.5 * (cw + cw[::-1])
    n_phi = n_angular
    ph = 2.0 * math.pi * np.arange(n_phi) / n_phi
    pw = 2.0 * math.pi / n_phi

    ks, ws = [], []
    for r, wr in zip(rn, rw):
        for c, wc in zip(cn, cw):
            s_ = math.sqrt(1.0 - c * c)
            for f in ph:
                ks.append([r * s_ * math.cos(f), r * s_ * math.sin(f), r * c])
                ws.append(wr * r * r * wc * pw)
    k = np.array(ks)
    w = np.array(ws)

    # antipode: same radius, mirrored polar node, azimuth shifted by pi
    N = len(w)
    idx = np.arange(N).reshape(n_radial, n_theta, n_phi)
    anti = np.empty(N, dtype=int)
    for ir in range(n_radial):
        for ic in range(n_theta):
            for jf in range(n_phi):
                anti[idx[ir, ic, jf]] = idx[ir, n_theta - 1 - ic,
                                            (jf + n_phi // 2) % n_phi]
    if not np.allclose(k[anti], -k, atol=1e-13 * r_far) or \
            not np.array_equal(w[anti], w):
        raise DomainError("mode grid lost antipodal symmetry")

    eps = np.empty((N, 2, 3))
    khat = k / np.linalg.norm(k, axis=1)[:, None]
    ref = np.where(np.abs(khat[:, 2:3]) < 0.9, [[0.0, 0.0, 1.0]],
                   [[1.0, 0.0, 0.0]])
    e1 = np.cross(khat, ref)
    e1 /= np.linalg.norm(e1, axis=1)[:, None]
    eps[:, 0] = e1
    eps[:, 1] = np.cross(khat, e1)
    return ModeGrid(k=k, w=w, eps=eps, antipode=anti)


def mode_coefficients(profile: CutoffProfile, grid: ModeGrid, x,
                      m: int) -> np.ndarray:
    """Polarization components <eps_ia, B_{m,x}(k_i)>; shape (N, 2), complex.

    B_{m,x}(k) = i phi(|k|) |k|^(1/2) (2 pi)^(-3/2) e^{-i k.x} (k x e_m)/|k|.
    """
    if m not in (1, 2, 3):
        raise DomainError("axis index m must be 1, 2 or 3")
    x = np.asarray(x, dtype=float)
    r = grid.omega
    e_m = np.zeros(3)
    e_m[m - 1] = 1.0
    cross = np.cross(grid.k, e_m) / r[:, None]
    scal = 1j * phi_eval(profile, r) * np.sqrt(r) * (2.0 * math.pi) ** -1.5 \
        * np.exp(-1j * grid.k @ x)
    return scal[:, None] * np.einsum("nad,nd->na", grid.eps, cross)


def coupling_vector(profile, grid, x, m) -> np.ndarray:
    """Oscillator-space coupling sqrt(w_i) <eps_ia, B_{m,x}(k_i)>, flat (2N,)."""
    c = mode_coefficients(profile, grid, x, m)
    return (np.sqrt(grid.w)[:, None] * c).ravel()


# ---------------------------------------------------------------------------
# Truncated Fock space
# ---------------------------------------------------------------------------

@dataclass
class FockSpace:
    """Occupation basis over 2N oscillators with total photon number <= n_max."""

    grid: ModeGrid
    n_max: int
    states: list                 # sorted tuples of occupied oscillators
    index: dict                  # tuple -> basis position
    sector_offsets: list         # first index of each photon sector
    omega_osc: np.ndarray        # (2N,) oscillator frequencies
    n_total: np.ndarray          # (dim,) photon number per basis state

    @property
    def dim(self) -> int:
        return len(self.states)

    @property
    def n_osc(self) -> int:
        return 2 * self.grid.n_modes


def build_fock_space(grid: ModeGrid, n_max: int,
                     spin_dim: int = 1) -> FockSpace:
    if n_max < 1:
        raise DomainError("need n_max >= 1")
    n_osc = 2 * grid.n_modes
    states, offsets = [], []
    for n in range(n_max + 1):
        offsets.append(len(states))
        states.extend(combinations_with_replacement(range(n_osc), n))
        if len(states) * spin_dim > MAX_TOTAL_DIM:
            raise ResourceError(
                f"Fock dimension {len(states)} x spin {spin_dim} exceeds "
                f"budget {MAX_TOTAL_DIM}")
    index = {s: i for i, s in enumerate(states)}
    omega_osc = np.repeat(grid.omega, 2)
    n_total = np.array([len(s) for s in states])
    return FockSpace(grid=grid, n_max=n_max, states=states, index=index,
                     sector_offsets=offsets, omega_osc=omega_osc,
                     n_total=n_total)


def _creation_entries(space: FockSpace, v: np.ndarray):
    """Sparse entries of T = sum_o v_o a_o^dagger restricted to the truncation.

    Returns (rows, cols, vals) with rows in sector n+1 and cols in sector n.
    The transitions 0 -> 1 and 1 -> 2 are vectorized; higher sectors fall
    back to a generic loop (used only with small grids).
    """
    n_osc = space.n_osc
    rows, cols, vals = [], [], []
    # 0 -> 1
    rows.append(np.arange(1, 1 + n_osc))
    cols.append(np.zeros(n_osc, dtype=int))
    vals.append(v.copy())
    if space.n_max >= 2:
        # 1 -> 2: pair (i <= j) has index i*n_osc - i(i-1)/2 + (j - i)
        base2 = space.sector_offsets[2]
        i_ = np.repeat(np.arange(n_osc), n_osc)
        o_ = np.tile(np.arange(n_osc), n_osc)
        lo = np.minimum(i_, o_)
        hi = np.maximum(i_, o_)
        pair = base2 + lo * n_osc - lo * (lo - 1) // 2 + (hi - lo)
        fac = np.where(i_ == o_, math.sqrt(2.0), 1.0)
        rows.append(pair)
        cols.append(1 + i_)
        vals.append(fac * v[o_])
    for n in range(2, space.n_max):
        lo_off, hi_off = space.sector_offsets[n], space.sector_offsets[n + 1]
        for col in range(lo_off, hi_off):
            s = space.states[col]
            for o in range(n_osc):
                t = tuple(sorted(s + (o,)))
                rows.append(np.array([space.index[t]]))
                cols.append(np.array([col]))
                vals.append(np.array([v[o] * math.sqrt(s.count(o) + 1.0)]))
    return (np.concatenate(rows), np.concatenate(cols),
            np.concatenate(vals).astype(complex))


def segal_field(space: FockSpace, v: np.ndarray) -> sp.csr_matrix:
    """Phi_S(V) = (a(V) + a(V)^dagger)/sqrt(2) for coupling vector v."""
    rows, cols, vals = _creation_entries(space, np.asarray(v, dtype=complex))
    T = sp.csr_matrix((vals / math.sqrt(2.0), (rows, cols)),
                      shape=(space.dim, space.dim))
    return T + T.conj().T


@dataclass
class ToyHamiltonian:
    """Sparse H = h_free + h_int on Fock (x) spin, Fock index major."""

    h_free: sp.csr_matrix
    h_int: sp.csr_matrix
    space: FockSpace
    system: SpinSystem
    spin_dim: int

    @property
    def dim(self) -> int:
        return self.h_free.shape[0]

    def matrix(self, scale: float = 1.0) -> sp.csr_matrix:
        """H with the interaction (hence all moments) scaled by `scale`."""
        return self.h_free + scale * self.h_int

    def vacuum_embed(self, X: np.ndarray) -> np.ndarray:
        """Psi_0 (x) X as a full-space vector."""
        out = np.zeros(self.dim, dtype=complex)
        out[: self.spin_dim] = X
        return out

    def photon_number_diag(self) -> np.ndarray:
        return np.repeat(self.space.n_total, self.spin_dim)


def build_hamiltonian(system: SpinSystem, profile: CutoffProfile,
                      grid: ModeGrid, n_max: int) -> ToyHamiltonian:
    """Assemble the truncated spin-photon Hamiltonian."""
    spin_dim = system.spin_dim
    space = build_fock_space(grid, n_max, spin_dim)
    emb = site_spin_operators(system.s, system.P)
    h_free = sp.kron(
        sp.diags(np.array([sum(space.omega_osc[o] for o in s)
                           for s in space.states])),
        sp.identity(spin_dim), format="csr")
    h_int = sp.csr_matrix((space.dim * spin_dim,) * 2, dtype=complex)
    for lam in range(system.P):
        for m in range(3):
            v = coupling_vector(profile, grid, system.positions[lam], m + 1)
            phi_s = segal_field(space, v)
            h_int = h_int + system.moments[lam] * sp.kron(
                phi_s, sp.csr_matrix(emb[lam][m]), format="csr")
    return ToyHamiltonian(h_free=h_free, h_int=h_int.tocsr(), space=space,
                          system=system, spin_dim=spin_dim)


# ---------------------------------------------------------------------------
# Eigensolver
# ---------------------------------------------------------------------------

def _start_vector(toy_dim: int, spin_dim: int, seed: int) -> np.ndarray:
    """Deterministic Lanczos start: vacuum (x) random spin plus small noise."""
    rng = np.random.default_rng(seed)
    v0 = 1e-3 * rng.normal(size=toy_dim)
    v0[:spin_dim] += rng.normal(size=spin_dim)
    return v0 / np.linalg.norm(v0)


def ground_state(H, tol: float = 1e-10, k_pairs: int = 1, seed: int = 1234,
                 spin_dim: int = 1):
    """Lowest k_pairs eigenpairs of a sparse Hermitian matrix.

    Returns (energies, vectors, residuals) with vectors as columns;
    residuals are recomputed by an independent matrix-vector product.
    """
    H = sp.csr_matrix(H)
    dim = H.shape[0]
    if dim <= 32 or k_pairs >= dim - 1:
        vals, vecs = np.linalg.eigh(H.toarray())
        vals, vecs = vals[:k_pairs], vecs[:, :k_pairs]
    else:
        v0 = _start_vector(dim, min(spin_dim, dim), seed)
        # Shift the spectrum away from zero: Lanczos is unreliable on
        # eigenvalues the operator annihilates (the free-field vacuum).
        shift = float(np.abs(H.diagonal()).max()) + 1.0
        try:
            vals, vecs = spla.eigsh(H - shift * sp.identity(dim), k=k_pairs,
                                    which="SA", v0=v0, tol=tol * 1e-2,
                                    maxiter=20_000)
        except spla.ArpackNoConvergence as exc:
            raise ConvergenceError("Lanczos iteration did not converge",
                                   best_residual=None) from exc
        vals = vals + shift
        order = np.argsort(vals)
        vals, vecs = vals[order], vecs[:, order]
    residuals = np.array([np.linalg.norm(H @ vecs[:, i] - vals[i] * vecs[:, i])
                          for i in range(len(vals))])
    if np.any(residuals > max(tol, 1e-9 * abs(H).max())):
        raise ConvergenceError(
            f"eigenpair residual {residuals.max():.3e} above tolerance {tol:.3e}",
            best_residual=float(residuals.max()))
    return vals, vecs, residuals


# ---------------------------------------------------------------------------
# Discrete kernel and A_M
# ---------------------------------------------------------------------------

def discrete_kernel_matrix(profile: CutoffProfile, grid: ModeGrid,
                           d) -> np.ndarray:
    """Mode-sum kernel (2 pi)^-3 sum_i w_i |phi|^2 e^{-i k_i . d} (I - khat khat)."""
    d = np.asarray(d, dtype=float)
    r = grid.omega
    khat = grid.k / r[:, None]
    f = grid.w * phi_eval(profile, r) ** 2 * np.exp(-1j * grid.k @ d)
    proj = np.eye(3)[None] - khat[:, :, None] * khat[:, None, :]
    out = np.einsum("n,nab->ab", f, proj) * (2.0 * math.pi) ** -3
    if np.abs(out.imag).max() > 1e-12 * max(1.0, np.abs(out.real).max()):
        raise DomainError("asymmetric mode grid: discrete kernel not real")
    return out.real


def discrete_am(system: SpinSystem, profile: CutoffProfile,
                grid: ModeGrid) -> HermitianSpinOperator:
    """A_M with the mode sum replacing the continuum kernel integral."""
    _require_symmetric(grid)
    A = _assemble(system, lambda d: discrete_kernel_matrix(profile, grid, d))
    _check_operator(A)
    return HermitianSpinOperator(matrix=A, system=system, profile=profile)


def _require_symmetric(grid: ModeGrid) -> None:
    if not np.allclose(grid.k[grid.antipode], -grid.k, atol=1e-12) or \
            not np.array_equal(grid.w[grid.antipode], grid.w):
        raise DomainError("mode grid must be antipodally symmetric")


# ---------------------------------------------------------------------------
# Verification operations
# ---------------------------------------------------------------------------

@dataclass
class TrialCheck:
    lhs: float
    rhs: float
    residual: float
    u_norm_dh: float
    k_bound: float


def variational_trial_check(system: SpinSystem, profile: CutoffProfile,
                            grid: ModeGrid, n_max: int, X) -> TrialCheck:
    """Energy of the explicit trial state versus <A_M^disc X, X>.

    The trial state is Psi_0 (x) X - u with u the one-photon correction
    (dGamma(omega)^-1 (x) I) H_int (Psi_0 (x) X); the two sides agree up to
    roundoff because <H_int u, u> vanishes by photon-sector orthogonality.
    """
    if n_max < 1:
        raise DomainError("need n_max >= 1")
    X = np.asarray(X, dtype=complex)
    if abs(np.linalg.norm(X) - 1.0) > 1e-12:
        raise DomainError("trial check requires a normalized X")
    toy = build_hamiltonian(system, profile, grid, n_max)
    e0x = toy.vacuum_embed(X)
    h_vac = toy.h_int @ e0x  # lives in the one-photon sector
    inv_omega = np.zeros(toy.dim)
    s1 = slice(toy.spin_dim, (1 + toy.space.n_osc) * toy.spin_dim)
    inv_omega[s1] = 1.0 / np.repeat(toy.space.omega_osc, toy.spin_dim)
    u = inv_omega * h_vac
    phi_trial = e0x - u
    H = toy.matrix()
    lhs = np.vdot(phi_trial, H @ phi_trial).real
    rhs = np.vdot(X, discrete_am(system, profile, grid).matrix @ X).real

    # D(H) norm of u: u sits in the one-photon sector, where dGamma(omega) u
    # recovers h_vac.
    u_dh = math.sqrt(np.linalg.norm(h_vac) ** 2 + np.linalg.norm(u) ** 2)
    k_bound = _discrete_k_bound(system, profile, grid)
    return TrialCheck(lhs=lhs, rhs=rhs, residual=abs(lhs - rhs),
                      u_norm_dh=u_dh, k_bound=k_bound)


def _discrete_k_bound(system: SpinSystem, profile: CutoffProfile,
                      grid: ModeGrid) -> float:
    """Smallest K with ||u_M(X)||_D(H) <= K |M| |X| in the discrete model.

    Computed as the operator norm of the quadratic form
    X -> ||u||^2 + ||dGamma(omega) u||^2, via its spin-space Gram matrix.
    """
    P, dim = system.P, system.spin_dim
    emb = site_spin_operators(system.s, P)
    vs = [[coupling_vector(profile, grid, system.positions[lam], m + 1)
           for m in range(3)] for lam in range(P)]
    inv_w = 1.0 / np.repeat(grid.omega, 2)
    G = np.zeros((dim, dim), dtype=complex)
    M = system.moments
    for lam in range(P):
        for m in range(3):
            for lam2 in range(P):
                for m2 in range(3):
                    ip = np.vdot(vs[lam][m], vs[lam2][m2]) \
                        + np.vdot(inv_w * vs[lam][m], inv_w * vs[lam2][m2])
                    G += 0.5 * M[lam] * M[lam2] * ip \
                        * (emb[lam][m].conj().T @ emb[lam2][m2])
    norm_m = float(np.linalg.norm(M))
    if norm_m == 0.0:
        return 0.0
    top = np.linalg.eigvalsh((G + G.conj().T) / 2.0)[-1]
    return math.sqrt(max(top, 0.0)) / norm_m


@dataclass
class QuadraticFit:
    c2: float
    residual_slope: float
    a_disc_min: float
    scales: np.ndarray
    energies: np.ndarray
    photon_numbers: np.ndarray
    tolerance_limited: bool


def photon_number(toy: ToyHamiltonian, U: np.ndarray) -> float:
    """Expectation of the total photon number N (x) I in a normalized state."""
    U = np.asarray(U, dtype=complex)
    if abs(np.linalg.norm(U) - 1.0) > 1e-10:
        raise DomainError("photon_number requires a normalized state")
    return float(np.sum(toy.photon_number_diag() * np.abs(U) ** 2))


def quadratic_fit(system: SpinSystem, profile: CutoffProfile, grid: ModeGrid,
                  n_max: int, scale_points, tol: float = 1e-10,
                  seed: int = 1234) -> QuadraticFit:
    """Ground energy E(t) of H(t M) fitted against c2 t^2.

    c2 is fitted on the two smallest scales; the log-log slope of the
    remainder E(t) - c2 t^2 is estimated from the remaining scales.
    """
    scales = np.sort(np.asarray(scale_points, dtype=float))
    if len(scales) < 4 or np.any(scales <= 0):
        raise DomainError("need at least 4 positive scale points")
    toy = build_hamiltonian(system, profile, grid, n_max)
    energies, photons = [], []
    for t in scales:
        vals, vecs, _ = ground_state(toy.matrix(t), tol=tol, k_pairs=1,
                                     seed=seed, spin_dim=toy.spin_dim)
        energies.append(vals[0])
        photons.append(photon_number(toy, vecs[:, 0]))
    energies = np.array(energies)
    photons = np.array(photons)

    tt = scales[:2]
    c2 = float(np.sum(energies[:2] * tt ** 2) / np.sum(tt ** 4))
    resid = energies - c2 * scales ** 2
    usable = np.abs(resid) > 50.0 * tol
    usable[:2] = False  # fit points carry no remainder information
    tolerance_limited = int(np.sum(usable)) < 2
    if tolerance_limited:
        slope = float("nan")
    else:
        slope = float(np.polyfit(np.log(scales[usable]),
                                 np.log(np.abs(resid[usable])), 1)[0])
    a_min = float(np.linalg.eigvalsh(
        discrete_am(system, profile, grid).matrix)[0])
    return QuadraticFit(c2=c2, residual_slope=slope, a_disc_min=a_min,
                        scales=scales, energies=energies,
                        photon_numbers=photons,
                        tolerance_limited=tolerance_limited)


@dataclass
class MultiplicityRow:
    g: float
    energy: float
    mult_h: int
    mult_a1: int
    min_overlap: float


def multiplicity_scan(system: SpinSystem, profile: CutoffProfile,
                      grid: ModeGrid, n_max: int, g_points,
                      degeneracy_tol: float = 1e-7, tol: float = 1e-10,
                      seed: int = 1234) -> list:
    """Ground multiplicity of H(g 1) versus that of the minimum of A_1^disc.

    All moments are set equal to g; also reports the smallest overlap of the
    H ground vectors with Psi_0 (x) (A_1 ground eigenspace).
    """
    if np.ptp(system.moments) > 1e-12:
        raise DomainError("multiplicity scan requires equal moments")
    unit = system.with_moments(np.ones(system.P))
    toy = build_hamiltonian(unit, profile, grid, n_max)
    a1 = discrete_am(unit, profile, grid)
    a_vals, a_vecs = np.linalg.eigh(a1.matrix)
    a_width = degeneracy_tol * max(1.0, abs(a_vals[0]))
    mult_a1 = int(np.sum(a_vals <= a_vals[0] + a_width))
    proj_basis = np.array([toy.vacuum_embed(a_vecs[:, i])
                           for i in range(mult_a1)])  # rows orthonormal
    rows = []
    k_pairs = min(toy.spin_dim + 1, toy.dim - 2)
    for g in np.asarray(g_points, dtype=float):
        vals, vecs, _ = ground_state(toy.matrix(g), tol=tol, k_pairs=k_pairs,
                                     seed=seed, spin_dim=toy.spin_dim)
        # energies scale like g^2 eig(A_1), so the cluster window must too
        width = degeneracy_tol * max(g * g, abs(vals[0]))
        mult_h = int(np.sum(vals <= vals[0] + width))
        overlaps = [float(np.sum(np.abs(proj_basis.conj() @ vecs[:, i]) ** 2))
                    for i in range(mult_h)]
        rows.append(MultiplicityRow(g=float(g), energy=float(vals[0]),
                                    mult_h=mult_h, mult_a1=mult_a1,
                                    min_overlap=min(overlaps)))
    return rows
