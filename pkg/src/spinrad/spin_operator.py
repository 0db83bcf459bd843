"""Assembly and spectral analysis of the spin-space operator A_M.

A_M X = -1/2 sum_{lam,mu} sum_{j,m} M[lam] M[mu] A_jm(x[mu] - x[lam])
        sigma_m^[mu] sigma_j^[lam] X,

a Hermitian, negative-semidefinite operator on the (2s+1)^P-dimensional
spin space.  Its smallest eigenvalue is the quadratic coefficient of the
ground-energy expansion in the magnetic moments.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .cutoff import CutoffProfile
from .errors import DomainError, ResourceError, SpinradError
from .kernel import kernel_matrix
from .spin_algebra import MAX_DENSE_DIM, _check_half_integer, embed_site_operator, \
    spin_matrices

# Relative ceiling on positive eigenvalues of an assembled A_M; anything
# larger diagnoses a kernel or assembly bug and is raised, not clipped.
PSD_VIOLATION_TOL = 1e-10

DEFAULT_DEGENERACY_TOL = 1e-7


@dataclass
class SpinSystem:
    """P static spin-s particles with positions and magnetic moments."""

    positions: np.ndarray  # (P, 3)
    moments: np.ndarray    # (P,)
    s: float = 0.5

    def __post_init__(self):
        self.positions = np.atleast_2d(np.asarray(self.positions, dtype=float))
        self.moments = np.atleast_1d(np.asarray(self.moments, dtype=float))
        if self.positions.shape != (self.P, 3):
            raise DomainError("positions must be a (P, 3) array")
        if self.moments.shape != (self.P,):
            raise DomainError("moments must have one entry per particle")
        for a in range(self.P):
            for b in range(a + 1, self.P):
                if np.linalg.norm(self.positions[a] - self.positions[b]) < 1e-12:
                    raise DomainError("positions pairwise distinct")
        two_s = _check_half_integer(self.s)
        self.s = two_s / 2.0
        if self.spin_dim > MAX_DENSE_DIM:
            raise ResourceError(
                f"spin dimension {self.spin_dim} exceeds the dense budget")

    @property
    def P(self) -> int:
        return len(np.atleast_1d(np.asarray(self.moments)))

    @property
    def spin_dim(self) -> int:
        return int(round(2 * self.s + 1)) ** self.P

    def with_moments(self, moments) -> "SpinSystem":
        return SpinSystem(positions=self.positions.copy(),
                          moments=np.asarray(moments, dtype=float), s=self.s)


@dataclass
class HermitianSpinOperator:
    """Dense Hermitian matrix on the spin space with its provenance."""

    matrix: np.ndarray
    system: SpinSystem = None
    profile: CutoffProfile = None


def site_spin_operators(s, P):
    """Embedded matrices sigma_m^[lam]; shape indexable as [lam][m]."""
    sig = spin_matrices(s).sigma
    return [[embed_site_operator(sig[m], lam + 1, P) for m in range(3)]
            for lam in range(P)]


def _assemble(system: SpinSystem, kernel_at) -> np.ndarray:
    P, dim = system.P, system.spin_dim
    M = system.moments
    x = system.positions
    emb = site_spin_operators(system.s, P)
    A = np.zeros((dim, dim), dtype=complex)
    for lam in range(P):
        for mu in range(P):
            K = kernel_at(x[mu] - x[lam])
            for j in range(3):
                for m in range(3):
                    if K[j, m] == 0.0:
                        continue
                    A -= 0.5 * M[lam] * M[mu] * K[j, m] * (emb[mu][m] @ emb[lam][j])
    return A


def _check_operator(A: np.ndarray) -> None:
    norm = np.linalg.norm(A)
    herm = np.linalg.norm(A - A.conj().T)
    if herm > 1e-12 * max(1.0, norm):
        raise SpinradError(f"assembled operator is not Hermitian ({herm:.3e})")
    top = np.linalg.eigvalsh((A + A.conj().T) / 2.0)[-1]
    if top > PSD_VIOLATION_TOL * max(1.0, norm):
        raise SpinradError(
            f"A_M has a positive eigenvalue {top:.3e}; kernel/assembly bug")


def assemble_am(system: SpinSystem, profile: CutoffProfile) -> HermitianSpinOperator:
    """Assemble A_M from continuum kernel evaluations."""
    A = _assemble(system, lambda d: kernel_matrix(profile, d).entries)
    _check_operator(A)
    return HermitianSpinOperator(matrix=A, system=system, profile=profile)


def quadratic_form(A: HermitianSpinOperator, X) -> float:
    """Real Rayleigh value <A X, X> for a normalized X."""
    X = np.asarray(X, dtype=complex)
    if abs(np.linalg.norm(X) - 1.0) > 1e-12:
        raise DomainError("quadratic_form requires a normalized state")
    val = np.vdot(X, A.matrix @ X)
    return val.real


def ground_eigenspace(A: HermitianSpinOperator,
                      degeneracy_tol: float = DEFAULT_DEGENERACY_TOL):
    """Smallest eigenvalue, its cluster multiplicity, and an orthonormal basis.

    The cluster gathers eigenvalues within degeneracy_tol * max(1, |lam_min|)
    of the minimum.
    """
    vals, vecs = np.linalg.eigh(A.matrix)
    lam_min = vals[0]
    width = degeneracy_tol * max(1.0, abs(lam_min))
    mult = int(np.sum(vals <= lam_min + width))
    return lam_min, mult, vecs[:, :mult]
