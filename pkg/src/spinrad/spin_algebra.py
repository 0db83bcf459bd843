"""Spin-s matrices, Kronecker site embeddings, Hopf maps and SU(2) rotations.

Conventions: sigma_j(s) = 2 J_j in the weight basis |s,s>, ..., |s,-s>, so
that s = 1/2 reproduces the Pauli matrices, [sigma_1, sigma_2] = 2i sigma_3
(and cyclic) and sum_j sigma_j(s)^2 = 4 s (s+1) I exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .errors import DomainError, ResourceError

# Largest tensor-product dimension this module will materialize densely.
MAX_DENSE_DIM = 1 << 14

_NORM_TOL = 1e-12


def _check_half_integer(s) -> int:
    two_s = 2 * s
    if abs(two_s - round(two_s)) > 1e-12 or round(two_s) < 1:
        raise DomainError(f"spin must be a positive half-integer, got {s}")
    return int(round(two_s))


@dataclass(frozen=True)
class SpinMatrices:
    """The three Hermitian spin matrices sigma_j(s) on C^(2s+1)."""

    s: float
    sigma: tuple  # (sigma_1, sigma_2, sigma_3)

    @property
    def dim(self) -> int:
        return self.sigma[0].shape[0]


def spin_matrices(s) -> SpinMatrices:
    """Build sigma_j(s) = 2 J_j from ladder operators in the weight basis."""
    two_s = _check_half_integer(s)
    s = two_s / 2.0
    m = np.arange(s, -s - 1.0, -1.0)
    # <s, m+1| J_+ |s, m> = sqrt(s(s+1) - m(m+1))
    jp = np.diag(np.sqrt(s * (s + 1.0) - m[1:] * (m[1:] + 1.0)), k=1)
    jm = jp.conj().T
    j1 = (jp + jm) / 2.0
    j2 = (jp - jm) / 2.0j
    j3 = np.diag(m)
    return SpinMatrices(s=s, sigma=(2.0 * j1.astype(complex),
                                    2.0 * j2.astype(complex),
                                    2.0 * j3.astype(complex)))


def embed_site_operator(op: np.ndarray, lam: int, P: int) -> np.ndarray:
    """I (x) ... (x) op (x) ... (x) I with op at slot lam (1-based)."""
    op = np.asarray(op)
    d = op.shape[0]
    if not 1 <= lam <= P:
        raise DomainError(f"site index {lam} outside 1..{P}")
    if d ** P > MAX_DENSE_DIM:
        raise ResourceError(f"tensor dimension {d}^{P} exceeds the dense budget")
    out = np.eye(d ** (lam - 1))
    out = np.kron(out, op)
    out = np.kron(out, np.eye(d ** (P - lam)))
    return out


def hopf_map(X, s) -> np.ndarray:
    """Spin-expectation vector (<sigma_1 X, X>, <sigma_2 X, X>, <sigma_3 X, X>)."""
    X = np.asarray(X, dtype=complex)
    if abs(np.linalg.norm(X) - 1.0) > _NORM_TOL:
        raise DomainError("hopf_map requires a normalized state")
    sig = spin_matrices(s).sigma
    return np.array([np.vdot(X, m @ X).real for m in sig])


def omega_state(s) -> np.ndarray:
    """Reference state X0 with unit-length spin vector (0, 0, 1).

    X0 = cos t |s,s> + sin t |s,-s> with cos 2t = 1/(2s); the two extreme
    weights differ by 2s > 1 for s > 1/2, so the transverse expectations
    vanish, and <sigma_3> = 2s cos 2t = 1.
    """
    two_s = _check_half_integer(s)
    s = two_s / 2.0
    t = 0.5 * np.arccos(1.0 / (2.0 * s))
    X0 = np.zeros(two_s + 1, dtype=complex)
    X0[0] = np.cos(t)
    X0[-1] = np.sin(t)
    return X0


def su2_rotate(s, theta) -> np.ndarray:
    """Unitary exp(-(i/2) sum_j theta_j sigma_j(s)) on C^(2s+1)."""
    theta = np.asarray(theta, dtype=float)
    sig = spin_matrices(s).sigma
    gen = sum(t * m for t, m in zip(theta, sig))
    return expm(-0.5j * gen)


@dataclass(frozen=True)
class ProductState:
    """Tensor product V1 (x) ... (x) VP with per-site Hopf images."""

    s: float
    factors: tuple
    vector: np.ndarray
    spin_vectors: np.ndarray  # (P, 3) Hopf image of each factor


def product_state(factors, s) -> ProductState:
    """Assemble a product state from P normalized single-site vectors."""
    facs = [np.asarray(f, dtype=complex) for f in factors]
    for i, f in enumerate(facs):
        if abs(np.linalg.norm(f) - 1.0) > _NORM_TOL:
            raise DomainError(f"factor {i + 1} is not normalized")
    vec = facs[0]
    for f in facs[1:]:
        vec = np.kron(vec, f)
    spins = np.array([hopf_map(f, s) for f in facs])
    return ProductState(s=_check_half_integer(s) / 2.0, factors=tuple(facs),
                        vector=vec, spin_vectors=spins)
