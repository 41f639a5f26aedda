"""Dense multi-qubit operator algebra.

Single-site basis is ordered (|e>, |g>); the multi-site basis is the
Kronecker product with site 0 as the leftmost factor. Matrices are plain
complex ``numpy.ndarray`` objects.
"""

from functools import reduce

import numpy as np

from .errors import DimensionMismatch

IDENTITY_2 = np.eye(2, dtype=complex)
# |g><e| in the (|e>, |g>) basis
SIGMA_MINUS = np.array([[0, 0], [1, 0]], dtype=complex)
SIGMA_PLUS = SIGMA_MINUS.T.copy()

MAX_ATOMS = 4


def as_matrix(a):
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2:
        raise DimensionMismatch(f"expected a 2-d matrix, got shape {m.shape}")
    return m


def kronecker(a, b):
    return np.kron(as_matrix(a), as_matrix(b))


def dagger(a):
    return as_matrix(a).conj().T


def matmul(a, b):
    a, b = as_matrix(a), as_matrix(b)
    if a.shape[1] != b.shape[0]:
        raise DimensionMismatch(f"cannot multiply {a.shape} by {b.shape}")
    return a @ b


def identity(n_atoms):
    return np.eye(2**n_atoms, dtype=complex)


def site_operator(op, site, n_atoms):
    """Embed a single-qubit operator at ``site`` of an ``n_atoms`` register."""
    if n_atoms < 1:
        raise ValueError(f"n_atoms must be >= 1, got {n_atoms}")
    if not 0 <= site < n_atoms:
        raise IndexError(f"site {site} out of range for {n_atoms} atoms")
    factors = [IDENTITY_2] * n_atoms
    factors[site] = as_matrix(op)
    return reduce(np.kron, factors)


def lowering_operator(site, n_atoms):
    """S_site^- = I x ... x sigma^- x ... x I."""
    return site_operator(SIGMA_MINUS, site, n_atoms)


def raising_operator(site, n_atoms):
    return site_operator(SIGMA_PLUS, site, n_atoms)


def lowering_operators(n_atoms):
    return [lowering_operator(i, n_atoms) for i in range(n_atoms)]


def ground_state(n_atoms):
    """|g...g><g...g|, the last basis vector."""
    dim = 2**n_atoms
    rho = np.zeros((dim, dim), dtype=complex)
    rho[-1, -1] = 1.0
    return rho


def excited_state(n_atoms):
    dim = 2**n_atoms
    rho = np.zeros((dim, dim), dtype=complex)
    rho[0, 0] = 1.0
    return rho


def vec(rho):
    """Column-stacking vectorisation."""
    return as_matrix(rho).reshape(-1, order="F")


def unvec(v, dim=None):
    v = np.asarray(v, dtype=complex)
    if dim is None:
        dim = int(round(np.sqrt(v.size)))
    if dim * dim != v.size:
        raise DimensionMismatch(f"vector of length {v.size} is not a square matrix")
    return v.reshape((dim, dim), order="F")


def spre(a):
    """Superoperator of rho -> a rho."""
    a = as_matrix(a)
    return np.kron(np.eye(a.shape[0]), a)


def spost(b):
    """Superoperator of rho -> rho b."""
    b = as_matrix(b)
    return np.kron(b.T, np.eye(b.shape[0]))


def sprepost(a, b):
    """Superoperator of rho -> a rho b, i.e. (b^T kron a)."""
    return np.kron(as_matrix(b).T, as_matrix(a))


def trace_distance(rho, sigma):
    diff = as_matrix(rho) - as_matrix(sigma)
    diff = 0.5 * (diff + diff.conj().T)
    return 0.5 * float(np.sum(np.abs(np.linalg.eigvalsh(diff))))


def purity(rho):
    rho = as_matrix(rho)
    return float(np.real(np.trace(rho @ rho)))
