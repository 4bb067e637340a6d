"""Dense operator and superoperator primitives.

Vectorization convention
------------------------
Density matrices are vectorized by stacking columns (Fortran order), so that

    vec(A @ rho @ B) == kron(B.T, A) @ vec(rho)

Every superoperator in the package is built with this rule. ``left_mult`` and
``right_mult`` are the only places that encode it; everything else composes
them.

Subsystem order for tensor products is (cavity, TLS, sensor).

Two-level convention: the excited state has index 1, hence
``pauli("z") == diag(-1, +1)`` and the ground state has sigma_z = -1.
"""

from functools import reduce

import numpy as np

from .errors import InvalidDimensionError

PAULI_Z_CONVENTION = "excited=index1, sigma_z=diag(-1,+1)"
VECTORIZATION = "column-stacking"


def annihilation(n_levels):
    """Bosonic annihilation operator truncated to ``n_levels`` Fock states."""
    if int(n_levels) != n_levels or n_levels < 2:
        raise InvalidDimensionError(f"n_levels must be an integer >= 2, got {n_levels}")
    n_levels = int(n_levels)
    return np.diag(np.sqrt(np.arange(1, n_levels, dtype=float)), 1).astype(complex)


def number(n_levels):
    return np.diag(np.arange(n_levels, dtype=float)).astype(complex)


_PAULI = {
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    # basis (g, e) with e at index 1; sign chosen so that [x, y] = 2i z
    "y": np.array([[0, 1j], [-1j, 0]], dtype=complex),
    "z": np.array([[-1, 0], [0, 1]], dtype=complex),
}


def pauli(axis):
    try:
        return _PAULI[axis].copy()
    except KeyError:
        raise ValueError(f"unknown Pauli axis {axis!r}") from None


def lowering():
    """Two-level lowering operator |g><e|."""
    return np.array([[0, 1], [0, 0]], dtype=complex)


def identity(dim):
    return np.eye(dim, dtype=complex)


def embed(local_ops):
    """Kronecker product of local operators in subsystem order.

    Entries may be matrices or plain integers; an integer ``n`` stands for
    the ``n``-dimensional identity.
    """
    if len(local_ops) == 0:
        raise InvalidDimensionError("embed needs at least one factor")
    mats = [identity(op) if isinstance(op, (int, np.integer)) else np.asarray(op, dtype=complex)
            for op in local_ops]
    return reduce(np.kron, mats)


def vectorize(rho):
    return np.asarray(rho).reshape(-1, order="F")


def devectorize(vec, dim=None):
    vec = np.asarray(vec)
    if dim is None:
        dim = int(round(np.sqrt(vec.size)))
    if dim * dim != vec.size:
        raise InvalidDimensionError(f"vector of length {vec.size} is not a square matrix")
    return vec.reshape(dim, dim, order="F")


def left_mult(A):
    """Superoperator of rho -> A @ rho."""
    A = np.asarray(A)
    return np.kron(np.eye(A.shape[0]), A)


def right_mult(B):
    """Superoperator of rho -> rho @ B."""
    B = np.asarray(B)
    return np.kron(B.T, np.eye(B.shape[0]))


def sandwich(A, B):
    """Superoperator of rho -> A @ rho @ B."""
    return np.kron(np.asarray(B).T, np.asarray(A))


def commutator(H):
    """Superoperator of rho -> -i[H, rho]."""
    return -1j * (left_mult(H) - right_mult(H))


def dissipator(J):
    """Lindblad dissipator J rho J^+ - {J^+ J, rho}/2 as a superoperator."""
    J = np.asarray(J)
    JdJ = J.conj().T @ J
    return sandwich(J, J.conj().T) - 0.5 * (left_mult(JdJ) + right_mult(JdJ))


def is_hermitian(A, tol=1e-10):
    A = np.asarray(A)
    scale = max(1.0, np.max(np.abs(A))) if A.size else 1.0
    return A.shape[0] == A.shape[1] and np.max(np.abs(A - A.conj().T), initial=0.0) <= tol * scale


def trace_norm(A):
    """Schatten 1-norm (sum of singular values)."""
    return float(np.sum(np.linalg.svd(np.asarray(A), compute_uv=False)))
