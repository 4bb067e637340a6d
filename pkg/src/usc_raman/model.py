"""Dipole-gauge quantum Rabi model with an optional sensor qubit.

All frequencies are in units of the cavity frequency. The Hilbert space is
ordered (cavity, TLS, sensor).
"""

import dataclasses
import math
import warnings
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

import numpy as np

from . import operators as ops
from .errors import ConfigError, NumericalError

# default dressed-basis truncation for the driven problem
DEFAULT_N_DRESSED = 16
# number of eigenstates whose Fock tails set the adaptive cavity truncation
ADAPTIVE_LEVELS = 12
ADAPTIVE_TAIL = 1e-10
SENSOR_BACKACTION_LIMIT = 1e-3
PARITY_CONVENTION = "exp[i*pi*(a^+a + sigma^+sigma)], excited TLS index 1"


@dataclass(frozen=True)
class ModelParams:
    """Physical and numerical parameters of the driven Rabi + sensor system.

    Defaults reproduce the parameter set used for the excitation-emission
    maps (omega_q = omega_c, theta = pi/6, eta = 0.3, ...). ``n_fock=None``
    selects the cavity truncation adaptively; ``n_dressed`` is the number of
    lowest dressed states kept in the driven master equation.
    """

    omega_c: float = 1.0
    omega_q: float = 1.0
    omega_s: float = 1.0
    theta: float = math.pi / 6
    eta: float = 0.3
    eta_s: float = 1e-5
    Omega: float = 5e-3
    omega_L: float = 1.1
    kappa: float = 1e-3
    gamma: float = 1e-3
    Gamma: float = 1e-3
    T: float = 0.0
    n_fock: Optional[int] = None
    n_floquet: int = 3
    n_dressed: Optional[int] = DEFAULT_N_DRESSED

    def __post_init__(self):
        for f in dataclasses.fields(self):
            value = getattr(self, f.name)
            if f.name in ("n_fock", "n_floquet", "n_dressed"):
                continue
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ConfigError(f"expected a number, got {value!r}", f.name)
            if not math.isfinite(value):
                raise ConfigError("must be finite", f.name)
            object.__setattr__(self, f.name, float(value))
        for name in ("omega_q", "omega_s", "eta", "eta_s", "Omega", "omega_L",
                     "kappa", "gamma", "Gamma", "T"):
            if getattr(self, name) < 0:
                raise ConfigError("must be >= 0", name)
        for name in ("omega_c", "omega_q", "omega_s"):
            if getattr(self, name) <= 0:
                raise ConfigError("must be > 0", name)
        _check_int(self.n_fock, "n_fock", 4, optional=True)
        _check_int(self.n_floquet, "n_floquet", 1)
        _check_int(self.n_dressed, "n_dressed", 2, optional=True)
        if self.eta_s > SENSOR_BACKACTION_LIMIT:
            warnings.warn(f"eta_s = {self.eta_s:g} exceeds {SENSOR_BACKACTION_LIMIT:g}: "
                          "sensor back-action on the light-matter system is not negligible",
                          UserWarning, stacklevel=3)

    def replace(self, **changes):
        return dataclasses.replace(self, **changes)

    def to_dict(self):
        return dataclasses.asdict(self)


def _check_int(value, name, minimum, optional=False):
    if value is None and optional:
        return
    if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
        raise ConfigError(f"expected an integer, got {value!r}", name)
    if value < minimum:
        raise ConfigError(f"must be >= {minimum}", name)


@dataclass(frozen=True)
class EigenSystem:
    """Energy-ordered eigen decomposition.

    ``states`` holds eigenvectors as columns; it may be rectangular after
    :meth:`truncated`. ``energies`` are measured from the ground state,
    ``raw_energies`` are the bare eigenvalues.
    """

    raw_energies: np.ndarray
    states: np.ndarray
    parity: tuple = field(default=())

    @property
    def energies(self):
        return self.raw_energies - self.raw_energies[0]

    @property
    def dim(self):
        """Dimension of the underlying Hilbert space."""
        return self.states.shape[0]

    @property
    def n_states(self):
        return self.states.shape[1]

    def transition(self, k, j):
        """omega_{kj} = omega_k - omega_j."""
        return float(self.raw_energies[k] - self.raw_energies[j])

    def transitions(self):
        """Matrix W with W[j, k] = omega_k - omega_j."""
        e = self.raw_energies
        return e[None, :] - e[:, None]

    def matrix_elements(self, op):
        """<j|op|k> for all kept eigenstates."""
        return self.states.conj().T @ np.asarray(op) @ self.states

    def truncated(self, n):
        if n is None or n >= self.n_states:
            return self
        return EigenSystem(self.raw_energies[:n].copy(), self.states[:, :n].copy(),
                           tuple(self.parity[:n]))


def sigma_p(theta):
    """TLS dipole operator cos(theta) sigma_x + sin(theta) sigma_z."""
    return math.cos(theta) * ops.pauli("x") + math.sin(theta) * ops.pauli("z")


def _rabi_hamiltonian(n_fock, omega_c, omega_q, theta, eta):
    a = ops.embed([ops.annihilation(n_fock), 2])
    ad = a.conj().T
    return (omega_c * ad @ a + 0.5 * omega_q * ops.embed([n_fock, ops.pauli("z")])
            + 1j * eta * omega_c * (ad - a) @ ops.embed([n_fock, sigma_p(theta)]))


@lru_cache(maxsize=256)
def _adaptive_fock(omega_c, omega_q, theta, eta, n_levels):
    n = 4
    while True:
        n_eff = max(n, (n_levels + 1) // 2 + 2)
        h = _rabi_hamiltonian(n_eff, omega_c, omega_q, theta, eta)
        _, v = np.linalg.eigh(h)
        tail = v[:, :n_levels].reshape(n_eff, 2, n_levels)[-2:]
        if np.max(np.sum(np.abs(tail) ** 2, axis=(0, 1))) < ADAPTIVE_TAIL:
            return n_eff
        n = n_eff + 1
        if n > 400:
            raise NumericalError("adaptive Fock truncation did not converge below 400 levels")


def fock_size(p, n_levels=ADAPTIVE_LEVELS):
    """Cavity truncation for ``p``.

    Explicit ``p.n_fock`` wins. Otherwise the smallest N for which each of the
    lowest ``n_levels`` Rabi eigenstates has less than 1e-10 of its weight in
    the top two Fock levels.
    """
    if p.n_fock is not None:
        return p.n_fock
    return _adaptive_fock(p.omega_c, p.omega_q, p.theta, p.eta, n_levels)


def _check_finite(p):
    for f in dataclasses.fields(p):
        v = getattr(p, f.name)
        if isinstance(v, float) and not math.isfinite(v):
            raise ConfigError("must be finite", f.name)


def build_hamiltonian(p, with_sensor=False, n_fock=None):
    """Light-matter Hamiltonian, optionally including the sensor qubit."""
    _check_finite(p)
    n = n_fock or fock_size(p)
    h_r = _rabi_hamiltonian(n, p.omega_c, p.omega_q, p.theta, p.eta)
    if not with_sensor:
        return h_r
    a = ops.embed([ops.annihilation(n), 2, 2])
    ad = a.conj().T
    field_op = 1j * (ad - a) + 2 * p.eta * ops.embed([n, sigma_p(p.theta), 2])
    h = (ops.embed([h_r, 2]) + 0.5 * p.omega_s * ops.embed([n, 2, ops.pauli("z")])
         + p.omega_c * p.eta_s * field_op @ ops.embed([n, 2, ops.pauli("x")]))
    return 0.5 * (h + h.conj().T)


def drive_operator(p, with_sensor=False, n_fock=None):
    """Drive coupling i(a - a^+) - 2 eta sigma_x; H_drive(t) = Omega * D cos(omega_L t)."""
    n = n_fock or fock_size(p)
    a = ops.embed([ops.annihilation(n), 2])
    d = 1j * (a - a.conj().T) - 2 * p.eta * ops.embed([n, ops.pauli("x")])
    return ops.embed([d, 2]) if with_sensor else d


def tls_operator(p, with_sensor=False, n_fock=None):
    n = n_fock or fock_size(p)
    sx = ops.embed([n, ops.pauli("x")])
    return ops.embed([sx, 2]) if with_sensor else sx


def sensor_operator(p, n_fock=None):
    n = n_fock or fock_size(p)
    return ops.embed([n, 2, ops.pauli("x")])


def position_operator(p, with_sensor=False, n_fock=None):
    """Cavity quadrature a + a^+."""
    n = n_fock or fock_size(p)
    a = ops.annihilation(n)
    x = ops.embed([a + a.conj().T, 2])
    return ops.embed([x, 2]) if with_sensor else x


def parity_operator(n_fock):
    """Parity of the cavity+TLS excitation number, as a diagonal unitary.

    Uses exp[i pi (a^+a + sigma^+ sigma)]; the variant with sigma_z differs
    only by a global sign and induces the same grading.
    """
    n_exc = np.add.outer(np.arange(n_fock), np.array([0, 1])).reshape(-1)
    return np.diag((-1.0) ** n_exc).astype(complex)


def _fix_phase(v):
    idx = np.argmax(np.abs(v), axis=0)
    lead = v[idx, np.arange(v.shape[1])]
    return v * (np.abs(lead) / lead)[None, :]


def diagonalize(H, parity=None, degeneracy_tol=1e-12):
    """Diagonalize a Hermitian matrix into an :class:`EigenSystem`.

    Phases are fixed so that the largest-magnitude component of every
    eigenvector is real and positive. With a ``parity`` operator, states whose
    parity expectation lies within 1e-8 of +-1 are labelled accordingly,
    otherwise "mixed"; inside degenerate clusters the basis is rotated to
    diagonalize the parity operator first.
    """
    H = np.asarray(H, dtype=complex)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise NumericalError(f"Hamiltonian must be square, got shape {H.shape}")
    if not ops.is_hermitian(H, 1e-10):
        raise NumericalError("Hamiltonian is not Hermitian")
    e, v = np.linalg.eigh(0.5 * (H + H.conj().T))

    clusters = _clusters(e, degeneracy_tol)
    if parity is not None:
        for lo, hi in clusters:
            if hi - lo > 1:
                block = v[:, lo:hi]
                _, w = np.linalg.eigh(block.conj().T @ parity @ block)
                v[:, lo:hi] = block @ w
    v = _fix_phase(v)

    labels = [None] * len(e)
    if parity is not None:
        expect = np.real(np.einsum("ij,ik,kj->j", v.conj(), parity, v))
        for k, x in enumerate(expect):
            if abs(x - 1) < 1e-8:
                labels[k] = 1
            elif abs(x + 1) < 1e-8:
                labels[k] = -1
            else:
                labels[k] = "mixed"

    order = []
    for lo, hi in clusters:
        idx = list(range(lo, hi))
        if hi - lo > 1:
            idx.sort(key=lambda k: (_parity_key(labels[k]),
                                    tuple(-np.round(np.abs(v[:, k]), 12))))
        order.extend(idx)
    order = np.array(order)
    return EigenSystem(e[order], v[:, order],
                       tuple(labels[k] for k in order) if parity is not None else ())


def _parity_key(label):
    return {1: 0, -1: 1}.get(label, 2)


def _clusters(e, tol):
    out = []
    lo = 0
    for k in range(1, len(e) + 1):
        if k == len(e) or e[k] - e[k - 1] > tol * max(1.0, abs(e[k])):
            out.append((lo, k))
            lo = k
    return out


def rabi_eigensystem(p, n_fock=None, n_levels=ADAPTIVE_LEVELS):
    """Eigensystem of the sensor-free Rabi Hamiltonian with parity labels."""
    n = n_fock or fock_size(p, n_levels)
    h = build_hamiltonian(p, with_sensor=False, n_fock=n)
    return diagonalize(h, parity=parity_operator(n))


def converged_levels(p, n_levels=ADAPTIVE_LEVELS, tol=1e-8, extra=4):
    """Number of leading levels stable to ``tol`` when the cavity grows by ``extra``."""
    n = fock_size(p, n_levels)
    e1 = rabi_eigensystem(p, n).energies
    e2 = rabi_eigensystem(p, n + extra).energies[: len(e1)]
    bad = np.nonzero(np.abs(e1 - e2) >= tol)[0]
    return int(bad[0]) if bad.size else len(e1)
