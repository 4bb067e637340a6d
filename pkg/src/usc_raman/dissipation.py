"""Dressed jump operators and the three-part periodically driven Liouvillian.

Everything here lives in the energy eigenbasis of the (possibly truncated)
Hamiltonian. The generator is split as

    L(t) = L0 + Lplus * exp(+i wL t) + Lminus * exp(-i wL t)

with Lplus = Lminus = -i (Omega/2) [D, .] for the cosine drive.
"""

import logging
import math
from dataclasses import dataclass
from typing import List

import numpy as np

from . import model
from . import operators as ops
from .errors import NumericalError

log = logging.getLogger(__name__)

# transitions closer than this are treated as degenerate at finite temperature
EPS_DEGENERATE = 1e-6


@dataclass(frozen=True)
class JumpOperator:
    matrix: np.ndarray
    rate: float
    channel: str  # "cavity" | "tls" | "sensor"
    direction: str = "down"  # "down" | "up"


@dataclass(frozen=True)
class LiouvillianParts:
    L0: np.ndarray
    Lplus: np.ndarray
    Lminus: np.ndarray
    omega_L: float

    @property
    def dim(self):
        """Hilbert-space dimension d (superoperators are d^2 x d^2)."""
        return int(round(math.sqrt(self.L0.shape[0])))


def _weights(eig, weight_rule):
    """Per-transition weights w[j, k] for the rule 'plain' or ('freq_ratio', w_ref)."""
    if weight_rule == "plain":
        return np.ones((eig.n_states, eig.n_states))
    kind, w_ref = weight_rule
    if kind != "freq_ratio":
        raise ValueError(f"unknown weight rule {weight_rule!r}")
    return eig.transitions() / w_ref


def dressed_jump(eig, coupling_op, weight_rule="plain", rate=1.0, channel="cavity"):
    """Energy-lowering part of ``coupling_op`` in the eigenbasis.

    Entry (j, k) for k > j equals w_jk <j|coupling_op|k>; all other entries
    vanish. ``weight_rule`` is ``"plain"`` or ``("freq_ratio", omega_ref)``,
    the latter multiplying each element by omega_kj / omega_ref.
    """
    elems = eig.matrix_elements(coupling_op)
    m = np.triu(elems * _weights(eig, weight_rule), 1)
    return JumpOperator(m, float(rate), channel, "down")


def thermal_occupation(omega, T):
    """Bose factor 1 / (exp(omega/T) - 1); zero at T = 0."""
    omega = np.asarray(omega, dtype=float)
    if T <= 0:
        return np.zeros_like(omega)
    with np.errstate(over="ignore"):
        return 1.0 / np.expm1(omega / T)


def thermal_channels(eig, coupling_op, T, base_rate, weight_rule="plain", channel="cavity"):
    """Down (and, at T > 0, up) dressed jump operators of one bath channel.

    Each transition k -> j of the down operator carries sqrt(n + 1) and each
    j -> k of the up operator sqrt(n), with n the Bose occupation at omega_kj.
    Transitions below EPS_DEGENERATE are left out of the up operator and use
    the occupation at EPS_DEGENERATE in the down operator.
    """
    if T < 0:
        raise ValueError("temperature must be >= 0")
    down = dressed_jump(eig, coupling_op, weight_rule, base_rate, channel)
    if T == 0:
        return [down]
    w = eig.transitions()
    upper = np.triu(np.ones_like(w, dtype=bool), 1)
    small = upper & (w < EPS_DEGENERATE)
    if np.any(small):
        log.warning("%s channel: %d near-degenerate transitions excluded from thermal "
                    "absorption", channel, int(np.count_nonzero(small)))
    nbar = thermal_occupation(np.where(small, EPS_DEGENERATE, np.maximum(w, EPS_DEGENERATE)), T)
    down_m = down.matrix * np.sqrt(nbar + 1.0)
    up_m = (down.matrix * np.sqrt(np.where(small, 0.0, nbar))).conj().T
    return [JumpOperator(down_m, float(base_rate), channel, "down"),
            JumpOperator(up_m, float(base_rate), channel, "up")]


def build_liouvillian(p, eig, jumps, drive_op=None):
    """Assemble (L0, Lplus, Lminus) in the eigenbasis of ``eig``.

    ``drive_op`` is the drive coupling in the original Hilbert space; it
    defaults to :func:`model.drive_operator` with the sensor included when
    the eigensystem dimension says so.
    """
    d = eig.n_states
    for j in jumps:
        if j.matrix.shape != (d, d):
            raise NumericalError(f"{j.channel} jump has shape {j.matrix.shape}, "
                                 f"basis has {d} states")
        if j.rate < 0:
            raise NumericalError(f"{j.channel} rate is negative")
    if drive_op is None:
        n = model.fock_size(p)
        with_sensor = eig.dim == 4 * n
        if not with_sensor and eig.dim != 2 * n:
            raise NumericalError(f"eigensystem dimension {eig.dim} does not match "
                                 f"n_fock = {n}")
        drive_op = model.drive_operator(p, with_sensor)
    if drive_op.shape[0] != eig.dim:
        raise NumericalError("drive operator and eigensystem live in different spaces")

    h = np.diag(eig.energies).astype(complex)
    L0 = ops.commutator(h)
    for j in jumps:
        if j.rate:
            L0 = L0 + j.rate * ops.dissipator(j.matrix)
    drive = eig.matrix_elements(drive_op)
    Lp = 0.5 * p.Omega * ops.commutator(drive)
    return LiouvillianParts(L0, Lp, Lp.copy(), p.omega_L)


@dataclass(frozen=True)
class DrivenProblem:
    """Everything needed to solve one driven point: eigensystem, jumps, generator."""

    params: model.ModelParams
    eig: model.EigenSystem
    jumps: List[JumpOperator]
    parts: LiouvillianParts
    n_fock: int

    def jump(self, channel, direction="down"):
        for j in self.jumps:
            if j.channel == channel and j.direction == direction:
                return j
        raise KeyError((channel, direction))


def assemble(p, with_sensor=True):
    """Build the dressed problem for parameters ``p``.

    The full Hamiltonian (sensor included by default) is diagonalized and the
    lowest ``p.n_dressed`` eigenstates are kept. Cavity and TLS baths are
    thermal at ``p.T``; the sensor bath is kept at zero temperature so that
    the sensor acts as a cold detector.
    """
    n = model.fock_size(p)
    h = model.build_hamiltonian(p, with_sensor, n)
    eig = model.diagonalize(h).truncated(p.n_dressed)
    jumps = []
    jumps += thermal_channels(eig, model.drive_operator(p, with_sensor, n), p.T, p.kappa,
                              "plain", "cavity")
    jumps += thermal_channels(eig, model.tls_operator(p, with_sensor, n), p.T, p.gamma,
                              ("freq_ratio", p.omega_q), "tls")
    if with_sensor:
        jumps += thermal_channels(eig, model.sensor_operator(p, n), 0.0, p.Gamma,
                                  ("freq_ratio", p.omega_s), "sensor")
    parts = build_liouvillian(p, eig, jumps, model.drive_operator(p, with_sensor, n))
    return DrivenProblem(p, eig, jumps, parts, n)
