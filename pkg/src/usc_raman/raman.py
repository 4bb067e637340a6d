"""Second-order (Fermi golden rule) theory of Raman scattering off the Rabi model.

Rates are in arbitrary units: the bath couplings and photon numbers of the
input and output modes only enter as a common prefactor, which is set to 1.
"""

from dataclasses import dataclass

import numpy as np

from . import model
from .model import EigenSystem

RESONANCE_THRESHOLD = 1e-3
DEFAULT_N_STATES = 12
DEFAULT_N_INTERMEDIATE = 20


@dataclass(frozen=True)
class DipoleElements:
    """X[f, j] = <f|a + a^+|j> in the energy-ordered basis."""

    X: np.ndarray


@dataclass(frozen=True)
class RamanLine:
    i: int
    f: int
    omega_fi: float
    omega_R: float
    kind: str
    amplitude: complex
    relative_rate: float
    population_factor: float
    resonant: bool = False

    @property
    def flags(self):
        return "resonance-enhanced" if self.resonant else ""

    def field_weighted_rate(self, omega_c=1.0):
        """Rate weighted by (omega_R/omega_c)^2, the response of a detector
        that couples to the electric field rather than to a + a^+."""
        return self.relative_rate * (self.omega_R / omega_c) ** 2


@dataclass(frozen=True)
class FeatureLabel:
    kind: str  # transition | rayleigh | stokes | anti_stokes | hyper_raman | unclassified
    f: int = -1
    i: int = -1
    residual: float = float("nan")
    order: int = 0

    def __str__(self):
        if self.kind in ("rayleigh", "unclassified"):
            return self.kind
        return f"{self.kind}({self.f},{self.i})"


def fgr_eigensystem(p, n_levels=DEFAULT_N_INTERMEDIATE):
    """Sensor-free eigensystem with enough Fock states for ``n_levels`` converged levels."""
    n = max(model.fock_size(p), model.fock_size(p.replace(n_fock=None), n_levels))
    return model.rabi_eigensystem(p, n_fock=n)


def dipole_elements(eig):
    n_fock = eig.dim // 2
    a = np.diag(np.sqrt(np.arange(1, n_fock, dtype=float)), 1)
    x = np.kron(a + a.T, np.eye(2))
    m = eig.matrix_elements(x)
    return DipoleElements(0.5 * (m + m.conj().T))


def _amplitude(eig, X, i, f, omega_L, n_intermediate, linewidth):
    e = eig.raw_energies
    n = min(n_intermediate, eig.n_states)
    omega_R = omega_L - (e[f] - e[i])
    w_ji = e[:n] - e[i]
    den1 = (w_ji - omega_L).astype(complex)
    den2 = (w_ji + omega_R).astype(complex)
    near1 = np.abs(den1) < RESONANCE_THRESHOLD
    near2 = np.abs(den2) < RESONANCE_THRESHOLD
    den1[near1] += 0.5j * linewidth
    den2[near2] += 0.5j * linewidth
    prod = X.X[f, :n] * X.X[:n, i]
    return complex(np.sum(prod * (1 / den1 + 1 / den2))), bool(near1.any() or near2.any())


def raman_amplitude(eig, X, i, f, omega_L, n_intermediate=DEFAULT_N_INTERMEDIATE,
                    linewidth=2e-3):
    """Second-order amplitude M_{f,i} for scattering |i> -> |f> at drive omega_L.

    The sum runs over the lowest ``n_intermediate`` states. Energy
    denominators smaller than 1e-3 get an imaginary part linewidth/2.
    """
    return _amplitude(eig, X, i, f, omega_L, n_intermediate, linewidth)[0]


def gibbs_populations(eig, T):
    e = eig.energies
    if T <= 0:
        p = np.zeros(len(e))
        p[0] = 1.0
        return p
    w = np.exp(-(e - e[0]) / T)
    return w / w.sum()


def _kind(i, f, omega_fi):
    if i == f:
        return "rayleigh"
    return "stokes" if omega_fi > 0 else "anti_stokes"


def raman_line_table(eig, X, omega_L, T, n_states=DEFAULT_N_STATES,
                     n_intermediate=DEFAULT_N_INTERMEDIATE, linewidth=2e-3):
    """All Raman lines i -> f (i != f) among the lowest ``n_states`` levels.

    Only lines with a positive photon frequency are kept. The list is sorted
    by relative rate, largest first.
    """
    pops = gibbs_populations(eig, T)
    e = eig.raw_energies
    lines = []
    for i in range(n_states):
        for f in range(n_states):
            if i == f:
                continue
            omega_fi = float(e[f] - e[i])
            omega_R = omega_L - omega_fi
            if omega_R <= 0:
                continue
            amp, resonant = _amplitude(eig, X, i, f, omega_L, n_intermediate, linewidth)
            pop = float(pops[i] * (1 - pops[f]))
            lines.append(RamanLine(i, f, omega_fi, omega_R, _kind(i, f, omega_fi), amp,
                                   abs(amp) ** 2 * pop, pop, resonant))
    lines.sort(key=lambda ln: (-ln.relative_rate, ln.i, ln.f))
    return lines


def line_rate(eig, X, i, f, omega_L, T, n_intermediate=DEFAULT_N_INTERMEDIATE, linewidth=2e-3):
    """Relative rate of the single line i -> f."""
    pops = gibbs_populations(eig, T)
    amp = raman_amplitude(eig, X, i, f, omega_L, n_intermediate, linewidth)
    return abs(amp) ** 2 * pops[i] * (1 - pops[f])


def classify_feature(omega_s, omega_L, eig, tol, n_states=DEFAULT_N_STATES):
    """Name the process that best explains a spectral feature at ``omega_s``.

    Candidates are radiative transitions (omega_kj), Rayleigh (omega_L),
    Stokes / anti-Stokes Raman (omega_L - omega_fi) and hyper-Raman
    (2 omega_L - omega_fi). The smallest residual within ``tol`` wins, ties
    going to the lower-order process.
    """
    if tol <= 0:
        raise ValueError("tol must be > 0")
    e = eig.raw_energies[:n_states]
    n = len(e)
    cands = [(abs(omega_s - omega_L), 2, FeatureLabel("rayleigh", order=2))]
    for f in range(n):
        for i in range(n):
            w = float(e[f] - e[i])
            if f > i:
                cands.append((abs(omega_s - w), 1, FeatureLabel("transition", f, i, order=1)))
            if f != i:
                cands.append((abs(omega_s - (omega_L - w)), 2,
                              FeatureLabel(_kind(i, f, w), f, i, order=2)))
            cands.append((abs(omega_s - (2 * omega_L - w)), 3,
                          FeatureLabel("hyper_raman", f, i, order=3)))
    res, order, best = min(cands, key=lambda c: (c[0], c[1], c[2].f, c[2].i))
    if res >= tol:
        return FeatureLabel("unclassified")
    return FeatureLabel(best.kind, best.f, best.i, float(res), order)


def theta_scan(theta_grid, line, p, n_intermediate=DEFAULT_N_INTERMEDIATE):
    """Relative rate of ``line = (i, f)`` as a function of the dipole angle."""
    i, f = line
    rates = []
    for theta in theta_grid:
        q = p.replace(theta=float(theta))
        eig = fgr_eigensystem(q, n_intermediate)
        X = dipole_elements(eig)
        rates.append(line_rate(eig, X, i, f, q.omega_L, q.T, n_intermediate,
                               q.kappa + q.gamma))
    return np.array(rates)


def ground_state_total_rate(eig, X, omega_L, n_states=DEFAULT_N_STATES,
                            n_intermediate=DEFAULT_N_INTERMEDIATE, linewidth=2e-3):
    """Summed rate of all energy-shifted lines starting in the ground state (T = 0)."""
    lines = raman_line_table(eig, X, omega_L, 0.0, n_states, n_intermediate, linewidth)
    return float(sum(ln.relative_rate for ln in lines if ln.i == 0))
