"""Gaussian states of the (k, -k+q) mode pairs.

Every pair block is described by three second moments, ``<a_k a_l>``,
``<a_k^+ a_k>`` and ``<a_l^+ a_l>`` with ``l = -k + q``.  They obey decoupled
linear equations; with ``r = 4 (g1^2 - g2^2) / Gamma`` and
``W = omega_k + omega_l``::

    d<a_k a_l>/dt = (-i W - r) <a_k a_l> - 4 g1 g2 / Gamma
    d<n_k>/dt     = -r <n_k> + 4 g2^2 / Gamma

Quadratures are ``Q = (a + a^+)/sqrt(2)`` and ``P = -i (a^+ - a)/sqrt(2)``,
ordered (Q_k, P_k, Q_l, P_l).  Covariance matrices in this module follow the
sign pattern these equations produce (``<Q_k Q_l> = -<P_k P_l>``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NonPhysical, SelfPaired, Unstable
from .model import EffectiveModel, band_parameter, dispersion, grid_index, pair_blocks, partner_index

EN_FLOOR = 1e-12
PHYSICAL_TOL = 1e-10

PARTIAL_TRANSPOSE = np.diag([1.0, 1.0, 1.0, -1.0])


def symplectic_form(n_modes: int) -> np.ndarray:
    return np.kron(np.eye(n_modes), np.array([[0.0, 1.0], [-1.0, 0.0]]))


def physicality_margin(gamma: np.ndarray) -> float:
    """Smallest eigenvalue of gamma + (i/2) Omega."""
    omega = symplectic_form(gamma.shape[0] // 2)
    return float(np.linalg.eigvalsh(gamma + 0.5j * omega)[0])


def is_physical(gamma: np.ndarray, tol: float = PHYSICAL_TOL) -> bool:
    return physicality_margin(gamma) >= -tol


@dataclass
class PairCovariance:
    """Covariance of one pair block; a 2x2 ``gamma`` marks a self-paired mode."""

    gamma: np.ndarray
    k: float = 0.0
    k_partner: float = 0.0

    def __post_init__(self):
        self.gamma = np.asarray(self.gamma, dtype=float)
        if self.gamma.shape not in ((2, 2), (4, 4)):
            raise ValueError(f"covariance must be 2x2 or 4x4, got {self.gamma.shape}")

    @property
    def self_paired(self) -> bool:
        return self.gamma.shape == (2, 2)

    def check(self, tol: float = PHYSICAL_TOL) -> None:
        if np.max(np.abs(self.gamma - self.gamma.T)) > 1e-12:
            raise NonPhysical("covariance matrix is not symmetric")
        margin = physicality_margin(self.gamma)
        if margin < -tol:
            raise NonPhysical(f"gamma + i/2 Omega has eigenvalue {margin:.3g}")

    def moments(self) -> tuple[complex, float, float]:
        """Recover (<a_k a_l>, <n_k>, <n_l>) from the quadrature covariance."""
        g = self.gamma
        nk = (g[0, 0] + g[1, 1]) / 2 - 0.5
        if self.self_paired:
            return complex((g[0, 0] - g[1, 1]) / 2, -g[0, 1]), nk, nk
        nkp = (g[2, 2] + g[3, 3]) / 2 - 0.5
        return complex(g[0, 2], -g[0, 3]), nk, nkp


def covariance_from_moments(aa: complex, nk: float, nkp: float) -> np.ndarray:
    """4x4 covariance of a pair with only <a_k a_l>, n_k and n_l non-zero."""
    re, im = aa.real, aa.imag
    return np.array(
        [
            [nk + 0.5, 0.0, re, -im],
            [0.0, nk + 0.5, -im, -re],
            [re, -im, nkp + 0.5, 0.0],
            [-im, -re, 0.0, nkp + 0.5],
        ]
    )


def single_mode_covariance(aa: complex, n: float) -> np.ndarray:
    """2x2 covariance of one mode with <a a> = aa and <a^+ a> = n."""
    return np.array([[n + 0.5 + aa.real, -aa.imag], [-aa.imag, n + 0.5 - aa.real]])


def steady_moments(eta: float, E: float) -> tuple[complex, float]:
    """Steady (<a_k a_l>, <n>) for squeezing ratio ``eta`` and band parameter ``E``."""
    if eta >= 1:
        raise Unstable(f"eta = {eta:.6g} >= 1 has no steady state")
    u = 1.0 - eta**2
    return -eta / complex(u, E), eta**2 / u


def two_mode_covariance(eta: float, E: float) -> np.ndarray:
    aa, n = steady_moments(eta, E)
    return covariance_from_moments(aa, n, n)


def _pair_indices(m: EffectiveModel, k: float) -> tuple[int, int]:
    i = grid_index(m, k)
    return i, partner_index(m, i)


def steady_covariance(m: EffectiveModel, k: float) -> PairCovariance:
    """Steady-state covariance of the pair (k, -k+q)."""
    i, j = _pair_indices(m, k)
    if i == j:
        raise SelfPaired(f"k = {k!r} pairs with itself; use self_paired_covariance")
    grid = m.k_grid
    return PairCovariance(two_mode_covariance(m.eta, band_parameter(m, grid[i])), grid[i], grid[j])


def self_paired_covariance(m: EffectiveModel, k: float) -> PairCovariance:
    i, j = _pair_indices(m, k)
    if i != j:
        raise ValueError(f"k = {k!r} pairs with a distinct momentum")
    aa, n = steady_moments(m.eta, band_parameter(m, m.k_grid[i]))
    return PairCovariance(single_mode_covariance(aa, n), m.k_grid[i], m.k_grid[i])


def lattice_steady(m: EffectiveModel) -> list[PairCovariance]:
    """Steady state of the whole lattice as a list of independent pair blocks."""
    if not m.stable:
        raise Unstable(f"eta = {m.eta:.6g} >= 1 has no steady state")
    grid = m.k_grid
    blocks = []
    for i, j in pair_blocks(m):
        if i == j:
            blocks.append(self_paired_covariance(m, grid[i]))
        else:
            blocks.append(steady_covariance(m, grid[i]))
    return blocks


# --- entanglement ---------------------------------------------------------


def symplectic_eigenvalues(gamma: np.ndarray) -> np.ndarray:
    """Moduli of the eigenvalues of i Omega gamma, largest first.

    Uses the Hermitian similarity transform ``sqrt(gamma) (i Omega) sqrt(gamma)``;
    falls back to a general eigensolver if gamma is not positive definite.
    """
    omega = symplectic_form(gamma.shape[0] // 2)
    w, v = np.linalg.eigh(gamma)
    if w[0] > 0:
        root = (v * np.sqrt(w)) @ v.T
        lam = np.linalg.eigvalsh(root @ (1j * omega) @ root)
    else:
        lam = np.linalg.eigvals(1j * omega @ gamma)
    return np.sort(np.abs(lam))[::-1]


def log_negativity_sympl(c: PairCovariance, tol: float = PHYSICAL_TOL) -> float:
    """Logarithmic negativity from the partially transposed covariance.

    ``E_N = -1/2 sum_i log2 min(1, 2|l_i|)`` over the four eigenvalues of
    ``i Omega Lambda gamma Lambda`` with ``Lambda = diag(1, 1, 1, -1)``.
    Self-paired (single-mode) blocks carry no two-mode entanglement and give 0.
    """
    if c.self_paired:
        return 0.0
    margin = physicality_margin(c.gamma)
    if margin < -tol:
        raise NonPhysical(f"gamma + i/2 Omega has eigenvalue {margin:.3g}")
    transposed = PARTIAL_TRANSPOSE @ c.gamma @ PARTIAL_TRANSPOSE
    lam = symplectic_eigenvalues(transposed)
    en = -0.5 * float(np.sum(np.log2(np.minimum(1.0, 2.0 * lam))))
    return 0.0 if en < EN_FLOOR else en


def negativity_threshold(eta: float) -> float:
    """Band parameter at and above which the steady pair is separable."""
    if eta == 0:
        return math.inf
    return (1.0 - eta**2) ** 1.5 / eta


def log_negativity_closed(eta: float, E: float) -> float:
    """Closed-form steady-state logarithmic negativity.

    Only ``E**2`` enters, so negative band parameters are accepted.
    """
    if not 0 <= eta < 1:
        raise Unstable(f"eta = {eta!r} outside [0, 1)")
    E = abs(E)
    if E >= negativity_threshold(eta):
        return 0.0
    u = 1.0 - eta**2
    arg = (1.0 + eta**2) / u - 2.0 * eta / math.sqrt(E**2 + u**2)
    en = -math.log2(arg)
    return 0.0 if en < EN_FLOOR else en


def log_negativity(c: PairCovariance) -> float:
    return log_negativity_sympl(c)


# --- dynamics -------------------------------------------------------------


@dataclass
class CorrelatorState:
    """Second moments of one pair: <a_k a_l>, <a_k^+ a_k>, <a_l^+ a_l> at time t."""

    aa: complex = 0j
    nk: float = 0.0
    nkp: float = 0.0
    t: float = 0.0

    @classmethod
    def vacuum(cls) -> "CorrelatorState":
        return cls()

    @classmethod
    def from_vector(cls, v, t: float = 0.0) -> "CorrelatorState":
        return cls(complex(v[0]), float(np.real(v[1])), float(np.real(v[2])), t)

    def as_vector(self) -> np.ndarray:
        return np.array([self.aa, self.nk, self.nkp], dtype=complex)

    def check(self, tol: float = 1e-9) -> None:
        if self.nk < -tol or self.nkp < -tol:
            raise NonPhysical("negative photon number")
        bound = (self.nk + 0.5) * (self.nkp + 0.5) - 0.25
        if abs(self.aa) ** 2 > bound + tol:
            raise NonPhysical(f"|<a_k a_l>|^2 = {abs(self.aa)**2:.6g} exceeds {bound:.6g}")

    def covariance(self, self_paired: bool = False) -> np.ndarray:
        if self_paired:
            return single_mode_covariance(self.aa, self.nk)
        return covariance_from_moments(self.aa, self.nk, self.nkp)


def correlator_generator(m: EffectiveModel, k: float) -> tuple[np.ndarray, np.ndarray]:
    """Matrix ``A`` and source ``b`` with d/dt (aa, nk, nkp) = A @ v + b."""
    i, j = _pair_indices(m, k)
    grid = m.k_grid
    w = dispersion(m, grid[i]) + dispersion(m, grid[j])
    r = 4.0 * (m.g1**2 - m.g2**2) / m.Gamma
    A = np.diag([-1j * w - r, -r, -r]).astype(complex)
    b = np.array([-4.0 * m.g1 * m.g2, 4.0 * m.g2**2, 4.0 * m.g2**2], dtype=complex) / m.Gamma
    return A, b


def correlator_rhs(s: CorrelatorState, m: EffectiveModel, k: float) -> np.ndarray:
    """Time derivative of (aa, nk, nkp) for the pair (k, -k+q)."""
    A, b = correlator_generator(m, k)
    return A @ s.as_vector() + b


def default_step(m: EffectiveModel, k: float) -> float:
    i, j = _pair_indices(m, k)
    w = abs(dispersion(m, m.k_grid[i]) + dispersion(m, m.k_grid[j]))
    dt = m.Gamma / (40.0 * m.g1**2)
    if w > 0:
        dt = min(dt, 0.1 / w)
    return dt


@dataclass
class Trajectory:
    t: np.ndarray
    aa: np.ndarray
    nk: np.ndarray
    nkp: np.ndarray
    self_paired: bool = False
    divergent: bool = False

    def __len__(self):
        return len(self.t)

    def state(self, n: int) -> CorrelatorState:
        return CorrelatorState(complex(self.aa[n]), float(self.nk[n]), float(self.nkp[n]), float(self.t[n]))

    def covariances(self) -> list[np.ndarray]:
        return [self.state(n).covariance(self.self_paired) for n in range(len(self))]

    def log_negativity(self) -> np.ndarray:
        if self.self_paired:
            return np.zeros(len(self))
        return np.array([log_negativity_sympl(PairCovariance(g)) for g in self.covariances()])


def evolve(s0: CorrelatorState, m: EffectiveModel, k: float, t_final: float, dt: float | None = None) -> Trajectory:
    """Integrate the correlator equations with fixed-step classic RK4.

    The step is shrunk slightly so that ``t_final`` is hit exactly.  With
    eta >= 1 the integration still runs but the result is marked divergent.
    """
    if dt is None:
        dt = default_step(m, k)
    if not dt > 0:
        raise ValueError("dt must be positive")
    if t_final < 0:
        raise ValueError("t_final must be non-negative")
    i, j = _pair_indices(m, k)
    A, b = correlator_generator(m, k)
    steps = max(1, int(math.ceil(t_final / dt - 1e-9))) if t_final > 0 else 0
    h = t_final / steps if steps else 0.0

    def f(v):
        return A @ v + b

    out = np.empty((steps + 1, 3), dtype=complex)
    v = s0.as_vector()
    out[0] = v
    for n in range(1, steps + 1):
        k1 = f(v)
        k2 = f(v + h / 2 * k1)
        k3 = f(v + h / 2 * k2)
        k4 = f(v + h * k3)
        v = v + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        out[n] = v
    t = s0.t + h * np.arange(steps + 1)
    return Trajectory(
        t=t,
        aa=out[:, 0],
        nk=out[:, 1].real,
        nkp=out[:, 2].real,
        self_paired=(i == j),
        divergent=not m.stable,
    )


def relaxation_fraction(m: EffectiveModel, t) -> np.ndarray:
    """F(t) = 1 - exp(-r t): fraction of the way from vacuum to the steady state."""
    r = 4.0 * (m.g1**2 - m.g2**2) / m.Gamma
    return 1.0 - np.exp(-r * np.asarray(t, dtype=float))


def transient_covariance_closed(eta: float, F: float) -> np.ndarray:
    """Covariance at band parameter 0 after starting from vacuum.

    ``a = 1/2 + F eta^2/(1-eta^2)`` on the diagonal, ``b = F eta/(1-eta^2)``
    in the (Q_k, Q_l) = -b, (P_k, P_l) = +b positions.
    """
    u = 1.0 - eta**2
    a = 0.5 + F * eta**2 / u
    b = F * eta / u
    return np.array([[a, 0, -b, 0], [0, a, 0, b], [-b, 0, a, 0], [0, b, 0, a]], dtype=float)


def transient_log_negativity_closed(eta: float, F) -> np.ndarray:
    """E_N(t) = -log2[((1-eta)/(1+eta)) F + 1 - F] for a vacuum start at band parameter 0."""
    F = np.asarray(F, dtype=float)
    en = -np.log2((1 - eta) / (1 + eta) * F + 1 - F)
    return np.where(en < EN_FLOOR, 0.0, en)


# --- criticality ----------------------------------------------------------


@dataclass(frozen=True)
class CriticalityReport:
    relax_rate: float
    T1: float
    eta: float
    stable: bool


def criticality(m: EffectiveModel, k: float | None = None) -> CriticalityReport:
    """Slowest relaxation rate of the correlator equations and T1 = 1/rate.

    The rate is read off the eigenvalues of the assembled generator; it equals
    ``4 (g1^2 - g2^2) / Gamma`` for every pair block.
    """
    if k is None:
        k = m.k_grid[0]
    A, _ = correlator_generator(m, k)
    rate = -float(np.max(np.linalg.eigvals(A).real))
    T1 = 1.0 / rate if rate > 0 else math.inf
    return CriticalityReport(relax_rate=rate, T1=T1, eta=m.eta, stable=m.eta < 1)
