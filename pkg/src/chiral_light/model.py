"""Lattice and drive parameters, and the effective squeezed-mode model they imply.

Units are hbar = 1; every frequency is an angular frequency and every rate an
inverse time, in whatever unit the caller picks (the CLI uses units of Gamma).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, fields

import numpy as np
from scipy.special import j0, j1

from .errors import DegenerateDrive, IncommensurateMomentum

TWO_PI = 2.0 * math.pi
GRID_TOL = 1e-9

BESSEL_CONVENTIONS = ("tone", "detuning")


@dataclass(frozen=True)
class ModelParams:
    """Bare parameters of the driven qubit-cavity array.

    The per-site drive phase of tone ``alpha`` at site ``j`` is ``phi_alpha * j``.
    """

    omega_r: float = 0.0
    epsilon: float = 0.0
    g: float = 1.0
    J: float = 0.0
    Gamma: float = 1.0
    N: int = 1
    lambda1: float = 0.0
    lambda2: float = 0.0
    Omega1: float = 1.0
    Omega2: float = 1.0
    phi1: float = 0.0
    phi2: float = 0.0

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 1:
            raise ValueError(f"N must be a positive integer, got {self.N!r}")
        object.__setattr__(self, "N", int(self.N))
        for f in fields(self):
            value = getattr(self, f.name)
            if not math.isfinite(value):
                raise ValueError(f"{f.name} must be finite, got {value!r}")
        if self.Gamma <= 0:
            raise ValueError("Gamma must be positive")
        if self.g < 0:
            raise ValueError("g must be non-negative")
        if self.J < 0:
            raise ValueError("J must be non-negative")

    @property
    def Delta(self) -> float:
        return (self.Omega1 + self.Omega2 - 2.0 * self.epsilon) / 2.0

    def regime_valid(self, ratio: float = 10.0) -> bool:
        """True when epsilon >> Gamma >> max(omega_r, g, J, |Delta|), each '>>' meaning a factor ``ratio``."""
        slow = max(abs(self.omega_r), self.g, self.J, abs(self.Delta))
        return self.epsilon >= ratio * self.Gamma and self.Gamma >= ratio * slow


@dataclass(frozen=True)
class EffectiveModel:
    """Couplings of the photon lattice after the qubits are eliminated.

    ``g1`` and ``g2`` already include the bare coupling ``g``; the pairing
    momentum is stored as its grid index ``q_index`` so that ``q`` is always
    exactly commensurate.
    """

    g1: float
    g2: float
    Delta: float = 0.0
    J: float = 0.0
    Gamma: float = 1.0
    N: int = 1
    q_index: int = 0

    def __post_init__(self):
        if not self.g1 > 0:
            raise DegenerateDrive(f"g1 = {self.g1!r}: the squeezing ratio g2/g1 is undefined")
        if self.g2 < 0:
            raise ValueError("g2 must be non-negative")
        if self.Gamma <= 0:
            raise ValueError("Gamma must be positive")
        if int(self.N) != self.N or self.N < 1:
            raise ValueError(f"N must be a positive integer, got {self.N!r}")
        object.__setattr__(self, "N", int(self.N))
        object.__setattr__(self, "q_index", int(self.q_index) % self.N)

    @classmethod
    def from_eta(cls, eta: float, g1: float = 1.0, **kwargs) -> "EffectiveModel":
        return cls(g1=g1, g2=eta * g1, **kwargs)

    @property
    def eta(self) -> float:
        return self.g2 / self.g1

    @property
    def gbar_mag(self) -> float:
        # g1 already carries the bare g, so |gbar| is g1 itself.
        return self.g1

    @property
    def q(self) -> float:
        return TWO_PI * self.q_index / self.N

    @property
    def stable(self) -> bool:
        return self.eta < 1.0

    @property
    def k_grid(self) -> np.ndarray:
        return TWO_PI * np.arange(self.N) / self.N


def _drive_arguments(p: ModelParams, convention: str) -> tuple[float, float]:
    if convention == "tone":
        den1, den2 = p.Omega1, p.Omega2
    elif convention == "detuning":
        den1, den2 = p.epsilon - p.Omega1, p.epsilon + p.Omega2
    else:
        raise ValueError(f"unknown Bessel convention {convention!r}, expected one of {BESSEL_CONVENTIONS}")
    if den1 == 0 or den2 == 0:
        raise ValueError("drive frequency denominators must be non-zero")
    return 2.0 * p.lambda1 / den1, 2.0 * p.lambda2 / den2


def snap_momentum(q: float, N: int, tol: float = GRID_TOL) -> int:
    """Grid index m with 2*pi*m/N equal to ``q`` modulo 2*pi, or raise."""
    m = round(q * N / TWO_PI)
    if abs(q - TWO_PI * m / N) > tol:
        raise IncommensurateMomentum(
            f"q = {q!r} is not within {tol:g} of a lattice momentum 2*pi*m/{N}"
        )
    return int(m) % N


def effective_couplings(p: ModelParams, convention: str = "tone") -> EffectiveModel:
    """Derive g1, g2, the pairing momentum and the detuning from the drive.

    With drive arguments ``x_a = 2 lambda_a / Omega_a``::

        g1 = g J1(x1) J0(x2)
        g2 = g J0(x1) J1(x2)

    ``convention="detuning"`` swaps the denominators for ``epsilon - Omega1``
    and ``epsilon + Omega2``.  eta >= 1 is allowed; the result reports
    ``stable == False``.
    """
    x1, x2 = _drive_arguments(p, convention)
    if max(abs(x1), abs(x2)) > 1.0:
        warnings.warn(
            f"drive arguments ({x1:.3g}, {x2:.3g}) leave the weak-driving regime",
            RuntimeWarning,
            stacklevel=2,
        )
    g1 = p.g * j1(x1) * j0(x2)
    g2 = p.g * j0(x1) * j1(x2)
    if g1 == 0:
        raise DegenerateDrive("g1 vanishes for this drive; eta = g2/g1 is undefined")
    if g1 < 0:
        # Only g1^2, g2^2 and g1*g2 enter; an overall sign is a phase of b.
        g1, g2 = -g1, -g2
    if g2 < 0:
        raise DegenerateDrive(
            "g1 and g2 have opposite signs; this amounts to a pi shift of q, "
            "adjust phi1 - phi2 instead"
        )
    m = snap_momentum(p.phi1 - p.phi2, p.N)
    return EffectiveModel(g1=float(g1), g2=float(g2), Delta=p.Delta, J=p.J, Gamma=p.Gamma, N=p.N, q_index=m)


def grid_index(m: EffectiveModel, k: float, tol: float = GRID_TOL) -> int:
    try:
        return snap_momentum(k, m.N, tol)
    except IncommensurateMomentum:
        raise ValueError(f"k = {k!r} is not a lattice momentum for N = {m.N}") from None


def partner_index(m: EffectiveModel, i: int) -> int:
    return (m.q_index - i) % m.N


def pairing(m: EffectiveModel, k: float) -> float:
    """Momentum -k + q (mod 2 pi) that the dissipator pairs with ``k``."""
    return TWO_PI * partner_index(m, grid_index(m, k)) / m.N


def self_paired_indices(m: EffectiveModel) -> list[int]:
    """Grid indices with k = -k + q; these form single-mode blocks."""
    return [i for i in range(m.N) if partner_index(m, i) == i]


def pair_blocks(m: EffectiveModel) -> list[tuple[int, int]]:
    """Unordered (i, partner) index pairs covering the grid once, self-pairs as (i, i)."""
    return [(i, partner_index(m, i)) for i in range(m.N) if i <= partner_index(m, i)]


def dispersion(m: EffectiveModel, k: float) -> float:
    return m.Delta + 2.0 * m.J * math.cos(k)


def band_parameter(m: EffectiveModel, k: float) -> float:
    """Band parameter of the pair (k, -k+q): Gamma (omega_k + omega_{-k+q}) / (4 g1^2)."""
    q = m.q
    return m.Gamma * (m.Delta + 2.0 * m.J * math.cos(q / 2) * math.cos(k - q / 2)) / (2.0 * m.g1**2)


def band_parameter_from_dispersion(m: EffectiveModel, k: float) -> float:
    return m.Gamma * (dispersion(m, k) + dispersion(m, m.q - k)) / (4.0 * m.g1**2)


def band_map(m: EffectiveModel) -> np.ndarray:
    """Band parameter on the full N x N (k, q) grid, indexed ``[k_index, q_index]``."""
    k = m.k_grid[:, None]
    q = m.k_grid[None, :]
    return m.Gamma * (m.Delta + 2.0 * m.J * np.cos(q / 2) * np.cos(k - q / 2)) / (2.0 * m.g1**2)
