"""Emission of the lattice pair correlations into an open transmission line.

Each lattice momentum k radiates into a band of line frequencies of width
2 pi / N.  For vacuum input the output operator is the intracavity mode
scaled by ``c = factor * sqrt(gamma / (N pi^2))``, times a phase ``e^{-ikt}``
that is kept as metadata only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .gaussian import PairCovariance, log_negativity_sympl

DEFAULT_FACTOR = 1.0
DOUBLED_FACTOR = 2.0


@dataclass(frozen=True)
class LineParams:
    gamma_line: float
    N: int
    factor: float = DEFAULT_FACTOR

    def __post_init__(self):
        if self.gamma_line < 0:
            raise ValueError("gamma_line must be non-negative")
        if int(self.N) != self.N or self.N < 1:
            raise ValueError("N must be a positive integer")
        object.__setattr__(self, "N", int(self.N))

    @property
    def delta(self) -> float:
        """Half-width of the frequency window of one momentum mode."""
        return math.pi / self.N

    @property
    def coupling_coefficient(self) -> float:
        return self.factor * math.sqrt(self.gamma_line / (self.N * math.pi**2))

    @property
    def scale(self) -> float:
        """|c|^2, the factor multiplying every output second moment."""
        return self.coupling_coefficient**2


def frequency_resolution(lp: LineParams) -> float:
    return 2.0 * lp.delta


@dataclass(frozen=True)
class OutputPair:
    k: float
    k_partner: float
    out_nk: float
    out_nkp: float
    out_aa: complex
    coupling_coefficient: float
    bandwidth: float
    phase_rate: float
    en_upper_bound: float

    def row(self) -> tuple:
        return (
            self.k,
            self.k_partner,
            self.out_nk,
            self.out_nkp,
            self.out_aa.real,
            self.out_aa.imag,
            self.bandwidth,
            self.en_upper_bound,
        )


CSV_COLUMNS = ("k", "k_partner", "out_nk", "out_nkp", "re_out_aa", "im_out_aa", "bandwidth", "E_N_upper_bound")


def output_correlators(lattice, lp: LineParams) -> list[OutputPair]:
    """Output-mode populations and anomalous correlators for every pair block.

    ``phase_rate`` is k + k_partner, the rate at which ``e^{-ikt} e^{-ilt}``
    rotates the anomalous output correlator.  The intracavity negativity is
    attached as an upper bound on what the emitted pair can carry.
    """
    s = lp.scale
    out = []
    for block in lattice:
        aa, nk, nkp = block.moments()
        out.append(
            OutputPair(
                k=block.k,
                k_partner=block.k_partner,
                out_nk=s * nk,
                out_nkp=s * nkp,
                out_aa=s * aa,
                coupling_coefficient=lp.coupling_coefficient,
                bandwidth=frequency_resolution(lp),
                phase_rate=block.k + block.k_partner,
                en_upper_bound=log_negativity_sympl(block),
            )
        )
    return out


def output_covariance(block: PairCovariance, lp: LineParams) -> PairCovariance:
    """Covariance of the emitted modes: ``s (gamma - 1/2) + 1/2`` with s = |c|^2.

    Requires ``s <= 1``; larger values break the weak-coupling picture and
    would not describe a physical state.
    """
    s = lp.scale
    if s > 1:
        raise ValueError(f"|c|^2 = {s:.4g} > 1 is outside the weak-coupling regime")
    half = 0.5 * np.eye(block.gamma.shape[0])
    return PairCovariance(s * (block.gamma - half) + half, block.k, block.k_partner)


def output_log_negativity(block: PairCovariance, lp: LineParams) -> float:
    return log_negativity_sympl(output_covariance(block, lp))
