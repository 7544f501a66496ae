"""Driven-dissipative qubit-cavity arrays as a source of chiral two-mode entangled light."""

from .errors import (
    ChiralLightError,
    DegenerateDrive,
    IncommensurateMomentum,
    NonPhysical,
    ParseError,
    SelfPaired,
    StepTooLarge,
    TruncationLeak,
    Unstable,
    ValidationError,
)
from .model import (
    EffectiveModel,
    ModelParams,
    band_map,
    band_parameter,
    dispersion,
    effective_couplings,
    pair_blocks,
    pairing,
    self_paired_indices,
)
from .gaussian import (
    CorrelatorState,
    CriticalityReport,
    PairCovariance,
    correlator_rhs,
    criticality,
    evolve,
    lattice_steady,
    log_negativity_closed,
    log_negativity_sympl,
    steady_covariance,
)

__version__ = "0.1.0"
