"""bandrec: quasi-particle dispersions from finite-size ground-state energies.

The pipeline has three legs: generate energies (exact diagonalization of
small spin chains, or synthetically from a known band), invert the energy
series into cosine coefficients of the dispersion, and classify the four
statistics/boundary readings of the same data.
"""

__version__ = "0.1.0"

from .bands import (
    AbsSineBand,
    FourierBand,
    GRID_SIZE,
    MassiveSineBand,
    SampledBand,
    band_fourier_coefficients,
    uniform_grid,
)
from .core import (
    ALL_HYPOTHESES,
    Hypothesis,
    NumericalError,
    Statistics,
    Twist,
    ValidationError,
)
from .inversion import (
    AllFrom1,
    EvenOnly,
    From2,
    convergence_curve,
    invert_coefficients,
    reconstruct_function,
    size_set_for,
)
from .lanczos import LanczosConfig, LanczosResult, lowest_eigenpair
from .numtheory import (
    BCoefficients,
    b_coefficients,
    configure_sieve,
    divisors,
    mertens,
    moebius,
)
from .reconstruct import (
    CriterionReport,
    ExtrapolationResult,
    MODEL_EXPONENTIAL,
    MODEL_POWER_LAW_2,
    ReconstructionResult,
    classify,
    criterion_check,
    e_inf_sensitivity,
    extrapolate_e_inf,
    reconstruct_band,
)
from .riemann import (
    EnergySeries,
    momenta,
    residual_series,
    riemann_sum,
    synth_energy_series,
)
from .spinchain import (
    DimerizedModel,
    GroundStateResult,
    HeisenbergModel,
    SectorBasis,
    SectorHamiltonian,
    SingleIonModel,
    SpinModelSpec,
    build_hamiltonian,
    energy_series,
    ground_energy,
)

__all__ = [
    "ALL_HYPOTHESES",
    "AbsSineBand",
    "AllFrom1",
    "BCoefficients",
    "CriterionReport",
    "DimerizedModel",
    "EnergySeries",
    "EvenOnly",
    "ExtrapolationResult",
    "FourierBand",
    "From2",
    "GRID_SIZE",
    "GroundStateResult",
    "HeisenbergModel",
    "Hypothesis",
    "LanczosConfig",
    "LanczosResult",
    "MODEL_EXPONENTIAL",
    "MODEL_POWER_LAW_2",
    "MassiveSineBand",
    "NumericalError",
    "ReconstructionResult",
    "SampledBand",
    "SectorBasis",
    "SectorHamiltonian",
    "SingleIonModel",
    "SpinModelSpec",
    "Statistics",
    "Twist",
    "ValidationError",
    "b_coefficients",
    "band_fourier_coefficients",
    "build_hamiltonian",
    "classify",
    "configure_sieve",
    "convergence_curve",
    "criterion_check",
    "divisors",
    "e_inf_sensitivity",
    "energy_series",
    "extrapolate_e_inf",
    "ground_energy",
    "invert_coefficients",
    "lowest_eigenpair",
    "mertens",
    "moebius",
    "momenta",
    "reconstruct_band",
    "reconstruct_function",
    "residual_series",
    "riemann_sum",
    "size_set_for",
    "synth_energy_series",
    "uniform_grid",
]
