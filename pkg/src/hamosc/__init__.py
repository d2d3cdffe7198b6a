"""High-precision eigensolver for the quartic anharmonic oscillator.

A homotopy-analysis recursion over a truncated harmonic-oscillator basis,
with a convergence-control parameter, diagonal Pade acceleration,
iterative restarts, coupling continuation, a perturbative baseline, and a
banded diagonalization oracle.  All arithmetic runs at a configurable
number of significant decimal digits.
"""

from .acceleration import PadeResult, homotopy_pade, pade_table
from .basis import (
    BandedOperator,
    BasisSpec,
    PhysicalParams,
    WaveVector,
    apply_hamiltonian,
    build_hamiltonian,
    energy_to_physical,
    evaluate_wavefunction,
    inner,
    quadrature_element_oracle,
    quartic_operator,
    to_dimensionless,
    x2_element,
    x4_element,
)
from .driver import (
    ContinuationPlan,
    ContinuationStage,
    SolveReport,
    SweepGrid,
    continuation,
    diagonalize_oracle,
    emit_report,
    iterate,
    sweep_c0,
)
from .errors import (
    ConfigurationError,
    DegenerateGuessError,
    DegenerateOperatorError,
    InsufficientTermsError,
    LostStateError,
    NumericalError,
    StageFailureError,
)
from .ham import (
    HamConfig,
    HamState,
    initial_energy,
    next_energy_term,
    offdiagonal_update,
    optimal_diagonal_coefficient,
    projection_delta,
    residual_error_square,
    residual_term,
    run_ham,
)
from .perturbation import PerturbState, e0_series_coefficients, perturb_solve
from .precision import PrecisionContext, format_scalar, make_context, to_real

__version__ = "0.1.0"
