"""Homotopy-analysis recursion for the truncated eigenproblem.

One solver order k produces the next eigenfunction term (off-diagonal
part from the previous residual, diagonal part by residual minimization)
and the next eigenvalue term (fixed by the solvability condition on the
target basis state).  Partial sums approach an eigenpair of the truncated
Hamiltonian; the convergence-control parameter c0 steers whether and how
fast they do.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from mpmath import mpf

from .basis import (
    BandedOperator,
    BasisSpec,
    WaveVector,
    apply_hamiltonian,
    build_hamiltonian,
    inner,
)
from .errors import (
    ConfigurationError,
    DegenerateGuessError,
    DegenerateOperatorError,
    NumericalError,
)
from .precision import PrecisionContext, ambient_epsilon

RESIDUAL_MODES = ("truncated", "extended")


@dataclass(frozen=True)
class HamConfig:
    """One solve: target state, control parameter, order, basis, residual mode."""

    state_index: int
    c0: mpf
    order: int
    spec: BasisSpec
    residual_mode: str = "truncated"

    def __post_init__(self) -> None:
        if self.c0 == 0:
            raise ConfigurationError("convergence-control parameter must be nonzero")
        if self.state_index < 0 or self.state_index > self.spec.n_s - 4:
            raise ConfigurationError(
                f"state index {self.state_index} outside 0..{self.spec.n_s - 4} "
                f"(needs the +-4 coupling band below the truncation)"
            )
        if self.order < 1:
            raise ConfigurationError(f"order must positive, got {self.order}")
        if self.residual_mode not in RESIDUAL_MODES:
            raise ConfigurationError(f"residual mode must be one of {RESIDUAL_MODES}")


@dataclass
class HamState:
    """Per-order record of one solve.

    ``e_partials[k]`` and ``psi_partials[k]`` are the partial sums through
    order k; ``residual_history[k]`` is the residual error square of that
    partial sum.  ``diag_coeffs[k]`` is the optimized diagonal coefficient
    introduced at order k (index 0 unused).
    """

    config: HamConfig
    psi_terms: list = field(default_factory=list)
    e_terms: list = field(default_factory=list)
    diag_coeffs: list = field(default_factory=list)
    psi_partials: list = field(default_factory=list)
    e_partials: list = field(default_factory=list)
    residual_history: list = field(default_factory=list)

    @property
    def psi_hat(self) -> WaveVector:
        return self.psi_partials[-1]

    @property
    def e_hat(self) -> mpf:
        return self.e_partials[-1]


def initial_energy(psi0: WaveVector, state_index: int, operator: BandedOperator) -> mpf:
    """Zeroth-order eigenvalue estimate: ratio of the projections of
    H*psi0 and psi0 onto the target basis state."""
    overlap = psi0[state_index]
    if abs(overlap) <= ambient_epsilon():
        raise DegenerateGuessError(
            f"initial guess has no overlap with basis state {state_index}"
        )
    image = apply_hamiltonian(operator, psi0, mode="extended")
    return image[state_index] / overlap


def residual_term(state: HamState, order: int, operator: BandedOperator) -> WaveVector:
    """Order-``order`` residual H*psi^(k) - sum_j E^(j) psi^(k-j), extended mode."""
    if order >= len(state.psi_terms) or order >= len(state.e_terms):
        raise NumericalError(f"terms through order {order} not populated yet")
    image = apply_hamiltonian(operator, state.psi_terms[order], mode="extended")
    coeffs = list(image)
    for j in range(order + 1):
        term = state.psi_terms[order - j]
        energy = state.e_terms[j]
        for i in range(len(term)):
            coeffs[i] -= energy * term[i]
    return WaveVector(coeffs)


def projection_delta(residual: WaveVector, m: int) -> mpf:
    """Projection of a residual vector onto basis state m."""
    if m < 0:
        raise ConfigurationError(f"negative basis index {m}")
    return residual[m] if m < len(residual) else mpf(0)


def offdiagonal_update(
    residual_prev: WaveVector, state_index: int, c0: mpf, spec: BasisSpec
) -> WaveVector:
    """Off-diagonal part of the next term: c0 * delta_m / (E_m - E_n) for
    every m != n up to the truncation, zero at the target index."""
    if c0 == 0:
        raise ConfigurationError("convergence-control parameter must be nonzero")
    e_n = spec.base_energy(state_index)
    coeffs = []
    for m in range(spec.dim):
        if m == state_index:
            coeffs.append(mpf(0))
            continue
        delta = projection_delta(residual_prev, m)
        coeffs.append(c0 * delta / (spec.base_energy(m) - e_n))
    return WaveVector(coeffs)


def optimal_diagonal_coefficient(
    psi_hat_prime: WaveVector,
    e_hat: mpf,
    state_index: int,
    operator: BandedOperator,
    mode: str = "truncated",
) -> mpf:
    """Diagonal coefficient minimizing the residual error square.

    Vertex of the quadratic form in the coefficient of the target basis
    state: -<(H-e)psi', (H-e)e_n> / <(H-e)e_n, (H-e)e_n>.
    """
    e_n_vec = WaveVector.basis_state(state_index, operator.dim)

    def shifted_image(v: WaveVector) -> WaveVector:
        image = apply_hamiltonian(operator, v, mode=mode)
        return image - v.scaled(e_hat).padded(len(image))

    w = shifted_image(e_n_vec)
    denominator = inner(w, w)
    if denominator <= ambient_epsilon():
        raise DegenerateOperatorError(
            f"basis state {state_index} is an eigenfunction at energy {e_hat}; "
            "the diagonal optimization is singular"
        )
    return -inner(shifted_image(psi_hat_prime), w) / denominator


def next_energy_term(state: HamState, order: int, operator: BandedOperator) -> mpf:
    """Eigenvalue term fixed by the solvability condition at this order."""
    if order >= len(state.psi_terms) or order > len(state.e_terms):
        raise NumericalError(f"eigenfunction term of order {order} not populated yet")
    n = state.config.state_index
    overlap = state.psi_terms[0][n]
    if abs(overlap) <= ambient_epsilon():
        raise DegenerateGuessError(f"initial guess has no overlap with basis state {n}")
    image = apply_hamiltonian(operator, state.psi_terms[order], mode="extended")
    value = image[n]
    for j in range(order):
        value -= state.e_terms[j] * state.psi_terms[order - j][n]
    return value / overlap


def residual_error_square(
    psi_hat: WaveVector, e_hat: mpf, operator: BandedOperator, mode: str = "truncated"
) -> mpf:
    """Squared norm of (H - e_hat) psi_hat in the given application mode."""
    image = apply_hamiltonian(operator, psi_hat, mode=mode)
    r = image - psi_hat.scaled(e_hat).padded(len(image))
    return inner(r, r)


def run_ham(
    config: HamConfig,
    initial_guess: WaveVector | None = None,
    ctx: PrecisionContext = PrecisionContext(),
) -> HamState:
    """Run the full order-by-order recursion.

    Per order k: previous-order residual, off-diagonal update (plus the
    carry of term k-1 for k >= 2), optimized diagonal coefficient against
    the energy estimate accumulated so far, then the new eigenvalue term.
    Partial sums and the residual error square are recorded at every
    order.
    """
    with ctx.activate():
        operator = build_hamiltonian(config.spec)
        n = config.state_index
        if initial_guess is None:
            initial_guess = WaveVector.basis_state(n, config.spec.dim)
        if len(initial_guess) != config.spec.dim:
            raise ConfigurationError(
                f"guess length {len(initial_guess)} does not match basis dimension {config.spec.dim}"
            )
        state = HamState(config=config)
        e0 = initial_energy(initial_guess, n, operator)
        state.psi_terms.append(initial_guess)
        state.e_terms.append(e0)
        state.diag_coeffs.append(mpf(0))
        state.psi_partials.append(initial_guess)
        state.e_partials.append(e0)
        state.residual_history.append(
            residual_error_square(initial_guess, e0, operator, config.residual_mode)
        )
        e_n_vec = WaveVector.basis_state(n, config.spec.dim)

        for k in range(1, config.order + 1):
            try:
                residual_prev = residual_term(state, k - 1, operator)
                tilde = offdiagonal_update(residual_prev, n, config.c0, config.spec)
                if k >= 2:
                    tilde = tilde + state.psi_terms[k - 1]
                psi_hat_prime = state.psi_partials[-1] + tilde
                a_k = optimal_diagonal_coefficient(
                    psi_hat_prime, state.e_partials[-1], n, operator, config.residual_mode
                )
                psi_k = tilde + e_n_vec.scaled(a_k)
                state.psi_terms.append(psi_k)
                state.diag_coeffs.append(a_k)
                e_k = next_energy_term(state, k, operator)
                state.e_terms.append(e_k)
                state.psi_partials.append(state.psi_partials[-1] + psi_k)
                state.e_partials.append(state.e_partials[-1] + e_k)
                state.residual_history.append(
                    residual_error_square(
                        state.psi_partials[-1], state.e_partials[-1], operator, config.residual_mode
                    )
                )
            except NumericalError as exc:
                raise type(exc)(f"order {k}: {exc}") from exc
        return state
