"""Rayleigh-Schrodinger perturbation baseline for the quartic coupling.

Serves two purposes: a sanity baseline at tiny coupling, and a divergence
demonstrator at couplings where the perturbative series blows up while
the homotopy solver still converges.  The disturbance operator is the
same exact quartic band used by the main solver, so both methods share
one source of matrix elements.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from mpmath import mpf

from .basis import BasisSpec, WaveVector, apply_hamiltonian, build_hamiltonian, quartic_operator
from .errors import ConfigurationError
from .precision import PrecisionContext

# Exact ground-state series coefficients of the quartic coupling, orders 0..6.
GROUND_SERIES = (
    Fraction(1, 2),
    Fraction(3, 4),
    Fraction(-21, 8),
    Fraction(333, 16),
    Fraction(-30885, 128),
    Fraction(916731, 256),
    Fraction(-65518401, 1024),
)


@dataclass
class PerturbState:
    """Per-order record of a perturbative solve.

    ``coeff_table[m]`` holds the order-m eigenfunction coefficients; the
    diagonal entry is zero for every m >= 1 because the expansion excludes
    the target state.  Partial sums and their residual error squares are
    recorded per order.
    """

    state_index: int
    spec: BasisSpec
    e_terms: list = field(default_factory=list)
    coeff_table: list = field(default_factory=list)
    e_partials: list = field(default_factory=list)
    psi_partials: list = field(default_factory=list)
    residual_history: list = field(default_factory=list)

    @property
    def e_hat(self) -> mpf:
        return self.e_partials[-1]


def perturb_solve(
    state_index: int,
    beta,
    order: int,
    n_s: int,
    ctx: PrecisionContext = PrecisionContext(),
    residual_mode: str = "truncated",
) -> PerturbState:
    """Run the perturbation recursion to the given order.

    Order m >= 1 projects the disturbance image of the previous term onto
    the basis, divides the off-diagonal components by the base-energy
    gaps, and reads the energy correction from the diagonal projection.
    """
    with ctx.activate():
        spec = BasisSpec(n_s=n_s, beta=ctx.real(beta))
        n = state_index
        if n < 0 or n > n_s - 4:
            raise ConfigurationError(f"state index {n} outside 0..{n_s - 4}")
        disturbance = quartic_operator(spec)
        hamiltonian = build_hamiltonian(spec)
        dim = spec.dim

        state = PerturbState(state_index=n, spec=spec)
        psi0 = WaveVector.basis_state(n, dim)
        state.e_terms.append(spec.base_energy(n))
        state.coeff_table.append(psi0)
        state.e_partials.append(state.e_terms[0])
        state.psi_partials.append(psi0)
        state.residual_history.append(
            _residual(hamiltonian, psi0, state.e_partials[0], residual_mode)
        )

        for m in range(1, order + 1):
            image = apply_hamiltonian(disturbance, state.coeff_table[m - 1], mode="truncated")
            e_m = image[n]
            for k in range(1, m):
                # diagonal coefficients vanish for every order >= 1, so this
                # correction sum is identically zero; kept for shape fidelity
                e_m -= state.e_terms[k] * state.coeff_table[m - k][n]
            coeffs = []
            e_base_n = spec.base_energy(n)
            for l in range(dim):
                if l == n:
                    coeffs.append(mpf(0))
                    continue
                numerator = image[l]
                for k in range(1, m):
                    numerator -= state.e_terms[k] * state.coeff_table[m - k][l]
                numerator -= e_m * state.coeff_table[0][l]  # k = m term, zero off-diagonal
                coeffs.append(numerator / (e_base_n - spec.base_energy(l)))
            state.e_terms.append(e_m)
            state.coeff_table.append(WaveVector(coeffs))
            state.e_partials.append(state.e_partials[-1] + e_m)
            state.psi_partials.append(state.psi_partials[-1] + state.coeff_table[m])
            state.residual_history.append(
                _residual(hamiltonian, state.psi_partials[-1], state.e_partials[-1], residual_mode)
            )
        return state


def e0_series_coefficients(order: int) -> list[Fraction]:
    """Exact rational series coefficients of the ground state, orders 0..order.

    Only the tabulated orders up to 6 are available; the recursion is
    checked against them coefficient-by-coefficient in the tests.
    """
    if order < 0:
        raise ConfigurationError(f"order must be >= 0, got {order}")
    if order > 6:
        raise ConfigurationError(f"series coefficients tabulated only through order 6, got {order}")
    return list(GROUND_SERIES[: order + 1])


def _residual(hamiltonian, psi_hat, e_hat, mode):
    from .ham import residual_error_square

    return residual_error_square(psi_hat, e_hat, hamiltonian, mode)
