"""Harmonic-oscillator basis for the quartic eigenproblem.

Provides the closed-form matrix elements of the quartic coupling, the
banded Hamiltonian -1/2 d2/dxi2 + xi^2/2 + beta*xi^4 over the truncated
basis, coefficient-vector algebra, pointwise wavefunction evaluation, the
dimensionless transform, and a Gauss-Hermite quadrature oracle used to
cross-check the closed forms in tests.

All operations assume an ambient mpmath working precision (see
:mod:`hamosc.precision`).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

from mpmath import mp, mpf, sqrt

from .eigen import gauss_hermite_rule
from .errors import ConfigurationError

MIN_TRUNCATION = 8  # the +-4 band of xi^4 needs room below the cutoff


@dataclass(frozen=True)
class BasisSpec:
    """Truncation order and quartic coupling defining one problem instance.

    Base eigenvalues m + 1/2 are strictly increasing, so the base spectrum
    is automatically nondegenerate.
    """

    n_s: int
    beta: mpf

    def __post_init__(self) -> None:
        if self.n_s < MIN_TRUNCATION:
            raise ConfigurationError(f"truncation order must be >= {MIN_TRUNCATION}, got {self.n_s}")
        if self.beta < 0:
            raise ConfigurationError(f"quartic coupling must be >= 0, got {self.beta}")

    @property
    def dim(self) -> int:
        return self.n_s + 1

    def base_energy(self, m: int) -> mpf:
        return mpf(2 * m + 1) / 2


class WaveVector:
    """Real coefficient vector over basis functions 0..len-1.

    Standard vectors have length n_s+1; the extended image of the
    Hamiltonian has length n_s+5.  Immutable.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence[mpf]):
        object.__setattr__(self, "coeffs", tuple(coeffs))

    @classmethod
    def zeros(cls, length: int) -> "WaveVector":
        return cls([mpf(0)] * length)

    @classmethod
    def basis_state(cls, index: int, length: int) -> "WaveVector":
        if not 0 <= index < length:
            raise ConfigurationError(f"basis index {index} outside 0..{length - 1}")
        return cls([mpf(1) if i == index else mpf(0) for i in range(length)])

    def __len__(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, i: int) -> mpf:
        return self.coeffs[i]

    def __iter__(self) -> Iterator[mpf]:
        return iter(self.coeffs)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, WaveVector) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def padded(self, length: int) -> "WaveVector":
        if length < len(self.coeffs):
            raise ConfigurationError("shrinking a coefficient vector is not allowed")
        return WaveVector(self.coeffs + (mpf(0),) * (length - len(self.coeffs)))

    def __add__(self, other: "WaveVector") -> "WaveVector":
        n = max(len(self), len(other))
        a, b = self.padded(n), other.padded(n)
        return WaveVector([a[i] + b[i] for i in range(n)])

    def __sub__(self, other: "WaveVector") -> "WaveVector":
        n = max(len(self), len(other))
        a, b = self.padded(n), other.padded(n)
        return WaveVector([a[i] - b[i] for i in range(n)])

    def scaled(self, factor: mpf) -> "WaveVector":
        return WaveVector([factor * c for c in self.coeffs])

    def norm_sq(self) -> mpf:
        return inner(self, self)

    def __repr__(self) -> str:
        head = ", ".join(mp.nstr(c, 8) for c in self.coeffs[:4])
        tail = ", ..." if len(self.coeffs) > 4 else ""
        return f"WaveVector([{head}{tail}], len={len(self.coeffs)})"


@dataclass(frozen=True)
class BandedOperator:
    """Symmetric operator with nonzero diagonals at offsets 0, +-2, +-4.

    The stored diagonals cover columns 0..dim-1 of the infinite operator:
    ``diag0[i] = entry(i, i)``, ``diag2[i] = entry(i, i+2)`` and
    ``diag4[i] = entry(i, i+4)`` for every i < dim.  Rows above the
    truncation (up to dim+3) are therefore exact, which is what the
    extended application mode uses.
    """

    diag0: tuple
    diag2: tuple
    diag4: tuple
    dim: int

    def entry(self, m: int, n: int) -> mpf:
        if m < 0 or n < 0:
            raise ConfigurationError(f"negative basis index ({m}, {n})")
        if m > n:
            m, n = n, m
        if m >= self.dim:
            return mpf(0)
        d = n - m
        if d == 0:
            return self.diag0[m]
        if d == 2:
            return self.diag2[m]
        if d == 4:
            return self.diag4[m]
        return mpf(0)


@dataclass(frozen=True)
class PhysicalParams:
    """Dimensional oscillator parameters; beta_phys is the x^4 coefficient."""

    mass: mpf
    omega: mpf
    hbar: mpf
    beta_phys: mpf

    def __post_init__(self) -> None:
        if self.mass <= 0 or self.omega <= 0 or self.hbar <= 0:
            raise ConfigurationError("mass, omega and hbar must all be positive")
        if self.beta_phys < 0:
            raise ConfigurationError("beta_phys must be >= 0")


def x4_element(m: int, n: int) -> mpf:
    """Matrix element of xi^4 between normalized oscillator states m and n.

    Closed forms from ladder-operator algebra; zero unless |m-n| is 0, 2
    or 4.  Symmetric in (m, n).
    """
    if m < 0 or n < 0:
        raise ConfigurationError(f"negative basis index ({m}, {n})")
    if m < n:
        m, n = n, m
    k = mpf(n)
    d = m - n
    if d == 0:
        return 3 * (2 * k * k + 2 * k + 1) / 4
    if d == 2:
        return (2 * k + 3) * sqrt((k + 1) * (k + 2)) / 2
    if d == 4:
        return sqrt((k + 1) * (k + 2) * (k + 3) * (k + 4)) / 4
    return mpf(0)


def x2_element(m: int, n: int) -> mpf:
    """Matrix element of xi^2; companion closed form used by the tests."""
    if m < 0 or n < 0:
        raise ConfigurationError(f"negative basis index ({m}, {n})")
    if m < n:
        m, n = n, m
    k = mpf(n)
    d = m - n
    if d == 0:
        return (2 * k + 1) / 2
    if d == 2:
        return sqrt((k + 1) * (k + 2)) / 2
    return mpf(0)


@lru_cache(maxsize=64)
def _banded_operator(spec: BasisSpec, with_base: bool, dps: int) -> BandedOperator:
    # cache key includes the working precision: entries are rounded at build time
    dim = spec.dim
    beta = spec.beta
    base = spec.base_energy if with_base else (lambda i: mpf(0))
    diag0 = tuple(base(i) + beta * x4_element(i, i) for i in range(dim))
    diag2 = tuple(beta * x4_element(i, i + 2) for i in range(dim))
    diag4 = tuple(beta * x4_element(i, i + 4) for i in range(dim))
    return BandedOperator(diag0, diag2, diag4, dim)


def build_hamiltonian(spec: BasisSpec) -> BandedOperator:
    """Banded matrix of the full Hamiltonian: (m+1/2) on the diagonal plus
    beta times the xi^4 band.  With beta = 0 this is the base operator."""
    return _banded_operator(spec, True, mp.dps)


def quartic_operator(spec: BasisSpec) -> BandedOperator:
    """Banded matrix of the coupling term beta*xi^4 alone (the disturbance
    operator of the perturbative baseline)."""
    return _banded_operator(spec, False, mp.dps)


def apply_hamiltonian(op: BandedOperator, v: WaveVector, mode: str = "truncated") -> WaveVector:
    """Apply the banded operator to a coefficient vector.

    ``truncated`` projects the image back onto indices 0..dim-1;
    ``extended`` returns the full image on 0..dim+3 (xi^4 raises the index
    by at most 4), which captures leakage out of the truncated span.
    """
    if mode not in ("truncated", "extended"):
        raise ConfigurationError(f"unknown application mode {mode!r}")
    dim = op.dim
    if len(v) != dim:
        raise ConfigurationError(f"vector length {len(v)} does not match operator dimension {dim}")
    out_len = dim + 4 if mode == "extended" else dim
    out = []
    d0, d2, d4 = op.diag0, op.diag2, op.diag4
    for i in range(out_len):
        acc = mpf(0)
        if i < dim:
            acc += d0[i] * v[i]
            if i + 2 < dim:
                acc += d2[i] * v[i + 2]
            if i + 4 < dim:
                acc += d4[i] * v[i + 4]
        if i >= 2 and i - 2 < dim:
            acc += d2[i - 2] * v[i - 2]
        if i >= 4 and i - 4 < dim:
            acc += d4[i - 4] * v[i - 4]
        out.append(acc)
    return WaveVector(out)


def inner(u: WaveVector, v: WaveVector) -> mpf:
    """Coefficient-space inner product; shorter vector is zero-padded.

    Equals the functional inner product because the basis is orthonormal
    and everything is real.
    """
    n = min(len(u), len(v))
    acc = mpf(0)
    for i in range(n):
        acc += u[i] * v[i]
    return acc


def hermite_function_values(max_index: int, xi: mpf) -> list[mpf]:
    """Values of the normalized oscillator eigenfunctions 0..max_index at xi.

    Three-term recurrence on the normalized functions; no factorials, so
    no overflow at large index.
    """
    gauss = mp.exp(-(xi * xi) / 2)
    values = [mp.pi ** mpf("-0.25") * gauss]
    if max_index == 0:
        return values
    prev, cur = mpf(0), values[0]
    for k in range(max_index):
        nxt = xi * sqrt(mpf(2) / (k + 1)) * cur - sqrt(mpf(k) / (k + 1)) * prev
        values.append(nxt)
        prev, cur = cur, nxt
    return values


def evaluate_wavefunction(v: WaveVector, xi) -> mpf:
    """Pointwise value sum_m v[m] * psi_m(xi) of a coefficient vector."""
    xi = mpf(xi)
    values = hermite_function_values(len(v) - 1, xi)
    acc = mpf(0)
    for c, h in zip(v, values):
        acc += c * h
    return acc


def to_dimensionless(params: PhysicalParams) -> mpf:
    """Quartic coupling of the dimensionless problem.

    Under xi = sqrt(m*omega/hbar) x the x^4 coefficient beta_phys maps to
    beta_phys * hbar / (m^2 omega^3) in units of hbar*omega.
    """
    return params.beta_phys * params.hbar / (params.mass**2 * params.omega**3)


def energy_to_physical(energy: mpf, params: PhysicalParams) -> mpf:
    """Map a dimensionless eigenvalue back to physical units (hbar*omega*E)."""
    return params.hbar * params.omega * energy


def quadrature_element_oracle(m: int, n: int, power: int) -> mpf:
    """Integral of psi_m * xi^power * psi_n by Gauss-Hermite quadrature.

    Test oracle for the closed-form matrix elements: with
    K = (m+n+power)/2 + 8 nodes the rule is exact up to roundoff for the
    polynomial part of the integrand.  Evaluated with guard digits and
    rounded back to the ambient precision.
    """
    if m < 0 or n < 0:
        raise ConfigurationError(f"negative basis index ({m}, {n})")
    if power not in (0, 2, 4):
        raise ConfigurationError(f"power must be 0, 2 or 4, got {power}")
    nodes_count = (m + n + power) // 2 + 8
    nodes, weights = gauss_hermite_rule(nodes_count)
    with mp.workdps(mp.dps + 10):
        top = max(m, n)
        total = mpf(0)
        for x, w in zip(nodes, weights):
            # polynomial parts of the normalized eigenfunctions: the
            # Gaussians pair with the quadrature weight exp(-x^2)
            prev, cur = mpf(0), mp.pi ** mpf("-0.25")
            vm = cur if m == 0 else None
            vn = cur if n == 0 else None
            for j in range(1, top + 1):
                prev, cur = cur, x * sqrt(mpf(2) / j) * cur - sqrt(mpf(j - 1) / j) * prev
                if j == m:
                    vm = cur
                if j == n:
                    vn = cur
            total += w * vm * vn * x**power
    return +total
