from fractions import Fraction

import pytest
from mpmath import mp, mpf, sqrt

from hamosc import (
    BasisSpec,
    ConfigurationError,
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
from hamosc.eigen import gauss_hermite_rule


def test_x4_closed_forms_vs_quadrature(ctx):
    # the quadrature rule is the independent oracle for the ladder algebra
    with ctx.activate():
        tol = mpf(10) ** -40
        assert abs(x4_element(0, 0) - mpf(3) / 4) == 0
        assert abs(quadrature_element_oracle(0, 0, 4) - mpf(3) / 4) < mpf(10) ** -30
        assert abs(x4_element(4, 0) - sqrt(mpf(24)) / 4) < tol
        assert abs(quadrature_element_oracle(4, 0, 4) - x4_element(4, 0)) < tol
        assert x4_element(1, 0) == 0
        assert abs(quadrature_element_oracle(2, 0, 4) - 3 * sqrt(mpf(2)) / 2) < tol


def test_x4_quadrature_agreement_small_grid(ctx):
    with ctx.activate():
        tol = mpf(10) ** -40
        for m in range(0, 13):
            for n in range(0, 13):
                assert abs(x4_element(m, n) - quadrature_element_oracle(m, n, 4)) < tol


def test_x4_symmetry_and_sparsity_exhaustive(ctx):
    with ctx.activate():
        for m in range(0, 65):
            for n in range(0, 65):
                assert x4_element(m, n) == x4_element(n, m)
                if abs(m - n) not in (0, 2, 4):
                    assert x4_element(m, n) == 0


def test_x4_rejects_negative_indices(ctx):
    with ctx.activate():
        with pytest.raises(ConfigurationError):
            x4_element(-1, 0)


def test_x2_family_check(ctx):
    with ctx.activate():
        assert abs(x2_element(3, 1) - sqrt(mpf(6)) / 2) < mpf(10) ** -45
        assert abs(quadrature_element_oracle(1, 3, 2) - x2_element(3, 1)) < mpf(10) ** -40
        assert abs(quadrature_element_oracle(0, 0, 0) - 1) < mpf(10) ** -40


def test_hamiltonian_base_spectrum(ctx):
    with ctx.activate():
        spec = BasisSpec(n_s=8, beta=mpf(0))
        op = build_hamiltonian(spec)
        assert list(op.diag0) == [mpf(2 * i + 1) / 2 for i in range(9)]
        assert all(v == 0 for v in op.diag2)
        assert all(v == 0 for v in op.diag4)


def test_hamiltonian_entries(ctx):
    with ctx.activate():
        spec = BasisSpec(n_s=12, beta=ctx.real("0.01"))
        op = build_hamiltonian(spec)
        assert op.entry(0, 0) == mpf(1) / 2 + ctx.real("0.01") * mpf(3) / 4
        assert op.entry(0, 1) == 0
        assert op.entry(3, 7) == op.entry(7, 3)
        with pytest.raises(ConfigurationError):
            op.entry(-1, 2)


def test_spec_validation(ctx):
    with ctx.activate():
        with pytest.raises(ConfigurationError):
            BasisSpec(n_s=7, beta=mpf(0))
        with pytest.raises(ConfigurationError):
            BasisSpec(n_s=12, beta=mpf(-1))


def test_apply_base_operator_is_diagonal(ctx):
    with ctx.activate():
        spec = BasisSpec(n_s=10, beta=mpf(0))
        op = build_hamiltonian(spec)
        v = WaveVector([mpf(i + 1) for i in range(11)])
        image = apply_hamiltonian(op, v)
        assert list(image) == [(mpf(2 * m + 1) / 2) * v[m] for m in range(11)]


def test_apply_extended_image_of_ground_state(ctx):
    with ctx.activate():
        beta = ctx.real("0.01")
        spec = BasisSpec(n_s=10, beta=beta)
        op = build_hamiltonian(spec)
        image = apply_hamiltonian(op, WaveVector.basis_state(0, 11), mode="extended")
        assert len(image) == 15
        assert image[0] == mpf(1) / 2 + beta * mpf(3) / 4
        assert abs(image[2] - beta * 3 * sqrt(mpf(2)) / 2) < mpf(10) ** -45
        assert abs(image[4] - beta * sqrt(mpf(24)) / 4) < mpf(10) ** -45
        assert all(image[i] == 0 for i in (1, 3, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14))


def test_apply_zero_vector(ctx):
    with ctx.activate():
        spec = BasisSpec(n_s=8, beta=ctx.real("0.3"))
        op = build_hamiltonian(spec)
        assert all(c == 0 for c in apply_hamiltonian(op, WaveVector.zeros(9), "extended"))


def test_apply_dimension_mismatch(ctx):
    with ctx.activate():
        op = build_hamiltonian(BasisSpec(n_s=8, beta=mpf(0)))
        with pytest.raises(ConfigurationError):
            apply_hamiltonian(op, WaveVector.zeros(5))


def test_apply_linearity(ctx):
    with ctx.activate():
        spec = BasisSpec(n_s=9, beta=ctx.real("0.07"))
        op = build_hamiltonian(spec)
        u = WaveVector([mpf(i * i - 3) / 7 for i in range(10)])
        v = WaveVector([mpf(2 - i) / 5 for i in range(10)])
        a, b = mpf(3), mpf(-2)  # exact scalings keep the identity exact
        lhs = apply_hamiltonian(op, u.scaled(a) + v.scaled(b), "extended")
        rhs = apply_hamiltonian(op, u, "extended").scaled(a) + apply_hamiltonian(
            op, v, "extended"
        ).scaled(b)
        assert all(abs(x - y) < mpf(10) ** -42 for x, y in zip(lhs, rhs))


def test_self_adjoint_in_extended_mode(ctx):
    with ctx.activate():
        spec = BasisSpec(n_s=9, beta=ctx.real("0.2"))
        op = build_hamiltonian(spec)
        u = WaveVector([mpf(1) / (i + 1) for i in range(10)])
        v = WaveVector([mpf((-1) ** i) * (i + 2) / 9 for i in range(10)])
        hu = apply_hamiltonian(op, u, "extended")
        hv = apply_hamiltonian(op, v, "extended")
        lhs = inner(hu, v.padded(len(hu)))
        rhs = inner(u.padded(len(hv)), hv)
        assert abs(lhs - rhs) < mpf(10) ** -42


def test_inner_orthonormality(ctx):
    with ctx.activate():
        e3 = WaveVector.basis_state(3, 8)
        e5 = WaveVector.basis_state(5, 8)
        assert inner(e3, e3) == 1
        assert inner(e3, e5) == 0
        combo = WaveVector.basis_state(0, 8).scaled(mpf(2)) + WaveVector.basis_state(2, 8)
        assert inner(combo, WaveVector.basis_state(2, 8)) == 1


def test_inner_pads_shorter_vector(ctx):
    with ctx.activate():
        u = WaveVector([mpf(1), mpf(2)])
        v = WaveVector([mpf(3), mpf(4), mpf(100)])
        assert inner(u, v) == 11


def test_wavevector_guards(ctx):
    with ctx.activate():
        v = WaveVector([mpf(1), mpf(2)])
        with pytest.raises(ConfigurationError):
            v.padded(1)
        with pytest.raises(ConfigurationError):
            WaveVector.basis_state(9, 4)


def test_ground_state_value_at_origin(ctx):
    with ctx.activate():
        e0 = WaveVector.basis_state(0, 6)
        want = mp.pi ** mpf("-0.25")
        assert abs(evaluate_wavefunction(e0, 0) - want) < mpf(10) ** -45


def test_odd_state_vanishes_at_origin(ctx):
    with ctx.activate():
        e1 = WaveVector.basis_state(1, 6)
        assert evaluate_wavefunction(e1, 0) == 0


def test_ground_state_normalized_by_quadrature(ctx):
    # integrate psi_0^2 with the package's own rule: polynomial part is
    # constant, so the rule is exact
    with ctx.activate():
        nodes, weights = gauss_hermite_rule(12)
        total = sum(
            w * (mp.pi ** mpf("-0.5")) for w in weights
        )
        assert abs(total - 1) < mpf(10) ** -45


def test_pointwise_matches_recurrence_consistency(ctx):
    with ctx.activate():
        v = WaveVector([mpf(1), mpf(0), mpf(-2), mpf(0), mpf(1) / 2, mpf(0)])
        xi = ctx.real("0.73")
        direct = evaluate_wavefunction(v, xi)
        parts = sum(
            v[m] * evaluate_wavefunction(WaveVector.basis_state(m, 6), xi) for m in range(6)
        )
        assert abs(direct - parts) < mpf(10) ** -45


def test_dimensionless_identity_units(ctx):
    with ctx.activate():
        p = PhysicalParams(mass=mpf(1), omega=mpf(1), hbar=mpf(1), beta_phys=ctx.real("0.03"))
        assert to_dimensionless(p) == ctx.real("0.03")
        assert energy_to_physical(mpf(1) / 2, p) == mpf(1) / 2


def test_dimensionless_substitution_symbolically(ctx):
    # independent check of the coordinate substitution with sympy
    import sympy

    m_, w_, h_, lam, xi = sympy.symbols("m w h lam xi", positive=True)
    x = xi * sympy.sqrt(h_ / (m_ * w_))
    quartic_term = lam * x**4  # physical coupling lam * x^4
    # divide by the energy scale h*w; the xi^4 coefficient is the
    # dimensionless coupling
    coeff = sympy.simplify(quartic_term / (h_ * w_) / xi**4)
    expected = sympy.simplify(lam * h_ / (m_**2 * w_**3))
    assert sympy.simplify(coeff - expected) == 0

    with ctx.activate():
        p = PhysicalParams(mass=mpf(2), omega=mpf(3), hbar=mpf(5), beta_phys=mpf(7))
        got = to_dimensionless(p)
        want = mpf(7) * 5 / (4 * 27)
        assert abs(got - want) < mpf(10) ** -45


def test_physical_params_validation(ctx):
    with ctx.activate():
        with pytest.raises(ConfigurationError):
            PhysicalParams(mass=mpf(0), omega=mpf(1), hbar=mpf(1), beta_phys=mpf(0))
        with pytest.raises(ConfigurationError):
            PhysicalParams(mass=mpf(1), omega=mpf(1), hbar=mpf(1), beta_phys=mpf(-1))


def test_quartic_operator_is_decoupled_band(ctx):
    with ctx.activate():
        beta = ctx.real("0.4")
        spec = BasisSpec(n_s=9, beta=beta)
        full = build_hamiltonian(spec)
        bare = quartic_operator(spec)
        for i in range(10):
            assert full.diag0[i] - bare.diag0[i] == spec.base_energy(i)
            assert full.diag2[i] == bare.diag2[i]
            assert full.diag4[i] == bare.diag4[i]


def test_quadrature_oracle_validation(ctx):
    with ctx.activate():
        with pytest.raises(ConfigurationError):
            quadrature_element_oracle(0, 0, 3)
        with pytest.raises(ConfigurationError):
            quadrature_element_oracle(-1, 0, 4)
