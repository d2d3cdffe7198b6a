from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from mpmath import mp, mpf

from hamosc import ConfigurationError, format_scalar, make_context
from hamosc.precision import to_real


def test_default_context():
    ctx = make_context()
    assert ctx.digits == 50
    with ctx.activate():
        assert ctx.epsilon == mpf(10) ** -45


def test_epsilon_follows_digits():
    ctx = make_context(30)
    with ctx.activate():
        assert ctx.epsilon == mpf(10) ** -25


def test_too_few_digits_rejected():
    with pytest.raises(ConfigurationError):
        make_context(10)
    with pytest.raises(ConfigurationError):
        make_context(29)


def test_context_real_parses_decimal_strings(ctx):
    x = ctx.real("0.01")
    with ctx.activate():
        # correctly rounded 1/100, not the binary double
        assert abs(x - mpf(1) / 100) < mpf(10) ** -49
        assert x != mpf(0.01)


def test_to_real_fraction(ctx):
    with ctx.activate():
        assert to_real(Fraction(1, 4)) == mpf(1) / 4


def test_format_reference_twenty_digits(ctx):
    value = ctx.real("0.50725620452460284095613")
    assert format_scalar(value, 20) == "0.50725620452460284095"


def test_format_simple_cases(ctx):
    with ctx.activate():
        assert format_scalar(mpf(1) / 2, 3) == "0.500"
        assert format_scalar(mpf(1) / 3, 5) == "0.33333"
        assert format_scalar(mpf(0), 5) == "0.0000"
        assert format_scalar(mpf(-2), 4) == "-2.000"


def test_format_round_half_even(ctx):
    with ctx.activate():
        # exactly representable ties
        assert format_scalar(mpf("0.125"), 2) == "0.12"
        assert format_scalar(mpf("0.375"), 2) == "0.38"
        assert format_scalar(mpf("0.25"), 1) == "0.2"


def test_format_scientific(ctx):
    with ctx.activate():
        assert format_scalar(mpf("6.7e-16"), 2) == "6.7e-16"
        assert format_scalar(mpf("2.2e41"), 2) == "2.2e41"
        assert format_scalar(mpf("-3168640.2"), 3) == "-3.17e6"
        assert format_scalar(mpf(123456), 6) == "123456"


def test_format_rejects_bad_sig(ctx):
    with pytest.raises(ConfigurationError):
        format_scalar(mpf(1), 0)


@settings(max_examples=80, derandomize=True)
@given(
    st.integers(min_value=-(10**12), max_value=10**12).filter(lambda n: n != 0),
    st.integers(min_value=-40, max_value=40),
)
def test_format_round_trip_within_one_ulp(num, scale):
    ctx = make_context(50)
    with ctx.activate():
        x = mpf(num) * mpf(10) ** scale
        text = format_scalar(x, 50)
        back = mpf(text)
        ulp = abs(x) * mpf(10) ** -49
        assert abs(back - x) <= ulp


def test_format_deterministic(ctx):
    with ctx.activate():
        x = mpf(2) ** mpf("0.5")
    assert format_scalar(x, 30) == format_scalar(x, 30)
