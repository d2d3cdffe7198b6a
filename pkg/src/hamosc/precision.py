"""Extended-precision real arithmetic contract for the whole package.

Every module computes with mpmath real numbers at an ambient working
precision.  A :class:`PrecisionContext` pins that precision: high-level
entry points (solvers, sweeps, oracles) accept a context and activate it
around their whole computation, so low-level helpers can stay plain pure
functions evaluated at the ambient precision.

Decimal string literals should be passed as strings (``"0.01"``), not
floats: a float has already been rounded to binary and would poison
20-digit reproductions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from mpmath import mp, mpf

from .errors import ConfigurationError

MIN_DIGITS = 30
DEFAULT_DIGITS = 50

Real = mpf
RealLike = "mpf | int | str | Fraction | float"


@dataclass(frozen=True)
class PrecisionContext:
    """Significant decimal digits carried by all scalar computation.

    ``epsilon`` is the "numerically zero" threshold, 10^-(digits-5).
    Immutable; safe to share between concurrent solves.
    """

    digits: int = DEFAULT_DIGITS

    def __post_init__(self) -> None:
        if not isinstance(self.digits, int) or self.digits < MIN_DIGITS:
            raise ConfigurationError(
                f"precision must be an integer >= {MIN_DIGITS} digits, got {self.digits!r}"
            )

    @property
    def epsilon(self) -> mpf:
        with self.activate():
            return mpf(10) ** (5 - self.digits)

    def activate(self):
        """Context manager setting the mpmath working precision to `digits`."""
        return mp.workdps(self.digits)

    def real(self, x) -> mpf:
        """Convert ``x`` to a real number rounded at this context's precision."""
        with self.activate():
            return to_real(x)


def make_context(digits: int = DEFAULT_DIGITS) -> PrecisionContext:
    """Create the arithmetic context governing all scalar construction."""
    return PrecisionContext(digits)


def ambient_epsilon() -> mpf:
    """Numerically-zero threshold derived from the current working precision."""
    return mpf(10) ** (5 - mp.dps)


def to_real(x) -> mpf:
    """Convert to mpf at the ambient precision.

    Strings are parsed as decimal literals (correctly rounded), ints and
    fractions converted exactly, floats taken at their exact binary value.
    """
    if isinstance(x, mpf):
        return x
    if isinstance(x, Fraction):
        return mpf(x.numerator) / mpf(x.denominator)
    return mpf(x)


def _exact_ratio(x: mpf) -> tuple[int, int, int]:
    """Decompose a finite nonzero mpf into (sign, num, den) with x = sign*num/den."""
    sign = -1 if x < 0 else 1
    man, exp = int(x.man), int(x.exp)
    if exp >= 0:
        return sign, man << exp, 1
    return sign, man, 1 << (-exp)


def _round_sig_digits(num: int, den: int, sig: int) -> tuple[int, int]:
    """Round num/den > 0 to ``sig`` significant digits, ties to even.

    Returns (D, e) with the value approximately D * 10^(e - sig + 1) and
    10^(sig-1) <= D < 10^sig.
    """
    # decimal exponent e with 10^e <= num/den < 10^(e+1)
    e = int((num.bit_length() - den.bit_length()) * 0.30102999566398119)
    while True:
        if e >= 0:
            a, b = num, den * 10**e
        else:
            a, b = num * 10**-e, den
        if a < b:
            e -= 1
            continue
        if e + 1 >= 0:
            a, b = num, den * 10 ** (e + 1)
        else:
            a, b = num * 10 ** (-e - 1), den
        if a >= b:
            e += 1
            continue
        break
    shift = sig - 1 - e
    if shift >= 0:
        a, b = num * 10**shift, den
    else:
        a, b = num, den * 10**-shift
    q, r = divmod(a, b)
    if 2 * r > b or (2 * r == b and q % 2 == 1):
        q += 1
    if q == 10**sig:
        q //= 10
        e += 1
    return q, e


def format_scalar(x, sig_digits: int) -> str:
    """Round-half-even decimal string with ``sig_digits`` significant digits.

    Parsing the result back yields the value to within one unit in the
    last reported place.  Plain notation is used while all significant
    digits fit naturally around the decimal point, scientific otherwise.
    """
    if sig_digits < 1:
        raise ConfigurationError(f"sig_digits must be >= 1, got {sig_digits}")
    x = to_real(x)
    try:
        man = x.man
    except Exception:  # inf/nan carry no mantissa
        return str(x)
    if man == 0:
        return "0" if sig_digits == 1 else "0." + "0" * (sig_digits - 1)
    sign, num, den = _exact_ratio(x)
    digits, e = _round_sig_digits(num, den, sig_digits)
    s = str(digits)
    prefix = "-" if sign < 0 else ""
    if -5 <= e < sig_digits:
        if e >= 0:
            body = s[: e + 1] + ("." + s[e + 1 :] if e + 1 < len(s) else "")
        else:
            body = "0." + "0" * (-e - 1) + s
        return prefix + body
    mantissa = s[0] + ("." + s[1:] if len(s) > 1 else "")
    return f"{prefix}{mantissa}e{e}"
