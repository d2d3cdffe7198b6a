"""Series acceleration for the homotopy eigenvalue terms.

The diagonal [m,m] Pade approximant of the term series, evaluated at unit
embedding parameter, is computed with Wynn's epsilon algorithm applied to
the partial sums.  The epsilon recursion needs O(m^2) work, has no linear
system to condition, and its even diagonal provably equals the diagonal
Pade value.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from mpmath import mpf

from .errors import InsufficientTermsError
from .precision import PrecisionContext


@dataclass(frozen=True)
class PadeResult:
    """Diagonal approximant value at half-order m.

    When the epsilon table hits a numerically zero denominator the result
    is flagged degenerate and carries the previous non-degenerate diagonal
    value instead.
    """

    m: int
    value: mpf
    degenerate: bool = False


def homotopy_pade(
    terms: Sequence[mpf], m: int, ctx: PrecisionContext = PrecisionContext()
) -> PadeResult:
    """[m,m] Pade value of sum(terms[k] q^k) at q = 1.

    Needs terms 0..2m.  Wynn's epsilon recursion over the partial sums;
    denominators smaller than the context epsilon abort the ascent and
    fall back to the last completed even diagonal.
    """
    if m < 1:
        raise InsufficientTermsError(f"half-order must be >= 1, got {m}")
    if len(terms) < 2 * m + 1:
        raise InsufficientTermsError(
            f"[{m},{m}] approximant needs {2 * m + 1} series terms, got {len(terms)}"
        )
    with ctx.activate():
        eps = ctx.epsilon
        partial = mpf(0)
        sums = []
        for t in terms[: 2 * m + 1]:
            partial += t
            sums.append(partial)
        previous = [mpf(0)] * (len(sums) + 1)
        current = sums
        best = sums[0]
        for column in range(1, 2 * m + 1):
            nxt = []
            for j in range(len(current) - 1):
                denominator = current[j + 1] - current[j]
                if abs(denominator) < eps:
                    return PadeResult(m=m, value=best, degenerate=True)
                nxt.append(previous[j + 1] + 1 / denominator)
            previous, current = current, nxt
            if column % 2 == 0:
                best = current[0]
        return PadeResult(m=m, value=current[0], degenerate=False)


def pade_table(
    terms: Sequence[mpf],
    ctx: PrecisionContext = PrecisionContext(),
    max_m: int | None = None,
) -> list[PadeResult]:
    """Diagonal approximants for every half-order the terms support."""
    top = (len(terms) - 1) // 2
    if max_m is not None:
        top = min(top, max_m)
    return [homotopy_pade(terms, m, ctx) for m in range(1, top + 1)]
