"""Symmetric-banded eigenvalues by Sturm-count bisection, plus
Gauss-Hermite quadrature rules at the ambient precision.

The bisection counts eigenvalues below a shift through the inertia of the
shifted matrix (number of negative pivots of its LDL^T factorization,
restricted to the band).  It is deterministic, needs no eigenvectors, and
works at any mpmath precision, which is why it backs both the
diagonalization oracle and the quadrature nodes.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Mapping, Sequence

from mpmath import mp, mpf, sqrt

from .errors import ConfigurationError


def _band_rows(diagonals: Mapping[int, Sequence[mpf]], dim: int, width: int) -> list[list[mpf]]:
    rows = []
    for i in range(dim):
        row = []
        for t in range(width + 1):
            diag = diagonals.get(t)
            row.append(diag[i] if diag is not None and i + t < dim and i < len(diag) else mpf(0))
        rows.append(row)
    return rows


def band_inertia(rows: list[list[mpf]], dim: int, width: int, shift: mpf, pivot_floor: mpf) -> int:
    """Number of eigenvalues strictly below ``shift``.

    Pivots smaller than ``pivot_floor`` in magnitude are treated as
    negative, so a shift that lands exactly on an eigenvalue counts it as
    below; the bisection stays consistent either way.
    """
    work = [row[:] for row in rows]
    for i in range(dim):
        work[i][0] -= shift
    negative = 0
    for i in range(dim):
        d = work[i][0]
        if abs(d) < pivot_floor:
            d = -pivot_floor
        if d < 0:
            negative += 1
        limit = min(width, dim - 1 - i)
        for r in range(1, limit + 1):
            if work[i][r] == 0:
                continue
            f = work[i][r] / d
            target = work[i + r]
            for c in range(r, limit + 1):
                target[c - r] -= f * work[i][c]
    return negative


def band_eigenvalues(
    diagonals: Mapping[int, Sequence[mpf]],
    dim: int,
    count: int,
    tolerance_digits: int | None = None,
) -> list[mpf]:
    """Lowest ``count`` eigenvalues of a symmetric banded matrix.

    ``diagonals`` maps nonnegative offsets to their entries
    (``diagonals[t][i] = entry(i, i+t)``); the lower half is implied by
    symmetry.  Bisection runs until the bracket is narrower than
    scale * 10^-(tolerance_digits), default ambient precision minus 2.
    """
    if count < 1 or count > dim:
        raise ConfigurationError(f"eigenvalue count {count} outside 1..{dim}")
    width = max(diagonals.keys(), default=0)
    rows = _band_rows(diagonals, dim, width)

    lo = hi = None
    for i in range(dim):
        radius = mpf(0)
        for t in range(1, width + 1):
            radius += abs(rows[i][t])
            if i - t >= 0:
                radius += abs(rows[i - t][t])
        center = rows[i][0]
        lo = center - radius if lo is None else min(lo, center - radius)
        hi = center + radius if hi is None else max(hi, center + radius)
    scale = max(mpf(1), abs(lo), abs(hi))
    pivot_floor = scale * mpf(10) ** (-2 * mp.dps)
    if tolerance_digits is None:
        tolerance_digits = mp.dps - 2
    tol = scale * mpf(10) ** (-tolerance_digits)

    eigenvalues = []
    for k in range(count):
        a, b = lo, hi
        while b - a > tol:
            mid = (a + b) / 2
            if band_inertia(rows, dim, width, mid, pivot_floor) >= k + 1:
                b = mid
            else:
                a = mid
        eigenvalues.append((a + b) / 2)
    return eigenvalues


@lru_cache(maxsize=None)
def _gauss_hermite_cached(nodes_count: int, dps: int) -> tuple[tuple, tuple]:
    with mp.workdps(dps + 15):
        off_sq = [mpf(i) / 2 for i in range(1, nodes_count)]
        pivot_floor = mpf(10) ** (-2 * dps)

        def count_below(shift: mpf) -> int:
            negative = 0
            prev = None
            for i in range(nodes_count):
                d = -shift if i == 0 else -shift - off_sq[i - 1] / prev
                if abs(d) < pivot_floor:
                    d = -pivot_floor
                if d < 0:
                    negative += 1
                prev = d
            return negative

        quarter_pi = mp.pi ** mpf("-0.25")

        def poly_and_derivative(x: mpf) -> tuple[mpf, mpf]:
            prev, cur = mpf(0), quarter_pi
            for j in range(1, nodes_count + 1):
                prev, cur = cur, x * sqrt(mpf(2) / j) * cur - sqrt(mpf(j - 1) / j) * prev
            return cur, sqrt(mpf(2 * nodes_count)) * prev

        hi = 2 * sqrt(off_sq[-1]) + 1 if off_sq else mpf(1)
        lo = -hi
        coarse = hi * mpf("1e-15")
        tol = hi * mpf(10) ** (-(dps + 10))
        nodes = []
        for k in range(nodes_count):
            a, b = lo, hi
            while b - a > coarse:
                mid = (a + b) / 2
                if count_below(mid) >= k + 1:
                    b = mid
                else:
                    a = mid
            x = (a + b) / 2
            # Newton refinement; Hermite roots are simple and well separated,
            # so the coarse bracket is already inside the basin
            for _ in range(12):
                value, slope = poly_and_derivative(x)
                step = value / slope
                x -= step
                if abs(step) < tol:
                    break
            nodes.append(x)

        weights = []
        for x in nodes:
            prev, cur = mpf(0), quarter_pi
            christoffel = cur * cur
            for j in range(1, nodes_count):
                prev, cur = cur, x * sqrt(mpf(2) / j) * cur - sqrt(mpf(j - 1) / j) * prev
                christoffel += cur * cur
            weights.append(1 / christoffel)
    with mp.workdps(dps):
        return tuple(+x for x in nodes), tuple(+w for w in weights)


def gauss_hermite_rule(nodes_count: int) -> tuple[tuple, tuple]:
    """Nodes and weights integrating f(x)*exp(-x^2) over the real line.

    Exact for polynomials of degree up to 2*nodes_count - 1.  Results are
    rounded to the ambient precision and cached per (count, precision).
    """
    if nodes_count < 1:
        raise ConfigurationError(f"quadrature needs at least one node, got {nodes_count}")
    return _gauss_hermite_cached(nodes_count, mp.dps)
