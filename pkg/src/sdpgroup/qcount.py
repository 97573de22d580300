"""Exact subgroup counts for elementary abelian p-groups.

The number of subgroups of order ``p**k`` in ``Z_p^n`` is the Gaussian
binomial coefficient ``[n choose k]_p``.  Three independent evaluations are
provided (combinatorial sum, product quotient, Pascal-type recurrence) along
with the subgroup totals and their polynomial form in ``p``.

Everything here is integer arithmetic; no floats are involved.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

__all__ = [
    "CountPolynomial",
    "DegenerateCountWarning",
    "gaussian_sum",
    "gaussian_product",
    "gaussian_rec",
    "gaussian",
    "total_subgroups",
    "total_rec",
    "poly_f",
    "degree_gap",
]

SUM_MAX_N = 20


class DegenerateCountWarning(UserWarning):
    """Issued for the rank-0 group, which has a single subgroup."""


def _check_range(n: int, k: int) -> None:
    if n < 0:
        raise ValueError(f"rank must be non-negative, got n={n}")
    if not 0 <= k <= n:
        raise ValueError(f"need 0 <= k <= n, got k={k}, n={n}")


def gaussian_sum(n: int, p: int, k: int) -> int:
    """Subspace count as a sum over index sets ``1 <= i_1 < ... < i_k <= n``.

    Each index set contributes ``p**(i_1 + ... + i_k - k(k+1)/2)``.  This is
    exponential in ``k`` and is kept as a reference only.
    """
    _check_range(n, k)
    if n > SUM_MAX_N:
        raise ValueError(f"combinatorial sum limited to n <= {SUM_MAX_N}")
    if k == 0 or k == n:
        return 1
    shift = k * (k + 1) // 2
    return sum(p ** (sum(idx) - shift) for idx in combinations(range(1, n + 1), k))


def _falling(p: int, j: int) -> int:
    # (p^j - 1)(p^{j-1} - 1)...(p - 1)
    out = 1
    for i in range(1, j + 1):
        out *= p**i - 1
    return out


def gaussian_product(n: int, p: int, k: int) -> int:
    """Subspace count as the quotient of products of ``p**i - 1``."""
    _check_range(n, k)
    num = _falling(p, n)
    den = _falling(p, k) * _falling(p, n - k)
    quot, rem = divmod(num, den)
    if rem:
        raise ArithmeticError(f"inexact Gaussian quotient for n={n}, p={p}, k={k}")
    return quot


@lru_cache(maxsize=None)
def _rec_row(n: int, p: int) -> tuple[int, ...]:
    if n == 0:
        return (1,)
    prev = _rec_row(n - 1, p)
    row = [1] * (n + 1)
    for k in range(1, n):
        row[k] = prev[k] + p ** (n - k) * prev[k - 1]
    return tuple(row)


def gaussian_rec(n: int, p: int, k: int) -> int:
    """Subspace count via ``a_n(k) = a_{n-1}(k) + p**(n-k) a_{n-1}(k-1)``.

    Rows are memoized per ``(n, p)``; this is the path everything else uses.
    """
    _check_range(n, k)
    return _rec_row(n, p)[k]


gaussian = gaussian_rec


def total_subgroups(n: int, p: int) -> int:
    """Total number of subgroups of ``Z_p^n``.

    ``n = 0`` returns 1 and issues :class:`DegenerateCountWarning`.
    """
    if n < 0:
        raise ValueError(f"rank must be non-negative, got n={n}")
    if n == 0:
        warnings.warn("rank 0: only the trivial group", DegenerateCountWarning, stacklevel=2)
        return 1
    row = _rec_row(n, p)
    return 2 + sum(row[1:n])


@lru_cache(maxsize=None)
def total_rec(n: int, p: int) -> int:
    """Total subgroup count from ``a_n = 2 a_{n-1} + (p**(n-1) - 1) a_{n-2}``."""
    if n < 1:
        raise ValueError(f"order-2 recurrence needs n >= 1, got n={n}")
    a_prev, a_cur = 2, p + 3
    if n == 1:
        return a_prev
    for j in range(3, n + 1):
        a_prev, a_cur = a_cur, 2 * a_cur + (p ** (j - 1) - 1) * a_prev
    return a_cur


@dataclass(frozen=True)
class CountPolynomial:
    """Dense integer polynomial; ``coeffs[i]`` multiplies ``X**i``."""

    coeffs: tuple[int, ...]

    def __post_init__(self) -> None:
        c = list(self.coeffs)
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def leading(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def __call__(self, x: int) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __add__(self, other: CountPolynomial) -> CountPolynomial:
        a, b = self.coeffs, other.coeffs
        size = max(len(a), len(b))
        return CountPolynomial(
            tuple((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(size))
        )

    def __mul__(self, other: CountPolynomial | int) -> CountPolynomial:
        if isinstance(other, int):
            return CountPolynomial(tuple(other * c for c in self.coeffs))
        if not self.coeffs or not other.coeffs:
            return CountPolynomial(())
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return CountPolynomial(tuple(out))

    __rmul__ = __mul__

    def __str__(self) -> str:
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            coef = "" if c == 1 and i > 0 else str(c)
            mono = "" if i == 0 else ("X" if i == 1 else f"X^{i}")
            terms.append(coef + mono)
        return " + ".join(terms) if terms else "0"


@lru_cache(maxsize=None)
def poly_f(n: int) -> CountPolynomial:
    """The polynomial ``f_n`` with ``f_n(p)`` the subgroup count of ``Z_p^n``.

    Built by running the order-2 total recurrence symbolically from
    ``f_1 = 2`` and ``f_2 = X + 3``.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got n={n}")
    if n == 1:
        return CountPolynomial((2,))
    if n == 2:
        return CountPolynomial((3, 1))
    # p^{n-1} - 1
    shift = CountPolynomial((-1,) + (0,) * (n - 2) + (1,))
    return poly_f(n - 1) * 2 + shift * poly_f(n - 2)


def degree_gap(n: int) -> int:
    """``deg f_n - deg f_{n-1}``; equals ``n // 2``."""
    if n < 2:
        raise ValueError(f"n must be >= 2, got n={n}")
    return poly_f(n).degree - poly_f(n - 1).degree
