"""Elementary number theory behind the euclidean spectra.

- :func:`sawtooth` is the exact sawtooth ``((x))``: ``x - floor(x) - 1/2``
  off the integers and ``0`` on them (standard floor throughout).
- :func:`divisor_count_mod` counts divisors of ``N`` in a residue class by
  enumeration; :func:`divisor_residue_table` gives the same counts for a
  whole range at once from a divisor sieve.
- :func:`representation_count` / :func:`representation_counts` count lattice
  points on the level sets of a positive definite binary quadratic form by
  brute enumeration. They are the independent oracle for the divisor
  formulas ``r_Q(N) = scale * (d_{r+,s}(N) - d_{r-,s}(N))``.
- :func:`eisenstein_residual` measures the finite trigonometric identity
  ``((l/n)) = -1/(2n) sum_{s=1}^{n-1} sin(2 pi l s / n) cot(pi s / n)``.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Union

import numpy as np
from sympy import divisor_count as sympy_divisor_count
from sympy import divisors as sympy_divisors

from .core import DomainError

logger = logging.getLogger(__name__)

RationalLike = Union[int, Fraction, Rational]


def sawtooth(x: RationalLike) -> Fraction:
    """Exact sawtooth ``((x))``; the result lies in ``(-1/2, 1/2)``."""
    value = Fraction(x)
    if value.denominator == 1:
        return Fraction(0)
    return value - math.floor(value) - Fraction(1, 2)


@dataclass(frozen=True)
class QuadraticForm:
    """Binary form ``a m^2 + b m n + c n^2`` with integer coefficients."""

    a: int
    b: int
    c: int

    def __post_init__(self) -> None:
        if self.a <= 0 or 4 * self.a * self.c - self.b * self.b <= 0:
            raise DomainError(f'form {self.coefficients} is not positive definite')

    @property
    def coefficients(self):
        return (self.a, self.b, self.c)

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.a, self.b / 2.0], [self.b / 2.0, self.c]])

    @property
    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.matrix)[0])

    def __call__(self, m, n):
        return self.a * m * m + self.b * m * n + self.c * n * n


HEXAGONAL_FORM = QuadraticForm(1, 1, 1)
SQUARE_FORM = QuadraticForm(1, 0, 1)


@dataclass(frozen=True)
class DivisorFormula:
    """``scale * (d_{plus,modulus}(N) - d_{minus,modulus}(N))``."""

    scale: int
    modulus: int
    plus: int
    minus: int

    def __post_init__(self) -> None:
        if self.scale <= 0 or self.modulus <= 0:
            raise DomainError('scale and modulus must be positive')
        if self.plus == self.minus:
            raise DomainError('plus and minus residues must differ')
        for res in (self.plus, self.minus):
            if not 0 <= res < self.modulus:
                raise DomainError(f'residue {res} outside [0, {self.modulus})')

    def evaluate(self, N: int) -> int:
        return self.scale * (divisor_count_mod(N, self.plus, self.modulus)
                             - divisor_count_mod(N, self.minus, self.modulus))

    def table(self, N_max: int) -> np.ndarray:
        return self.scale * (divisor_residue_table(N_max, self.plus, self.modulus)
                             - divisor_residue_table(N_max, self.minus, self.modulus))


def _check_positive(N: int) -> int:
    if isinstance(N, bool) or int(N) != N:
        raise DomainError(f'{N!r} is not an integer')
    N = int(N)
    if N <= 0:
        raise DomainError('divisor counts are defined for N >= 1')
    return N


def divisors(N: int):
    """Divisors of ``N`` in increasing order."""
    return [int(d) for d in sympy_divisors(_check_positive(N))]


def divisor_count(N: int) -> int:
    return int(sympy_divisor_count(_check_positive(N)))


def divisor_count_mod(N: int, r: int, s: int) -> int:
    """Number of divisors ``d | N`` with ``d = r (mod s)``."""
    if s <= 0 or not 0 <= r < s:
        raise DomainError(f'residue {r} is not in [0, {s})')
    return sum(1 for d in sympy_divisors(_check_positive(N), generator=True) if d % s == r)


def divisor_residue_table(N_max: int, r: int, s: int) -> np.ndarray:
    """``table[N] = d_{r,s}(N)`` for ``0 <= N <= N_max`` (``table[0] = 0``).

    Each divisor ``d = r (mod s)`` adds one to every multiple of ``d``.
    """
    if s <= 0 or not 0 <= r < s:
        raise DomainError(f'residue {r} is not in [0, {s})')
    if N_max < 0:
        raise DomainError('N_max must be non-negative')
    table = np.zeros(N_max + 1, dtype=np.int64)
    start = r if r > 0 else s
    for d in range(start, N_max + 1, s):
        table[d::d] += 1
    return table


def enumeration_bound(form: QuadraticForm, N: int) -> int:
    """Half-width of a box containing every ``(m, n)`` with ``form(m, n) <= N``."""
    if N <= 0:
        return 0
    return int(math.ceil(math.sqrt(N / form.min_eigenvalue)))


def representation_count(form: QuadraticForm, N: int) -> int:
    """``#{(m, n) in Z^2 : form(m, n) = N}`` by exhaustive enumeration."""
    if N < 0:
        raise DomainError('N must be non-negative')
    if N == 0:
        return 1
    bound = enumeration_bound(form, N)
    axis = np.arange(-bound, bound + 1, dtype=np.int64)
    m, n = np.meshgrid(axis, axis, indexing='ij')
    return int(np.count_nonzero(form(m, n) == N))


def representation_counts(form: QuadraticForm, N_max: int) -> np.ndarray:
    """``counts[N] = representation_count(form, N)`` for ``0 <= N <= N_max``."""
    if N_max < 0:
        raise DomainError('N_max must be non-negative')
    bound = enumeration_bound(form, N_max)
    axis = np.arange(-bound, bound + 1, dtype=np.int64)
    m, n = np.meshgrid(axis, axis, indexing='ij')
    values = form(m, n).ravel()
    values = values[values <= N_max]
    logger.debug('enumerated %d lattice points for form %s up to %d',
                 values.size, form.coefficients, N_max)
    return np.bincount(values, minlength=N_max + 1).astype(np.int64)


def is_loeschian(N: int) -> bool:
    """True when ``N = m^2 + m n + n^2`` has an integer solution."""
    if N < 0:
        return False
    if N == 0:
        return True
    return divisor_count_mod(N, 1, 3) > divisor_count_mod(N, 2, 3)


def _eisenstein_rhs(l: np.ndarray, n: int) -> np.ndarray:
    s = np.arange(1, n, dtype=np.int64)
    # reduce l*s mod n exactly before scaling by 2 pi
    phases = (np.outer(l, s) % n).astype(float) * (2.0 * np.pi / n)
    cot = 1.0 / np.tan(np.pi * s / n)
    return -(np.sin(phases) @ cot) / (2.0 * n)


def eisenstein_residual(l: int, n: int) -> float:
    """``|((l/n)) - (-1/(2n)) sum sin(2 pi l s/n) cot(pi s/n)|``."""
    if n < 2:
        raise DomainError('n must be >= 2')
    lhs = float(sawtooth(Fraction(l, n)))
    rhs = float(_eisenstein_rhs(np.array([l], dtype=np.int64), n)[0])
    return abs(lhs - rhs)


def eisenstein_residuals(l_max: int, n: int) -> np.ndarray:
    """Residuals for every ``0 <= l <= l_max`` at fixed ``n`` (vectorized)."""
    if n < 2:
        raise DomainError('n must be >= 2')
    l = np.arange(l_max + 1, dtype=np.int64)
    rem = l % n
    lhs = np.where(rem == 0, 0.0, rem / n - 0.5)
    return np.abs(lhs - _eisenstein_rhs(l, n))
