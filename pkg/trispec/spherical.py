"""Spectra of the spherical triangle orbifolds.

The sphere eigenspace of ``lambda_l = l (l + 1)`` has dimension ``2l + 1``.
A finite rotation group ``G`` acts on it and the invariant subspace, whose
dimension is the orbifold multiplicity, is the image of the averaging
projection ``P = (1/|G|) sum_g g``. Its trace only needs the character of a
rotation by ``chi``, ``sin((l + 1/2) chi) / sin(chi / 2)``, summed over the
group's angle census.

Three independent routes to the multiplicity live here:

- :func:`multiplicity_closed` - exact integer closed forms (the reported value);
- :func:`multiplicity_charsum` - the character sum over :func:`angle_census`,
  floating point behind an integrality gate;
- :func:`multiplicity_eisenstein` - the dihedral sum simplified through the
  sawtooth identity.

:func:`generate_rotation_group` builds the groups as explicit 3x3 rotation
matrices so the censuses can be checked against real elements.

Angles are carried as exact fractions of a full turn (``chi = 2 pi t``).
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import astropy.units as u
from astropy.coordinates.matrix_utilities import rotation_matrix

from .core import (GeometryClass, DomainError, VerificationError, SignatureLike,
                   TriangleSignature, group_order, require)
from .numtheory import sawtooth
from .settings import DEFAULTS

logger = logging.getLogger(__name__)

TETRAHEDRAL = TriangleSignature(2, 3, 3)
OCTAHEDRAL = TriangleSignature(2, 3, 4)
ICOSAHEDRAL = TriangleSignature(2, 3, 5)


@dataclass(frozen=True)
class CensusEntry:
    turn: Fraction  # rotation angle chi = 2 pi * turn
    count: int

    @property
    def chi(self) -> float:
        return 2.0 * math.pi * float(self.turn)


@dataclass(frozen=True)
class AngleCensus:
    """Rotation angles of a spherical group with element counts.

    Entries are sorted by angle, pairwise distinct, lie in ``[0, 1)`` turns
    and include the identity ``(0, 1)``.
    """

    signature: TriangleSignature
    entries: Tuple[CensusEntry, ...]

    def __post_init__(self) -> None:
        turns = [e.turn for e in self.entries]
        if len(set(turns)) != len(turns):
            raise VerificationError(f'census of {self.signature} repeats an angle')
        if any(not 0 <= t < 1 for t in turns):
            raise VerificationError(f'census of {self.signature} has an angle outside [0, 2pi)')
        if self.as_dict().get(Fraction(0)) != 1:
            raise VerificationError(f'census of {self.signature} lacks the identity')

    @property
    def total(self) -> int:
        return sum(e.count for e in self.entries)

    def as_dict(self) -> Dict[Fraction, int]:
        return {e.turn: e.count for e in self.entries}

    def count_at(self, turn: Fraction) -> int:
        return self.as_dict().get(Fraction(turn), 0)


def _census(sig: TriangleSignature, counts: Dict[Fraction, int]) -> AngleCensus:
    entries = tuple(CensusEntry(t, c) for t, c in sorted(counts.items()))
    census = AngleCensus(sig, entries)
    if census.total != group_order(sig):
        raise VerificationError(f'census of {sig} sums to {census.total}, not {group_order(sig)}')
    return census


def _add_axis_powers(counts: Dict[Fraction, int], order: int, axes: int) -> None:
    """Add the non-trivial powers of a rotation of ``order`` about ``axes`` axes."""
    for s in range(1, order):
        turn = Fraction(s, order)
        counts[turn] = counts.get(turn, 0) + axes


def angle_census(sig: SignatureLike) -> AngleCensus:
    """Angle census whose weighted character sum gives the trace of ``P``.

    ``(2,2,n)``: the powers of an order-``n`` rotation plus ``n`` half turns
    (merged with the half turn ``s = n/2`` when ``n`` is even).
    ``(2,3,3)``: 3 half turns, 4 axes of order 3.
    ``(2,3,4)``: 6 edge half turns, 4 axes of order 3, 3 axes of order 4.
    ``(2,3,5)``: 15 half turns, 10 axes of order 3, 6 axes of order 5.
    """
    s = require(sig, GeometryClass.SPHERICAL)
    counts: Dict[Fraction, int] = {Fraction(0): 1}
    half = Fraction(1, 2)
    if s.q == 2:
        _add_axis_powers(counts, s.r, 1)
        counts[half] = counts.get(half, 0) + s.r
    elif s == TETRAHEDRAL:
        counts[half] = 3
        _add_axis_powers(counts, 3, 4)
    elif s == OCTAHEDRAL:
        counts[half] = 6
        _add_axis_powers(counts, 3, 4)
        _add_axis_powers(counts, 4, 3)
    elif s == ICOSAHEDRAL:
        counts[half] = 15
        _add_axis_powers(counts, 3, 10)
        _add_axis_powers(counts, 5, 6)
    else:  # pragma: no cover - classify() admits no other spherical triple
        raise VerificationError(f'no census for {s}')
    return _census(s, counts)


def character_trace(l: int, chi: float) -> float:
    """Character ``sin((l + 1/2) chi) / sin(chi / 2)``; ``2l + 1`` at ``chi = 0``."""
    if l < 0:
        raise DomainError('degree l must be non-negative')
    if chi == 0:
        return float(2 * l + 1)
    return math.sin((l + 0.5) * chi) / math.sin(chi / 2.0)


def _characters(degrees: np.ndarray, turn: Fraction) -> np.ndarray:
    """Vectorized character for exact ``turn``; the phase is reduced in integers."""
    if turn == 0:
        return (2 * degrees + 1).astype(float)
    a, b = turn.numerator, turn.denominator
    # sin((l + 1/2) 2 pi a/b) = sin(pi ((2l + 1) a mod 2b) / b)
    phase = ((2 * degrees + 1) * a) % (2 * b)
    return np.sin(np.pi * phase / b) / math.sin(math.pi * a / b)


def _gate(value: float, label: str) -> int:
    nearest = round(value)
    if abs(value - nearest) >= DEFAULTS['integrality_tol']:
        raise VerificationError(f'{label}: character sum {value!r} is not an integer')
    if nearest < 0:
        raise VerificationError(f'{label}: negative multiplicity {nearest}')
    return int(nearest)


def charsum_values(sig: SignatureLike, l_max: int) -> np.ndarray:
    """Pre-rounding character sums ``tr P(lambda_l)`` for ``0 <= l <= l_max``."""
    census = angle_census(sig)
    degrees = np.arange(l_max + 1, dtype=np.int64)
    total = np.zeros(l_max + 1)
    for entry in census.entries:
        total += entry.count * _characters(degrees, entry.turn)
    return total / census.total


def multiplicity_charsum(sig: SignatureLike, l: int) -> int:
    """Multiplicity as the trace of the averaging projection (character sum)."""
    if l < 0:
        raise DomainError('degree l must be non-negative')
    census = angle_census(sig)
    value = sum(e.count * character_trace(l, e.chi) for e in census.entries) / census.total
    return _gate(value, f'{census.signature} l={l}')


def multiplicity_charsum_table(sig: SignatureLike, l_max: int) -> np.ndarray:
    s = require(sig, GeometryClass.SPHERICAL)
    values = charsum_values(s, l_max)
    return np.array([_gate(v, f'{s} l={l}') for l, v in enumerate(values.tolist())],
                    dtype=np.int64)


def multiplicity_closed(sig: SignatureLike, l: int) -> int:
    """Closed-form multiplicity of ``lambda_l`` in integer arithmetic."""
    s = require(sig, GeometryClass.SPHERICAL)
    if l < 0:
        raise DomainError('degree l must be non-negative')
    sign = 1 if l % 2 == 0 else -1
    if s.q == 2:
        return l // s.r + (1 + sign) // 2
    tail, rem = divmod(3 + sign - 2 * l, 4)
    assert rem == 0
    if s == TETRAHEDRAL:
        return 2 * (l // 3) + tail
    if s == OCTAHEDRAL:
        return l // 3 + l // 4 + tail
    return l // 3 + l // 5 + tail


def multiplicity_eisenstein(n: int, l: int) -> int:
    """Dihedral multiplicity with the sine-cotangent sum replaced by ``-2n ((l/n))``.

    The remaining cosine sum is evaluated numerically and the result passes
    the same integrality gate as the character sum.
    """
    if n < 2 or l < 0:
        raise DomainError('need n >= 2 and l >= 0')
    sign = 1 if l % 2 == 0 else -1
    exact = 2 * l + 1 + sign * n - 2 * n * sawtooth(Fraction(l, n))
    s = np.arange(1, n, dtype=np.int64)
    cosines = float(np.cos(2.0 * np.pi * ((l * s) % n) / n).sum())
    return _gate((float(exact) + cosines) / (2 * n), f'(2,2,{n}) l={l} eisenstein')


@dataclass
class RotationGroupRealization:
    """Explicit rotation matrices for a spherical triangle group."""

    signature: TriangleSignature
    A: np.ndarray
    B: np.ndarray
    matrices: np.ndarray = field(repr=False)

    @property
    def order(self) -> int:
        return int(self.matrices.shape[0])


def _generator_axis_angle(sig: TriangleSignature) -> float:
    """Angle between the axes of A and B making AB a rotation by 2 pi / r.

    Composing half-angle quaternions, the scalar part of the product is
    ``cos(pi/p) cos(pi/q) - sin(pi/p) sin(pi/q) cos(theta)``; it must equal
    ``cos(pi/r)``.
    """
    a, b, c = (math.pi / sig.p, math.pi / sig.q, math.pi / sig.r)
    cos_theta = (math.cos(a) * math.cos(b) - math.cos(c)) / (math.sin(a) * math.sin(b))
    if abs(cos_theta) > 1.0 + 1e-12:
        raise VerificationError(f'no generator axis angle for {sig}')
    return math.acos(max(-1.0, min(1.0, cos_theta)))


def _is_identity(m: np.ndarray, tol: float) -> bool:
    return bool(np.max(np.abs(m - np.eye(m.shape[0]))) < tol)


def generate_rotation_group(sig: SignatureLike) -> RotationGroupRealization:
    """Close ``{A, B}`` under multiplication and check order and relations.

    ``A`` rotates by ``2 pi / p`` about z; ``B`` rotates by ``2 pi / q``
    about an axis in the xz plane at the angle fixed by
    :func:`_generator_axis_angle`. Both are active rotations: astropy's
    ``rotation_matrix`` rotates the frame, so its output is transposed.
    """
    s = require(sig, GeometryClass.SPHERICAL)
    if s.q == 2 and s.r > DEFAULTS['max_dihedral_n']:
        raise DomainError(f'dihedral realization limited to n <= {DEFAULTS["max_dihedral_n"]}')
    order = group_order(s)
    tol = DEFAULTS['dedup_tol']
    theta = _generator_axis_angle(s)
    A = np.asarray(rotation_matrix(360.0 / s.p * u.deg, 'z'), dtype=float).T
    B = np.asarray(rotation_matrix(360.0 / s.q * u.deg, [math.sin(theta), 0.0, math.cos(theta)]),
                   dtype=float).T

    limit = 2 * order
    found = np.empty((limit + 2, 3, 3))
    found[0] = np.eye(3)
    size = 1
    frontier = [np.eye(3)]
    while frontier:
        fresh = []
        for g in frontier:
            for h in (A, B):
                prod = g @ h
                if np.min(np.max(np.abs(found[:size] - prod), axis=(1, 2))) < tol:
                    continue
                if size > limit:
                    raise VerificationError(
                        f'closure of {s} exceeded {limit} elements; bad generator axes')
                found[size] = prod
                size += 1
                fresh.append(prod)
        frontier = fresh
    matrices = found[:size].copy()
    logger.debug('closed %s: %d matrices (axis angle %.6f rad)', s, size, theta)

    if size != order:
        raise VerificationError(f'{s}: generated {size} elements, expected {order}')
    relation_tol = DEFAULTS['relation_tol']
    for label, base, power in (('A^p', A, s.p), ('B^q', B, s.q), ('(AB)^r', A @ B, s.r)):
        if not _is_identity(np.linalg.matrix_power(base, power), relation_tol):
            raise VerificationError(f'{s}: relation {label} = e fails')
    gram = np.einsum('kji,kjl->kil', matrices, matrices)
    if np.max(np.abs(gram - np.eye(3))) > relation_tol or \
            np.max(np.abs(np.linalg.det(matrices) - 1.0)) > relation_tol:
        raise VerificationError(f'{s}: generated a matrix outside SO(3)')
    return RotationGroupRealization(s, A, B, matrices)


def rotation_turn(matrix: np.ndarray) -> float:
    """Signed rotation angle in turns, with the axis oriented canonically.

    The axis is flipped so that its first non-negligible component is
    positive; the angle is then read in ``[0, 1)`` turns.
    """
    cos_t = (np.trace(matrix) - 1.0) / 2.0
    v = np.array([matrix[2, 1] - matrix[1, 2],
                  matrix[0, 2] - matrix[2, 0],
                  matrix[1, 0] - matrix[0, 1]])
    sin_t = np.linalg.norm(v) / 2.0
    theta = math.atan2(sin_t, cos_t)
    if sin_t < 1e-9:
        return 0.0 if cos_t > 0 else 0.5
    axis = v / (2.0 * sin_t)
    lead = axis[np.argmax(np.abs(axis) > 1e-6)]
    if lead < 0:
        theta = 2.0 * math.pi - theta
    return theta / (2.0 * math.pi)


def census_from_matrices(realization: RotationGroupRealization) -> AngleCensus:
    """Bucket the generated matrices by signed rotation angle."""
    max_den = 2 * realization.order
    counts: Dict[Fraction, int] = {}
    for m in realization.matrices:
        t = rotation_turn(m)
        turn = Fraction(t).limit_denominator(max_den)
        if abs(float(turn) - t) > 1e-6:
            raise VerificationError(f'{realization.signature}: angle {t} turns is not rational')
        turn = turn % 1
        counts[turn] = counts.get(turn, 0) + 1
    return _census(realization.signature, counts)


def multiplicity_table(sig: SignatureLike, l_max: int) -> np.ndarray:
    s = require(sig, GeometryClass.SPHERICAL)
    return np.array([multiplicity_closed(s, l) for l in range(l_max + 1)], dtype=np.int64)


def counting_spherical(sig: SignatureLike, L: int) -> int:
    """``N(L) = sum_{l <= L} mu(lambda_l)``."""
    if L < 0:
        raise DomainError('L must be non-negative')
    return int(multiplicity_table(sig, L).sum())


def counting_dihedral_closed(n: int, L: int) -> int:
    """``N(L)`` for ``(2,2,n)`` without summing multiplicities.

    ``N(L) = 1 + floor(L/2) + sum_{k=1}^{K} (L - k n + 1)`` with
    ``K = floor(L/n)``; the arithmetic series is summed in closed form.
    """
    if n < 2 or L < 0:
        raise DomainError('need n >= 2 and L >= 0')
    K = L // n
    return 1 + L // 2 + K * (L + 1) - n * K * (K + 1) // 2


def leading_weyl_coefficient(sig: SignatureLike) -> Fraction:
    """Coefficient ``1/|G|`` of ``(L + 1)^2`` in ``N(L)``."""
    return Fraction(1, group_order(sig))


def weyl_remainder(sig: SignatureLike, L_max: int) -> np.ndarray:
    """``N(L) - (L + 1)^2 / |G|`` for ``0 <= L <= L_max``."""
    order = group_order(sig)
    counts = np.cumsum(multiplicity_table(sig, L_max))
    L = np.arange(L_max + 1, dtype=np.int64)
    return (order * counts - (L + 1) ** 2) / order


def check_weyl_bounded(sig: SignatureLike, L_max: Optional[int] = None,
                       window: Optional[int] = None) -> Tuple[float, float, bool]:
    """Compare the largest remainder up to ``L_max`` with the one up to ``window``.

    Returns ``(max_all, max_window, ok)`` where ``ok`` means
    ``max_all <= max_window + 1``.
    """
    L_max = DEFAULTS['weyl_max_degree'] if L_max is None else L_max
    window = DEFAULTS['weyl_window'] if window is None else window
    rem = np.abs(weyl_remainder(sig, L_max))
    max_all = float(rem.max())
    max_window = float(rem[:min(window, L_max) + 1].max())
    return max_all, max_window, max_all <= max_window + 1.0


def check_subgroup_tower(l_max: int) -> List[str]:
    """Multiplicity inequalities forced by D2 < A4 < S4 and A4 < A5.

    Returns a description of every violation (empty when all hold).
    """
    chains: Sequence[Tuple[TriangleSignature, TriangleSignature]] = (
        (TriangleSignature(2, 2, 2), TETRAHEDRAL),
        (TETRAHEDRAL, OCTAHEDRAL),
        (TETRAHEDRAL, ICOSAHEDRAL),
    )
    failures = []
    for small, big in chains:
        sub = multiplicity_table(small, l_max)
        sup = multiplicity_table(big, l_max)
        for l in np.nonzero(sup > sub)[0].tolist():
            failures.append(f'mu{big}({l})={sup[l]} > mu{small}({l})={sub[l]}')
    return failures
