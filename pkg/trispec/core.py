"""Triangle-group signatures and their geometry.

A signature ``(p, q, r)`` names the group generated by ``alpha`` and
``beta`` subject to ``alpha^p = beta^q = (alpha beta)^r = e``. The sign of
``1/p + 1/q + 1/r - 1`` decides whether the group acts on the sphere, the
plane or the hyperbolic plane. Everything here is exact: the angle sum is a
:class:`fractions.Fraction` and geometry is never decided in floating point.

Conventions
- Signatures are stored sorted, ``p <= q <= r``; every downstream table is
  keyed on the sorted triple.
- Spherical eigenvalues are ``l (l + 1)`` on the unit sphere. Euclidean
  eigenvalues are integers under the lattice normalization documented in
  :mod:`trispec.euclidean`.
"""
from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Tuple, Union

logger = logging.getLogger(__name__)


class TrispecError(Exception):
    """Base class for errors raised by trispec."""


class DomainError(TrispecError, ValueError):
    """An argument lies outside the domain of the operation."""


class NonCocompactError(DomainError):
    """The signature contains an infinite entry (e.g. ``(2, 2, inf)``)."""


class GeometryError(DomainError):
    """The signature has the wrong geometry class for the operation."""


class VerificationError(TrispecError, RuntimeError):
    """An internal consistency gate failed; the message names the case."""


class GeometryClass(str, enum.Enum):
    SPHERICAL = 'spherical'
    EUCLIDEAN = 'euclidean'
    HYPERBOLIC = 'hyperbolic'

    def __str__(self) -> str:
        return self.value


def _as_entry(value: Union[int, float, str]) -> int:
    if isinstance(value, str):
        text = value.strip().lower()
        if text in ('inf', 'infinity', '∞'):
            raise NonCocompactError('signatures with an infinite entry are not co-compact')
        try:
            value = int(text)
        except ValueError:
            raise DomainError(f'signature entry {value!r} is not an integer') from None
    if isinstance(value, float):
        if math.isinf(value):
            raise NonCocompactError('signatures with an infinite entry are not co-compact')
        if not value.is_integer():
            raise DomainError(f'signature entry {value!r} is not an integer')
        value = int(value)
    if isinstance(value, bool) or not isinstance(value, int):
        raise DomainError(f'signature entry {value!r} is not an integer')
    if value < 2:
        raise DomainError(f'signature entries must be >= 2, got {value}')
    return value


@dataclass(frozen=True, order=True)
class TriangleSignature:
    """Sorted triple ``(p, q, r)`` with every entry ``>= 2``.

    Construction canonicalizes: ``TriangleSignature(5, 2, 3)`` is stored
    as ``(2, 3, 5)``. Sorting an already sorted triple is the identity.
    """

    p: int
    q: int
    r: int

    def __post_init__(self) -> None:
        entries = sorted(_as_entry(v) for v in (self.p, self.q, self.r))
        object.__setattr__(self, 'p', entries[0])
        object.__setattr__(self, 'q', entries[1])
        object.__setattr__(self, 'r', entries[2])

    def as_tuple(self) -> Tuple[int, int, int]:
        return (self.p, self.q, self.r)

    def __iter__(self):
        return iter(self.as_tuple())

    def __str__(self) -> str:
        return f'({self.p},{self.q},{self.r})'


SignatureLike = Union[TriangleSignature, Iterable[Union[int, float, str]]]


def canonical(sig: SignatureLike, *more: Union[int, float, str]) -> TriangleSignature:
    """Return the canonical signature for a triple given in any order.

    Accepts ``canonical(sig)``, ``canonical((p, q, r))`` or
    ``canonical(p, q, r)``. ``math.inf`` or ``"inf"`` as an entry raises
    :class:`NonCocompactError`.
    """
    if isinstance(sig, TriangleSignature) and not more:
        return sig
    if more:
        entries = (sig,) + more
    else:
        entries = tuple(sig)  # type: ignore[arg-type]
    if len(entries) != 3:
        raise DomainError(f'a signature has exactly three entries, got {len(entries)}')
    return TriangleSignature(*entries)


@dataclass(frozen=True)
class SpectrumEntry:
    """One eigenvalue of an orbifold Laplacian with its multiplicity.

    ``degree_l`` is set for spherical entries only, where
    ``lambda_ == degree_l * (degree_l + 1)``.
    """

    lambda_: int
    mult: int
    degree_l: Optional[int] = None

    def __post_init__(self) -> None:
        if self.mult < 0:
            raise DomainError(f'negative multiplicity {self.mult}')
        if self.degree_l is not None:
            if self.lambda_ != self.degree_l * (self.degree_l + 1):
                raise DomainError(f'lambda {self.lambda_} is not l(l+1) for l={self.degree_l}')
            if self.mult > 2 * self.degree_l + 1:
                raise DomainError(f'multiplicity {self.mult} exceeds 2l+1 for l={self.degree_l}')


def angle_sum(sig: SignatureLike) -> Fraction:
    """Exact ``1/p + 1/q + 1/r``."""
    s = canonical(sig)
    return Fraction(1, s.p) + Fraction(1, s.q) + Fraction(1, s.r)


def classify(sig: SignatureLike) -> GeometryClass:
    """Geometry class from the exact sign of ``1/p + 1/q + 1/r - 1``."""
    total = angle_sum(sig)
    if total > 1:
        return GeometryClass.SPHERICAL
    if total == 1:
        return GeometryClass.EUCLIDEAN
    return GeometryClass.HYPERBOLIC


def require(sig: SignatureLike, geometry: GeometryClass) -> TriangleSignature:
    """Canonicalize ``sig`` and raise :class:`GeometryError` unless it is ``geometry``."""
    s = canonical(sig)
    actual = classify(s)
    if actual is not geometry:
        if actual is GeometryClass.HYPERBOLIC:
            raise GeometryError(f'{s} is hyperbolic; hyperbolic spectra are not supported')
        raise GeometryError(f'{s} is {actual}, expected {geometry}')
    return s


def group_order(sig: SignatureLike) -> int:
    """Order ``2 / (1/p + 1/q + 1/r - 1)`` of a spherical triangle group."""
    s = require(sig, GeometryClass.SPHERICAL)
    order = Fraction(2) / (angle_sum(s) - 1)
    if order.denominator != 1:
        raise VerificationError(f'group order of {s} is not an integer: {order}')
    return int(order)


def enumerate_signatures(max_entry: int) -> Dict[GeometryClass, List[TriangleSignature]]:
    """All sorted signatures with ``r <= max_entry`` grouped by geometry."""
    if max_entry < 2:
        raise DomainError('max_entry must be >= 2')
    found: Dict[GeometryClass, List[TriangleSignature]] = {g: [] for g in GeometryClass}
    for p in range(2, max_entry + 1):
        for q in range(p, max_entry + 1):
            for r in range(q, max_entry + 1):
                sig = TriangleSignature(p, q, r)
                found[classify(sig)].append(sig)
    return found


def describe(sig: SignatureLike) -> Dict[str, object]:
    """Catalog description: geometry, family name and symmetry label."""
    from .data_manager import lookup_group

    s = canonical(sig)
    geometry = classify(s)
    info: Dict[str, object] = {'group': list(s.as_tuple()), 'geometry': str(geometry)}
    entry = lookup_group(s)
    if entry is not None:
        info['name'] = entry['name']
        info['symmetry'] = entry['symmetry']
    if geometry is GeometryClass.SPHERICAL:
        info['order'] = group_order(s)
    elif geometry is GeometryClass.EUCLIDEAN:
        from .euclidean import lattice_model

        info['quotient_order'] = lattice_model(s).quotient_order
    return info


def spectrum(sig: SignatureLike, max_value: int, by_degree: bool = False,
             include_zeros: bool = False) -> List[SpectrumEntry]:
    """List eigenvalues with multiplicities in ascending order.

    Spherical signatures list degrees with ``l (l + 1) <= max_value``, or
    ``l <= max_value`` when ``by_degree`` is set.
    Euclidean signatures list ``lambda <= max_value``. Zero multiplicities
    are dropped unless ``include_zeros`` is set.
    """
    if max_value < 0:
        raise DomainError('max_value must be non-negative')
    s = canonical(sig)
    geometry = classify(s)
    entries: List[SpectrumEntry] = []
    if geometry is GeometryClass.SPHERICAL:
        from .spherical import multiplicity_closed

        if by_degree:
            l_max = max_value
        else:
            l_max = (math.isqrt(4 * max_value + 1) - 1) // 2
        for l in range(l_max + 1):
            mult = multiplicity_closed(s, l)
            if mult or include_zeros:
                entries.append(SpectrumEntry(l * (l + 1), mult, l))
    elif geometry is GeometryClass.EUCLIDEAN:
        from .euclidean import orbifold_multiplicities

        mults = orbifold_multiplicities(s, max_value)
        for lam, mult in enumerate(mults.tolist()):
            if mult or include_zeros:
                entries.append(SpectrumEntry(lam, int(mult)))
    else:
        require(s, GeometryClass.SPHERICAL)
    logger.debug('spectrum %s up to %d: %d entries', s, max_value, len(entries))
    return entries
