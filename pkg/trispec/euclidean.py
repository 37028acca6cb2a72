"""Spectra of the euclidean triangle orbifolds.

Each euclidean triangle group ``G`` contains a maximal normal subgroup of
translations ``T`` with cyclic quotient ``S`` generated by ``gamma = alpha
beta``. The Laplacian on the torus ``R^2 / T`` has plane-wave eigenfunctions
``exp(i k . z)`` indexed by the dual lattice, with eigenvalue ``|k|^2``.
Normalizations:

- hexagonal (``(2,3,6)`` and ``(3,3,3)``): ``tau = (4 pi/sqrt3, 0)``,
  ``sigma = (2 pi/sqrt3, 2 pi)``, ``k_{m,n} = (sqrt3 m/2, (2n + m)/2)``,
  ``|k|^2 = m^2 + m n + n^2``;
- square (``(2,4,4)``): ``tau = (2 pi, 0)``, ``sigma = (0, 2 pi)``,
  ``k_{m,n} = (m, n)``, ``|k|^2 = m^2 + n^2``.

Non-trivial powers of ``gamma`` permute the plane waves without fixed
points, so the projection onto ``G``-invariant functions has trace
``mu_T(lambda) / |S|``.

Affine maps compose left to right as functions: the word ``ab`` is the map
``z -> alpha(beta(z))``.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Real
from typing import Dict, List, Optional, Tuple

import numpy as np

from .core import (GeometryClass, DomainError, VerificationError, SignatureLike,
                   TriangleSignature, require)
from .numtheory import DivisorFormula, QuadraticForm, HEXAGONAL_FORM, SQUARE_FORM
from .settings import DEFAULTS

logger = logging.getLogger(__name__)

HEXAGONAL = TriangleSignature(2, 3, 6)
SQUARE = TriangleSignature(2, 4, 4)
TRIANGULAR = TriangleSignature(3, 3, 3)

SQRT3 = math.sqrt(3.0)


@dataclass(frozen=True)
class LatticeModel:
    """Translation lattice of a euclidean group and its dual spectrum.

    ``wave_rows`` describes ``k_{m,n}`` exactly: component ``i`` equals
    ``sqrt(radicand_i) * (cm_i * m + cn_i * n)``.
    """

    signature: TriangleSignature
    kind: str
    tau: np.ndarray = field(compare=False)
    sigma: np.ndarray = field(compare=False)
    dual_form: QuadraticForm
    quotient_order: int
    divisor_formula: DivisorFormula
    wave_rows: Tuple[Tuple[int, Fraction, Fraction], ...]

    @property
    def wave_basis(self) -> np.ndarray:
        """2x2 matrix whose columns are ``k_{1,0}`` and ``k_{0,1}``."""
        return np.array([[math.sqrt(rad) * float(cm), math.sqrt(rad) * float(cn)]
                         for rad, cm, cn in self.wave_rows])


def lattice_model(sig: SignatureLike) -> LatticeModel:
    s = require(sig, GeometryClass.EUCLIDEAN)
    if s in (HEXAGONAL, TRIANGULAR):
        model = LatticeModel(
            signature=s,
            kind='hexagonal',
            tau=np.array([4.0 * math.pi / SQRT3, 0.0]),
            sigma=np.array([2.0 * math.pi / SQRT3, 2.0 * math.pi]),
            dual_form=HEXAGONAL_FORM,
            quotient_order=6 if s == HEXAGONAL else 3,
            divisor_formula=DivisorFormula(scale=6, modulus=3, plus=1, minus=2),
            wave_rows=((3, Fraction(1, 2), Fraction(0)), (1, Fraction(1, 2), Fraction(1))),
        )
    else:
        model = LatticeModel(
            signature=s,
            kind='square',
            tau=np.array([2.0 * math.pi, 0.0]),
            sigma=np.array([0.0, 2.0 * math.pi]),
            dual_form=SQUARE_FORM,
            quotient_order=4,
            divisor_formula=DivisorFormula(scale=4, modulus=4, plus=1, minus=3),
            wave_rows=((1, Fraction(1), Fraction(0)), (1, Fraction(0), Fraction(1))),
        )
    if abs(np.linalg.det(np.column_stack([model.tau, model.sigma]))) < 1e-12:
        raise VerificationError(f'{s}: translations are linearly dependent')
    return model


def wavevector(model: LatticeModel, m, n) -> np.ndarray:
    """``k_{m,n}``; ``m`` and ``n`` may be arrays (components on the first axis)."""
    return np.tensordot(model.wave_basis, np.array([m, n], dtype=float), axes=1)


def wavevector_norm_exact(model: LatticeModel, m: int, n: int) -> Fraction:
    """``|k_{m,n}|^2`` in rational arithmetic."""
    return sum((rad * (cm * m + cn * n) ** 2 for rad, cm, cn in model.wave_rows), Fraction(0))


def check_periodicity(model: LatticeModel, samples: int = 1000, seed: int = 0,
                      span: int = 1000) -> float:
    """Largest ``|exp(i k.tau) - 1|`` or ``|exp(i k.sigma) - 1|`` over random ``(m, n)``."""
    rng = np.random.default_rng(seed)
    mn = rng.integers(-span, span + 1, size=(2, samples))
    k = wavevector(model, mn[0], mn[1])
    worst = 0.0
    for shift in (model.tau, model.sigma):
        phase = np.exp(1j * (shift @ k))
        worst = max(worst, float(np.max(np.abs(phase - 1.0))))
    return worst


def _integral_lambda(lam) -> Optional[int]:
    if isinstance(lam, bool) or not isinstance(lam, Real):
        raise DomainError(f'eigenvalue {lam!r} is not a real number')
    if lam < 0:
        raise DomainError('eigenvalues are non-negative')
    if isinstance(lam, int):
        return lam
    if float(lam).is_integer():
        return int(lam)
    return None


def torus_multiplicity(model: LatticeModel, lam: int) -> int:
    """Dimension of the ``lambda`` eigenspace on the torus ``R^2 / T``."""
    lam_int = _integral_lambda(lam)
    if lam_int is None:
        return 0
    if lam_int == 0:
        return 1
    value = model.divisor_formula.evaluate(lam_int)
    if value < 0:
        raise VerificationError(f'{model.kind}: negative torus multiplicity at {lam_int}')
    return value


def torus_multiplicities(model: LatticeModel, Lambda: int) -> np.ndarray:
    """``torus_multiplicity`` for every ``0 <= lambda <= Lambda`` (sieve-backed)."""
    if Lambda < 0:
        raise DomainError('Lambda must be non-negative')
    table = model.divisor_formula.table(Lambda)
    table[0] = 1
    return table


def orbifold_multiplicity(sig: SignatureLike, lam) -> int:
    """Multiplicity of ``lambda`` on the orbifold; non-integer ``lambda`` gives 0."""
    model = lattice_model(sig)
    lam_int = _integral_lambda(lam)
    if lam_int is None:
        return 0
    if lam_int == 0:
        return 1
    mult, rem = divmod(torus_multiplicity(model, lam_int), model.quotient_order)
    if rem:
        raise VerificationError(
            f'{model.signature}: |S|={model.quotient_order} does not divide mu_T({lam_int})')
    return mult


def orbifold_multiplicities(sig: SignatureLike, Lambda: int) -> np.ndarray:
    model = lattice_model(sig)
    torus = torus_multiplicities(model, Lambda)
    mult, rem = np.divmod(torus, model.quotient_order)
    bad = np.nonzero(rem[1:])[0]
    if bad.size:
        raise VerificationError(
            f'{model.signature}: |S| does not divide mu_T({int(bad[0]) + 1})')
    mult[0] = 1
    return mult


# --- the quotient S acting on the dual lattice -------------------------------


@dataclass(frozen=True)
class DualRotationMap:
    """Integer matrix ``M`` with ``psi_{m,n} o gamma = psi_{M (m,n)}``."""

    signature: TriangleSignature
    matrix: np.ndarray = field(compare=False)
    order: int

    def power(self, i: int) -> np.ndarray:
        return np.linalg.matrix_power(self.matrix, i % self.order)

    def apply(self, m: int, n: int, times: int = 1) -> Tuple[int, int]:
        mm, nn = self.power(times) @ np.array([m, n], dtype=np.int64)
        return int(mm), int(nn)


def _rotation(angle: float) -> np.ndarray:
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[c, -s], [s, c]])


def dual_rotation_map(sig: SignatureLike) -> DualRotationMap:
    """Index map of the counterclockwise rotation by ``2 pi / |S|``.

    ``psi(gamma z) = exp(i (gamma^T k) . z)``, so the rotated wavevector is
    re-expressed in the dual basis and rounded; the rounding error must
    vanish.
    """
    model = lattice_model(sig)
    order = model.quotient_order
    K = model.wave_basis
    gamma = _rotation(2.0 * math.pi / order)
    exact = np.linalg.solve(K, gamma.T @ K)
    M = np.rint(exact).astype(np.int64)
    mismatch = float(np.max(np.abs(exact - M)))
    if mismatch > DEFAULTS['relation_tol']:
        raise VerificationError(f'{model.signature}: rotated wavevectors leave the lattice '
                                f'(mismatch {mismatch:.3e})')
    det = int(round(np.linalg.det(M)))
    if det not in (1, -1):
        raise VerificationError(f'{model.signature}: dual map has det {det}')
    if not np.array_equal(np.linalg.matrix_power(M, order), np.eye(2, dtype=np.int64)):
        raise VerificationError(f'{model.signature}: M^{order} != I')
    a, b, c = model.dual_form.coefficients
    gram2 = np.array([[2 * a, b], [b, 2 * c]], dtype=np.int64)
    if not np.array_equal(M.T @ gram2 @ M, gram2):
        raise VerificationError(f'{model.signature}: dual map does not preserve the form')
    logger.debug('dual rotation map for %s: %s', model.signature, M.tolist())
    return DualRotationMap(model.signature, M, order)


@dataclass
class FixedPointReport:
    signature: TriangleSignature
    determinants: Dict[int, int]

    @property
    def passed(self) -> bool:
        return all(d != 0 for d in self.determinants.values())


def verify_fixed_point_free(sig: SignatureLike) -> FixedPointReport:
    """``det(M^i - I) != 0`` for ``1 <= i < |S|``: no plane wave is fixed by ``gamma^i``."""
    dual = dual_rotation_map(sig)
    dets = {}
    for i in range(1, dual.order):
        diff = dual.power(i) - np.eye(2, dtype=np.int64)
        dets[i] = int(diff[0, 0] * diff[1, 1] - diff[0, 1] * diff[1, 0])
    report = FixedPointReport(dual.signature, dets)
    if not report.passed:
        zero = [i for i, d in dets.items() if d == 0]
        raise VerificationError(f'{dual.signature}: gamma^{zero[0]} fixes a plane wave')
    return report


# --- affine realization of the generators ------------------------------------


@dataclass(frozen=True)
class AffineIsometry:
    """Orientation-preserving isometry ``z -> rotation @ z + translation``."""

    rotation: np.ndarray
    translation: np.ndarray

    @classmethod
    def identity(cls) -> 'AffineIsometry':
        return cls(np.eye(2), np.zeros(2))

    @classmethod
    def translation_by(cls, vector) -> 'AffineIsometry':
        return cls(np.eye(2), np.asarray(vector, dtype=float))

    @classmethod
    def rotation_about(cls, angle: float, center=(0.0, 0.0)) -> 'AffineIsometry':
        R = _rotation(angle)
        c = np.asarray(center, dtype=float)
        return cls(R, c - R @ c)

    @property
    def angle(self) -> float:
        """Rotation angle in ``[0, 2 pi)``."""
        return math.atan2(self.rotation[1, 0], self.rotation[0, 0]) % (2.0 * math.pi)

    def __matmul__(self, other: 'AffineIsometry') -> 'AffineIsometry':
        return AffineIsometry(self.rotation @ other.rotation,
                              self.rotation @ other.translation + self.translation)

    def __call__(self, point) -> np.ndarray:
        return self.rotation @ np.asarray(point, dtype=float) + self.translation

    def inverse(self) -> 'AffineIsometry':
        Rt = self.rotation.T
        return AffineIsometry(Rt, -Rt @ self.translation)

    def as_matrix(self) -> np.ndarray:
        """3x3 homogeneous matrix."""
        out = np.eye(3)
        out[:2, :2] = self.rotation
        out[:2, 2] = self.translation
        return out

    def distance(self, other: 'AffineIsometry') -> float:
        """Max of the wrapped angle difference and the translation difference."""
        dtheta = (self.angle - other.angle + math.pi) % (2.0 * math.pi) - math.pi
        return max(abs(dtheta), float(np.max(np.abs(self.translation - other.translation))))

    def is_close(self, other: 'AffineIsometry', tol: Optional[float] = None) -> bool:
        tol = DEFAULTS['relation_tol'] if tol is None else tol
        return self.distance(other) < tol


# Translation words and conjugation identities; letters a, b are the
# generators, t, s the translations tau, sigma; upper case is the inverse.
_WORDS = {
    HEXAGONAL: {
        'tau': 'abababa',
        'sigma': 'ababb',
        'conjugations': (('atA', 'T'), ('btB', 'Ts'), ('asA', 'S'), ('bsB', 'T')),
    },
    SQUARE: {
        'tau': 'bba',
        'sigma': 'ababa',
        'conjugations': (('atA', 'T'), ('btB', 's'), ('asA', 'S'), ('bsB', 'T')),
    },
    TRIANGULAR: {
        'tau': 'bba',
        'sigma': 'aba',
        'conjugations': (('atA', 'Ts'), ('btB', 'Ts'), ('asA', 'T'), ('bsB', 'T')),
    },
}

_GLYPHS = {'a': 'α', 'b': 'β', 't': 'τ', 's': 'σ'}


def invert_word(word: str) -> str:
    return word[::-1].swapcase()


def render_word(word: str) -> str:
    if not word:
        return 'e'
    return ' '.join(_GLYPHS[ch] if ch.islower() else _GLYPHS[ch.lower()] + '⁻¹' for ch in word)


def evaluate_word(word: str, letters: Dict[str, AffineIsometry]) -> AffineIsometry:
    result = AffineIsometry.identity()
    for ch in word:
        if ch.islower():
            result = result @ letters[ch]
        else:
            result = result @ letters[ch.lower()].inverse()
    return result


@dataclass
class RelationCheck:
    name: str
    error: float
    passed: bool


@dataclass
class AffineRealization:
    signature: TriangleSignature
    alpha: AffineIsometry
    beta: AffineIsometry
    alpha_center: np.ndarray
    checks: List[RelationCheck]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def _generators(sig: TriangleSignature, order: int, center: np.ndarray):
    gamma = AffineIsometry.rotation_about(-2.0 * math.pi / order)
    alpha = AffineIsometry.rotation_about(2.0 * math.pi / sig.p, center)
    beta = alpha.inverse() @ gamma
    return alpha, beta


def realize_generators_affine(sig: SignatureLike, strict: bool = True) -> AffineRealization:
    """Build ``alpha``, ``beta`` on the plane and check every relation.

    ``gamma = alpha beta`` is the clockwise rotation by ``2 pi / |S|`` about
    the origin and ``alpha`` the rotation by ``2 pi / p`` about a center
    solved so that the ``tau`` word is the model's ``tau``; ``beta =
    alpha^-1 gamma``. The presentation relations, both translation words
    and the conjugation identities (with their inverses) are then checked.
    With ``strict`` any failure raises :class:`VerificationError`.
    """
    model = lattice_model(sig)
    s = model.signature
    words = _WORDS[s]
    order = model.quotient_order
    tol = DEFAULTS['relation_tol']

    def tau_translation(center: np.ndarray) -> np.ndarray:
        alpha, beta = _generators(s, order, center)
        return evaluate_word(words['tau'], {'a': alpha, 'b': beta}).translation

    base = tau_translation(np.zeros(2))
    L = np.column_stack([tau_translation(e) - base for e in np.eye(2)])
    center = np.linalg.solve(L, model.tau - base)
    alpha, beta = _generators(s, order, center)
    logger.debug('%s: alpha center %s', s, center.tolist())

    letters = {'a': alpha, 'b': beta,
               't': AffineIsometry.translation_by(model.tau),
               's': AffineIsometry.translation_by(model.sigma)}
    identity = AffineIsometry.identity()
    checks: List[RelationCheck] = []

    def record(name: str, lhs: AffineIsometry, rhs: AffineIsometry) -> None:
        err = lhs.distance(rhs)
        checks.append(RelationCheck(name, err, err < tol))

    for word in ('a' * s.p, 'b' * s.q, 'ab' * s.r):
        record(f'{render_word(word)} = e', evaluate_word(word, letters), identity)
    for key, letter in (('tau', 't'), ('sigma', 's')):
        record(f'{render_word(words[key])} = {_GLYPHS[letter]}',
               evaluate_word(words[key], letters), letters[letter])
    for lhs, rhs in words['conjugations']:
        for left, right in ((lhs, rhs), (invert_word(lhs), invert_word(rhs))):
            record(f'{render_word(left)} = {render_word(right)}',
                   evaluate_word(left, letters), evaluate_word(right, letters))

    realization = AffineRealization(s, alpha, beta, center, checks)
    if strict and not realization.passed:
        failed = next(c for c in checks if not c.passed)
        raise VerificationError(f'{s}: relation {failed.name} fails (error {failed.error:.3e})')
    return realization


# --- counting ----------------------------------------------------------------


def leading_weyl_coefficient(sig: SignatureLike) -> float:
    """Leading coefficient ``c`` in ``N(Lambda) ~ c Lambda``."""
    model = lattice_model(sig)
    if model.kind == 'square':
        return math.pi / 4.0
    return 2.0 * math.pi / (SQRT3 * model.quotient_order)


@dataclass
class EuclideanCount:
    signature: TriangleSignature
    Lambda: int
    count: int
    coefficient: float

    @property
    def ratio(self) -> Optional[float]:
        return self.count / self.Lambda if self.Lambda else None

    @property
    def remainder(self) -> float:
        return self.count - self.coefficient * self.Lambda


def counting_euclidean(sig: SignatureLike, Lambda: int) -> EuclideanCount:
    """``N(Lambda) = sum_{lambda <= Lambda} mu(lambda)`` with the leading Weyl term."""
    if Lambda < 0:
        raise DomainError('Lambda must be non-negative')
    s = require(sig, GeometryClass.EUCLIDEAN)
    count = int(orbifold_multiplicities(s, Lambda).sum())
    return EuclideanCount(s, Lambda, count, leading_weyl_coefficient(s))
