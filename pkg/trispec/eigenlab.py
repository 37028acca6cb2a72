"""Explicit eigenfunctions and the rank of the averaging projection.

The multiplicity of an eigenvalue on a quotient is the trace of the
projection ``P f = mean_g f o g`` on the covering eigenspace, and the trace
of a projection is its rank. This module computes that rank numerically from
sampled basis functions, independently of every formula in
:mod:`trispec.spherical` and :mod:`trispec.euclidean`.

Legendre convention: Ferrers functions without the Condon-Shortley phase,
so ``P_m^m(x) = (2m - 1)!! (1 - x^2)^(m/2)`` is non-negative on [-1, 1],
and ``P_l^-m = (-1)^m (l - m)!/(l + m)! P_l^m``. The sphere basis is
``psi_{l,m}(theta, phi) = exp(i m phi) P_l^m(cos theta)``. Ranks do not
depend on the convention because every column is rescaled before the SVD.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np
import astropy.units as u
from astropy.coordinates import cartesian_to_spherical
from scipy.special import lpmv

from .core import (DomainError, GeometryClass, SignatureLike, TriangleSignature,
                   VerificationError, require)
from .euclidean import (LatticeModel, dual_rotation_map, lattice_model,
                        orbifold_multiplicity, torus_multiplicity, wavevector)
from .numtheory import enumeration_bound
from .settings import DEFAULTS
from .spherical import generate_rotation_group, multiplicity_closed

logger = logging.getLogger(__name__)

MAX_DEGREE = 30


def legendre_table(l_max: int, m: int, x) -> np.ndarray:
    """Rows ``P_m^m(x), ..., P_{l_max}^m(x)`` for ``m >= 0``."""
    if m < 0:
        raise DomainError('legendre_table takes m >= 0')
    x = np.clip(np.asarray(x, dtype=float), -1.0, 1.0)
    if l_max < m:
        return np.zeros((0,) + x.shape)
    degrees = np.arange(m, l_max + 1, dtype=float).reshape((-1,) + (1,) * x.ndim)
    # scipy's lpmv carries the Condon-Shortley phase
    return (-1.0) ** m * lpmv(m, degrees, x[np.newaxis])


def _check_order(l: int, m: int) -> None:
    if l < 0:
        raise DomainError('degree l must be non-negative')
    if abs(m) > l:
        raise DomainError(f'order |m|={abs(m)} exceeds degree l={l}')


def sphere_basis_eval(l: int, m: int, theta, phi):
    """``exp(i m phi) P_l^m(cos theta)``; scalar or array arguments."""
    _check_order(l, m)
    am = abs(m)
    legendre = legendre_table(l, am, np.cos(theta))[-1]
    if m < 0:
        legendre = legendre * ((-1) ** am * math.factorial(l - am) / math.factorial(l + am))
    value = np.exp(1j * m * np.asarray(phi, dtype=float)) * legendre
    return complex(value) if np.ndim(value) == 0 else value


def degree_basis(l: int, theta, phi) -> np.ndarray:
    """Matrix with one column per ``m = -l..l`` of the degree-``l`` basis."""
    if l < 0:
        raise DomainError('degree l must be non-negative')
    theta = np.asarray(theta, dtype=float).ravel()
    phi = np.asarray(phi, dtype=float).ravel()
    x = np.cos(theta)
    cols = np.empty((theta.size, 2 * l + 1), dtype=complex)
    for am in range(l + 1):
        p = legendre_table(l, am, x)[-1]
        cols[:, l + am] = np.exp(1j * am * phi) * p
        if am:
            scale = (-1) ** am * math.factorial(l - am) / math.factorial(l + am)
            cols[:, l - am] = np.exp(-1j * am * phi) * p * scale
    return cols


def gram_matrix(l: int, nodes: Optional[int] = None) -> np.ndarray:
    """Gram matrix of the degree-``l`` basis under Gauss-Legendre x uniform-phi quadrature."""
    nodes = 2 * l + 2 if nodes is None else nodes
    if nodes < l + 1:
        raise DomainError('quadrature needs at least l + 1 nodes')
    x, w = np.polynomial.legendre.leggauss(nodes)
    phi = np.arange(nodes) * (2.0 * np.pi / nodes)
    X, PHI = np.meshgrid(x, phi, indexing='ij')
    weights = np.repeat(w, nodes) * (2.0 * np.pi / nodes)
    Y = degree_basis(l, np.arccos(X.ravel()), PHI.ravel())
    return (Y.conj().T * weights) @ Y


def max_relative_offdiagonal(G: np.ndarray) -> float:
    """Largest ``|G_ij| / sqrt(G_ii G_jj)`` over ``i != j``."""
    d = np.sqrt(np.abs(np.diag(G)))
    rel = np.abs(G) / np.outer(d, d)
    np.fill_diagonal(rel, 0.0)
    return float(rel.max()) if rel.size else 0.0


def sample_sphere(samples: int, seed: int) -> np.ndarray:
    """``samples`` uniform points on the unit sphere as rows of an array."""
    rng = np.random.default_rng(seed)
    pts = rng.normal(size=(samples, 3))
    return pts / np.linalg.norm(pts, axis=1, keepdims=True)


def _to_angles(points: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    _, lat, lon = cartesian_to_spherical(points[:, 0], points[:, 1], points[:, 2])
    theta = np.pi / 2.0 - lat.to_value(u.rad)
    return theta, lon.to_value(u.rad)


def _basis_at(l: int, points: np.ndarray) -> np.ndarray:
    return degree_basis(l, *_to_angles(points))


def _averaged(matrices: np.ndarray, l: int, points: np.ndarray) -> np.ndarray:
    rotated = np.einsum('gij,nj->gni', matrices, points).reshape(-1, 3)
    values = _basis_at(l, rotated).reshape(matrices.shape[0], points.shape[0], 2 * l + 1)
    return values.mean(axis=0)


@dataclass
class ProjectionRankReport:
    signature: TriangleSignature
    eigenvalue: int
    dimension: int
    rank: int
    expected: int
    smallest_retained: float
    largest_discarded: float
    degree: Optional[int] = None
    samples: Optional[int] = None
    seed: Optional[int] = None

    @property
    def gap_ratio(self) -> float:
        if self.largest_discarded == 0.0:
            return math.inf
        return self.smallest_retained / self.largest_discarded

    @property
    def conclusive(self) -> bool:
        return self.gap_ratio >= DEFAULTS['rank_gap']

    @property
    def passed(self) -> bool:
        return self.conclusive and self.rank == self.expected

    def raise_for_status(self) -> None:
        label = f'{self.signature} lambda={self.eigenvalue}'
        if not self.conclusive:
            raise VerificationError(f'{label}: inconclusive rank (gap ratio {self.gap_ratio:.3g})')
        if self.rank != self.expected:
            raise VerificationError(f'{label}: rank {self.rank} != multiplicity {self.expected}')


def _numerical_rank(matrix: np.ndarray, reference: float, tol: float) -> Tuple[int, float, float]:
    sv = np.linalg.svd(matrix, compute_uv=False)
    rank = int(np.count_nonzero(sv > tol * reference))
    retained = float(sv[rank - 1]) if rank else reference
    discarded = float(sv[rank]) if rank < sv.size else 0.0
    return rank, retained, discarded


def project_and_rank_sphere(sig: SignatureLike, l: int, samples: Optional[int] = None,
                            tol: Optional[float] = None, seed: Optional[int] = None
                            ) -> ProjectionRankReport:
    """Rank of the group-averaged degree-``l`` basis sampled at random points.

    Each averaged column is divided by the sample norm of the unaveraged
    column, so the rank threshold is relative to the unaveraged spectrum.
    """
    s = require(sig, GeometryClass.SPHERICAL)
    if not 0 <= l <= MAX_DEGREE:
        raise DomainError(f'degree must lie in [0, {MAX_DEGREE}]')
    dim = 2 * l + 1
    samples = 8 * dim if samples is None else samples
    if samples < 4 * dim:
        raise DomainError(f'need at least {4 * dim} samples for l={l}')
    tol = DEFAULTS['rank_tol'] if tol is None else tol
    seed = DEFAULTS['default_seed'] if seed is None else seed

    realization = generate_rotation_group(s)
    points = sample_sphere(samples, seed)
    Y = _basis_at(l, points)
    norms = np.linalg.norm(Y, axis=0)
    projected = _averaged(realization.matrices, l, points) / norms
    reference = float(np.linalg.svd(Y / norms, compute_uv=False)[0])
    rank, retained, discarded = _numerical_rank(projected, reference, tol)
    logger.debug('%s l=%d: rank %d, retained %.3e, discarded %.3e',
                 s, l, rank, retained, discarded)
    return ProjectionRankReport(s, l * (l + 1), dim, rank, multiplicity_closed(s, l),
                                retained, discarded, degree=l, samples=samples, seed=seed)


def projection_idempotence(sig: SignatureLike, l: int, samples: Optional[int] = None,
                           seed: Optional[int] = None) -> float:
    """Relative deviation ``||P(P f) - P f|| / ||P f||`` on sampled basis functions."""
    s = require(sig, GeometryClass.SPHERICAL)
    if not 0 <= l <= MAX_DEGREE:
        raise DomainError(f'degree must lie in [0, {MAX_DEGREE}]')
    samples = 4 * (2 * l + 1) if samples is None else samples
    seed = DEFAULTS['default_seed'] if seed is None else seed
    matrices = generate_rotation_group(s).matrices
    points = sample_sphere(samples, seed)
    once = _averaged(matrices, l, points)
    rotated = np.einsum('gij,nj->gni', matrices, points).reshape(-1, 3)
    twice = _averaged(matrices, l, rotated).reshape(matrices.shape[0], samples, -1).mean(axis=0)
    scale = np.linalg.norm(once)
    full = np.linalg.norm(_basis_at(l, points))
    if scale < DEFAULTS['rank_tol'] * full:
        scale = full
    return float(np.linalg.norm(twice - once) / scale)


def torus_basis_eval(model: LatticeModel, m: int, n: int, x, y):
    """``psi_{m,n}(x, y) = exp(i k_{m,n} . (x, y))``."""
    k = wavevector(model, m, n)
    value = np.exp(1j * (k[0] * np.asarray(x, dtype=float) + k[1] * np.asarray(y, dtype=float)))
    return complex(value) if np.ndim(value) == 0 else value


def check_torus_rotation(sig: SignatureLike, samples: int = 64, seed: Optional[int] = None,
                         span: int = 6) -> float:
    """Largest ``|psi_{m,n}(gamma z) - psi_{M(m,n)}(z)|`` over random points and indices.

    ``gamma`` is the counterclockwise rotation by ``2 pi / |S|`` about the origin.
    """
    model = lattice_model(sig)
    dual = dual_rotation_map(model.signature)
    seed = DEFAULTS['default_seed'] if seed is None else seed
    rng = np.random.default_rng(seed)
    z = rng.uniform(-10.0, 10.0, size=(2, samples))
    angle = 2.0 * math.pi / dual.order
    c, s_ = math.cos(angle), math.sin(angle)
    gz = np.array([c * z[0] - s_ * z[1], s_ * z[0] + c * z[1]])
    worst = 0.0
    for m in range(-span, span + 1):
        for n in range(-span, span + 1):
            mm, nn = dual.apply(m, n)
            lhs = torus_basis_eval(model, m, n, gz[0], gz[1])
            rhs = torus_basis_eval(model, mm, nn, z[0], z[1])
            worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    return worst


def index_pairs(model: LatticeModel, lam: int) -> List[Tuple[int, int]]:
    """All ``(m, n)`` with ``dual_form(m, n) == lam``, sorted."""
    bound = enumeration_bound(model.dual_form, lam)
    axis = np.arange(-bound, bound + 1)
    m, n = np.meshgrid(axis, axis, indexing='ij')
    hit = model.dual_form(m, n) == lam
    return sorted(zip(m[hit].tolist(), n[hit].tolist()))


def project_and_rank_torus(sig: SignatureLike, lam: int, tol: Optional[float] = None
                           ) -> ProjectionRankReport:
    """Rank of the orbit-averaging matrix on the plane waves of eigenvalue ``lam``."""
    model = lattice_model(sig)
    s = model.signature
    tol = DEFAULTS['rank_tol'] if tol is None else tol
    if lam <= 0 or lam > DEFAULTS['eigenlab_max_lambda']:
        raise DomainError(f'lambda must lie in [1, {DEFAULTS["eigenlab_max_lambda"]}]')
    expected_dim = torus_multiplicity(model, lam)
    if expected_dim == 0:
        raise DomainError(f'{lam} is not an eigenvalue of the {model.kind} torus')
    pairs = index_pairs(model, lam)
    if len(pairs) != expected_dim:
        raise VerificationError(f'{s}: {len(pairs)} index pairs at {lam}, expected {expected_dim}')
    position = {pair: i for i, pair in enumerate(pairs)}
    dual = dual_rotation_map(s)
    P = np.zeros((len(pairs), len(pairs)))
    for j, (m, n) in enumerate(pairs):
        for k in range(dual.order):
            P[position[dual.apply(m, n, k)], j] += 1.0 / dual.order
    rank, retained, discarded = _numerical_rank(P, 1.0, tol)
    logger.debug('%s lambda=%d: %d pairs, rank %d', s, lam, len(pairs), rank)
    return ProjectionRankReport(s, lam, len(pairs), rank, orbifold_multiplicity(s, lam),
                                retained, discarded)


def dihedral_invariant_basis(n: int, l: int) -> List[Tuple[int, str]]:
    """Real basis ``(m, branch)`` of the ``D_n``-invariant degree-``l`` harmonics.

    ``m`` runs over multiples of ``n``; the half-turn about the x axis maps
    ``P_l^m(cos theta)`` to ``(-1)^(l+m)`` times itself and flips the sign of
    ``sin(m phi)``, so exactly one of the cosine and sine branches survives.
    """
    if n < 2 or l < 0:
        raise DomainError('need n >= 2 and l >= 0')
    basis = [(0, 'cos')] if l % 2 == 0 else []
    for m in range(n, l + 1, n):
        basis.append((m, 'cos' if (l + m) % 2 == 0 else 'sin'))
    return basis


def dihedral_legendre_multiplicity(n: int, l: int) -> int:
    return len(dihedral_invariant_basis(n, l))


def real_basis_eval(l: int, m: int, branch: str, theta, phi):
    """``cos(m phi) P_l^m`` or ``sin(m phi) P_l^m`` for ``m >= 0``."""
    _check_order(l, m)
    p = legendre_table(l, m, np.cos(theta))[-1]
    trig = np.cos if branch == 'cos' else np.sin
    return trig(m * np.asarray(phi, dtype=float)) * p
