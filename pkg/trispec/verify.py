"""Invariant suites behind ``trispec verify``.

Every suite expands into independent cases ``(label, function, args)``;
cases run in-process for ``jobs <= 1`` or on a process pool otherwise and
are collected with ``map``, so the result order never depends on ``jobs``.
A case that raises a :class:`TrispecError` becomes a failed check rather
than aborting the suite.
"""
from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from . import eigenlab, euclidean, spherical
from .core import TrispecError, TriangleSignature
from .numtheory import (divisor_count_mod,
                        divisor_residue_table, eisenstein_residuals, representation_count,
                        representation_counts)
from .settings import DEFAULTS

logger = logging.getLogger(__name__)

EUCLIDEAN_GROUPS = (euclidean.HEXAGONAL, euclidean.SQUARE, euclidean.TRIANGULAR)
POLYHEDRAL_GROUPS = (spherical.TETRAHEDRAL, spherical.OCTAHEDRAL, spherical.ICOSAHEDRAL)


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ''


@dataclass
class SuiteResult:
    name: str
    checks: List[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> List[CheckResult]:
        return [c for c in self.checks if not c.passed]

    def summary(self) -> str:
        return f'{self.name}: {len(self.checks) - len(self.failures)}/{len(self.checks)} passed'


Case = Tuple[str, Callable[..., List[CheckResult]], tuple]


def _fmt(x: float) -> str:
    return f'{x:.{DEFAULTS["float_digits"]}g}'


def _spherical_groups(max_n: int) -> List[TriangleSignature]:
    return [TriangleSignature(2, 2, n) for n in range(2, max_n + 1)] + list(POLYHEDRAL_GROUPS)


# --- charsum -----------------------------------------------------------------


def _charsum_case(sig: TriangleSignature, l_max: int) -> List[CheckResult]:
    charsum = spherical.multiplicity_charsum_table(sig, l_max)
    closed = spherical.multiplicity_table(sig, l_max)
    bad = np.nonzero(charsum != closed)[0]
    detail = f'first mismatch at l={int(bad[0])}' if bad.size else f'l <= {l_max}'
    return [CheckResult(f'{sig} charsum = closed form', not bad.size, detail)]


def _census_case(sig: TriangleSignature) -> List[CheckResult]:
    realization = spherical.generate_rotation_group(sig)
    expected = spherical.angle_census(sig)
    found = spherical.census_from_matrices(realization)
    return [
        CheckResult(f'{sig} group order', realization.order == expected.total,
                    f'{realization.order} elements'),
        CheckResult(f'{sig} census from matrices', found.as_dict() == expected.as_dict(),
                    str(found.as_dict())),
    ]


def _charsum_cases(limit: Optional[int], seed: int) -> List[Case]:
    l_max = DEFAULTS['charsum_max_degree'] if limit is None else limit
    cases: List[Case] = []
    for sig in _spherical_groups(DEFAULTS['charsum_max_n']):
        cases.append((f'{sig} charsum', _charsum_case, (sig, l_max)))
        cases.append((f'{sig} census', _census_case, (sig,)))
    return cases


# --- lattice -----------------------------------------------------------------


def _lattice_case(sig: TriangleSignature, Lambda: int) -> List[CheckResult]:
    model = euclidean.lattice_model(sig)
    torus = euclidean.torus_multiplicities(model, Lambda)
    brute = representation_counts(model.dual_form, Lambda)
    bad = np.nonzero(torus != brute)[0]
    checks = [CheckResult(f'{sig} divisor formula = lattice count', not bad.size,
                          f'first mismatch at {int(bad[0])}' if bad.size else f'lambda <= {Lambda}')]
    orbifold = euclidean.orbifold_multiplicities(sig, Lambda)
    checks.append(CheckResult(f'{sig} mu(0) = 1', int(orbifold[0]) == 1, str(int(orbifold[0]))))
    step = max(1, Lambda // 50)
    spots = range(1, Lambda + 1, step)
    scalar_ok = all(euclidean.torus_multiplicity(model, lam) == torus[lam]
                    and representation_count(model.dual_form, lam) == brute[lam] for lam in spots)
    checks.append(CheckResult(f'{sig} scalar = batch', scalar_ok, f'{len(spots)} spot checks'))
    return checks


def _sieve_case(Lambda: int) -> List[CheckResult]:
    checks = []
    step = max(1, Lambda // 200)
    for r, s in ((1, 3), (2, 3), (1, 4), (3, 4)):
        table = divisor_residue_table(Lambda, r, s)
        ok = all(divisor_count_mod(N, r, s) == table[N] for N in range(1, Lambda + 1, step))
        checks.append(CheckResult(f'divisor sieve d_{{{r},{s}}}', ok, f'N <= {Lambda}'))
    return checks


def _cross_group_case(Lambda: int) -> List[CheckResult]:
    hexagonal = euclidean.orbifold_multiplicities(euclidean.HEXAGONAL, Lambda)
    triangular = euclidean.orbifold_multiplicities(euclidean.TRIANGULAR, Lambda)
    bad = np.nonzero(triangular[1:] != 2 * hexagonal[1:])[0]
    return [CheckResult('mu(3,3,3) = 2 mu(2,3,6)', not bad.size,
                        f'first mismatch at {int(bad[0]) + 1}' if bad.size else f'lambda <= {Lambda}')]


def _lattice_cases(limit: Optional[int], seed: int) -> List[Case]:
    Lambda = DEFAULTS['lattice_max'] if limit is None else limit
    cases: List[Case] = [(f'{sig} lattice', _lattice_case, (sig, Lambda)) for sig in EUCLIDEAN_GROUPS]
    cases.append(('divisor sieve', _sieve_case, (Lambda,)))
    cases.append(('cross group', _cross_group_case, (Lambda,)))
    return cases


# --- eisenstein --------------------------------------------------------------


def _eisenstein_case(n: int, l_max: int) -> List[CheckResult]:
    worst = float(eisenstein_residuals(l_max, n).max())
    checks = [CheckResult(f'sawtooth identity n={n}', worst < DEFAULTS['eisenstein_tol'],
                          f'max residual {_fmt(worst)}')]
    if n <= DEFAULTS['charsum_max_n']:
        sig = TriangleSignature(2, 2, n)
        top = min(l_max, DEFAULTS['charsum_max_degree'])
        ok = all(spherical.multiplicity_eisenstein(n, l) == spherical.multiplicity_closed(sig, l)
                 for l in range(top + 1))
        checks.append(CheckResult(f'{sig} eisenstein route = closed form', ok, f'l <= {top}'))
    return checks


def _eisenstein_cases(limit: Optional[int], seed: int) -> List[Case]:
    l_max = DEFAULTS['eisenstein_max_l'] if limit is None else limit
    return [(f'eisenstein n={n}', _eisenstein_case, (n, l_max))
            for n in range(2, DEFAULTS['eisenstein_max_n'] + 1)]


# --- relations ---------------------------------------------------------------


def _relations_case(sig: TriangleSignature, seed: int) -> List[CheckResult]:
    realization = euclidean.realize_generators_affine(sig, strict=False)
    checks = [CheckResult(f'{sig} {c.name}', c.passed, f'error {_fmt(c.error)}')
              for c in realization.checks]
    report = euclidean.verify_fixed_point_free(sig)
    checks.append(CheckResult(f'{sig} gamma^i fixes no plane wave', report.passed,
                              f'det(M^i - I) = {report.determinants}'))
    model = euclidean.lattice_model(sig)
    drift = euclidean.check_periodicity(model, seed=seed)
    checks.append(CheckResult(f'{sig} plane waves are periodic',
                              drift < DEFAULTS['periodicity_tol'], f'max drift {_fmt(drift)}'))
    defect = eigenlab.check_torus_rotation(sig, seed=seed)
    checks.append(CheckResult(f'{sig} psi o gamma = psi_M',
                              defect < DEFAULTS['torus_rotation_tol'],
                              f'max defect {_fmt(defect)}'))
    return checks


def _relations_cases(limit: Optional[int], seed: int) -> List[Case]:
    return [(f'{sig} relations', _relations_case, (sig, seed)) for sig in EUCLIDEAN_GROUPS]


# --- weyl --------------------------------------------------------------------


def _spherical_weyl_case(sig: TriangleSignature, L_max: int) -> List[CheckResult]:
    max_all, max_window, ok = spherical.check_weyl_bounded(sig, L_max)
    return [CheckResult(f'{sig} remainder bounded by its early maximum', ok,
                        f'max {_fmt(max_all)}, max in window {_fmt(max_window)}')]


def _dihedral_counting_case(n_max: int, L_max: int) -> List[CheckResult]:
    bad = []
    for n in range(2, n_max + 1):
        counts = np.cumsum(spherical.multiplicity_table(TriangleSignature(2, 2, n), L_max))
        bad += [(n, L) for L in range(L_max + 1)
                if spherical.counting_dihedral_closed(n, L) != counts[L]]
    detail = f'first mismatch at (n, L) = {bad[0]}' if bad else f'n <= {n_max}, L <= {L_max}'
    return [CheckResult('dihedral N(L) closed form = summed multiplicities', not bad, detail)]


def _euclidean_weyl_case(sig: TriangleSignature, Lambda: int) -> List[CheckResult]:
    count = euclidean.counting_euclidean(sig, Lambda)
    rel = abs(count.ratio - count.coefficient) / count.coefficient
    return [CheckResult(f'{sig} N(Lambda)/Lambda -> c', rel < DEFAULTS['euclidean_weyl_tol'],
                        f'N={count.count}, c={_fmt(count.coefficient)}, rel error {_fmt(rel)}')]


def _tower_case(l_max: int) -> List[CheckResult]:
    failures = spherical.check_subgroup_tower(l_max)
    return [CheckResult('subgroup tower inequalities', not failures,
                        failures[0] if failures else f'l <= {l_max}')]


def _weyl_cases(limit: Optional[int], seed: int) -> List[Case]:
    L_max = DEFAULTS['weyl_max_degree'] if limit is None else limit
    cases: List[Case] = [(f'{sig} weyl', _spherical_weyl_case, (sig, L_max))
                         for sig in _spherical_groups(DEFAULTS['charsum_max_n'])]
    # the euclidean leading term is only meaningful at the large default cutoff
    cases += [(f'{sig} weyl', _euclidean_weyl_case, (sig, DEFAULTS['euclidean_weyl_lambda']))
              for sig in EUCLIDEAN_GROUPS]
    cases.append(('dihedral counting', _dihedral_counting_case,
                  (DEFAULTS['charsum_max_n'], L_max)))
    cases.append(('subgroup tower', _tower_case, (L_max,)))
    return cases


# --- eigenlab ----------------------------------------------------------------


def _sphere_rank_case(sig: TriangleSignature, l_max: int, seed: int) -> List[CheckResult]:
    checks = []
    for l in range(l_max + 1):
        report = eigenlab.project_and_rank_sphere(sig, l, seed=seed)
        checks.append(CheckResult(f'{sig} l={l} projection rank', report.passed,
                                  f'rank {report.rank}, expected {report.expected}, '
                                  f'gap {_fmt(report.gap_ratio)}'))
    return checks


def _torus_rank_case(sig: TriangleSignature, lam_max: int) -> List[CheckResult]:
    model = euclidean.lattice_model(sig)
    table = euclidean.torus_multiplicities(model, lam_max)
    checks = []
    for lam in np.nonzero(table[1:])[0] + 1:
        report = eigenlab.project_and_rank_torus(sig, int(lam))
        checks.append(CheckResult(f'{sig} lambda={int(lam)} projection rank', report.passed,
                                  f'rank {report.rank}, expected {report.expected}'))
    return checks


def _dihedral_legendre_case(n_max: int, l_max: int) -> List[CheckResult]:
    bad = [(n, l) for n in range(2, n_max + 1) for l in range(l_max + 1)
           if eigenlab.dihedral_legendre_multiplicity(n, l)
           != spherical.multiplicity_closed(TriangleSignature(2, 2, n), l)]
    return [CheckResult('dihedral Legendre count = closed form', not bad,
                        f'first mismatch at (n, l) = {bad[0]}' if bad else f'n <= {n_max}, l <= {l_max}')]


def _idempotence_case(sig: TriangleSignature, l: int, seed: int) -> List[CheckResult]:
    dev = eigenlab.projection_idempotence(sig, l, seed=seed)
    return [CheckResult(f'{sig} l={l} P^2 = P', dev < DEFAULTS['rank_tol'], f'deviation {_fmt(dev)}')]


def _gram_case(l_max: int) -> List[CheckResult]:
    worst = max(eigenlab.max_relative_offdiagonal(eigenlab.gram_matrix(l)) for l in range(l_max + 1))
    return [CheckResult('quadrature Gram matrices diagonal', worst < DEFAULTS['gram_tol'],
                        f'worst {_fmt(worst)}')]


def _eigenlab_cases(limit: Optional[int], seed: int) -> List[Case]:
    l_max = DEFAULTS['eigenlab_max_degree']
    lam_max = DEFAULTS['eigenlab_max_lambda']
    if limit is not None:
        l_max, lam_max = min(limit, eigenlab.MAX_DEGREE), min(limit, lam_max)
    # (2,2,n) with n > l_max + 1 repeats the multiplicities of n = l_max + 1
    sphere_groups = [TriangleSignature(2, 2, n) for n in range(2, l_max + 2)]
    sphere_groups += list(POLYHEDRAL_GROUPS)
    cases: List[Case] = [(f'{sig} sphere ranks', _sphere_rank_case, (sig, l_max, seed))
                         for sig in sphere_groups]
    cases += [(f'{sig} torus ranks', _torus_rank_case, (sig, lam_max)) for sig in EUCLIDEAN_GROUPS]
    cases.append(('dihedral legendre', _dihedral_legendre_case, (30, 500)))
    cases += [(f'{sig} idempotence', _idempotence_case, (sig, min(6, l_max), seed))
              for sig in POLYHEDRAL_GROUPS]
    cases.append(('gram', _gram_case, (l_max,)))
    return cases


SUITES: Dict[str, Callable[[Optional[int], int], List[Case]]] = {
    'charsum': _charsum_cases,
    'lattice': _lattice_cases,
    'eisenstein': _eisenstein_cases,
    'relations': _relations_cases,
    'weyl': _weyl_cases,
    'eigenlab': _eigenlab_cases,
}


def _run_case(case: Case) -> List[CheckResult]:
    label, func, args = case
    try:
        return func(*args)
    except TrispecError as exc:
        return [CheckResult(label, False, str(exc))]


def _map_cases(cases: Sequence[Case], jobs: int) -> Iterable[List[CheckResult]]:
    if jobs <= 1 or len(cases) <= 1:
        return list(map(_run_case, cases))
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_run_case, cases))


def run_suite(name: str, limit: Optional[int] = None, jobs: int = 1,
              seed: Optional[int] = None) -> SuiteResult:
    if name not in SUITES:
        raise KeyError(f'unknown suite {name!r}')
    seed = DEFAULTS['default_seed'] if seed is None else seed
    cases = SUITES[name](limit, seed)
    logger.info('suite %s: %d cases on %d worker(s)', name, len(cases), max(jobs, 1))
    result = SuiteResult(name)
    for checks in _map_cases(cases, jobs):
        result.checks.extend(checks)
    logger.info(result.summary())
    for failure in result.failures:
        logger.debug('FAIL %s: %s', failure.name, failure.detail)
    return result


def run_suites(names: Sequence[str] = ('all',), limit: Optional[int] = None, jobs: int = 1,
               seed: Optional[int] = None) -> List[SuiteResult]:
    """Run the named suites in order; ``'all'`` expands to every suite."""
    selected: List[str] = []
    for name in names:
        for item in (SUITES if name == 'all' else [name]):
            if item not in selected:
                selected.append(item)
    return [run_suite(name, limit, jobs, seed) for name in selected]
