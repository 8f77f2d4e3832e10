"""
Verification suites

The Verifier bundles an Evaluator with the configured grid and
tolerances and runs the named suites:

    combinatorics  index and word involutions, composition counts,
                   term weights, single-block symbolic agreement
    posets         W map against linear extensions, transpose duality,
                   rewriting and limit word identities, poset integrals
    level1         pre-flight, duality, xi closed forms, every level-1
                   identity, derivative and limit checks, precision
                   monotonicity of the constants it evaluated
    level2         the level-2 counterparts
    all            everything above

max_weight bounds the identity sweeps. The duality sweeps always run to
weight 7 for zeta and weight 6 for T.

Independent verifications may run in worker processes (jobs > 1); the
results are always reported in submission order.
"""

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import comb
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

import mpmath
import numpy as np

from ..core.interfaces import AKZetaError, DomainError, StatusCallback
from .analysis import FunctionKind, derivative_check, limit_lemma_report
from .constant_cache import FileConstantCache
from .identities import check_weights, thm_main2, xu_2_8_symbolic_check
from .index_core import (
    admissible_indices, compositions, dual, e_plus, format_index, hoffman_dual,
    k_minus, positive_indices, reverse_blocks
)
from .numerics import LEVEL2_TAGS, ConstTag, Evaluator
from .oracles import mtv_richardson, run_preflight
from .poset_algebra import (
    RewriteVariant, TwoPoset, i_one, i_one_level2, idou_rewrite_check, is_admissible_poset,
    limit_word_identity_check, transpose, w_map, w_map_by_extensions, xi_poset
)
from .realball import RealBall
from .verification import (
    DEFAULT_Z_GRID, TOLERANCE_LEVEL1, TOLERANCE_LEVEL2, VerificationReport, get_identity, verify
)
from .word_algebra import index_to_word, word_dual, word_to_index

logger = logging.getLogger(__name__)

SUITES = ("combinatorics", "posets", "level1", "level2", "all")
RANDOM_POSETS = 200
RANDOM_POSET_SEED = 20240601
CROSS_ROUTE_INDICES = ((2,), (1, 2), (2, 1), (1, 1, 2))
LIMIT_INDICES = ((2,), (3,), (1, 2))
DERIVATIVE_POINTS = (Fraction(3, 10), Fraction(1, 2), Fraction(7, 10))
CLOSED_FORM_TOL = 1e-25
DUALITY_WEIGHT_LEVEL1 = 7
DUALITY_WEIGHT_LEVEL2 = 6
MONOTONE_PRECISIONS = (128, 256)

Task = Tuple[str, Dict[str, Any], Optional[Tuple[float, ...]], float, int, str]


@dataclass
class CheckResult:
    """One line of a suite summary"""
    group: str
    label: str
    passed: bool
    detail: str = ""

    def to_dict(self) -> Dict[str, Any]:
        result = {'group': self.group, 'label': self.label, 'pass': self.passed}
        if self.detail:
            result['detail'] = self.detail
        return result


@dataclass
class SuiteResult:
    """Outcome of a suite run"""
    name: str
    max_weight: int
    checks: List[CheckResult] = field(default_factory=list)
    reports: List[VerificationReport] = field(default_factory=list)
    aborted: Optional[str] = None

    @property
    def passed(self) -> bool:
        return self.aborted is None and all(c.passed for c in self.checks)

    def add(self, group: str, label: str, passed: bool, detail: str = "") -> None:
        if not passed:
            logger.warning(f"{group}: {label} failed {detail}".rstrip())
        self.checks.append(CheckResult(group, label, bool(passed), detail))

    def add_report(self, group: str, report: VerificationReport) -> None:
        self.reports.append(report)
        self.add(group, report.label(), report.passed,
                 report.error or f"max dev {report.max_dev:.2e}")

    def groups(self) -> Dict[str, Tuple[int, int]]:
        """group -> (passed, total), in first-seen order"""
        table: Dict[str, Tuple[int, int]] = {}
        for check in self.checks:
            ok, total = table.get(check.group, (0, 0))
            table[check.group] = (ok + int(check.passed), total + 1)
        return table

    def to_dict(self) -> Dict[str, Any]:
        return {
            'suite': self.name,
            'max_weight': self.max_weight,
            'pass': self.passed,
            'aborted': self.aborted,
            'groups': {g: {'passed': ok, 'total': total} for g, (ok, total) in self.groups().items()},
            'failures': [c.to_dict() for c in self.checks if not c.passed],
        }


# --- worker processes -----------------------------------------------------------

_worker_evaluator: Optional[Evaluator] = None


def _init_worker(settings: Dict[str, Any], cache_path: Optional[str]) -> None:
    global _worker_evaluator
    cache = FileConstantCache(cache_path) if cache_path else None
    _worker_evaluator = Evaluator(cache=cache, **settings)


def _run_task(task: Task) -> VerificationReport:
    name, params, zs, tol, precision, route = task
    return verify(name, params, zs, tol, precision, _worker_evaluator, route)


class Verifier:
    """Runs single verifications and whole suites against one Evaluator"""

    def __init__(self, evaluator: Evaluator, z_grid: Sequence[float] = DEFAULT_Z_GRID,
                 tolerance_level1: float = TOLERANCE_LEVEL1,
                 tolerance_level2: float = TOLERANCE_LEVEL2,
                 jobs: int = 1, cache_path: Optional[str] = None):
        """
        Initialize verifier

        Args:
            evaluator: Evaluator shared by every check in this process
            z_grid: Sample points for functional identities
            tolerance_level1: Tolerance for level-1 identities
            tolerance_level2: Tolerance for level-2 identities
            jobs: Worker processes for independent verifications
            cache_path: Cache file workers read from (None for no cache)
        """
        self.evaluator = evaluator
        self.z_grid = tuple(z_grid)
        self.tolerance_level1 = tolerance_level1
        self.tolerance_level2 = tolerance_level2
        self.jobs = max(1, jobs)
        self.cache_path = cache_path

    @property
    def precision(self) -> int:
        return self.evaluator.precision

    def tolerance(self, level: int) -> float:
        return self.tolerance_level1 if level == 1 else self.tolerance_level2

    def verify(self, name: str, params: Dict[str, Any], zs: Optional[Sequence[float]] = None,
               tol: Optional[float] = None, precision: Optional[int] = None,
               const_route: str = "expansion", perturb: Optional[Fraction] = None) -> VerificationReport:
        """verify() with this verifier's evaluator, grid and tolerances as defaults."""
        spec = get_identity(name)
        return verify(name, params,
                      zs if zs is not None else self.z_grid,
                      tol if tol is not None else self.tolerance(spec.level),
                      precision or self.precision, self.evaluator, const_route, perturb)

    def run_tasks(self, tasks: List[Task]) -> List[VerificationReport]:
        """Run verifications, in worker processes when jobs > 1, keeping task order."""
        if self.jobs == 1 or len(tasks) < 2:
            return [verify(name, params, zs, tol, precision, self.evaluator, route)
                    for name, params, zs, tol, precision, route in tasks]
        settings = {
            'precision': self.evaluator.precision,
            'guard_bits': self.evaluator.guard_bits,
            'step_budget': self.evaluator.step_budget,
            'mzv_method': self.evaluator.mzv_method,
            'z_cap': float(self.evaluator.z_cap),
        }
        with ProcessPoolExecutor(max_workers=self.jobs, initializer=_init_worker,
                                 initargs=(settings, self.cache_path)) as pool:
            return list(pool.map(_run_task, tasks))

    def _task(self, name: str, params: Dict[str, Any], level: int = 1,
              route: str = "expansion") -> Task:
        return (name, params, self.z_grid, self.tolerance(level), self.precision, route)

    # --- suites ---------------------------------------------------------------

    def run_suite(self, name: str, max_weight: int = 5,
                  status_callback: Optional[StatusCallback] = None) -> SuiteResult:
        """
        Run a named suite.

        Raises:
            DomainError: on an unknown suite name or max_weight < 1
        """
        if name not in SUITES:
            raise DomainError(f"Unknown suite '{name}' (known: {', '.join(SUITES)})")
        if max_weight < 1:
            raise DomainError("max_weight must be >= 1")
        result = SuiteResult(name, max_weight)
        selected = ("combinatorics", "posets", "level1", "level2") if name == "all" else (name,)
        for part in selected:
            if status_callback:
                status_callback(f"running {part}")
            logger.info(f"Suite {part}, max weight {max_weight}")
            getattr(self, f"_suite_{part}")(result, max_weight)
            if result.aborted:
                break
        logger.info(f"Suite {name}: {sum(c.passed for c in result.checks)}/{len(result.checks)} passed")
        return result

    def _suite_combinatorics(self, result: SuiteResult, max_weight: int) -> None:
        group = "combinatorics"
        bad_hoffman, bad_relation, bad_dual, bad_word = [], [], [], []
        for w in range(1, max_weight + 1):
            for k in positive_indices(w):
                if hoffman_dual(hoffman_dual(k)) != k:
                    bad_hoffman.append(k)
                if hoffman_dual(k) != reverse_blocks(k_minus(dual(e_plus(k)))):
                    bad_relation.append(k)
            for k in admissible_indices(w):
                if dual(dual(k)) != k:
                    bad_dual.append(k)
                if word_to_index(word_dual(index_to_word(k))) != dual(k):
                    bad_word.append(k)
        result.add(group, "hoffman dual is an involution", not bad_hoffman, _indices(bad_hoffman))
        result.add(group, "hoffman dual via duality and block reversal", not bad_relation,
                   _indices(bad_relation))
        result.add(group, "duality is an involution", not bad_dual, _indices(bad_dual))
        result.add(group, "word duality matches index duality", not bad_word, _indices(bad_word))

        counts_ok = all(
            len(compositions(w, d)) == comb(w + d - 1, d - 1)
            for w in range(min(max_weight, 8) + 1) for d in range(1, 7)
        )
        result.add(group, "composition counts", counts_ok)

        unbalanced = [k for w in range(1, min(max_weight, 6) + 1) for k in positive_indices(w)
                      if not check_weights(thm_main2(k))]
        result.add(group, "functional equation term weights", not unbalanced, _indices(unbalanced))

        mismatched = [(a, b) for a in range(1, 4) for b in range(0, 4)
                      if not xu_2_8_symbolic_check(a, b)]
        result.add(group, "single-block functional equation symbolic agreement", not mismatched,
                   str(mismatched) if mismatched else "")

    def _suite_posets(self, result: SuiteResult, max_weight: int) -> None:
        group = "posets"
        rng = np.random.default_rng(RANDOM_POSET_SEED)
        posets = [random_poset(rng) for _ in range(RANDOM_POSETS)]
        disagree = sum(w_map(x) != w_map_by_extensions(x) for x in posets)
        result.add(group, f"W map vs linear extensions ({RANDOM_POSETS} posets)", disagree == 0,
                   f"{disagree} mismatches" if disagree else "")

        admissible = [x for x in posets if x.size and is_admissible_poset(x)]
        broken = sum(w_map(transpose(x)) != w_map(x).map_words(word_dual) for x in admissible)
        result.add(group, f"W(transpose) = dual(W) ({len(admissible)} posets)", broken == 0,
                   f"{broken} mismatches" if broken else "")

        small = [k for w in range(1, 4) for k in positive_indices(w)]
        for variant in RewriteVariant:
            failures = [(k, l, p) for k in small for l in small for p in range(3)
                        if not idou_rewrite_check(k, l, p, variant)]
            result.add(group, f"rewriting identity {variant.value}", not failures,
                       f"{len(failures)} failures" if failures else "")

        limit_failures = [(l, a) for l in LIMIT_INDICES for a in range(4)
                          if not limit_word_identity_check(l, a)]
        result.add(group, "limit word identity", not limit_failures, str(limit_failures) if limit_failures else "")

        for level in (1, 2):
            top_weight = min(max_weight, 4 if level == 1 else 3)
            top_m = 3 if level == 1 else 2
            outside = []
            for w in range(1, top_weight + 1):
                for k in positive_indices(w):
                    for m in range(1, top_m + 1):
                        if level == 1:
                            route = i_one(xi_poset(k, m), evaluator=self.evaluator)
                            direct = self.evaluator.xi_int(k, m)
                        else:
                            route = i_one_level2(xi_poset(k, m), evaluator=self.evaluator)
                            direct = self.evaluator.psi_int(k, m)
                        if not route.overlaps(direct):
                            outside.append((k, m))
            name = "zeta(W(xi poset)) = xi" if level == 1 else "T(W(xi poset)) = psi"
            result.add(group, name, not outside, str(outside) if outside else "")

    def _suite_level1(self, result: SuiteResult, max_weight: int) -> None:
        group = "level1"
        preflight = run_preflight(self.evaluator, max_weight=min(max_weight, 5), include_mtv=False)
        result.add(group, f"pre-flight ({preflight.checked} values)", preflight.passed,
                   "; ".join(preflight.failures))
        if not preflight.passed:
            result.aborted = "pre-flight failed; rerun with --mzv-method direct"
            logger.error(result.aborted)
            return

        self._duality_check(result, group, 1, DUALITY_WEIGHT_LEVEL1, CLOSED_FORM_TOL)
        closed = []
        for m in range(1, 6):
            value = self.evaluator.xi_int((1,), m + 1)
            expected = self.evaluator.mzv((m + 2,)) * (m + 1)
            closed.append(_close(value, expected, CLOSED_FORM_TOL))
        with mpmath.workprec(self.precision + 20):
            pi4_over_72 = mpmath.pi ** 4 / 72
        closed.append(_close_to(self.evaluator.xi_int((2,), 2), pi4_over_72, CLOSED_FORM_TOL))
        result.add(group, "xi closed forms", all(closed))

        indices = [k for w in range(1, max_weight + 1) for k in positive_indices(w)]
        tasks: List[Task] = []
        tasks += [self._task("thm-main2", {'k': k}) for k in indices]
        tasks += [self._task("thm-main1", {'k': k, 'm': m}) for k in indices for m in (1, 2, 3)]
        tasks += [self._task("cor-main", {'k': k, 'm': m}) for k in indices for m in (1, 2)]
        tasks += [self._task("cor-main", {'k': k, 'm': m}, route="poset")
                  for k in CROSS_ROUTE_INDICES for m in (1, 2)]
        triples = [(a, b, m) for a in range(1, 4) for b in range(0, 4) for m in range(1, 4)]
        tasks += [self._task("ak-thm8", {'a': a, 'b': b, 'm': m}) for a, b, m in triples]
        tasks += [self._task("ak-thm9-2", {'a': a, 'b': b, 'm': m}) for a, b, m in triples]
        tasks += [self._task("ak-dep1", {'kk': kk}) for kk in range(2, 6)]
        tasks += [self._task("xu-thm3-3", {'a': a, 'm': m, 'ks': ks})
                  for a in (1, 2) for m in (1, 2) for ks in _entries_at_least_two(2, 3)]
        for task, report in zip(tasks, self.run_tasks(tasks)):
            result.add_report(group if task[5] == "expansion" else "cross-route", report)

        base = self.evaluator.mzv((2,))
        pair = verify("cor-main", {'k': (2,), 'm': 1}, None, CLOSED_FORM_TOL,
                      self.precision, self.evaluator)
        result.add(group, "2 xi(2;2) = zeta(2)^2",
                   pair.passed and _close(pair.points[0].lhs, base * base, CLOSED_FORM_TOL))

        self._analysis_checks(result, group, FunctionKind.LI, 1)
        self._monotonicity_check(result, group, 1)

    def _suite_level2(self, result: SuiteResult, max_weight: int) -> None:
        group = "level2"
        preflight = run_preflight(self.evaluator, max_weight=min(max_weight, 5), include_mtv=True)
        result.add(group, f"pre-flight ({preflight.checked} values)", preflight.passed,
                   "; ".join(preflight.failures))
        if not preflight.passed:
            result.aborted = "pre-flight failed; rerun with --mzv-method direct"
            logger.error(result.aborted)
            return

        self._duality_check(result, group, 2, DUALITY_WEIGHT_LEVEL2, self.tolerance_level2)
        outside = []
        for k in ((2, 2), (2, 3), (3, 2)):
            if not self.evaluator.mtv(k).overlaps(mtv_richardson(k, self.precision)):
                outside.append(k)
        result.add(group, "T against Richardson oracle", not outside, _indices(outside))

        indices = [k for w in range(1, min(max_weight, 4) + 1) for k in positive_indices(w)]
        tasks: List[Task] = []
        tasks += [self._task("thm-main2-lv2", {'k': k}, 2) for k in indices]
        tasks += [self._task("thm-main1-lv2", {'k': k, 'm': m}, 2) for k in indices for m in (1, 2)]
        tasks += [self._task("cor-main-lv2", {'k': k, 'm': m}, 2) for k in indices for m in (1, 2)]
        for report in self.run_tasks(tasks):
            result.add_report(group, report)

        with mpmath.workprec(self.precision + 20):
            target = (mpmath.pi ** 2 / 4) ** 2
        psi = self.evaluator.psi_int((2,), 2) * 2
        result.add(group, "2 psi(2;2) = (pi^2/4)^2", _close_to(psi, target, self.tolerance_level2))

        self._analysis_checks(result, group, FunctionKind.A, 2)
        self._monotonicity_check(result, group, 2)

    # --- helpers --------------------------------------------------------------

    def _duality_check(self, result: SuiteResult, group: str, level: int, top_weight: int,
                       tol: float) -> None:
        value_of = self.evaluator.mzv if level == 1 else self.evaluator.mtv
        failures = [k for w in range(2, top_weight + 1) for k in admissible_indices(w)
                    if not _close(value_of(k), value_of(dual(k)), tol)]
        name = "zeta" if level == 1 else "T"
        result.add(group, f"{name}(k) = {name}(dual k) up to weight {top_weight}", not failures,
                   _indices(failures))

    def _monotonicity_check(self, result: SuiteResult, group: str, level: int) -> None:
        """Every constant evaluated so far gets no looser at the higher precision."""
        tags = LEVEL2_TAGS if level == 2 else set(ConstTag) - LEVEL2_TAGS
        kinds = [kind for kind in self.evaluator.memoized_constants() if kind.tag in tags]
        low, high = MONOTONE_PRECISIONS
        grown = [str(kind) for kind in kinds
                 if self.evaluator.const(kind, high).rad > self.evaluator.const(kind, low).rad]
        result.add(group, f"radius at {high} bits <= radius at {low} bits ({len(kinds)} constants)",
                   not grown, ", ".join(grown[:5]))

    def _analysis_checks(self, result: SuiteResult, group: str, kind: FunctionKind,
                         level: int) -> None:
        failures = []
        for w in range(1, 5):
            for k in positive_indices(w):
                for z in DERIVATIVE_POINTS:
                    try:
                        if not derivative_check(kind, k, z, evaluator=self.evaluator):
                            failures.append(f"{format_index(k)}@{float(z)}")
                    except AKZetaError as e:
                        failures.append(f"{format_index(k)}@{float(z)}: {e}")
        result.add(group, "derivative formulas", not failures, ", ".join(failures[:5]))

        for l in LIMIT_INDICES:
            for a in range(4):
                report = limit_lemma_report(l, a, level, self.precision, self.evaluator)
                detail = f"final deviation {report.deviations[-1]:.2e}"
                result.add(group, f"limit l={format_index(l)} a={a}", report.passed, detail)


def random_poset(rng: np.random.Generator, max_size: int = 8, density: float = 0.3) -> TwoPoset:
    """Random labeled poset; covers only go from lower to higher ids, so it is acyclic."""
    n = int(rng.integers(1, max_size + 1))
    labels = tuple(int(x) for x in rng.integers(0, 2, size=n))
    covers = frozenset(
        (i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < density
    )
    return TwoPoset(labels, covers)


def _entries_at_least_two(max_depth: int, max_entry: int) -> Iterable[Tuple[int, ...]]:
    for r in range(1, max_depth + 1):
        yield from product(range(2, max_entry + 1), repeat=r)


def _close(x: RealBall, y: RealBall, tol: float) -> bool:
    gap = abs(mpmath.fsub(x.mid, y.mid, exact=True))
    return gap <= mpmath.mpf(tol) + x.rad + y.rad


def _close_to(x: RealBall, value: mpmath.mpf, tol: float) -> bool:
    return abs(x.mid - value) <= mpmath.mpf(tol) + x.rad


def _indices(items: Sequence) -> str:
    if not items:
        return ""
    shown = ", ".join(format_index(k) for k in items[:5])
    return shown + (" ..." if len(items) > 5 else "")
