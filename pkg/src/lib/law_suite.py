"""Seeded property suite over the algebra, its operators and its norms."""

import logging
from dataclasses import dataclass, field
from itertools import combinations_with_replacement, product
from typing import Callable, List, Optional, Tuple

import numpy as np
import pandas as pd

from src.lib import algebra
from src.lib.algebra import PhaseRule, TernaryElement
from src.lib.berezin import adjoint_op, mul_op
from src.lib.hilbert_scale import check_vage, theorem31_check
from src.lib.multi_index import MultiIndex, sigma_exponent, swap_exponent
from src.lib.scalars import EXACT, ExactScalar
from src.utils.error_handlers import NotInvertible

logger = logging.getLogger(__name__)

MAX_POSITION = 4
TERNARY_FORM_DIMENSION = 6
NORM_LEVELS = (1, 2, 3)
VAGE_PAIRS = ((2, 1), (3, 1), (4, 2))


def flipped_sigma_exponent(nu: MultiIndex, mu: MultiIndex) -> Optional[int]:
    """Deliberately wrong phase rule: sigma's exponent negated for odd-grade left factors."""
    k = sigma_exponent(nu, mu)
    if k is None or nu.grade % 2 == 0:
        return k
    return -k % 3


@dataclass
class LawResult:
    """Outcome of one law: how many instances were checked and the first failure."""

    law: str
    checked: int = 0
    failures: int = 0
    counterexample: Optional[str] = None

    def record(self, ok: bool, describe: Callable[[], str]) -> None:
        self.checked += 1
        if not ok:
            self.failures += 1
            if self.counterexample is None:
                self.counterexample = describe()


@dataclass
class LawSuiteReport:
    seed: int
    trials: int
    results: List[LawResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(result.failures == 0 for result in self.results)

    @property
    def failures(self) -> int:
        return sum(result.failures for result in self.results)

    @property
    def first_counterexample(self) -> Optional[str]:
        for result in self.results:
            if result.counterexample is not None:
                return f"{result.law}: {result.counterexample}"
        return None

    def frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            [(r.law, r.checked, r.failures) for r in self.results], columns=["law", "checked", "failures"]
        )


class LawSuite:
    """
    Randomised checks of the ring laws with a seeded numpy generator.

    Exact-mode laws compare with equality; the norm laws run in float mode.
    ``inject_sigma_bug`` swaps the structure phase used by the suite's own
    products for :func:`flipped_sigma_exponent`, so a failing run can be
    demonstrated; library code is unaffected.
    """

    def __init__(self, seed: int, trials: int, inject_sigma_bug: bool = False, max_position: int = MAX_POSITION):
        if trials < 0:
            raise ValueError(f"trials must be non-negative, got {trials}")
        self.seed = seed
        self.trials = trials
        self.max_position = max_position
        self.rule: PhaseRule = flipped_sigma_exponent if inject_sigma_bug else sigma_exponent
        self.rng = np.random.default_rng(seed)

    def product(self, z: TernaryElement, w: TernaryElement) -> TernaryElement:
        return algebra.mul(z, w, self.rule)

    # random inputs

    def _gaussian_integer(self) -> ExactScalar:
        real, imag = self.rng.integers(-3, 4, size=2)
        return ExactScalar(int(real), int(imag))

    def random_index(self, max_position: Optional[int] = None) -> MultiIndex:
        size = max_position or self.max_position
        return MultiIndex.from_exponents(tuple(int(k) for k in self.rng.integers(0, 3, size=size)))

    def random_element(self, max_terms: int = 4, max_position: Optional[int] = None) -> TernaryElement:
        count = int(self.rng.integers(1, max_terms + 1))
        return TernaryElement(((self.random_index(max_position), self._gaussian_integer()) for _ in range(count)), EXACT)

    def random_vector(self) -> TernaryElement:
        return TernaryElement(
            ((MultiIndex.generator(j), self._gaussian_integer()) for j in range(1, self.max_position + 1)), EXACT
        )

    # laws

    def check_associativity(self) -> LawResult:
        result = LawResult("associativity")
        if self.trials == 0:
            return result
        generators = [algebra.generator(j) for j in range(1, 4)]
        triples: List[Tuple[TernaryElement, ...]] = list(product(generators, repeat=3))
        triples += [tuple(self.random_element(3) for _ in range(3)) for _ in range(self.trials)]
        for a, b, c in triples:
            left = self.product(self.product(a, b), c)
            right = self.product(a, self.product(b, c))
            result.record(left == right, lambda: f"a={a}, b={b}, c={c}: (ab)c={left} but a(bc)={right}")
        return result

    def check_generator_relations(self) -> LawResult:
        result = LawResult("generator relations")
        if self.trials == 0:
            return result
        omega2 = ExactScalar.omega_power(2)
        for i, j in combinations_with_replacement(range(1, TERNARY_FORM_DIMENSION + 1), 2):
            ei, ej = algebra.generator(i), algebra.generator(j)
            if i < j:
                swapped = self.product(ej, ei)
                expected = algebra.scale(omega2, self.product(ei, ej))
                result.record(swapped == expected, lambda: f"e[{j}]*e[{i}] = {swapped}, expected {expected}")
            else:
                cube = self.product(self.product(ei, ei), ei)
                result.record(cube.is_zero, lambda: f"e[{i}]^3 = {cube}")
        return result

    def check_ternary_form(self) -> LawResult:
        result = LawResult("ternary form")
        if self.trials == 0:
            return result
        for i, j, k in combinations_with_replacement(range(1, TERNARY_FORM_DIMENSION + 1), 3):
            a, b, c = algebra.generator(i), algebra.generator(j), algebra.generator(k)
            total = algebra.zero()
            for x, y, w in ((a, b, c), (a, c, b), (b, a, c), (b, c, a), (c, a, b), (c, b, a)):
                total = algebra.add(total, self.product(self.product(x, y), w))
            result.record(total.is_zero, lambda: f"T(e[{i}], e[{j}], e[{k}]) = {total}")
        return result

    def check_vector_cube(self) -> LawResult:
        result = LawResult("grade-1 cube")
        for _ in range(self.trials):
            z = self.random_vector()
            cube = self.product(self.product(z, z), z)
            result.record(cube.is_zero, lambda: f"z={z}: z^3 = {cube}")
        return result

    def check_conjugation(self) -> LawResult:
        result = LawResult("conjugation")
        for _ in range(self.trials):
            z = self.random_element()
            z0 = algebra.body(z)
            twice = algebra.conj(algebra.conj(z))
            modulus = z0 * z0.conjugate()
            ok = (
                twice == algebra.scalar(z0)
                and algebra.body(self.product(z, algebra.conj(z))) == modulus
                and algebra.body(self.product(algebra.conj(z), z)) == modulus
            )
            result.record(ok, lambda: f"z={z}: conj(conj(z))={twice}")
        return result

    def check_inverse(self) -> LawResult:
        result = LawResult("inverse")
        unit = algebra.one()
        for _ in range(self.trials):
            soul = algebra.soul(self.random_element())
            z0 = self._gaussian_integer()
            while z0.is_zero:
                z0 = self._gaussian_integer()
            z = algebra.add(algebra.scalar(z0), soul)
            inverse = algebra.inverse(z)
            ok = algebra.mul(z, inverse) == unit and algebra.mul(inverse, z) == unit
            try:
                algebra.inverse(soul)
                ok = False
            except NotInvertible:
                pass
            result.record(ok, lambda: f"z={z}: inverse {inverse}")
        return result

    def check_swap_relation(self) -> LawResult:
        result = LawResult("swap relation")
        for _ in range(self.trials):
            nu, mu = self.random_index(), self.random_index()
            forward = self.product(algebra.monomial(nu), algebra.monomial(mu))
            backward = self.product(algebra.monomial(mu), algebra.monomial(nu))
            k = swap_exponent(nu, mu)
            expected = algebra.zero() if k is None else algebra.scale(ExactScalar.omega_power(k), forward)
            result.record(backward == expected, lambda: f"e^{nu}, e^{mu}: {backward} vs {expected}")
        return result

    def check_berezin_adjoint(self) -> LawResult:
        result = LawResult("berezin adjoint")
        for _ in range(self.trials):
            nu = self.random_index(3)
            g, h = self.random_element(max_position=3), self.random_element(max_position=3)
            left = algebra.l2_inner_exact(mul_op(nu, g), h)
            right = algebra.l2_inner_exact(g, adjoint_op(nu, h))
            result.record(left == right, lambda: f"nu={nu}, g={g}, h={h}: {left!r} != {right!r}")
        return result

    def check_norm_inequalities(self) -> LawResult:
        result = LawResult("norm inequalities")
        for _ in range(self.trials):
            z, w = self.random_element().to_float(), self.random_element().to_float()
            for p in NORM_LEVELS:
                report = theorem31_check(z, w, p)
                result.record(report.holds, lambda: f"p={p}, z={z}, w={w}: {report}")
            for p, q in VAGE_PAIRS:
                vage = check_vage(z, w, p, q, closed_form=True)
                result.record(vage.holds and vage.mirrored_holds, lambda: f"p={p}, q={q}, f={z}, g={w}: {vage}")
        return result

    def run(self) -> LawSuiteReport:
        report = LawSuiteReport(self.seed, self.trials)
        for check in (
            self.check_associativity,
            self.check_generator_relations,
            self.check_ternary_form,
            self.check_vector_cube,
            self.check_conjugation,
            self.check_inverse,
            self.check_swap_relation,
            self.check_berezin_adjoint,
            self.check_norm_inequalities,
        ):
            outcome = check()
            logger.debug("%s: %d checked, %d failed", outcome.law, outcome.checked, outcome.failures)
            report.results.append(outcome)
        return report


def run_law_suite(seed: int, trials: int, inject_sigma_bug: bool = False) -> LawSuiteReport:
    return LawSuite(seed, trials, inject_sigma_bug).run()
