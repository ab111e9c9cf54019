"""Randomized and fixed verification suites over the symbolic layer.

Everything here is deterministic under a fixed seed.  Random polynomial data
uses small rational coefficients so results stay exact and readable; checks
return named results, and a failing check names the precise cell or instance
that mismatched.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from . import vectorcalc as vc
from .convdiff import (
    NoPotentialError,
    build_convection_form,
    emergent_constraint,
    exp_fitted_flux,
    expand_componentwise,
    flux,
    make_potential,
    unified_operator,
)
from .fields import PolyField
from .forms import (
    BasisForm,
    KForm,
    MaterialParams,
    basis_forms,
    exterior_derivative,
    interior_product_dt,
    wedge,
)
from .tables import double_star_checks, star_table_checks


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""
    note: bool = False  # informational entries never fail a run


@dataclass
class Report:
    checks: list = field(default_factory=list)

    def add(self, name, passed, detail="", note=False):
        self.checks.append(CheckResult(name, bool(passed), detail, note))

    def extend_table_checks(self, results):
        for r in results:
            self.checks.append(CheckResult(r.name, r.passed, r.detail))

    @property
    def failures(self) -> list:
        return [c for c in self.checks if not c.passed and not c.note]

    @property
    def passed(self) -> bool:
        return not self.failures

    def lines(self) -> list:
        out = []
        for c in self.checks:
            if c.note:
                out.append(f"NOTE {c.name}: {c.detail}")
            else:
                status = "PASS" if c.passed else "FAIL"
                detail = f": {c.detail}" if c.detail and not c.passed else ""
                out.append(f"{status} {c.name}{detail}")
        n_checked = sum(1 for c in self.checks if not c.note)
        out.append(f"{n_checked - len(self.failures)}/{n_checked} checks passed")
        return out


# ---------------------------------------------------------------------------
# random exact data
# ---------------------------------------------------------------------------


def random_fraction(rng: random.Random, zero_ok=True) -> Fraction:
    num = rng.randint(-4, 4)
    if not zero_ok:
        while num == 0:
            num = rng.randint(-4, 4)
    return Fraction(num, rng.randint(1, 4))


def random_poly(rng: random.Random, max_degree=3, max_terms=4) -> PolyField:
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        exps = [0, 0, 0, 0]
        budget = rng.randint(0, max_degree)
        for _ in range(budget):
            exps[rng.randrange(4)] += 1
        terms[tuple(exps)] = terms.get(tuple(exps), Fraction(0)) + random_fraction(rng)
    return PolyField(terms)


def random_kform(rng: random.Random, degree: int, max_degree=3) -> KForm:
    comps = {}
    for basis in basis_forms(degree):
        if rng.random() < 0.75:
            comps[basis] = random_poly(rng, max_degree=max_degree)
    return KForm(degree, comps)


def random_material(rng: random.Random, polynomial_beta=True) -> MaterialParams:
    alpha = abs(random_fraction(rng, zero_ok=False))
    epsilon = abs(random_fraction(rng, zero_ok=False))
    if polynomial_beta:
        beta = tuple(random_poly(rng, max_degree=2, max_terms=2) for _ in range(3))
    else:
        beta = tuple(random_fraction(rng) for _ in range(3))
    return MaterialParams(alpha=alpha, epsilon=epsilon, beta=beta)


# ---------------------------------------------------------------------------
# identity suites
# ---------------------------------------------------------------------------


def check_d_after_d(rng, count) -> list:
    out = []
    for degree in range(4):
        bad = ""
        for n in range(count):
            w = random_kform(rng, degree)
            ddw = exterior_derivative(exterior_derivative(w))
            if not ddw.is_zero:
                bad = f"instance #{n}: d(d(w)) = {ddw!r}"
                break
        out.append(CheckResult(f"d-after-d[k={degree}] x{count}", not bad, bad))
    return out


def check_leibniz(rng, count) -> list:
    out = []
    for da in range(5):
        for db in range(5 - da):
            bad = ""
            for n in range(count):
                a = random_kform(rng, da, max_degree=2)
                b = random_kform(rng, db, max_degree=2)
                left = exterior_derivative(wedge(a, b))
                right = wedge(exterior_derivative(a), b)
                second = wedge(a, exterior_derivative(b))
                if da % 2:
                    second = -second
                if left.degree <= 4 and left != right + second:
                    bad = f"instance #{n}"
                    break
            out.append(CheckResult(f"graded-leibniz[{da},{db}] x{count}", not bad, bad))
    return out


def check_anticommutativity(rng, count) -> list:
    out = []
    for da in range(5):
        for db in range(5 - da):
            bad = ""
            for n in range(count):
                a = random_kform(rng, da, max_degree=2)
                b = random_kform(rng, db, max_degree=2)
                ab = wedge(a, b)
                ba = wedge(b, a)
                if (da * db) % 2:
                    ba = -ba
                if ab != ba:
                    bad = f"instance #{n}"
                    break
            out.append(CheckResult(f"wedge-anticommute[{da},{db}] x{count}", not bad, bad))
    return out


def check_interior_product(rng, count) -> list:
    """Contraction against a dt wedge: signed antiderivation on basis forms."""
    n_t = KForm(1, {BasisForm(0b1000): 1})
    out = []
    bad = ""
    for degree in range(4):
        for basis in basis_forms(degree):
            w = KForm(degree, {basis: 1})
            lhs = interior_product_dt(wedge(n_t, w))
            if degree >= 1:
                lhs = lhs + wedge(n_t, interior_product_dt(w))
            spatial_count = basis.degree - (1 if basis.contains_dt else 0)
            expected = w if spatial_count % 2 == 0 else -w
            if lhs != expected:
                bad = f"basis {basis.label}"
    out.append(CheckResult("interior-product-antiderivation[signed]", not bad, bad))
    bad = ""
    for n in range(count):
        w = random_kform(rng, rng.randint(1, 4))
        twice = interior_product_dt(interior_product_dt(w))
        if not twice.is_zero:
            bad = f"instance #{n}"
            break
    out.append(CheckResult(f"interior-product-nilpotent x{count}", not bad, bad))
    return out


def check_flux_fitting(rng, count) -> list:
    """Exact equality of the plain and exponentially fitted fluxes."""
    out = []
    for degree in range(4):
        bad = ""
        for n in range(count):
            m = random_material(rng, polynomial_beta=False)
            b = build_convection_form(m)
            p = make_potential(b)
            w = random_kform(rng, degree, max_degree=2)
            if flux(w, b) != exp_fitted_flux(w, p):
                bad = f"instance #{n}"
                break
        out.append(CheckResult(f"flux-exponential-fitting[k={degree}] x{count}", not bad, bad))
    return out


def check_potential_negatives(rng, count) -> list:
    """Non-closed convection fields must be rejected by name."""
    bad = ""
    for n in range(count):
        i = rng.randrange(3)
        j = rng.choice([axis for axis in range(3) if axis != i])
        beta = [PolyField.zero()] * 3
        beta[i] = PolyField.variable(j) * random_fraction(rng, zero_ok=False)
        m = MaterialParams(alpha=1, epsilon=1, beta=tuple(beta))
        try:
            make_potential(build_convection_form(m))
        except NoPotentialError as exc:
            if not exc.components:
                bad = f"instance #{n}: no components named"
                break
        else:
            bad = f"instance #{n}: non-closed field accepted"
            break
    return [CheckResult(f"potential-rejects-nonclosed x{count}", not bad, bad)]


def check_emergent_constraints(rng, count) -> list:
    out = []
    for degree in (1, 2, 3):
        bad = ""
        for n in range(count):
            m = random_material(rng)
            if degree in (1, 2):
                fields = tuple(random_poly(rng) for _ in range(3))
                expected = (
                    -vc.divergence(fields)
                    if degree == 1
                    else tuple(-c for c in vc.curl(fields))
                )
            else:
                fields = random_poly(rng)
                expected = tuple(-c for c in vc.gradient(fields))
            if emergent_constraint(degree, fields, m) != expected:
                bad = f"instance #{n}"
                break
        out.append(CheckResult(f"constraint-block[k={degree}] x{count}", not bad, bad))
    return out


def check_linearity(rng, count) -> list:
    out = []
    bad = ""
    for n in range(count):
        degree = rng.randint(0, 4)
        m = random_material(rng)
        a, b = random_fraction(rng), random_fraction(rng)
        u = random_kform(rng, degree, max_degree=2)
        v = random_kform(rng, degree, max_degree=2)
        combo = u.scale(a) + v.scale(b)
        lhs = unified_operator(combo, m)
        rhs = unified_operator(u, m).scale(a) + unified_operator(v, m).scale(b)
        if lhs != rhs:
            bad = f"instance #{n} (k={degree})"
            break
    out.append(CheckResult(f"operator-linearity x{count}", not bad, bad))
    return out


def check_scalar_expansion(rng, count) -> list:
    """Degree-0 operator against the classical scalar equation, exactly."""
    bad = ""
    for n in range(count):
        m = random_material(rng)
        u = random_poly(rng, max_degree=3)
        report = expand_componentwise(0, u, m)
        if not report.matches:
            bad = f"instance #{n}: {report.failures()[0]}"
            break
    return [CheckResult(f"scalar-equation-expansion x{count}", not bad, bad)]


def run_identities(seed: int, count: int) -> Report:
    """The randomized exact-identity suite; deterministic under the seed."""
    rng = random.Random(seed)
    report = Report()
    report.extend_table_checks(star_table_checks(MaterialParams(alpha=Fraction(3), epsilon=Fraction(5, 2))))
    for _ in range(5):
        m = random_material(rng)
        report.extend_table_checks(double_star_checks(m))
    for results in (
        check_d_after_d(rng, count),
        check_leibniz(rng, max(1, count // 10)),
        check_anticommutativity(rng, max(1, count // 10)),
        check_interior_product(rng, count),
        check_flux_fitting(rng, count),
        check_potential_negatives(rng, max(1, count // 10)),
        check_emergent_constraints(rng, max(1, count // 4)),
        check_linearity(rng, max(1, count // 4)),
        check_scalar_expansion(rng, max(1, count // 4)),
    ):
        report.checks.extend(results)

    # constraint values are reported, not judged: a nonzero block is physics
    u = PolyField.variable(0) + PolyField.variable(1)
    value = emergent_constraint(3, u, MaterialParams())
    report.add(
        "constraint-value[k=3][u=x+y]",
        True,
        "gradient block value: (" + ", ".join(str(c) for c in value) + ")",
        note=True,
    )
    u1 = (u, PolyField.zero(), PolyField.zero())
    report.add(
        "constraint-value[k=1][u=(x+y,0,0)]",
        True,
        f"divergence block value: {emergent_constraint(1, u1, MaterialParams())}",
        note=True,
    )
    return report


def run_table_verification(seed: int = 0) -> Report:
    """Fixed star tables plus the full expansion comparison for k = 0..4."""
    rng = random.Random(seed)
    report = Report()
    m_fixed = MaterialParams(alpha=Fraction(2), epsilon=Fraction(3))
    report.extend_table_checks(star_table_checks(m_fixed))

    m = MaterialParams(
        alpha=Fraction(2),
        epsilon=Fraction(3, 2),
        beta=(
            PolyField.variable(1),
            random_poly(rng, max_degree=2, max_terms=2),
            PolyField.constant(Fraction(1, 2)),
        ),
    )
    for degree in range(5):
        if degree in (0, 3):
            fields = random_poly(rng, max_degree=3)
        elif degree in (1, 2):
            fields = tuple(random_poly(rng, max_degree=3) for _ in range(3))
        else:
            fields = None
        exp_report = expand_componentwise(degree, fields, m)
        if exp_report.matches:
            report.add(f"expansion[k={degree}] all cells", True)
        else:
            for failure in exp_report.failures():
                report.add(failure, False, failure)
    return report
