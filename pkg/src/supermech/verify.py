"""Verification suites: randomized identities plus the worked examples.

Every suite returns a `Checklist`. Randomized cases draw from
`numpy.random.default_rng([seed, salt, index])`, so a case's outcome depends
only on the seed and its index, not on how many worker threads ran it.
"""

from __future__ import annotations

from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass
from functools import partial
from itertools import combinations

import anyio
import numpy as np
import sympy as sp
from anyio import to_thread

from .atlas import body_split
from .atlasfile import atlas_report, bundled_atlases, load_bundled_atlas
from .charts import bundle_chart, make_chart, partner
from .coordinates import ChartKind, CoordinateSystem, Parity, Role
from .errors import DegenerateLagrangianError, NotAffineError, SupermechError
from .fields import (
    SuperVectorField,
    determinacy_rank,
    generating_family,
    is_sode,
    vertical_endomorphism,
    vertical_lift_field,
    vertical_lift_function,
)
from .forms import (
    PRINTED_ODD_PAIRING,
    GradedForm,
    body_rank,
    canonical_two_form,
    differential,
    evaluate,
    exterior_derivative,
    form_section,
    is_semibasic,
    liouville_form,
    pullback,
    wedge,
)
from .graded_matrix import GradedMatrix, matrix_invert
from .legendre import hamiltonian, invert_legendre, legendre, verify_theta_pullback
from .logging import bind_context, get_logger, suppress_logs
from .mechanics import dynamics
from .modelfile import ModelSpec, bundled_models, format_model, load_bundled_model, parse_model_text
from .morphisms import SuperMorphism, canonical_projection, compose
from .oracle import GrassmannOracle, agrees, random_point, to_vector
from .scalar import derivative, evaluate as evaluate_scalar, is_zero, normalize, symbol
from .schemas import Check, Checklist
from .settings import SupermechSettings
from .superfunction import SuperFunction, invert, left_derivative

logger = get_logger(__name__)

SUITES = ("algebra", "forms", "cartan", "legendre", "atlas")
NO_RESULT = "case produced a result"
REGULAR_MODELS = ("free-particle", "free-superparticle", "harmonic", "odd-vz", "superoscillator")

CaseResult = dict[str, bool]


@dataclass(frozen=True)
class VerifyOptions:
    seed: int = 0
    algebra_cases: int = 200
    calculus_cases: int = 100
    theorem_forms: int = 20
    sample_points: int = 10
    tolerance: float = 1e-9
    jobs: int = 1

    @classmethod
    def from_settings(
        cls, settings: SupermechSettings, *, seed: int | None = None, jobs: int | None = None
    ) -> VerifyOptions:
        verify = settings.verify
        return cls(
            seed=settings.seed if seed is None else seed,
            algebra_cases=verify.algebra_cases,
            calculus_cases=verify.calculus_cases,
            theorem_forms=verify.theorem_forms,
            sample_points=verify.sample_points,
            tolerance=verify.tolerance,
            jobs=verify.jobs if jobs is None else jobs,
        )


# -- random generators ---------------------------------------------------------


def case_rng(seed: int, salt: int, index: int) -> np.random.Generator:
    return np.random.default_rng([seed, salt, index])


def _rational(rng: np.random.Generator) -> sp.Rational:
    numerator = int(rng.integers(-3, 4)) or 1
    return sp.Rational(numerator, int(rng.integers(1, 3)))


def _parity(rng: np.random.Generator) -> Parity:
    return Parity(int(rng.integers(0, 2)))


def random_scalar(names: Sequence[str], rng: np.random.Generator, *, terms: int = 2, degree: int = 2) -> sp.Expr:
    """A small polynomial with rational coefficients in the given even names."""
    total = sp.Integer(0)
    for _ in range(terms):
        term = _rational(rng)
        if names:
            for _ in range(int(rng.integers(0, degree + 1))):
                term *= symbol(names[int(rng.integers(len(names)))])
        total += term
    return normalize(total)


def _monomials(n_odd: int, max_length: int) -> list[tuple[int, ...]]:
    return [
        monomial
        for length in range(min(n_odd, max_length) + 1)
        for monomial in combinations(range(n_odd), length)
    ]


def random_function(
    cs: CoordinateSystem,
    rng: np.random.Generator,
    *,
    parity: Parity | None = None,
    terms: int = 3,
    max_length: int = 3,
) -> SuperFunction:
    """Random polynomial superfunction, homogeneous when a parity is given."""
    monomials = [
        m for m in _monomials(cs.n_odd, max_length) if parity is None or len(m) % 2 == parity
    ]
    if not monomials:
        return SuperFunction.zero(cs)
    chosen = rng.choice(len(monomials), size=min(terms, len(monomials)), replace=False)
    even = [c.name for c in cs.even]
    return SuperFunction.from_terms(
        cs, {monomials[int(i)]: random_scalar(even, rng) for i in sorted(chosen)}
    )


def random_field(cs: CoordinateSystem, rng: np.random.Generator, parity: Parity) -> SuperVectorField:
    components: dict[str, SuperFunction] = {}
    for coordinate in cs.coordinates:
        if rng.random() < 0.6:
            components[coordinate.name] = random_function(
                cs, rng, parity=Parity((parity + coordinate.parity) % 2), terms=2
            )
    return SuperVectorField(cs, components)


def random_form(
    cs: CoordinateSystem, degree: int, rng: np.random.Generator, *, terms: int = 3
) -> GradedForm:
    form = GradedForm.zero(cs, degree)
    names = cs.names
    for _ in range(terms):
        piece = GradedForm.function(random_function(cs, rng, parity=_parity(rng), terms=2))
        for _ in range(degree):
            piece = wedge(piece, GradedForm.differential(cs, names[int(rng.integers(len(names)))]))
        form = form + piece
    return form


def random_morphism(
    source: CoordinateSystem, target: CoordinateSystem, rng: np.random.Generator
) -> SuperMorphism:
    """A parity-preserving morphism with polynomial coordinate images."""
    images = {
        c.name: random_function(source, rng, parity=c.parity, terms=2) for c in target.coordinates
    }
    return SuperMorphism.from_mapping(source, target, images, name=f"{source.label}->{target.label}")


def random_graded_matrix(cs: CoordinateSystem, rng: np.random.Generator, size: int) -> GradedMatrix:
    """Square matrix with invertible constant diagonal body and nilpotent rest."""
    parities = [_parity(rng) for _ in range(size)]
    diagonal = [int(rng.integers(1, 4)) for _ in range(size)]

    def entry(i: int, j: int) -> SuperFunction:
        parity = Parity((parities[i] + parities[j]) % 2)
        value = random_function(cs, rng, parity=parity, terms=2).soul
        return value + diagonal[i] if i == j else value

    return GradedMatrix.build(cs, parities, parities, entry)


# -- case running --------------------------------------------------------------


def run_cases(case: Callable[[int], CaseResult | None], count: int, *, jobs: int = 1) -> list[CaseResult]:
    """Run `case(0) .. case(count - 1)`, in worker threads when jobs > 1.

    Results come back in index order regardless of scheduling. A case that
    returns nothing counts as a failed "case produced a result" check.
    """
    if jobs <= 1 or count <= 1:
        return [_checked(case(index), index) for index in range(count)]

    results: list[CaseResult | None] = [None] * count
    limiter = anyio.CapacityLimiter(jobs)

    async def run_one(index: int) -> None:
        results[index] = await to_thread.run_sync(case, index, limiter=limiter)

    async def run_all() -> None:
        async with anyio.create_task_group() as tg:
            for index in range(count):
                tg.start_soon(run_one, index)

    anyio.run(run_all)
    return [_checked(result, index) for index, result in enumerate(results)]


def _checked(result: CaseResult | None, index: int) -> CaseResult:
    if result is None:
        logger.warning("verify.case_without_result", case=index)
        return {NO_RESULT: False}
    return result


def tally(results: Iterable[CaseResult]) -> list[Check]:
    """One check per identity name, in order of first appearance."""
    outcomes: dict[str, list[bool]] = {}
    first_failure: dict[str, int] = {}
    for index, result in enumerate(results):
        for name, passed in result.items():
            outcomes.setdefault(name, []).append(passed)
            if not passed:
                first_failure.setdefault(name, index)
    checks = []
    for name, values in outcomes.items():
        detail = f"{sum(values)}/{len(values)} cases"
        if name in first_failure:
            detail += f", first failure at case {first_failure[name]}"
        checks.append(Check(name, all(values), detail))
    return checks


def _guarded(name: str, test: Callable[[], bool]) -> Check:
    try:
        return Check(name, bool(test()))
    except SupermechError as exc:
        return Check(name, False, f"{exc.__class__.__name__}: {exc}")


# -- algebra -------------------------------------------------------------------


def algebra_case(seed: int, index: int) -> CaseResult:
    rng = case_rng(seed, 1, index)
    m, n = int(rng.integers(1, 3)), int(rng.integers(1, 4))
    cs = make_chart(ChartKind.BASE, m, n)
    pf, pg = _parity(rng), _parity(rng)
    f = random_function(cs, rng, parity=pf)
    g = random_function(cs, rng, parity=pg)
    sign = -1 if pf is Parity.ODD and pg is Parity.ODD else 1
    result: CaseResult = {"super-commutativity": f * g == (g * f) * sign}

    odd = [c.name for c in cs.odd]
    a, b = odd[int(rng.integers(len(odd)))], odd[int(rng.integers(len(odd)))]
    anticommutator = left_derivative(left_derivative(f, b), a) + left_derivative(left_derivative(f, a), b)
    result["odd derivatives anticommute"] = anticommutator.is_zero()

    x = cs.names[int(rng.integers(len(cs.names)))]
    leibniz_sign = -1 if cs.parity_of(x) is Parity.ODD and pf is Parity.ODD else 1
    result["Leibniz rule"] = left_derivative(f * g, x) == (
        left_derivative(f, x) * g + f * left_derivative(g, x) * leibniz_sign
    )

    h = random_function(cs, rng, parity=Parity.EVEN)
    if is_zero(h.body):
        h = h + 1
    result["invert round-trip"] = h * invert(h) == 1
    matrix = random_graded_matrix(cs, rng, int(rng.integers(1, 4)))
    result["matrix_invert round-trip"] = (matrix @ matrix_invert(matrix)).is_identity()

    point = random_point(cs, rng)
    oracle = GrassmannOracle(cs.n_odd)
    fv, gv = to_vector(f, point), to_vector(g, point)
    result["oracle: product"] = agrees(to_vector(f * g, point), oracle.multiply(fv, gv))
    result["oracle: odd left derivative"] = agrees(
        to_vector(left_derivative(f, a), point), oracle.left_derivative(fv, cs.odd_index(a))
    )
    hv = to_vector(h, point)
    if abs(hv[0]) > 1e-6:
        result["oracle: inverse"] = agrees(to_vector(invert(h), point), oracle.invert(hv))

    even = [c.name for c in cs.even]
    e1, e2 = random_scalar(even, rng), random_scalar(even, rng)
    y = symbol(even[0])
    result["normalize is idempotent"] = normalize(normalize(e1)) == normalize(e1)
    result["scalar sums commute"] = normalize(e1 + e2) == normalize(e2 + e1)
    result["scalar products commute"] = normalize(e1 * e2) == normalize(e2 * e1)
    result["derivative is additive"] = is_zero(
        derivative(e1 + e2, even[0], variables=even)
        - derivative(e1, even[0], variables=even)
        - derivative(e2, even[0], variables=even)
    )
    raw = (e1 + 1) * (e2 - 1) / (1 + y**2)
    result["normalize keeps values"] = bool(
        np.isclose(evaluate_scalar(raw, point), evaluate_scalar(normalize(raw), point))
    )
    return result


def algebra_suite(options: VerifyOptions) -> Checklist:
    results = run_cases(partial(algebra_case, options.seed), options.algebra_cases, jobs=options.jobs)
    return Checklist("algebra", tally(results), options.seed)


# -- forms ---------------------------------------------------------------------


def calculus_case(seed: int, index: int) -> CaseResult:
    rng = case_rng(seed, 2, index)
    m, n = int(rng.integers(1, 3)), int(rng.integers(1, 3))
    cs = make_chart(ChartKind.BASE, m, n)
    w = random_form(cs, int(rng.integers(0, 3)), rng)
    result: CaseResult = {"d∘d = 0": exterior_derivative(exterior_derivative(w)).is_zero()}

    mid = make_chart(ChartKind.BASE, m, n, base_label="N")
    low = make_chart(ChartKind.BASE, m, n, base_label="P")
    outer, inner = random_morphism(mid, cs, rng), random_morphism(low, mid, rng)
    result["pullback is functorial"] = pullback(compose(outer, inner), w) == pullback(
        inner, pullback(outer, w)
    )
    result["pullback commutes with d"] = pullback(outer, exterior_derivative(w)) == exterior_derivative(
        pullback(outer, w)
    )
    f = random_function(cs, rng, parity=_parity(rng))
    g = random_function(cs, rng, parity=_parity(rng))
    result["pullback is an algebra homomorphism"] = outer.pullback(f * g) == outer.pullback(f) * outer.pullback(g)
    field = random_field(cs, rng, _parity(rng))
    result["i_X df = X(f)"] = evaluate(differential(f), field) == field.apply(f)
    return result


def section_case(seed: int, index: int) -> CaseResult:
    rng = case_rng(seed, 3, index)
    cs = make_chart(ChartKind.BASE, int(rng.integers(1, 3)), int(rng.integers(1, 3)))
    omega = random_form(cs, 1, rng)
    section = form_section(omega)
    return {"Sigma_omega*(Theta_0) = omega": pullback(section, liouville_form(section.target)) == omega}


def sample_diffeomorphism() -> tuple[SuperMorphism, SuperMorphism]:
    """Φ on (1|2) with q ↦ 2q + θ1θ2, θ1 ↦ θ1 + qθ2, and its inverse."""
    cs = make_chart(ChartKind.BASE, 1, 2)
    q, th1, th2 = (SuperFunction.coordinate(cs, name) for name in ("q1", "th1", "th2"))
    phi = SuperMorphism.from_mapping(cs, cs, {"q1": 2 * q + th1 * th2, "th1": th1 + q * th2}, name="Phi")
    psi = SuperMorphism.from_mapping(
        cs, cs, {"q1": (q - th1 * th2) / 2, "th1": th1 - q * th2 / 2}, name="Phi^-1"
    )
    return phi, psi


def diffeomorphism_identity(
    phi: SuperMorphism, psi: SuperMorphism, form: GradedForm, field: SuperVectorField
) -> bool:
    """(Φ*μ)(Y) = Φ*(μ(X)) with X the push-forward of Y by Φ."""
    cs = phi.source
    pushed = SuperVectorField(
        cs,
        {
            name: psi.pullback(field.apply(phi.pullback(SuperFunction.coordinate(cs, name))))
            for name in cs.names
        },
    )
    return evaluate(pullback(phi, form), field) == phi.pullback(evaluate(form, pushed))


def diffeomorphism_case(seed: int, index: int) -> CaseResult:
    rng = case_rng(seed, 4, index)
    phi, psi = sample_diffeomorphism()
    form = random_form(phi.source, 1, rng)
    field = random_field(phi.source, rng, _parity(rng))
    return {"pullback along a diffeomorphism evaluates on push-forwards": diffeomorphism_identity(phi, psi, form, field)}


def forms_suite(options: VerifyOptions) -> Checklist:
    checks = tally(run_cases(partial(calculus_case, options.seed), options.calculus_cases, jobs=options.jobs))
    checks += tally(run_cases(partial(section_case, options.seed), options.theorem_forms, jobs=options.jobs))

    phi, psi = sample_diffeomorphism()
    checks.append(
        Check(
            "sample diffeomorphism has its inverse",
            compose(phi, psi).is_identity() and compose(psi, phi).is_identity(),
        )
    )
    checks += tally(run_cases(partial(diffeomorphism_case, options.seed), options.theorem_forms, jobs=options.jobs))

    for m, n in ((1, 1), (2, 1), (1, 2)):
        base = make_chart(ChartKind.BASE, m, n)
        cotangent = bundle_chart(base, ChartKind.COTANGENT)
        super_cotangent = bundle_chart(base, ChartKind.COTANGENT_SUPER)
        checks.append(
            Check(
                f"Theta_0 is pi-semibasic on {super_cotangent.label} ({m}|{n})",
                is_semibasic(liouville_form(super_cotangent), canonical_projection(super_cotangent)),
            )
        )
        full = body_rank(canonical_two_form(cotangent))
        checks.append(
            Check(f"Omega_0 is nondegenerate on {cotangent.label} ({m}|{n})", full == len(cotangent), f"{full}/{len(cotangent)}")
        )
        deficient = body_rank(canonical_two_form(super_cotangent))
        checks.append(
            Check(
                f"Omega_0 is degenerate on {super_cotangent.label} ({m}|{n})",
                deficient < len(super_cotangent),
                f"{deficient}/{len(super_cotangent)}",
            )
        )
    return Checklist("forms", checks, options.seed)


# -- cartan --------------------------------------------------------------------

REGULARITY_FAMILY: tuple[tuple[str, int, int, str, str], ...] = (
    ("free superparticle", 1, 2, "1/2*v1^2 + 1/2*z1*z2", "regular"),
    ("superoscillator", 1, 2, "1/2*v1^2 + 1/2*z1*z2 - 1/2*q1^2 + th1*th2", "regular"),
    ("magnetic term", 1, 0, "1/2*v1^2 + v1*q1", "regular"),
    ("coupled kinetic", 2, 0, "1/2*(v1^2 + v2^2) + v1*v2/4", "regular"),
    ("position-dependent mass", 1, 0, "1/2*q1^2*v1^2", "regular"),
    ("odd potential", 1, 2, "1/2*v1^2 + q1*z1*z2", "regular"),
    ("odd coupling", 1, 2, "1/2*v1^2 + 1/2*z1*z2 + v1*th1*th2", "regular"),
    ("odd pairing", 1, 1, "v1*z1", "regular"),
    ("odd pairing with potential", 1, 1, "v1*z1 + q1*th1", "regular"),
    ("two odd pairings", 2, 2, "v1*z1 + v2*z2", "regular"),
    ("no odd kinetic term", 1, 1, "1/2*v1^2", "degenerate"),
    ("odd kinetic term only", 1, 2, "z1*z2", "degenerate"),
    ("linear even velocity", 1, 2, "v1 + 1/2*z1*z2", "degenerate"),
    ("unpaired odd velocity", 1, 2, "v1*z1", "degenerate"),
    ("rank-one kinetic term", 2, 0, "1/2*(v1 + v2)^2", "degenerate"),
)


def family_model(label: str, m: int, n: int, lagrangian: str) -> ModelSpec:
    even = " ".join(f"q{i}" for i in range(1, m + 1))
    odd = " ".join(f"th{a}" for a in range(1, n + 1))
    text = f'model "{label}"\neven {even}\nodd {odd}\nlagrangian {lagrangian}\n'
    return parse_model_text(text, source=f"family:{label}")


def regularity_family() -> list[Check]:
    checks = []
    for label, m, n, lagrangian, expected in REGULARITY_FAMILY:
        report = family_model(label, m, n, lagrangian).system().regularity
        checks.append(Check(f"{label} ({m}|{n}) is {expected}", report.verdict == expected, f"got {report.verdict}"))
        checks.append(
            Check(
                f"{label} ({m}|{n}): criterion agrees with Omega_L rank",
                report.criteria_agree,
                f"body rank {report.omega_body_rank}/{report.omega_dimension}",
            )
        )
    return checks


def vertical_case(seed: int, index: int) -> CaseResult:
    rng = case_rng(seed, 5, index)
    m, n = int(rng.integers(1, 3)), int(rng.integers(1, 3))
    base = make_chart(ChartKind.BASE, m, n)
    result: CaseResult = {}
    for kind in (ChartKind.TANGENT, ChartKind.TANGENT_SUPER):
        bundle = bundle_chart(base, kind)
        s = vertical_endomorphism(bundle)
        y = random_field(bundle, rng, _parity(rng))
        result[f"S∘S = 0 on {bundle.label}"] = s(s(y)).is_zero()
        x = random_field(base, rng, _parity(rng))
        lifted = vertical_lift_field(x, bundle)
        result[f"X^V(f^V) = X(f) on {bundle.label}"] = all(
            lifted.apply(vertical_lift_function(f, bundle)) == x.apply(f).rechart(bundle)
            for f in generating_family(base)
        )
    return result


def cartan_suite(options: VerifyOptions) -> Checklist:
    checks = tally(run_cases(partial(vertical_case, options.seed), options.sample_points, jobs=options.jobs))
    for m, n in ((1, 1), (1, 2), (2, 1), (2, 2)):
        tm = bundle_chart(make_chart(ChartKind.BASE, m, n), ChartKind.TANGENT)
        rank = vertical_endomorphism(tm).matrix().body_rank()
        checks.append(Check(f"S has body rank m+n on TM ({m}|{n})", rank == m + n, f"rank {rank}"))

    determinacy = determinacy_rank(2, 2, seed=options.seed)
    checks.append(
        Check(
            "vertical lifts determine fields on TM (2|2)",
            determinacy.determined,
            f"rank {determinacy.rank}/{determinacy.unknowns}",
        )
    )

    for name in REGULAR_MODELS:
        system = load_bundled_model(name).system()
        checks.append(Check(f"{name}: Theta_L is tau-semibasic", system.theta_is_semibasic()))
        try:
            identities = system.identities()
        except DegenerateLagrangianError as exc:
            checks.append(Check(f"{name}: dynamics solved", False, "; ".join(exc.reasons)))
            continue
        checks.extend(Check(f"{name}: {label}", passed) for label, passed in identities.items())

    checks += regularity_family()

    free = load_bundled_model("free-superparticle")
    try:
        printed = dynamics(free.lagrangian, odd_pairing=PRINTED_ODD_PAIRING)
    except DegenerateLagrangianError:
        checks.append(Check("printed odd pairing gives no second-order field", True, "no solution"))
    else:
        checks.append(Check("printed odd pairing gives no second-order field", not is_sode(printed)))
    return Checklist("cartan", checks, options.seed)


# -- legendre ------------------------------------------------------------------


def _model_checks(name: str) -> list[Check]:
    spec = load_bundled_model(name)
    checks = [
        _guarded(f"{name}: model file round-trips", lambda: parse_model_text(format_model(spec)) == spec)
    ]
    system = spec.system()
    fl = legendre(system)
    checks.append(_guarded(f"{name}: FL*(Theta_0) = Theta_L", lambda: verify_theta_pullback(fl)))
    if system.parity is Parity.EVEN:
        checks.append(Check(f"{name}: printed Legendre table agrees", fl.table_agrees))
    else:
        checks.append(Check(f"{name}: printed table differs in the pi-momentum sign", not fl.table_agrees))
    if name in REGULAR_MODELS:
        try:
            ham = hamiltonian(fl)
        except SupermechError as exc:
            checks.append(Check(f"{name}: Hamiltonian built", False, str(exc)))
        else:
            checks.extend(Check(f"{name}: {check.name}", check.passed, check.detail) for check in ham.checks)
    return checks


def _harmonic_checks() -> list[Check]:
    fl = legendre(load_bundled_model("harmonic").system())
    ham = hamiltonian(fl)
    target = fl.target
    q = SuperFunction.coordinate(target, "q1")
    p = SuperFunction.coordinate(target, partner(target, "q1", Role.MOMENTUM_EVEN).name)
    expected = q * q / 2 + p * p / 2
    return [
        Check("harmonic: H = p^2/2 + q^2/2", ham.hamiltonian == expected, str(ham.hamiltonian)),
        Check(
            "harmonic: Hamilton's equations",
            ham.field.apply(q) == p and ham.field.apply(p) == -q,
            str(ham.field.describe()),
        ),
    ]


def _raises(name: str, error: type[Exception], call: Callable[[], object]) -> Check:
    try:
        call()
    except error as exc:
        return Check(name, True, str(exc))
    return Check(name, False, f"no {error.__name__}")


def legendre_suite(options: VerifyOptions) -> Checklist:
    checks: list[Check] = []
    for name in bundled_models():
        checks += _model_checks(name)
    checks += _harmonic_checks()
    quartic = legendre(load_bundled_model("quartic").system())
    checks.append(_raises("quartic: momentum map is not affine", NotAffineError, lambda: invert_legendre(quartic)))
    degenerate = legendre(load_bundled_model("degenerate-zeta").system())
    checks.append(
        _raises("degenerate-zeta: no inverse", DegenerateLagrangianError, lambda: invert_legendre(degenerate))
    )
    return Checklist("legendre", checks, options.seed)


# -- atlas ---------------------------------------------------------------------


def _worked_transitions() -> list[Check]:
    cs = make_chart(ChartKind.BASE, 1, 1)
    target = make_chart(ChartKind.BASE, 1, 1, base_label="N")
    scaling = SuperMorphism.from_mapping(
        cs,
        target,
        {"q1": 2 * SuperFunction.coordinate(cs, "q1"), "th1": 3 * SuperFunction.coordinate(cs, "th1")},
    )
    a_tilde, d_tilde = body_split(scaling)
    checks = [Check("body split of q' = 2q, th' = 3th", (a_tilde[0, 0], d_tilde[0, 0]) == (2, 3))]

    shifted = make_chart(ChartKind.BASE, 1, 2)
    q, th1, th2 = (SuperFunction.coordinate(shifted, name) for name in ("q1", "th1", "th2"))
    shift = SuperMorphism.from_mapping(shifted, shifted, {"q1": q + th1 * th2})
    twice = compose(shift, shift)
    checks.append(Check("soul shift composed twice", twice.assignment["q1"] == q + 2 * th1 * th2))
    return checks


def atlas_suite(options: VerifyOptions) -> Checklist:
    checks: list[Check] = []
    for name in bundled_atlases():
        report = atlas_report(
            load_bundled_atlas(name),
            samples=options.sample_points,
            seed=options.seed,
            tolerance=options.tolerance,
        )
        checks.extend(Check(f"{name}: {check.name}", check.passed, check.detail) for check in report.checks)
    checks += _worked_transitions()
    return Checklist("atlas", checks, options.seed)


_SUITE_RUNNERS: dict[str, Callable[[VerifyOptions], Checklist]] = {
    "algebra": algebra_suite,
    "forms": forms_suite,
    "cartan": cartan_suite,
    "legendre": legendre_suite,
    "atlas": atlas_suite,
}


def run_suite(name: str, options: VerifyOptions) -> Checklist:
    if name not in _SUITE_RUNNERS:
        raise ValueError(f"unknown suite {name!r}; known: {', '.join(SUITES)}")
    bind_context(suite=name)
    # Per-case debug events would drown the suite summary.
    with suppress_logs("info"):
        checklist = _SUITE_RUNNERS[name](options)
    logger.info(
        "verify.suite_finished",
        suite=name,
        seed=options.seed,
        checks=len(checklist.checks),
        failed=len(checklist.failures),
    )
    return checklist


def run_suites(names: Iterable[str] | None, options: VerifyOptions) -> list[Checklist]:
    return [run_suite(name, options) for name in (names or SUITES)]
