"""Finite atlases of base superdomains and their induced tangent-superbundle data.

A transition `(a, b)` gives chart-b coordinates as superfunctions of chart-a
coordinates (source a, target b). From it we induce the tangent-superbundle
transition, the structural (odd-odd) transition matrix and the body blocks,
and check the cocycle identities on every triple of charts with all three
transitions present.
"""

from __future__ import annotations

from collections.abc import Iterator, Mapping
from dataclasses import dataclass, field
from itertools import permutations

import numpy as np
import sympy as sp

from .charts import bundle_chart, partner
from .coordinates import ChartKind, CoordinateSystem, Parity, Role
from .errors import NonInvertibleTransitionError
from .graded_matrix import GradedMatrix
from .logging import get_logger, log_pipeline
from .morphisms import SuperMorphism, compose, identity
from .scalar import ScalarExpr, is_zero, normalize
from .schemas import Check
from .superfunction import SuperFunction, left_derivative

logger = get_logger(__name__)


@dataclass(frozen=True, eq=False)
class AtlasSpec:
    name: str
    charts: Mapping[str, CoordinateSystem]
    transitions: Mapping[tuple[str, str], SuperMorphism]
    batchelor: bool = False

    def triples(self) -> Iterator[tuple[str, str, str]]:
        """Chart triples (a, b, c) with transitions a→b, b→c and a→c."""
        for a, b, c in permutations(self.charts, 3):
            if (a, b) in self.transitions and (b, c) in self.transitions and (a, c) in self.transitions:
                yield a, b, c

    def inverse_pairs(self) -> Iterator[tuple[str, str]]:
        for a, b in self.transitions:
            if a < b and (b, a) in self.transitions:
                yield a, b


@dataclass(frozen=True)
class TransitionData:
    """The expansion of a transition recovered by monomial extraction.

    q'^i = φ⁰^i + Σ φ^i_{αβ} θ^α θ^β + …  (φ^i antisymmetric in α, β)
    θ'^α = Σ ψ_{αβ} θ^β + Σ ψ_{αβγδ} θ^β θ^γ θ^δ + …
    """

    phi0: tuple[ScalarExpr, ...]
    phi2: Mapping[tuple[int, int, int], ScalarExpr]
    psi: sp.Matrix
    psi3: Mapping[tuple[int, tuple[int, ...]], ScalarExpr] = field(default_factory=dict)

    @property
    def is_batchelor(self) -> bool:
        return all(is_zero(value) for value in self.phi2.values())


def _lift(t: SuperMorphism, name: str, st: CoordinateSystem) -> SuperFunction:
    return t.assignment[name].rechart(st)


def induce_st_transition(t: SuperMorphism) -> SuperMorphism:
    """The tangent-superbundle transition induced by a base transition.

    v'   = Σ ∂q'/∂q v − Σ ∂q'/∂θ ζ        ζ'  = Σ ∂θ'/∂q v + Σ ∂θ'/∂θ ζ
    πζ'  = −Σ ∂θ'/∂q πv + Σ ∂θ'/∂θ πζ     πv' = Σ ∂q'/∂q πv + Σ ∂q'/∂θ πζ
    """
    require_invertible(t)
    source_st = bundle_chart(t.source, ChartKind.TANGENT_SUPER)
    target_st = bundle_chart(t.target, ChartKind.TANGENT_SUPER)

    def coordinate(name: str) -> SuperFunction:
        return SuperFunction.coordinate(source_st, name)

    base_even = t.source.by_role(Role.BASE_EVEN)
    base_odd = t.source.by_role(Role.BASE_ODD)
    v = [coordinate(partner(source_st, c.name, Role.VELOCITY_EVEN).name) for c in base_even]
    pv = [coordinate(partner(source_st, c.name, Role.PI_VELOCITY).name) for c in base_even]
    z = [coordinate(partner(source_st, c.name, Role.VELOCITY_ODD).name) for c in base_odd]
    pz = [coordinate(partner(source_st, c.name, Role.PI_ODD_VELOCITY).name) for c in base_odd]
    zero = SuperFunction.zero(source_st)

    images: dict[str, SuperFunction] = {}
    for target_q in t.target.by_role(Role.BASE_EVEN):
        q_new = _lift(t, target_q.name, source_st)
        dq = [left_derivative(q_new, c.name) for c in base_even]
        dth = [left_derivative(q_new, c.name) for c in base_odd]
        images[target_q.name] = q_new
        images[partner(target_st, target_q.name, Role.VELOCITY_EVEN).name] = (
            sum((a * b for a, b in zip(dq, v)), zero) - sum((a * b for a, b in zip(dth, z)), zero)
        )
        images[partner(target_st, target_q.name, Role.PI_VELOCITY).name] = (
            sum((a * b for a, b in zip(dq, pv)), zero) + sum((a * b for a, b in zip(dth, pz)), zero)
        )
    for target_th in t.target.by_role(Role.BASE_ODD):
        th_new = _lift(t, target_th.name, source_st)
        dq = [left_derivative(th_new, c.name) for c in base_even]
        dth = [left_derivative(th_new, c.name) for c in base_odd]
        images[target_th.name] = th_new
        images[partner(target_st, target_th.name, Role.VELOCITY_ODD).name] = (
            sum((a * b for a, b in zip(dq, v)), zero) + sum((a * b for a, b in zip(dth, z)), zero)
        )
        images[partner(target_st, target_th.name, Role.PI_ODD_VELOCITY).name] = (
            -sum((a * b for a, b in zip(dq, pv)), zero) + sum((a * b for a, b in zip(dth, pz)), zero)
        )
    name = f"ST({t.name})" if t.name else ""
    log_pipeline(logger, "atlas.induced", transition=t.name, source=source_st.label)
    return SuperMorphism(source_st, target_st, images, name)


def body_split(t: SuperMorphism) -> tuple[sp.Matrix, sp.Matrix]:
    """(Ã, D̃): bodies of ∂q'/∂q and ∂θ'/∂θ."""
    even_rows = [c.name for c in t.target.by_role(Role.BASE_EVEN)]
    odd_rows = [c.name for c in t.target.by_role(Role.BASE_ODD)]
    even_cols = [c.name for c in t.source.by_role(Role.BASE_EVEN)]
    odd_cols = [c.name for c in t.source.by_role(Role.BASE_ODD)]
    a_tilde = t.jacobian(even_rows, even_cols).body()
    d_tilde = t.jacobian(odd_rows, odd_cols).body()
    return a_tilde, d_tilde


def require_invertible(t: SuperMorphism) -> None:
    a_tilde, d_tilde = body_split(t)
    for label, block in (("Ã", a_tilde), ("D̃", d_tilde)):
        if block.shape[0] and is_zero(block.det(method="berkowitz")):
            raise NonInvertibleTransitionError(
                f"transition {t.name or t.source.label + '->' + t.target.label} has a "
                f"singular body block {label}"
            )


def transition_data(t: SuperMorphism) -> TransitionData:
    even_targets = t.target.by_role(Role.BASE_EVEN)
    odd_targets = t.target.by_role(Role.BASE_ODD)
    n = len(odd_targets)
    phi0 = tuple(t.assignment[c.name].body for c in even_targets)
    phi2: dict[tuple[int, int, int], ScalarExpr] = {}
    for i, c in enumerate(even_targets):
        image = t.assignment[c.name]
        for alpha in range(n):
            for beta in range(alpha + 1, n):
                half = normalize(image.coefficient((alpha, beta)) / 2)
                phi2[(i, alpha, beta)] = half
                phi2[(i, beta, alpha)] = -half
    psi = sp.Matrix(n, n, lambda a, b: t.assignment[odd_targets[a].name].coefficient((b,)))
    psi3: dict[tuple[int, tuple[int, ...]], ScalarExpr] = {}
    for alpha, c in enumerate(odd_targets):
        for monomial, coeff in t.assignment[c.name].terms.items():
            if len(monomial) == 3:
                psi3[(alpha, monomial)] = coeff
    return TransitionData(phi0=phi0, phi2=phi2, psi=psi, psi3=psi3)


def _odd_names(st: CoordinateSystem) -> list[str]:
    return [c.name for c in st.odd]


def structural_transition(t: SuperMorphism) -> GradedMatrix:
    """Body of ∂(θ', ζ', πv')/∂(θ, ζ, πv) for the induced transition.

    Entries are functions of the even ST coordinates (q, v, πζ).
    """
    induced = induce_st_transition(t)
    rows = _odd_names(induced.target)
    cols = _odd_names(induced.source)
    jacobian = induced.jacobian(rows, cols)
    return GradedMatrix.build(
        induced.source,
        [Parity.ODD] * len(rows),
        [Parity.ODD] * len(cols),
        lambda i, j: SuperFunction.constant(induced.source, jacobian[i, j].body),
    )


def printed_structural_matrix(t: SuperMorphism) -> GradedMatrix:
    """The block matrix [[ψ, 0, 0], [∂ψ/∂q·v, ψ, 0], [2Σφ_{αβ}πζ^α, 0, ∂φ⁰/∂q]] from the transition data."""
    data = transition_data(t)
    st = bundle_chart(t.source, ChartKind.TANGENT_SUPER)
    base_even = t.source.by_role(Role.BASE_EVEN)
    base_odd = t.source.by_role(Role.BASE_ODD)
    m, n = len(base_even), len(base_odd)
    v = [partner(st, c.name, Role.VELOCITY_EVEN).symbol for c in base_even]
    pz = [partner(st, c.name, Role.PI_ODD_VELOCITY).symbol for c in base_odd]
    q = [c.symbol for c in base_even]

    def entry(i: int, j: int) -> ScalarExpr:
        row_block, r = divmod(i, n) if i < 2 * n else (2, i - 2 * n)
        col_block, s = divmod(j, n) if j < 2 * n else (2, j - 2 * n)
        if (row_block, col_block) in ((0, 0), (1, 1)):
            return data.psi[r, s]
        if (row_block, col_block) == (1, 0):
            return sum((sp.diff(data.psi[r, s], q[k]) * v[k] for k in range(m)), sp.S.Zero)
        if (row_block, col_block) == (2, 0):
            return sum((2 * data.phi2[(r, a, s)] * pz[a] for a in range(n)), sp.S.Zero)
        if (row_block, col_block) == (2, 2):
            return sp.diff(data.phi0[r], q[s])
        return sp.S.Zero

    size = 2 * n + m
    return GradedMatrix.build(
        st,
        [Parity.ODD] * size,
        [Parity.ODD] * size,
        lambda i, j: SuperFunction.constant(st, normalize(entry(i, j))),
    )


# -- checks ------------------------------------------------------------------


def _check(name: str, passed: bool, detail: str = "") -> Check:
    if not passed:
        logger.warning("atlas.check_failed", check=name, detail=detail)
    return Check(name=name, passed=bool(passed), detail=detail)


def _body_substitution(t: SuperMorphism) -> dict[sp.Symbol, ScalarExpr]:
    return {c.symbol: t.assignment[c.name].body for c in t.target.even}


def _numeric_matrix(matrix: GradedMatrix, values: Mapping[str, float]) -> np.ndarray:
    symbols = [c.symbol for c in matrix.cs.even]
    fn = sp.lambdify(symbols, matrix.body(), modules="numpy")
    return np.asarray(fn(*[values[c.name] for c in matrix.cs.even]), dtype=float)


def _sample_points(
    st: CoordinateSystem, rng: np.random.Generator, count: int
) -> list[dict[str, float]]:
    return [
        {c.name: float(rng.uniform(-1.5, 1.5)) for c in st.even}
        for _ in range(count)
    ]


def structural_cocycle_residual(
    t_ab: SuperMorphism,
    t_bc: SuperMorphism,
    t_ac: SuperMorphism,
    *,
    samples: int = 10,
    seed: int = 0,
) -> float:
    """Largest |Ψ_ac(p) − Ψ_bc(Y(p))·Ψ_ab(p)| over random body points p."""
    psi_ab = structural_transition(t_ab)
    psi_bc = structural_transition(t_bc)
    psi_ac = structural_transition(t_ac)
    induced_ab = induce_st_transition(t_ab)
    body_images = {
        c.name: sp.lambdify(
            [s.symbol for s in induced_ab.source.even],
            induced_ab.assignment[c.name].body,
            modules="numpy",
        )
        for c in induced_ab.target.even
    }
    rng = np.random.default_rng(seed)
    worst = 0.0
    accepted = 0
    attempts = 0
    while accepted < samples and attempts < samples * 20:
        attempts += 1
        point = _sample_points(induced_ab.source, rng, 1)[0]
        args = [point[c.name] for c in induced_ab.source.even]
        with np.errstate(all="ignore"):
            image = {name: float(fn(*args)) for name, fn in body_images.items()}
            lhs = _numeric_matrix(psi_ac, point)
            rhs = _numeric_matrix(psi_bc, image) @ _numeric_matrix(psi_ab, point)
        if not (np.all(np.isfinite(lhs)) and np.all(np.isfinite(rhs))):
            continue
        accepted += 1
        scale = max(1.0, float(np.max(np.abs(lhs))) if lhs.size else 1.0)
        if lhs.size:
            worst = max(worst, float(np.max(np.abs(lhs - rhs))) / scale)
    return worst


def _block_cocycle(
    t_ab: SuperMorphism, t_bc: SuperMorphism, t_ac: SuperMorphism
) -> tuple[bool, bool]:
    a_ab, d_ab = body_split(t_ab)
    a_bc, d_bc = body_split(t_bc)
    a_ac, d_ac = body_split(t_ac)
    moved = _body_substitution(t_ab)
    a_ok = all(is_zero(e) for e in (a_ac - a_bc.xreplace(moved) * a_ab))
    d_ok = all(is_zero(e) for e in (d_ac - d_bc.xreplace(moved) * d_ab))
    return a_ok, d_ok


def body_split_agrees(t: SuperMorphism, a_tilde: sp.Matrix, d_tilde: sp.Matrix) -> bool:
    """Ã is ∂φ⁰/∂q and D̃ is ψ, both read off the transition data."""
    data = transition_data(t)
    q = [c.symbol for c in t.source.by_role(Role.BASE_EVEN)]
    expected_a = sp.Matrix(len(data.phi0), len(q), lambda i, j: sp.diff(data.phi0[i], q[j]))
    if a_tilde.shape != expected_a.shape or d_tilde.shape != data.psi.shape:
        return False
    return all(is_zero(e) for e in (a_tilde - expected_a)) and all(
        is_zero(e) for e in (d_tilde - data.psi)
    )


def check_transition(key: tuple[str, str], t: SuperMorphism, *, batchelor: bool) -> list[Check]:
    label = f"{key[0]}->{key[1]}"
    checks: list[Check] = []
    try:
        require_invertible(t)
        checks.append(_check(f"{label}: body blocks invertible", True))
    except NonInvertibleTransitionError as exc:
        checks.append(_check(f"{label}: body blocks invertible", False, str(exc)))
        return checks
    a_tilde, d_tilde = body_split(t)
    checks.append(
        _check(
            f"{label}: body split",
            body_split_agrees(t, a_tilde, d_tilde),
            f"Ã={a_tilde.tolist()} D̃={d_tilde.tolist()}",
        )
    )
    structural = structural_transition(t)
    printed = printed_structural_matrix(t)
    checks.append(
        _check(f"{label}: structural matrix matches transition data", structural == printed)
    )
    if batchelor:
        data = transition_data(t)
        checks.append(
            _check(
                f"{label}: Batchelor normalization",
                data.is_batchelor,
                "" if data.is_batchelor else "quadratic odd terms present in q'",
            )
        )
    return checks


def check_atlas(atlas: AtlasSpec, *, samples: int = 10, seed: int = 0, tolerance: float = 1e-9) -> list[Check]:
    """Run every consistency check the atlas supports."""
    log_pipeline(logger, "atlas.check", atlas=atlas.name, charts=len(atlas.charts))
    checks: list[Check] = []
    singular: set[tuple[str, str]] = set()
    for key, t in atlas.transitions.items():
        own = check_transition(key, t, batchelor=atlas.batchelor)
        checks.extend(own)
        if not own[0].passed:
            singular.add(key)

    for a, b in atlas.inverse_pairs():
        if {(a, b), (b, a)} & singular:
            continue
        t_ab, t_ba = atlas.transitions[(a, b)], atlas.transitions[(b, a)]
        base_ok = compose(t_ba, t_ab) == identity(t_ab.source) and compose(t_ab, t_ba) == identity(t_ba.source)
        checks.append(_check(f"{a}<->{b}: inverse transitions", base_ok))
        if base_ok:
            st_ok = compose(induce_st_transition(t_ba), induce_st_transition(t_ab)).is_identity()
            checks.append(_check(f"{a}<->{b}: induced inverse is the identity", st_ok))

    for a, b, c in atlas.triples():
        if {(a, b), (b, c), (a, c)} & singular:
            continue
        t_ab, t_bc, t_ac = (atlas.transitions[k] for k in ((a, b), (b, c), (a, c)))
        prefix = f"{a}->{b}->{c}"
        composed = compose(t_bc, t_ab)
        checks.append(_check(f"{prefix}: base cocycle", composed == t_ac))
        induced_composed = compose(induce_st_transition(t_bc), induce_st_transition(t_ab))
        checks.append(
            _check(f"{prefix}: induced cocycle", induced_composed == induce_st_transition(t_ac))
        )
        checks.append(
            _check(
                f"{prefix}: induction is functorial",
                induce_st_transition(composed) == induced_composed,
            )
        )
        a_ok, d_ok = _block_cocycle(t_ab, t_bc, t_ac)
        checks.append(_check(f"{prefix}: Ã cocycle", a_ok))
        checks.append(_check(f"{prefix}: D̃ cocycle", d_ok))
        residual = structural_cocycle_residual(t_ab, t_bc, t_ac, samples=samples, seed=seed)
        checks.append(
            _check(
                f"{prefix}: structural cocycle at {samples} body points",
                residual <= tolerance,
                f"max residual {residual:.3e}",
            )
        )
    logger.info(
        "atlas.checked",
        atlas=atlas.name,
        checks=len(checks),
        failed=sum(not c.passed for c in checks),
    )
    return checks
