"""Canonical chart constructors for M and its tangent and cotangent superbundles."""

from __future__ import annotations

from collections.abc import Sequence

from .coordinates import (
    ROLE_PARITY,
    ChartKind,
    Coordinate,
    CoordinateSystem,
    Role,
)
from .errors import UnknownCoordinateError

# Coordinate slots per chart kind, in chart order (evens first).
CHART_LAYOUT: dict[ChartKind, tuple[Role, ...]] = {
    ChartKind.BASE: (Role.BASE_EVEN, Role.BASE_ODD),
    ChartKind.TANGENT_SUPER: (
        Role.BASE_EVEN,
        Role.VELOCITY_EVEN,
        Role.PI_ODD_VELOCITY,
        Role.BASE_ODD,
        Role.VELOCITY_ODD,
        Role.PI_VELOCITY,
    ),
    ChartKind.TANGENT: (
        Role.BASE_EVEN,
        Role.VELOCITY_EVEN,
        Role.BASE_ODD,
        Role.VELOCITY_ODD,
    ),
    ChartKind.COTANGENT_SUPER: (
        Role.BASE_EVEN,
        Role.MOMENTUM_EVEN,
        Role.PI_ODD_MOMENTUM,
        Role.BASE_ODD,
        Role.MOMENTUM_ODD,
        Role.PI_MOMENTUM,
    ),
    ChartKind.COTANGENT: (
        Role.BASE_EVEN,
        Role.MOMENTUM_EVEN,
        Role.BASE_ODD,
        Role.MOMENTUM_ODD,
    ),
    ChartKind.COTANGENT_ODD: (
        Role.BASE_EVEN,
        Role.PI_ODD_MOMENTUM,
        Role.BASE_ODD,
        Role.PI_MOMENTUM,
    ),
}

LABEL_PREFIX: dict[ChartKind, str] = {
    ChartKind.BASE: "",
    ChartKind.TANGENT_SUPER: "ST",
    ChartKind.TANGENT: "T",
    ChartKind.COTANGENT_SUPER: "ST*",
    ChartKind.COTANGENT: "T*",
    ChartKind.COTANGENT_ODD: "PiT*",
}

# Name stem per fiber role; the index follows the base coordinate it pairs with.
ROLE_STEM: dict[Role, str] = {
    Role.VELOCITY_EVEN: "v",
    Role.VELOCITY_ODD: "z",
    Role.PI_VELOCITY: "pv",
    Role.PI_ODD_VELOCITY: "pz",
    Role.MOMENTUM_EVEN: "p",
    Role.MOMENTUM_ODD: "eta",
    Role.PI_MOMENTUM: "pp",
    Role.PI_ODD_MOMENTUM: "peta",
}

# Fiber roles indexed by the even base coordinates; the rest pair with odd ones.
_EVEN_INDEXED = frozenset(
    {Role.VELOCITY_EVEN, Role.PI_VELOCITY, Role.MOMENTUM_EVEN, Role.PI_MOMENTUM}
)


def default_base_names(m: int, n: int) -> tuple[list[str], list[str]]:
    return [f"q{i}" for i in range(1, m + 1)], [f"th{a}" for a in range(1, n + 1)]


def make_chart(
    kind: ChartKind | str,
    m: int,
    n: int,
    *,
    even_names: Sequence[str] | None = None,
    odd_names: Sequence[str] | None = None,
    base_label: str = "M",
) -> CoordinateSystem:
    kind = ChartKind(kind)
    if kind is ChartKind.CUSTOM:
        raise ValueError("custom charts are built directly from coordinates")
    if m < 0 or n < 0:
        raise ValueError(f"dimensions must be non-negative, got ({m}, {n})")
    default_even, default_odd = default_base_names(m, n)
    even_names = list(even_names) if even_names is not None else default_even
    odd_names = list(odd_names) if odd_names is not None else default_odd
    if len(even_names) != m or len(odd_names) != n:
        raise ValueError("base coordinate names do not match the dimensions")

    coordinates: list[Coordinate] = []
    for role in CHART_LAYOUT[kind]:
        parity = ROLE_PARITY[role]
        if role is Role.BASE_EVEN:
            names = even_names
        elif role is Role.BASE_ODD:
            names = odd_names
        else:
            count = m if role in _EVEN_INDEXED else n
            names = [f"{ROLE_STEM[role]}{i}" for i in range(1, count + 1)]
        coordinates.extend(Coordinate(name, parity, role) for name in names)
    return CoordinateSystem(
        label=f"{LABEL_PREFIX[kind]}{base_label}",
        coordinates=tuple(coordinates),
        kind=kind,
        base_label=base_label,
    )


def base_chart(cs: CoordinateSystem) -> CoordinateSystem:
    """The base chart M underlying a bundle chart."""
    if cs.kind is ChartKind.BASE:
        return cs
    return CoordinateSystem(
        label=cs.base_label,
        coordinates=cs.base_coordinates,
        kind=ChartKind.BASE,
        base_label=cs.base_label,
    )


def bundle_chart(base: CoordinateSystem, kind: ChartKind | str) -> CoordinateSystem:
    """The bundle chart of the given kind over a base chart, keeping its names."""
    m, n = base.base_dimension
    return make_chart(
        kind,
        m,
        n,
        even_names=[c.name for c in base.by_role(Role.BASE_EVEN)],
        odd_names=[c.name for c in base.by_role(Role.BASE_ODD)],
        base_label=base.base_label or base.label,
    )


def partner(cs: CoordinateSystem, base_name: str, role: Role) -> Coordinate:
    """The fiber coordinate in `role` paired with a base coordinate."""
    coordinate = cs.get(base_name)
    base_role = Role.BASE_EVEN if role in _EVEN_INDEXED else Role.BASE_ODD
    base = cs.by_role(base_role)
    fiber = cs.by_role(role)
    for index, candidate in enumerate(base):
        if candidate.name == coordinate.name:
            if index >= len(fiber):
                break
            return fiber[index]
    raise UnknownCoordinateError(f"{role}({base_name})", cs.label)


def base_of(cs: CoordinateSystem, fiber_name: str) -> Coordinate:
    """The base coordinate a fiber coordinate is paired with."""
    coordinate = cs.get(fiber_name)
    base_role = Role.BASE_EVEN if coordinate.role in _EVEN_INDEXED else Role.BASE_ODD
    index = cs.by_role(coordinate.role).index(coordinate)
    return cs.by_role(base_role)[index]
