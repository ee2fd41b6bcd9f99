"""Coordinate systems of superdomains.

A chart is an ordered tuple of coordinates; each coordinate carries a parity
and a role. Roles name the slot the coordinate occupies in the canonical
bundles (base, velocities, momenta and their parity-changed copies).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum, StrEnum
from functools import cached_property

import sympy as sp

from .errors import UnknownCoordinateError
from .scalar import symbol


class Parity(IntEnum):
    EVEN = 0
    ODD = 1

    def flip(self) -> Parity:
        return Parity(1 - self)

    @property
    def short(self) -> str:
        return "e" if self is Parity.EVEN else "o"


class Role(StrEnum):
    BASE_EVEN = "q"
    BASE_ODD = "theta"
    VELOCITY_EVEN = "v"
    VELOCITY_ODD = "zeta"
    PI_VELOCITY = "pi_v"
    PI_ODD_VELOCITY = "pi_zeta"
    MOMENTUM_EVEN = "p"
    MOMENTUM_ODD = "eta"
    PI_MOMENTUM = "pi_p"
    PI_ODD_MOMENTUM = "pi_eta"
    FREE = "free"


ROLE_PARITY: dict[Role, Parity] = {
    Role.BASE_EVEN: Parity.EVEN,
    Role.BASE_ODD: Parity.ODD,
    Role.VELOCITY_EVEN: Parity.EVEN,
    Role.VELOCITY_ODD: Parity.ODD,
    Role.PI_VELOCITY: Parity.ODD,
    Role.PI_ODD_VELOCITY: Parity.EVEN,
    Role.MOMENTUM_EVEN: Parity.EVEN,
    Role.MOMENTUM_ODD: Parity.ODD,
    Role.PI_MOMENTUM: Parity.ODD,
    Role.PI_ODD_MOMENTUM: Parity.EVEN,
}

# The parity-change functor on roles.
PI_ROLE: dict[Role, Role] = {
    Role.VELOCITY_EVEN: Role.PI_VELOCITY,
    Role.VELOCITY_ODD: Role.PI_ODD_VELOCITY,
    Role.MOMENTUM_EVEN: Role.PI_MOMENTUM,
    Role.MOMENTUM_ODD: Role.PI_ODD_MOMENTUM,
}

BASE_ROLES = frozenset({Role.BASE_EVEN, Role.BASE_ODD})


class ChartKind(StrEnum):
    BASE = "base"
    TANGENT_SUPER = "tangent-super"
    TANGENT = "tangent"
    COTANGENT_SUPER = "cotangent-super"
    COTANGENT = "cotangent"
    COTANGENT_ODD = "cotangent-odd"
    CUSTOM = "custom"


@dataclass(frozen=True, slots=True)
class Coordinate:
    name: str
    parity: Parity
    role: Role = Role.FREE

    @property
    def symbol(self) -> sp.Symbol:
        return symbol(self.name)

    @property
    def is_odd(self) -> bool:
        return self.parity is Parity.ODD


@dataclass(frozen=True)
class CoordinateSystem:
    label: str
    coordinates: tuple[Coordinate, ...]
    kind: ChartKind = ChartKind.CUSTOM
    base_label: str = ""

    def __post_init__(self) -> None:
        names = [c.name for c in self.coordinates]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate coordinate names in chart {self.label!r}")
        for coordinate in self.coordinates:
            expected = ROLE_PARITY.get(coordinate.role)
            if expected is not None and expected is not coordinate.parity:
                raise ValueError(
                    f"coordinate {coordinate.name!r} has role {coordinate.role} "
                    f"but parity {coordinate.parity.name.lower()}"
                )

    @cached_property
    def _index(self) -> dict[str, int]:
        return {c.name: i for i, c in enumerate(self.coordinates)}

    @cached_property
    def _odd_index(self) -> dict[str, int]:
        return {c.name: i for i, c in enumerate(self.odd)}

    @cached_property
    def even(self) -> tuple[Coordinate, ...]:
        return tuple(c for c in self.coordinates if c.parity is Parity.EVEN)

    @cached_property
    def odd(self) -> tuple[Coordinate, ...]:
        return tuple(c for c in self.coordinates if c.parity is Parity.ODD)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(c.name for c in self.coordinates)

    @property
    def even_names(self) -> frozenset[str]:
        return frozenset(c.name for c in self.even)

    @property
    def dimension(self) -> tuple[int, int]:
        return len(self.even), len(self.odd)

    @property
    def n_odd(self) -> int:
        return len(self.odd)

    def __contains__(self, name: object) -> bool:
        return name in self._index

    def __len__(self) -> int:
        return len(self.coordinates)

    def get(self, name: str) -> Coordinate:
        try:
            return self.coordinates[self._index[name]]
        except KeyError:
            raise UnknownCoordinateError(name, self.label) from None

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise UnknownCoordinateError(name, self.label) from None

    def odd_index(self, name: str) -> int:
        """Position of an odd coordinate among the odd generators."""
        try:
            return self._odd_index[name]
        except KeyError:
            raise UnknownCoordinateError(name, self.label) from None

    def parity_of(self, name: str) -> Parity:
        return self.get(name).parity

    def by_role(self, role: Role) -> tuple[Coordinate, ...]:
        return tuple(c for c in self.coordinates if c.role is role)

    @property
    def base_coordinates(self) -> tuple[Coordinate, ...]:
        return tuple(c for c in self.coordinates if c.role in BASE_ROLES)

    @property
    def fiber_coordinates(self) -> tuple[Coordinate, ...]:
        return tuple(c for c in self.coordinates if c.role not in BASE_ROLES)

    @property
    def base_dimension(self) -> tuple[int, int]:
        return len(self.by_role(Role.BASE_EVEN)), len(self.by_role(Role.BASE_ODD))

    def describe(self) -> str:
        parts = [f"{c.name}({c.parity.short})" for c in self.coordinates]
        return f"{self.label}: [" + ", ".join(parts) + "]"
