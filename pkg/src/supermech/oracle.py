"""Numeric exterior-algebra oracle.

An element of the Grassmann algebra on n generators is a float vector of
length 2^n indexed by bitmask blades (bit a set means generator a occurs).
Products go through a precomputed sign table, so the symbolic engine can be
checked against an implementation that shares none of its code paths.
"""

from __future__ import annotations

from collections.abc import Mapping
from functools import cache

import numpy as np

from .coordinates import CoordinateSystem
from .scalar import evaluate
from .superfunction import SuperFunction


def _reorder_sign(left: int, right: int) -> int:
    """Sign of sorting the generators of `left` followed by those of `right`."""
    swaps = 0
    for bit in range(left.bit_length()):
        if left >> bit & 1:
            swaps += (right & ((1 << bit) - 1)).bit_count()
    return -1 if swaps % 2 else 1


@cache
def multiplication_table(n: int) -> np.ndarray:
    """T[i, j, k] with e_i e_j = Σ_k T[i, j, k] e_k."""
    dim = 1 << n
    table = np.zeros((dim, dim, dim))
    for i in range(dim):
        for j in range(dim):
            if i & j:
                continue
            table[i, j, i | j] = _reorder_sign(i, j)
    table.setflags(write=False)
    return table


class GrassmannOracle:
    def __init__(self, n: int) -> None:
        self.n = n
        self.dim = 1 << n
        self.table = multiplication_table(n)

    def one(self) -> np.ndarray:
        vector = np.zeros(self.dim)
        vector[0] = 1.0
        return vector

    def generator(self, index: int) -> np.ndarray:
        vector = np.zeros(self.dim)
        vector[1 << index] = 1.0
        return vector

    def multiply(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return np.einsum("i,ijk,j->k", a, self.table, b)

    def left_derivative(self, a: np.ndarray, index: int) -> np.ndarray:
        """∂/∂θ_index from the left."""
        bit = 1 << index
        result = np.zeros(self.dim)
        for mask in range(self.dim):
            if mask & bit and a[mask] != 0.0:
                sign = -1.0 if (mask & (bit - 1)).bit_count() % 2 else 1.0
                result[mask ^ bit] += sign * a[mask]
        return result

    def invert(self, a: np.ndarray) -> np.ndarray:
        body = a[0]
        if body == 0.0:
            raise ZeroDivisionError("element with zero body")
        ratio = -a / body
        ratio[0] = 0.0
        result = self.one()
        term = self.one()
        for _ in range(self.n):
            term = self.multiply(term, ratio)
            result = result + term
        return result / body


def to_vector(f: SuperFunction, values: Mapping[str, float]) -> np.ndarray:
    """The numeric image of f at the given even-coordinate values."""
    vector = np.zeros(1 << f.cs.n_odd)
    for monomial, coeff in f.terms.items():
        mask = sum(1 << i for i in monomial)
        vector[mask] = evaluate(coeff, values)
    return vector


def random_point(cs: CoordinateSystem, rng: np.random.Generator) -> dict[str, float]:
    """Even-coordinate values drawn from [-2, 2]."""
    return {c.name: float(rng.uniform(-2.0, 2.0)) for c in cs.even}


def agrees(a: np.ndarray, b: np.ndarray, *, tolerance: float = 1e-9) -> bool:
    scale = max(1.0, float(np.max(np.abs(a), initial=0.0)), float(np.max(np.abs(b), initial=0.0)))
    return bool(np.max(np.abs(a - b), initial=0.0) <= tolerance * scale)
