"""Exact construction of irreducible reduced root systems.

Simple roots follow the Bourbaki node ordering:

* ``A_l``: chain ``1 - 2 - ... - l``
* ``B_l``: chain, ``alpha_l`` short
* ``C_l``: chain, ``alpha_l`` long
* ``D_l``: chain ``1 - ... - (l-2)`` with ``l-1`` and ``l`` both attached to ``l-2``
* ``E_l``: ``1 - 3 - 4 - 5 - 6 - 7 - 8`` with ``2`` attached to ``4``
* ``F_4``: ``alpha_1, alpha_2`` long, ``alpha_3, alpha_4`` short
* ``G_2``: ``alpha_1`` short, ``alpha_2`` long

Long roots have squared length 2. Everything combinatorial (Cartan and Gram
matrices, root coefficients, weights, rho) is kept in exact integer or
``Fraction`` arithmetic; only ``embed`` and ``RootVec.coords`` are floats.
"""

from __future__ import annotations

import math
import re
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from numbers import Real
from typing import Sequence

import numpy as np

from .errors import InternalClosureError, UnsupportedRank

FAMILIES = "ABCDEFG"
MAX_CLASSICAL_RANK = 8
NORMALIZATIONS = ("long_sq_2",)

Matrix = tuple[tuple[Fraction, ...], ...]


@dataclass(frozen=True, order=True)
class RootSystemId:
    family: str
    rank: int

    def __str__(self) -> str:
        return f"{self.family}{self.rank}"

    @classmethod
    def parse(cls, text: str) -> "RootSystemId":
        """Parse a spec string such as ``"B3"`` or ``"e8"``."""
        m = re.fullmatch(r"\s*([A-Za-z])\s*(\d+)\s*", text)
        if m is None:
            raise ValueError(f"cannot parse root system spec {text!r}")
        family = m.group(1).upper()
        if family not in FAMILIES:
            raise ValueError(f"unknown family {m.group(1)!r} in {text!r}")
        return cls(family, int(m.group(2)))

    @property
    def simply_laced(self) -> bool:
        return self.family in "ADE"


def check_rank(rid: RootSystemId, max_rank: int = MAX_CLASSICAL_RANK) -> None:
    f, l = rid.family, rid.rank
    if f not in FAMILIES:
        raise ValueError(f"unknown family {f!r}")
    ok = {
        "A": 1 <= l <= max_rank,
        "B": 2 <= l <= max_rank,
        "C": 2 <= l <= max_rank,
        "D": 4 <= l <= max_rank,
        "E": l in (6, 7, 8),
        "F": l == 4,
        "G": l == 2,
    }[f]
    if not ok:
        raise UnsupportedRank(f"{rid} is not a supported root system")


@dataclass(frozen=True)
class Coupling:
    """One coupling value per root length class.

    ``g_short`` is ignored for simply-laced systems. The same container is
    used for ground-state exponents ``kappa``.
    """

    g_long: Real = 1
    g_short: Real = 1

    def __post_init__(self):
        if self.g_long < 0 or self.g_short < 0:
            raise ValueError("couplings must be nonnegative")

    @classmethod
    def uniform(cls, g: Real) -> "Coupling":
        return cls(g, g)

    def scaled(self, tau: Real) -> "Coupling":
        return Coupling(self.g_long * tau, self.g_short * tau)

    def value(self, length_class: str) -> Real:
        return self.g_long if length_class == "long" else self.g_short

    def exact(self, length_class: str) -> Fraction:
        return Fraction(self.value(length_class))


@dataclass(frozen=True)
class RootVec:
    simple_coeffs: tuple[int, ...]
    coords: tuple[float, ...]
    sq_length: Fraction
    length_class: str

    @property
    def height(self) -> int:
        return sum(self.simple_coeffs)

    def is_positive(self) -> bool:
        return all(n >= 0 for n in self.simple_coeffs) and any(self.simple_coeffs)


@dataclass(frozen=True)
class RCoefficients:
    r_root: tuple[Fraction, ...]
    r_coroot: tuple[Fraction, ...]


@dataclass(frozen=True)
class RootSystemData:
    id: RootSystemId
    cartan: tuple[tuple[int, ...], ...]
    gram: Matrix
    simple_roots: tuple[RootVec, ...]
    positive_roots: tuple[RootVec, ...]
    highest_root: RootVec
    fund_weights_coroot: Matrix
    dual_basis_root: Matrix
    degrees: tuple[int, ...]
    weyl_order: int
    center_order: int
    num_roots: int
    embed: np.ndarray
    normalization: str = "long_sq_2"

    @property
    def rank(self) -> int:
        return self.id.rank

    @property
    def simply_laced(self) -> bool:
        return len({r.length_class for r in self.positive_roots}) == 1

    @cached_property
    def root_matrix(self) -> np.ndarray:
        """Positive-root coordinates stacked row-wise (float)."""
        m = np.array([r.coords for r in self.positive_roots], dtype=float)
        m.flags.writeable = False
        return m

    @cached_property
    def coeff_matrix(self) -> np.ndarray:
        """Positive-root simple coefficients stacked row-wise (int)."""
        m = np.array([r.simple_coeffs for r in self.positive_roots], dtype=np.int64)
        m.flags.writeable = False
        return m

    def roots(self) -> list[RootVec]:
        """All roots, positive then negative."""
        return list(self.positive_roots) + [negate(r) for r in self.positive_roots]

    def inner(self, u: Sequence, v: Sequence) -> Fraction:
        """Exact inner product of two vectors in the simple-root basis."""
        return sum(
            (u[j] * self.gram[j][k] * v[k] for j in range(self.rank) for k in range(self.rank)),
            Fraction(0),
        )

    def to_coords(self, v: Sequence) -> np.ndarray:
        """Euclidean coordinates of a simple-root-basis vector."""
        return np.asarray([float(x) for x in v]) @ self.embed


def cartan_matrix(rid: RootSystemId) -> list[list[int]]:
    """Cartan matrix ``C[j][k] = 2 (a_j, a_k) / (a_k, a_k)`` in Bourbaki order."""
    f, l = rid.family, rid.rank
    C = [[2 if j == k else 0 for k in range(l)] for j in range(l)]

    def link(i, j, cij=-1, cji=-1):
        C[i][j] = cij
        C[j][i] = cji

    if f in "ABC":
        for i in range(l - 1):
            link(i, i + 1)
        if f == "B":
            link(l - 2, l - 1, -2, -1)
        elif f == "C":
            link(l - 2, l - 1, -1, -2)
    elif f == "D":
        for i in range(l - 2):
            link(i, i + 1)
        link(l - 3, l - 1)
    elif f == "E":
        for i, j in [(0, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (1, 3)]:
            if j < l:
                link(i, j)
    elif f == "F":
        link(0, 1)
        link(1, 2, -2, -1)
        link(2, 3)
    elif f == "G":
        link(0, 1, -1, -3)
    return C


def _squared_lengths(C: list[list[int]]) -> list[Fraction]:
    # (a_j, a_j) / (a_k, a_k) = C[j][k] / C[k][j] along each Dynkin edge
    l = len(C)
    sq: list[Fraction | None] = [None] * l
    sq[0] = Fraction(1)
    todo = deque([0])
    while todo:
        k = todo.popleft()
        for j in range(l):
            if j != k and C[j][k] != 0 and sq[j] is None:
                sq[j] = sq[k] * Fraction(C[j][k], C[k][j])
                todo.append(j)
    if any(s is None for s in sq):
        raise InternalClosureError("Dynkin diagram is not connected")
    top = max(sq)
    return [2 * s / top for s in sq]


def invariants_table(rid: RootSystemId, max_rank: int = MAX_CLASSICAL_RANK):
    """Return ``(degrees, weyl_order, center_order)`` from the classical tables."""
    check_rank(rid, max_rank)
    f, l = rid.family, rid.rank
    if f == "A":
        degrees, z = list(range(2, l + 2)), l + 1
    elif f in "BC":
        degrees, z = list(range(2, 2 * l + 1, 2)), 2
    elif f == "D":
        degrees, z = sorted(list(range(2, 2 * l - 1, 2)) + [l]), 4
    elif f == "E":
        degrees, z = {
            6: ([2, 5, 6, 8, 9, 12], 3),
            7: ([2, 6, 8, 10, 12, 14, 18], 2),
            8: ([2, 8, 12, 14, 18, 20, 24, 30], 1),
        }[l]
    elif f == "F":
        degrees, z = [2, 6, 8, 12], 1
    else:
        degrees, z = [2, 6], 1
    return tuple(degrees), math.prod(degrees), z


def expected_positive_count(rid: RootSystemId) -> int:
    """|R+| from the closed-form family formulas (independent of the degree table)."""
    f, l = rid.family, rid.rank
    if f == "A":
        return l * (l + 1) // 2
    if f in "BC":
        return l * l
    if f == "D":
        return l * (l - 1)
    return {("E", 6): 36, ("E", 7): 63, ("E", 8): 120, ("F", 4): 24, ("G", 2): 6}[(f, l)]


def exact_inverse(m: Sequence[Sequence]) -> Matrix:
    """Gauss-Jordan inverse over the rationals."""
    n = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        a[col] = [x / p for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return tuple(tuple(row[n:]) for row in a)


def negate(r: RootVec) -> RootVec:
    return RootVec(
        tuple(-n for n in r.simple_coeffs), tuple(-x for x in r.coords), r.sq_length, r.length_class
    )


def coroot(alpha: RootVec) -> tuple[Fraction, ...]:
    """``2 alpha / (alpha, alpha)`` in the simple-root basis (exact)."""
    return tuple(Fraction(2 * n) / alpha.sq_length for n in alpha.simple_coeffs)


def reflect(v: Sequence, alpha: RootVec, gram: Matrix | None = None):
    """Reflect ``v`` in the hyperplane orthogonal to ``alpha``.

    With ``gram`` given, ``v`` is read in the simple-root basis and the result
    is exact (``Fraction``). Without it, ``v`` is a Euclidean coordinate vector
    and ``alpha.coords`` is used.
    """
    if alpha.sq_length == 0:
        raise ValueError("cannot reflect in a zero vector")
    if gram is None:
        v = np.asarray(v, dtype=float)
        a = np.asarray(alpha.coords)
        return v - (2.0 * float(v @ a) / float(alpha.sq_length)) * a
    n = alpha.simple_coeffs
    l = len(n)
    pairing = sum((Fraction(v[j]) * gram[j][k] * n[k] for j in range(l) for k in range(l)), Fraction(0))
    factor = 2 * pairing / alpha.sq_length
    return tuple(Fraction(v[j]) - factor * n[j] for j in range(l))


def _enumerate_positive(C: list[list[int]]) -> list[tuple[int, ...]]:
    # BFS closure of the simple roots under simple reflections, keeping positives
    l = len(C)
    simple = [tuple(int(i == j) for j in range(l)) for i in range(l)]
    seen = set(simple)
    out = list(simple)
    todo = deque(simple)
    while todo:
        beta = todo.popleft()
        for i in range(l):
            # (beta, a_i^vee) = sum_k n_k C[k][i]
            p = sum(beta[k] * C[k][i] for k in range(l))
            if p == 0:
                continue
            image = tuple(beta[k] - (p if k == i else 0) for k in range(l))
            if any(n < 0 for n in image) or image in seen:
                continue
            seen.add(image)
            out.append(image)
            todo.append(image)
    out.sort(key=lambda n: (sum(n), tuple(-x for x in n)))
    return out


@lru_cache(maxsize=None)
def build_root_system(
    rid: RootSystemId, normalization: str = "long_sq_2", max_rank: int = MAX_CLASSICAL_RANK
) -> RootSystemData:
    """Build the full exact description of the root system ``rid``."""
    if normalization not in NORMALIZATIONS:
        raise ValueError(f"unknown normalization {normalization!r}")
    degrees, weyl_order, z = invariants_table(rid, max_rank)
    l = rid.rank
    C = cartan_matrix(rid)
    sq = _squared_lengths(C)
    gram = tuple(tuple(C[j][k] * sq[k] / 2 for k in range(l)) for j in range(l))

    embed = np.linalg.cholesky(np.array([[float(x) for x in row] for row in gram]))

    long_sq = max(sq)

    def make(coeffs):
        s = sum((coeffs[j] * gram[j][k] * coeffs[k] for j in range(l) for k in range(l)), Fraction(0))
        coords = tuple(float(x) for x in np.asarray(coeffs, dtype=float) @ embed)
        return RootVec(tuple(coeffs), coords, s, "long" if s == long_sq else "short")

    coeffs = _enumerate_positive(C)
    expected = sum(d - 1 for d in degrees)
    if len(coeffs) != expected or expected != expected_positive_count(rid):
        raise InternalClosureError(
            f"{rid}: closure produced {len(coeffs)} positive roots, tables say {expected}"
        )
    if weyl_order != math.prod(degrees):
        raise InternalClosureError(f"{rid}: |W| does not match the product of degrees")

    positive = tuple(make(c) for c in coeffs)
    simple = positive[:l]
    top = max(positive, key=lambda r: r.height)
    if not all(all(a >= b for a, b in zip(top.simple_coeffs, r.simple_coeffs)) for r in positive):
        raise InternalClosureError(f"{rid}: no dominant highest root")

    ginv = exact_inverse(gram)
    # (dual_j, a_k) = delta_jk  ->  dual_j = row j of gram^-1 in the simple-root basis
    dual = ginv
    fund = tuple(tuple(x * sq[j] / 2 for x in dual[j]) for j in range(l))

    return RootSystemData(
        id=rid,
        cartan=tuple(tuple(row) for row in C),
        gram=gram,
        simple_roots=simple,
        positive_roots=positive,
        highest_root=top,
        fund_weights_coroot=fund,
        dual_basis_root=dual,
        degrees=degrees,
        weyl_order=weyl_order,
        center_order=z,
        num_roots=2 * len(positive),
        embed=embed,
        normalization=normalization,
    )


def fundamental_weights(rs: RootSystemData) -> tuple[Matrix, Matrix]:
    """Return ``(lambda, lambda_hat)`` in the simple-root basis.

    ``lambda_j`` is dual to the simple coroots, ``lambda_hat_j`` to the simple
    roots. They coincide for simply-laced systems.
    """
    return rs.fund_weights_coroot, rs.dual_basis_root


def rho_and_r(rs: RootSystemData, g: Coupling) -> tuple[tuple[Fraction, ...], RCoefficients]:
    """Exact ``rho(g)`` (simple-root basis) and the expansions of ``2 rho(g)``."""
    l = rs.rank
    two_rho = [Fraction(0)] * l
    for r in rs.positive_roots:
        w = g.exact(r.length_class)
        for j, n in enumerate(r.simple_coeffs):
            two_rho[j] += w * n
    r_coroot = tuple(two_rho[j] * rs.simple_roots[j].sq_length / 2 for j in range(l))
    rho = tuple(x / 2 for x in two_rho)
    return rho, RCoefficients(tuple(two_rho), r_coroot)


def default_systems(deep: bool = False) -> list[RootSystemId]:
    names = ["A1", "A2", "A3", "A4", "A5", "B2", "B3", "B4", "C3", "D4", "E6", "F4", "G2"]
    if deep:
        names += ["E7", "E8"]
    return [RootSystemId.parse(n) for n in names]


def all_supported(max_rank: int = MAX_CLASSICAL_RANK) -> list[RootSystemId]:
    out = [RootSystemId("A", l) for l in range(1, max_rank + 1)]
    out += [RootSystemId("B", l) for l in range(2, max_rank + 1)]
    out += [RootSystemId("C", l) for l in range(2, max_rank + 1)]
    out += [RootSystemId("D", l) for l in range(4, max_rank + 1)]
    out += [RootSystemId("E", l) for l in (6, 7, 8)]
    out += [RootSystemId("F", 4), RootSystemId("G", 2)]
    return out
