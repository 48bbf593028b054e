"""Trigonometric potentials on the Weyl alcove.

``u1 = -sum g_a log sin q_a`` and ``u2 = sum g_a^2 / sin^2 q_a`` with
``q_a = (a, q)`` over positive roots, plus analytic gradients and Hessians.
Points are plain float arrays in the Euclidean coordinates fixed by
``RootSystemData.embed``.
"""

from __future__ import annotations

import math
import os

import numpy as np

from .errors import DomainError
from .rootsys import Coupling, RootSystemData, RootVec

U1 = "U1"
U2 = "U2"
POTENTIAL_KINDS = (U1, U2)

COUPLING_MAPS = ("matched", "raw", "literal")
DEFAULT_SEED = 20020529


def pairing(q, alpha: RootVec) -> float:
    return float(np.dot(np.asarray(alpha.coords), np.asarray(q, dtype=float)))


def pairings(rs: RootSystemData, q) -> np.ndarray:
    """``q_a`` for every positive root, in ``rs.positive_roots`` order."""
    return rs.root_matrix @ np.asarray(q, dtype=float)


def simple_pairings(rs: RootSystemData, q) -> np.ndarray:
    return pairings(rs, q)[: rs.rank]


def in_alcove(rs: RootSystemData, q) -> bool:
    q = np.asarray(q, dtype=float)
    if not np.all(np.isfinite(q)):
        return False
    s = simple_pairings(rs, q)
    return bool(np.all(s > 0) and pairing(q, rs.highest_root) < math.pi)


def point_from_pairings(rs: RootSystemData, values) -> np.ndarray:
    """Point ``q`` with prescribed simple pairings ``(q, a_j)``."""
    return np.linalg.solve(rs.embed, np.asarray(values, dtype=float))


def interior_seed(rs: RootSystemData) -> np.ndarray:
    # (q0, a_j) = pi / (2h) for every j, so (q0, delta) = pi / 2
    h = rs.highest_root.height
    return point_from_pairings(rs, np.full(rs.rank, math.pi / (2 * h)))


def alcove_vertices(rs: RootSystemData) -> np.ndarray:
    """The ``rank + 1`` vertices of the closed alcove, row-wise."""
    l = rs.rank
    verts = [np.zeros(l)]
    for j, n in enumerate(rs.highest_root.simple_coeffs):
        t = np.zeros(l)
        t[j] = math.pi / n
        verts.append(point_from_pairings(rs, t))
    return np.array(verts)


def sampling_seed(default: int = DEFAULT_SEED) -> int:
    return int(os.environ.get("WEYLMODES_SEED", default))


def random_interior_points(rs: RootSystemData, n: int, rng=None, shrink: float = 0.9) -> np.ndarray:
    """Uniform points of the alcove contracted by ``shrink`` toward its centroid."""
    if rng is None:
        rng = np.random.default_rng(sampling_seed())
    verts = alcove_vertices(rs)
    bary = rng.dirichlet(np.ones(len(verts)), size=n)
    pts = bary @ verts
    centroid = verts.mean(axis=0)
    return centroid + shrink * (pts - centroid)


def root_couplings(rs: RootSystemData, g: Coupling) -> np.ndarray:
    return np.array([float(g.value(r.length_class)) for r in rs.positive_roots])


def _sines(rs: RootSystemData, q):
    qa = pairings(rs, q)
    s = np.sin(qa)
    if not np.all((qa > 0) & (qa < math.pi) & (s > 0)):
        raise DomainError(f"point {np.asarray(q)} is not inside the alcove of {rs.id}")
    return qa, s


def u1(rs: RootSystemData, g: Coupling, q) -> float:
    _, s = _sines(rs, q)
    return float(-root_couplings(rs, g) @ np.log(s))


def grad_u1(rs: RootSystemData, g: Coupling, q) -> np.ndarray:
    qa, s = _sines(rs, q)
    w = root_couplings(rs, g) * np.cos(qa) / s
    return -(w @ rs.root_matrix)


def _outer_sum(R: np.ndarray, w: np.ndarray) -> np.ndarray:
    # sum_a w_a a a^T, symmetrized so h == h.T holds bitwise
    h = (R.T * w) @ R
    return 0.5 * (h + h.T)


def hess_u1(rs: RootSystemData, g: Coupling, q) -> np.ndarray:
    _, s = _sines(rs, q)
    return _outer_sum(rs.root_matrix, root_couplings(rs, g) / s**2)


def u2(rs: RootSystemData, g: Coupling, q) -> float:
    _, s = _sines(rs, q)
    return float(root_couplings(rs, g) ** 2 @ (1.0 / s**2))


def grad_u2(rs: RootSystemData, g: Coupling, q) -> np.ndarray:
    qa, s = _sines(rs, q)
    w = -2.0 * root_couplings(rs, g) ** 2 * np.cos(qa) / s**3
    return w @ rs.root_matrix


def hess_u2(rs: RootSystemData, g: Coupling, q) -> np.ndarray:
    qa, s = _sines(rs, q)
    c = np.cos(qa)
    w = root_couplings(rs, g) ** 2 * (6.0 * c**2 / s**4 + 2.0 / s**2)
    return _outer_sum(rs.root_matrix, w)


def psi0_log(rs: RootSystemData, kappa: Coupling, q) -> float:
    """``log Psi_0^kappa(q) = sum kappa_a log sin q_a``."""
    _, s = _sines(rs, q)
    return float(root_couplings(rs, kappa) @ np.log(s))


def potential_funcs(kind: str):
    """``(value, gradient, hessian)`` callables for ``"U1"`` or ``"U2"``."""
    if kind == U1:
        return u1, grad_u1, hess_u1
    if kind == U2:
        return u2, grad_u2, hess_u2
    raise ValueError(f"unknown potential kind {kind!r}")


def matched_coupling(rs: RootSystemData, kappa: Coupling, mode: str = "matched") -> Coupling:
    """Coupling for ``u2`` paired with exponents ``kappa`` of ``u1``.

    ``"matched"`` uses ``h_a = kappa_a sqrt((a, a) / 2)``, for which
    ``u2(h) - |grad u1(kappa)|^2 / 2`` is constant on the alcove.
    ``"raw"`` returns ``kappa`` unchanged and ``"literal"`` uses
    ``h_a^2 = kappa_a (kappa_a - 1)`` with no length factor.
    """
    if mode not in COUPLING_MAPS:
        raise ValueError(f"unknown coupling map {mode!r}")
    if mode == "raw":
        return kappa
    lengths = {r.length_class: r.sq_length for r in rs.simple_roots}
    out = {}
    for cls in ("long", "short"):
        k = float(kappa.value(cls))
        if mode == "matched":
            out[cls] = k * math.sqrt(float(lengths.get(cls, 2)) / 2)
        else:
            if k * (k - 1) < 0:
                raise ValueError(f"kappa={k} gives a negative squared coupling")
            out[cls] = math.sqrt(k * (k - 1))
    return Coupling(out["long"], out["short"])
