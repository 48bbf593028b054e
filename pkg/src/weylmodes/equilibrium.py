"""Equilibrium of the alcove potentials and the small-oscillation spectrum."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NoConvergence, NotSymmetric, SingularInput
from .potentials import (
    U1,
    hess_u1,
    hess_u2,
    in_alcove,
    interior_seed,
    matched_coupling,
    potential_funcs,
    u1,
)
from .rootsys import Coupling, RootSystemData


@dataclass(frozen=True)
class MinimizeOptions:
    grad_tol: float = 1e-12
    max_iters: int = 200
    backtrack_factor: float = 0.5
    min_step: float = 1e-16

    def __post_init__(self):
        if min(self.grad_tol, self.max_iters, self.min_step) <= 0:
            raise ValueError("options must be positive")
        if not 0 < self.backtrack_factor < 1:
            raise ValueError("backtrack_factor must lie in (0, 1)")


@dataclass
class EquilibriumResult:
    q_bar: np.ndarray
    u_min: float
    a1: np.ndarray
    a2: np.ndarray
    eigs_a1: list[float]
    eigs_a2: list[float]
    c_fit: float
    relation_residual: float
    iterations: int
    grad_norm: float = 0.0


def _check_coupling(rs: RootSystemData, g: Coupling) -> None:
    present = {r.length_class for r in rs.positive_roots}
    if not any(g.value(cls) > 0 for cls in present):
        raise ValueError(f"coupling {g} has no positive component on {rs.id}")


def minimize(
    rs: RootSystemData,
    g: Coupling,
    kind: str = U1,
    opts: MinimizeOptions | None = None,
    start=None,
    return_info: bool = False,
):
    """Damped Newton descent to the interior minimum of ``u1`` or ``u2``.

    Each Newton step is shrunk by ``opts.backtrack_factor`` until the trial
    point is inside the alcove and the potential decreases. Once the
    potential has flattened to roundoff, a trial point that keeps the value
    within roundoff and lowers the gradient norm is also accepted.
    """
    opts = opts or MinimizeOptions()
    _check_coupling(rs, g)
    f, grad, hess = potential_funcs(kind)
    q = interior_seed(rs) if start is None else np.array(start, dtype=float)
    if not in_alcove(rs, q):
        raise ValueError("start point is not inside the alcove")

    fq = f(rs, g, q)
    gq = grad(rs, g, q)
    for it in range(opts.max_iters + 1):
        gnorm = float(np.linalg.norm(gq))
        if gnorm <= opts.grad_tol * (1 + abs(fq)):
            if return_info:
                return q, it, gnorm
            return q
        if it == opts.max_iters:
            break
        step = -np.linalg.solve(hess(rs, g, q), gq)
        t = 1.0
        while True:
            cand = q + t * step
            if in_alcove(rs, cand):
                fc = f(rs, g, cand)
                if fc < fq:
                    gc = grad(rs, g, cand)
                    break
                if fc <= fq + 8 * np.finfo(float).eps * (1 + abs(fq)):
                    gc = grad(rs, g, cand)
                    if np.linalg.norm(gc) < gnorm:
                        break
            t *= opts.backtrack_factor
            if t < opts.min_step:
                raise NoConvergence(f"{rs.id}: step underflow at iteration {it}, |grad| = {gnorm:.3e}")
        q, fq, gq = cand, fc, gc
    raise NoConvergence(f"{rs.id}: no convergence in {opts.max_iters} iterations")


def hessians_at(rs: RootSystemData, g: Coupling, q_bar, coupling_map: str = "matched"):
    """``(a1, a2)``: Hessian of ``u1(g)`` and of ``u2`` at the mapped coupling."""
    a1 = hess_u1(rs, g, q_bar)
    a2 = hess_u2(rs, matched_coupling(rs, g, coupling_map), q_bar)
    return a1, a2


def jacobi_eigh(m, tol: float = 1e-13, sym_tol: float = 1e-12, max_sweeps: int = 100):
    """Cyclic Jacobi eigen-decomposition of a small symmetric matrix.

    Returns ``(values, vectors)`` with ascending values and eigenvectors in
    the columns of ``vectors``.
    """
    a = np.array(m, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("expected a square matrix")
    n = a.shape[0]
    scale = np.linalg.norm(a)
    if np.max(np.abs(a - a.T), initial=0.0) > sym_tol * max(1.0, scale):
        raise NotSymmetric("matrix is not symmetric")
    a = 0.5 * (a + a.T)
    v = np.eye(n)

    def off(x):
        return float(np.linalg.norm(x - np.diag(np.diag(x))))

    for _ in range(max_sweeps):
        if off(a) <= tol * scale:
            break
        for p in range(n - 1):
            for r in range(p + 1, n):
                apr = a[p, r]
                guard = 100.0 * abs(apr)
                if abs(a[p, p]) + guard == abs(a[p, p]) and abs(a[r, r]) + guard == abs(a[r, r]):
                    a[p, r] = a[r, p] = 0.0
                    continue
                h = a[r, r] - a[p, p]
                if abs(h) + guard == abs(h):
                    t = apr / h
                else:
                    theta = h / (2.0 * apr)
                    t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                rot = np.eye(n)
                rot[p, p] = rot[r, r] = c
                rot[p, r] = s
                rot[r, p] = -s
                a = rot.T @ a @ rot
                a[p, r] = a[r, p] = 0.0
                v = v @ rot
    else:
        raise NoConvergence("Jacobi sweeps did not converge")
    w = np.diag(a)
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]


def eigenvalues_sym(m) -> list[float]:
    return [float(x) for x in jacobi_eigh(m)[0]]


def fit_proportionality(a2, a1) -> tuple[float, float]:
    """Least-squares ``c`` in ``a2 = c a1^2`` and the relative Frobenius residual."""
    a1 = np.asarray(a1, dtype=float)
    a2 = np.asarray(a2, dtype=float)
    if a1.shape != a2.shape:
        raise ValueError("shape mismatch")
    sq = a1 @ a1
    denom = float(np.sum(sq * sq))
    if denom == 0.0:
        raise SingularInput("a1 squared vanishes")
    c = float(np.sum(a2 * sq)) / denom
    norm2 = float(np.linalg.norm(a2))
    resid = float(np.linalg.norm(a2 - c * sq)) / norm2 if norm2 else float("inf")
    return c, resid


def equilibrium_report(
    rs: RootSystemData, g: Coupling, opts: MinimizeOptions | None = None, coupling_map: str = "matched"
) -> EquilibriumResult:
    q_bar, iters, gnorm = minimize(rs, g, U1, opts, return_info=True)
    a1, a2 = hessians_at(rs, g, q_bar, coupling_map)
    c, resid = fit_proportionality(a2, a1)
    return EquilibriumResult(
        q_bar=q_bar,
        u_min=u1(rs, g, q_bar),
        a1=a1,
        a2=a2,
        eigs_a1=eigenvalues_sym(a1),
        eigs_a2=eigenvalues_sym(a2),
        c_fit=c,
        relation_residual=resid,
        iterations=iters,
        grad_norm=gnorm,
    )
