import math

import numpy as np
import pytest

from weylmodes.errors import DomainError
from weylmodes.potentials import (
    alcove_vertices,
    grad_u1,
    grad_u2,
    hess_u1,
    hess_u2,
    in_alcove,
    interior_seed,
    matched_coupling,
    pairing,
    pairings,
    point_from_pairings,
    psi0_log,
    random_interior_points,
    simple_pairings,
    u1,
    u2,
)
from weylmodes.rootsys import Coupling

from conftest import ALL_IDS, DEFAULT_IDS, rs_of, to_internal

ONE = Coupling(1, 1)
MIXED = Coupling(1.3, 0.7)


def fd_grad(f, q, h=1e-5):
    q = np.asarray(q, dtype=float)
    out = np.empty_like(q)
    for i in range(len(q)):
        e = np.zeros_like(q)
        e[i] = h
        out[i] = (f(q + e) - f(q - e)) / (2 * h)
    return out


def fd_jac(g, q, h=1e-5):
    cols = []
    for i in range(len(q)):
        e = np.zeros_like(q)
        e[i] = h
        cols.append((g(q + e) - g(q - e)) / (2 * h))
    return np.array(cols).T


def b2_textbook(rs):
    # a1 = e1 - e2, a2 = e2
    return to_internal(rs, [[1, -1], [0, 1]])


def test_pairing_examples():
    rs = rs_of("A2")
    q = np.zeros(2)
    assert all(pairing(q, a) == 0 for a in rs.positive_roots)
    a1 = rs_of("A1").simple_roots[0]
    assert pairing([math.pi / (2 * math.sqrt(2))], a1) == pytest.approx(math.pi / 2, abs=1e-15)
    q = np.array([0.3, -0.8])
    a, b, ab = rs.positive_roots
    assert ab.simple_coeffs == (1, 1)
    assert pairing(q, ab) == pytest.approx(pairing(q, a) + pairing(q, b), abs=1e-15)


def test_in_alcove_examples():
    rs = rs_of("A1")
    assert not in_alcove(rs, [0.0])
    assert in_alcove(rs, point_from_pairings(rs, [math.pi / 2]))
    assert not in_alcove(rs, point_from_pairings(rs, [math.pi]))
    assert not in_alcove(rs, [np.nan])


def test_interior_seed_examples():
    rs = rs_of("A1")
    assert simple_pairings(rs, interior_seed(rs)) == pytest.approx([math.pi / 2])
    rs = rs_of("A2")
    assert simple_pairings(rs, interior_seed(rs)) == pytest.approx([math.pi / 4] * 2)


@pytest.mark.parametrize("name", ALL_IDS)
def test_interior_seed_inside(name):
    rs = rs_of(name)
    q0 = interior_seed(rs)
    assert in_alcove(rs, q0)
    assert pairing(q0, rs.highest_root) == pytest.approx(math.pi / 2)


@pytest.mark.parametrize("name", DEFAULT_IDS)
def test_vertices_and_samples(name, rng):
    rs = rs_of(name)
    v = alcove_vertices(rs)
    assert np.allclose(v[0], 0)
    for j, vert in enumerate(v[1:]):
        assert pairing(vert, rs.highest_root) == pytest.approx(math.pi)
        s = simple_pairings(rs, vert)
        assert np.allclose(np.delete(s, j), 0, atol=1e-12)
    pts = random_interior_points(rs, 50, rng)
    assert all(in_alcove(rs, p) for p in pts)


def test_sampling_seed_env(monkeypatch):
    rs = rs_of("B3")
    monkeypatch.setenv("WEYLMODES_SEED", "7")
    a = random_interior_points(rs, 3)
    b = random_interior_points(rs, 3)
    monkeypatch.setenv("WEYLMODES_SEED", "8")
    c = random_interior_points(rs, 3)
    assert np.array_equal(a, b) and not np.array_equal(a, c)


def test_a1_values():
    rs = rs_of("A1")
    q = point_from_pairings(rs, [math.pi / 2])
    assert u1(rs, ONE, q) == pytest.approx(0, abs=1e-15)
    assert grad_u1(rs, ONE, q) == pytest.approx([0], abs=1e-15)
    assert hess_u1(rs, ONE, q) == pytest.approx(np.array([[2.0]]))
    assert u2(rs, ONE, q) == pytest.approx(1)
    assert hess_u2(rs, ONE, q) == pytest.approx(np.array([[4.0]]))
    assert psi0_log(rs, ONE, q) == pytest.approx(0, abs=1e-15)


def test_a2_values():
    rs = rs_of("A2")
    q = point_from_pairings(rs, [math.pi / 3] * 2)
    assert hess_u1(rs, ONE, q) == pytest.approx(4 * np.eye(2))
    assert u2(rs, ONE, q) == pytest.approx(4)
    assert hess_u2(rs, ONE, q) == pytest.approx(16 * np.eye(2))
    assert psi0_log(rs, ONE, q) == pytest.approx(math.log(27 / 64) / 2)
    assert psi0_log(rs, ONE, q) == pytest.approx(-0.43152, abs=1e-5)


def test_b2_hand_hessian():
    rs = rs_of("B2")
    Q = b2_textbook(rs)
    q_e = np.array([math.pi / 2, math.atan(1 / math.sqrt(2))])
    q = q_e @ Q
    assert in_alcove(rs, q)
    h_e = Q @ hess_u1(rs, ONE, q) @ Q.T
    assert h_e == pytest.approx(np.diag([4.0, 6.0]), abs=1e-12)
    assert grad_u1(rs, ONE, q) == pytest.approx([0, 0], abs=1e-14)


def test_domain_errors():
    rs = rs_of("A2")
    wall = point_from_pairings(rs, [0.0, 1.0])
    outside = point_from_pairings(rs, [2.0, 2.0])
    for f in (u1, grad_u1, hess_u1, u2, grad_u2, hess_u2, psi0_log):
        with pytest.raises(DomainError):
            f(rs, ONE, wall)
        with pytest.raises(DomainError):
            f(rs, ONE, outside)


def test_gradient_diverges_toward_wall():
    rs = rs_of("A1")
    norms = [np.linalg.norm(grad_u2(rs, ONE, point_from_pairings(rs, [t]))) for t in (1e-1, 1e-2, 1e-3)]
    assert norms[0] < norms[1] < norms[2]
    with pytest.raises(DomainError):
        grad_u2(rs, ONE, point_from_pairings(rs, [0.0]))


@pytest.mark.parametrize("name", DEFAULT_IDS)
@pytest.mark.parametrize("g", [ONE, MIXED], ids=["g1", "mixed"])
def test_derivatives_match_finite_differences(name, g, rng):
    rs = rs_of(name)
    for q in random_interior_points(rs, 20, rng):
        for f, grad, hess in ((u1, grad_u1, hess_u1), (u2, grad_u2, hess_u2)):
            ga = grad(rs, g, q)
            gn = fd_grad(lambda x: f(rs, g, x), q)
            assert np.linalg.norm(ga - gn) <= 1e-5 * max(np.linalg.norm(ga), 1.0)
            ha = hess(rs, g, q)
            hn = fd_jac(lambda x: grad(rs, g, x), q)
            assert np.linalg.norm(ha - hn) <= 1e-4 * np.linalg.norm(ha)
            assert np.array_equal(ha, ha.T)


@pytest.mark.parametrize("name", DEFAULT_IDS)
def test_u1_convex(name, rng):
    rs = rs_of(name)
    for q in random_interior_points(rs, 20, rng):
        assert np.linalg.eigvalsh(hess_u1(rs, MIXED, q)).min() > 0


@pytest.mark.parametrize("name", DEFAULT_IDS)
def test_psi0_is_minus_u1(name, rng):
    rs = rs_of(name)
    for q in random_interior_points(rs, 100, rng):
        assert psi0_log(rs, MIXED, q) == -u1(rs, MIXED, q)


def test_matched_coupling_examples():
    assert matched_coupling(rs_of("A2"), ONE) == ONE
    h = matched_coupling(rs_of("B2"), ONE)
    assert h.g_long == 1 and h.g_short == pytest.approx(1 / math.sqrt(2))
    h = matched_coupling(rs_of("G2"), ONE)
    assert h.g_short == pytest.approx(1 / math.sqrt(3))
    assert matched_coupling(rs_of("B2"), MIXED, "raw") == MIXED
    h = matched_coupling(rs_of("B2"), Coupling(3, 2), "literal")
    assert (h.g_long, h.g_short) == pytest.approx((math.sqrt(6), math.sqrt(2)))
    with pytest.raises(ValueError):
        matched_coupling(rs_of("B2"), ONE, "other")


@pytest.mark.parametrize("name", ALL_IDS)
@pytest.mark.parametrize("kappa", [ONE, Coupling(1, 2)], ids=["k1", "k12"])
def test_prepotential_constant(name, kappa):
    rs = rs_of(name)
    h = matched_coupling(rs, kappa)
    pts = random_interior_points(rs, 100)
    vals = np.array([u2(rs, h, q) - 0.5 * np.sum(grad_u1(rs, kappa, q) ** 2) for q in pts])
    assert np.ptp(vals) <= 1e-8 * max(abs(vals).max(), 1.0)


def test_prepotential_fails_for_raw_coupling():
    rs = rs_of("B2")
    pts = random_interior_points(rs, 20)
    vals = [u2(rs, ONE, q) - 0.5 * np.sum(grad_u1(rs, ONE, q) ** 2) for q in pts]
    assert np.ptp(vals) > 1e-2
