import math
import numpy as np
import pytest

from weylmodes.rootsys import RootSystemId, all_supported, build_root_system, default_systems

DEFAULT_IDS = [str(r) for r in default_systems()]
ALL_IDS = [str(r) for r in all_supported()]


def rs_of(name):
    return build_root_system(RootSystemId.parse(name))


def to_internal(rs, simple_in_e):
    """Orthogonal map from a textbook realization to the internal embedding.

    ``simple_in_e`` holds the simple roots row-wise in the textbook
    coordinates; returns Q with ``q_internal = q_e @ Q``.
    """
    E = np.asarray(simple_in_e, dtype=float)
    Q = np.linalg.solve(E, rs.embed)
    assert np.allclose(Q @ Q.T, np.eye(len(Q)), atol=1e-12)
    return Q


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pair_checks(rs):
    """Exact closure and integrality over all root pairs, in scaled integers.

    Returns ``(closed, integral)``.
    """
    D = math.lcm(*(x.denominator for row in rs.gram for x in row))
    S = np.array([[int(x * D) for x in row] for row in rs.gram], dtype=np.int64)
    N = np.array([r.simple_coeffs for r in rs.roots()], dtype=np.int64)
    P = N @ S @ N.T  # D * (a, b)
    sq = np.diag(P)
    # integrality of 2 (b, a) / (a, a) for every ordered pair
    integral = bool(np.all((2 * P) % sq[None, :] == 0))
    k = (2 * P) // sq[None, :]  # k[b, a] = (b, a^vee)
    images = N[:, None, :] - k[:, :, None] * N[None, :, :]
    known = set(map(tuple, N.tolist()))
    closed = all(t in known for t in map(tuple, images.reshape(-1, rs.rank).tolist()))
    return closed, integral
