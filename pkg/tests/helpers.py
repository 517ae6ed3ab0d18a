"""Shared instance builders and independent oracles for the test suite."""

import numpy as np

from aialo.lp_model import LPInstance, ToleranceParams, UnknownSet


def make_instance(c, A, b, radius=None, unknown="b", sigma=1.0):
    c = np.asarray(c, dtype=float)
    A = np.atleast_2d(np.asarray(A, dtype=float))
    b = np.asarray(b, dtype=float)
    if radius is None:
        radius = 10.0 * (1.0 + float(np.abs(b).max()))
    return LPInstance(
        objective=c,
        constraint_matrix=A,
        rhs=b,
        radius_bound=float(radius),
        unknown_set=UnknownSet(unknown),
        noise_scale=sigma,
    )


def unit_square(c=(1.0, 0.5), unknown="b", sigma=1.0):
    return make_instance(c, [[1.0, 0.0], [0.0, 1.0]], [1.0, 1.0], radius=2.0,
                         unknown=unknown, sigma=sigma)


def simplex2(c=(1.0, 0.2), unknown="b", sigma=1.0):
    return make_instance(c, [[1.0, 1.0]], [1.0], radius=2.0, unknown=unknown, sigma=sigma)


def random_bounded_instance(rng, n, m, unknown="b", sigma=1.0, box=10.0):
    """m - n random unit-ball rows with b in [0.5, 5], plus box rows."""
    assert m > n
    direction = rng.normal(size=(m - n, n))
    direction /= np.linalg.norm(direction, axis=1, keepdims=True)
    A = np.vstack([direction * rng.uniform(0.3, 1.0, size=(m - n, 1)), np.eye(n)])
    b = np.concatenate([rng.uniform(0.5, 5.0, size=m - n), np.full(n, box)])
    c = rng.uniform(-10.0, 10.0, size=n)
    return make_instance(c, A, b, radius=box * np.sqrt(n) * 1.01, unknown=unknown, sigma=sigma)


def default_tol(delta=0.1, eps=0.1):
    return ToleranceParams(delta=delta, eps_opt=eps, eps_feas=eps)


def grid_search_allocation(weights, bounds, coarse=1.25, fine=1.01, expand=2.0):
    """Two-stage geometric-grid minimizer of sum(tau) over the row constraints.

    Independent of the barrier solver: feasibility of each grid point is
    checked directly.  The coarse pass brackets the optimum; the fine pass
    uses a geometric grid dense enough for ~1% objective accuracy.
    """
    W = np.atleast_2d(np.asarray(weights, dtype=float))
    B = np.asarray(bounds, dtype=float)
    cols = np.flatnonzero(W.sum(axis=0) > 0)
    Wr = W[:, cols]
    lo = np.max(Wr / B[:, None], axis=0)  # tau_i >= a_i / B from single terms
    lo = np.maximum(lo, 1e-12)
    # Superposing each row's closed-form solo optimum is always feasible.
    solo = np.zeros(cols.size)
    for k in range(Wr.shape[0]):
        root = np.sqrt(Wr[k])
        solo += root * root.sum() / B[k]
    hi = np.maximum(solo, lo * 1.0000001)

    def best_on_grids(grids):
        mesh = np.meshgrid(*grids, indexing="ij")
        pts = np.stack([g.ravel() for g in mesh], axis=1)
        usage = (Wr[None, :, :] / pts[:, None, :]).sum(axis=2)
        feasible = np.all(usage <= B[None, :] * (1 + 1e-12), axis=1)
        if not np.any(feasible):
            return None, np.inf
        totals = pts.sum(axis=1)
        totals[~feasible] = np.inf
        idx = int(np.argmin(totals))
        return pts[idx], float(totals[idx])

    def geom(a, b, ratio):
        count = max(2, int(np.ceil(np.log(b / a) / np.log(ratio))) + 1)
        return np.geomspace(a, b, count)

    coarse_pt, _ = best_on_grids([geom(lo[i], hi[i], coarse) for i in range(cols.size)])
    assert coarse_pt is not None, "coarse grid found no feasible point"
    fine_grids = [
        geom(max(lo[i], coarse_pt[i] / expand), coarse_pt[i] * expand, fine)
        for i in range(cols.size)
    ]
    _, fine_obj = best_on_grids(fine_grids)
    return fine_obj
