"""Circumcenters, circumradii and Jung-type diameter bounds.

The circumcenter of a set ``A`` is a minimiser of ``c -> max_i d(c, a_i)``
and the circumradius is the minimum value. Euclidean sets use an exact
smallest-enclosing-ball solver in dimension at most three. On the model
manifolds exact solvers are used whenever the diameter is below ``Delta``:

* circle: complement of the largest angular gap;
* sphere: normalised minimum-norm point of the convex hull of the unit
  vectors (a hemisphere-contained set has its center there);
* flat torus: lift around one point, then the Euclidean solver.

Outside that range a multi-start move-to-farthest scheme followed by a
Nelder-Mead polish is used and the result is flagged.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from .manifolds import ManifoldModel, UnsupportedModel, _random_coords, _xyz_to_sphere, perturb_intrinsic
from .metric import check_point_cloud

CIRCUM_CONSTANT = 4.0 / 3.0
SUBSET_CONSTANT = 3.0 / 4.0
CIRCUM_TOL = 1e-8
SUBSET_TOL = 1e-6
NO_EXISTENCE_FLAG = "diameter >= Delta: circumcenter existence not guaranteed"
N_STARTS = 8


@dataclass(frozen=True, eq=False)
class CircumResult:
    """Minimax center of a finite set.

    Attributes
    ----------
    center : ndarray
        Ambient coordinates (Euclidean input) or chart coordinates.
    radius : float
        ``max_i d(center, p_i)`` for the returned center.
    achieved_by : int
        Index of a farthest input point.
    iterations : int
        Solver iterations (0 for closed-form cases).
    residual : float
        Certified gap between ``radius`` and the optimum.
    flags : tuple of str
    """

    center: np.ndarray
    radius: float
    achieved_by: int
    iterations: int
    residual: float
    flags: tuple[str, ...] = field(default=())


# -- Euclidean ---------------------------------------------------------------------

def _ball_through(P: np.ndarray) -> tuple[np.ndarray, float]:
    """Smallest ball with all rows of ``P`` on its boundary (affine-hull circumcenter)."""
    if P.shape[0] == 1:
        return P[0].copy(), 0.0
    U = P[1:] - P[0]
    G = U @ U.T
    rhs = 0.5 * (U * U).sum(axis=1)
    lam = np.linalg.lstsq(G, rhs, rcond=None)[0]
    c = P[0] + lam @ U
    return c, float(((P - c) ** 2).sum(axis=1).max())


def _welzl(P: np.ndarray) -> tuple[np.ndarray, float]:
    """Exact smallest enclosing ball (iterative over points, recursive over support)."""
    dim = P.shape[1]
    scale = float(np.abs(P).max()) or 1.0
    eps = 1e-12 * scale * scale

    def mb(n, support):
        c, r2 = _ball_through(P[list(support)]) if support else (None, -1.0)
        if len(support) == dim + 1:
            return c, r2
        for i in range(n):
            if c is None or ((P[i] - c) ** 2).sum() > r2 + eps:
                c, r2 = mb(i, support + (i,))
        return c, r2

    return mb(P.shape[0], ())


def _badoiu_clarkson(P: np.ndarray, iters: int) -> tuple[np.ndarray, float, int]:
    c = P[0].copy()
    best_c, best_r = c.copy(), np.inf
    for k in range(1, iters + 1):
        d2 = ((P - c) ** 2).sum(axis=1)
        far = int(np.argmax(d2))
        r = math.sqrt(d2[far])
        if r < best_r:
            best_c, best_r = c.copy(), r
        c = c + (P[far] - c) / (k + 1)
    return best_c, best_r, iters


def euclidean_circumcenter(points, *, max_iter: int = 20000) -> CircumResult:
    """Smallest enclosing ball of a Euclidean point cloud.

    A move-to-farthest pass orders the points (likely support first); in
    dimension at most three Welzl's algorithm then gives the exact ball.
    In higher dimension the move-to-farthest iterate is returned with the
    certified gap ``r_k - r_k / (1 + 1/sqrt(k))`` as residual.
    """
    P = check_point_cloud(points)
    n, dim = P.shape
    if n == 1:
        return CircumResult(P[0].copy(), 0.0, 0, 0, 0.0)
    if dim <= 3 or n <= dim + 1:
        c0, _, it = _badoiu_clarkson(P, min(50, 10 * n))
        order = np.argsort(-((P - c0) ** 2).sum(axis=1), kind="stable")
        c, _ = _welzl(P[order])
        dist = np.sqrt(((P - c) ** 2).sum(axis=1))
        far = int(np.argmax(dist))
        return CircumResult(c, float(dist[far]), far, it, 0.0)
    c, r, it = _badoiu_clarkson(P, max_iter)
    dist = np.sqrt(((P - c) ** 2).sum(axis=1))
    far = int(np.argmax(dist))
    gap = float(dist[far] - dist[far] / (1 + 1 / math.sqrt(it)))
    return CircumResult(c, float(dist[far]), far, it, gap)


# -- model manifolds -----------------------------------------------------------------

def _finish(m: ManifoldModel, P: np.ndarray, center, iterations: int, lower: float,
            flags=()) -> CircumResult:
    center = np.asarray(center, dtype=float).reshape(-1)
    dist = m.pairwise_geodesic(center[None], P)[0]
    far = int(np.argmax(dist))
    radius = float(dist[far])
    return CircumResult(center, radius, far, iterations, max(0.0, radius - lower), tuple(flags))


def _circle_center(m: ManifoldModel, P: np.ndarray) -> CircumResult | None:
    R = m.params["R"]
    ang = np.sort(P[:, 0] % (2 * math.pi))
    gaps = np.diff(np.concatenate([ang, [ang[0] + 2 * math.pi]]))
    k = int(np.argmax(gaps))
    span = 2 * math.pi - gaps[k]
    if span > math.pi:
        return None
    start = ang[(k + 1) % ang.size]
    center = (start + span / 2) % (2 * math.pi)
    return _finish(m, P, [center], 0, R * span / 2)


def _min_norm_in_hull(U: np.ndarray) -> np.ndarray | None:
    """Minimum-norm point of the convex hull of the rows of ``U`` (rows in R^3)."""
    best = None
    tol = 1e-13
    for size in (1, 2, 3):
        for S in itertools.combinations(range(U.shape[0]), size):
            V = U[list(S)]
            A = np.zeros((size + 1, size + 1))
            A[:size, :size] = V @ V.T
            A[:size, size] = 1
            A[size, :size] = 1
            b = np.zeros(size + 1)
            b[size] = 1
            try:
                sol = np.linalg.solve(A, b)
            except np.linalg.LinAlgError:
                continue
            lam = sol[:size]
            if lam.min() < -1e-12:
                continue
            q = lam @ V
            qq = float(q @ q)
            if (U @ q).min() >= qq - tol and (best is None or qq < best @ best):
                best = q
    return best


def _sphere_center(m: ManifoldModel, P: np.ndarray) -> CircumResult | None:
    U = m._unit_vectors(P)
    q = _min_norm_in_hull(U)
    if q is None:
        return None
    nq = float(np.linalg.norm(q))
    if nq < 1e-12:
        return None
    center = _xyz_to_sphere((q / nq)[None])[0]
    # max-min duality: every center is at least arccos|q| from some point
    lower = m.params["R"] * math.acos(min(1.0, nq))
    return _finish(m, P, center, 0, lower)


def _flat_torus_center(m: ManifoldModel, P: np.ndarray) -> CircumResult:
    L = m.params["L"]
    lifted = P[0] + (P - P[0] + L / 2) % L - L / 2
    res = euclidean_circumcenter(lifted)
    return _finish(m, P, res.center % L, res.iterations, res.radius - res.residual)


def _fallback_center(m: ManifoldModel, P: np.ndarray, seed: int, flags) -> CircumResult:
    rng = np.random.default_rng(seed)
    starts = [P[i] for i in range(min(P.shape[0], N_STARTS // 2))]
    while len(starts) < N_STARTS:
        base = P[rng.integers(P.shape[0])]
        starts.append(perturb_intrinsic(m, base[None], 0.5 * m.delta,
                                        int(rng.integers(2**32)))[0])

    def objective(v):
        c = m.from_ambient_param(v)
        return float(m.pairwise_geodesic(c[None], P)[0].max())

    best = None
    total = 0
    for s in starts:
        c = np.array(s, dtype=float)
        best_c, best_f = c.copy(), objective(m.to_ambient_param(c))
        for k in range(1, 400):
            far = int(np.argmax(m.pairwise_geodesic(c[None], P)[0]))
            c = m.geodesic_interpolate(c, P[far], 1.0 / (k + 1))
            f = objective(m.to_ambient_param(c))
            if f < best_f:
                best_c, best_f = c.copy(), f
        res = minimize(objective, m.to_ambient_param(best_c), method="Nelder-Mead",
                       options={"xatol": 1e-12, "fatol": 1e-12, "maxiter": 4000})
        total += 400 + int(res.nit)
        cand = m.from_ambient_param(res.x)
        f = objective(m.to_ambient_param(cand))
        if best is None or f < best[1]:
            best = (cand, f, abs(float(res.final_simplex[1].max() - res.final_simplex[1].min())))
    cand, f, spread = best
    return _finish(m, P, cand, total, f - spread, flags)


def geodesic_circumcenter(m: ManifoldModel, points, *, seed: int = 0) -> CircumResult:
    """Geodesic minimax center of chart points on a model with exact geodesics.

    When the diameter reaches ``Delta`` the result carries the flag
    :data:`NO_EXISTENCE_FLAG` and comes from the numerical fallback.
    """
    if not m.has_geodesic:
        raise UnsupportedModel("geodesic circumcenters need exact geodesics; "
                               f"{m.kind} is unsupported")
    P = m.check_coords(points)
    if P.shape[0] == 1:
        return CircumResult(P[0].copy(), 0.0, 0, 0, 0.0)
    diam = float(m.pairwise_geodesic(P).max())
    flags = []
    if diam >= m.delta:
        flags.append(NO_EXISTENCE_FLAG)
    else:
        solver = {"circle": _circle_center, "sphere2": _sphere_center,
                  "flat_torus": _flat_torus_center}[m.kind]
        res = solver(m, P)
        if res is not None:
            return res
    return _fallback_center(m, P, seed, flags)


def circumcenter(m: ManifoldModel | None, points, *, seed: int = 0) -> CircumResult:
    """Euclidean circumcenter when ``m`` is None, geodesic otherwise."""
    if m is None:
        return euclidean_circumcenter(points)
    return geodesic_circumcenter(m, points, seed=seed)


# -- Jung bounds -------------------------------------------------------------------

def jung_min_diam(R: float, n: int, kappa: float) -> float:
    """Smallest possible diameter of a set with circumradius ``R`` in an
    ``n``-dimensional space of curvature at most ``kappa``."""
    if R < 0:
        raise ValueError("circumradius must be non-negative")
    if n < 1:
        raise ValueError("dimension must be at least 1")
    factor = math.sqrt((n + 1) / (2 * n))
    if kappa == 0:
        return 2 * R * factor
    if kappa < 0:
        s = math.sqrt(-kappa)
        return 2 / s * math.asinh(factor * math.sinh(s * R))
    s = math.sqrt(kappa)
    if R > math.pi / (2 * s) * (1 + 1e-15):
        raise ValueError(
            f"for kappa > 0 the bound holds only for R <= pi/(2 sqrt(kappa)) = {math.pi / (2 * s)}"
        )
    return 2 / s * math.asin(min(1.0, factor * math.sin(s * R)))


def jung_J(r, kappa: float, n: int):
    """``J(r) = (2/sqrt(kappa)) asin(sqrt((n+1)/(2n)) sin(sqrt(kappa) r))``
    for ``0 < r <= pi/(4 sqrt(kappa))``; vectorised over ``r``."""
    if not kappa > 0:
        raise ValueError("J is defined for kappa > 0")
    if n < 1:
        raise ValueError("dimension must be at least 1")
    s = math.sqrt(kappa)
    arr = np.asarray(r, dtype=float)
    top = math.pi / (4 * s)
    if np.any(arr <= 0) or np.any(arr > top * (1 + 1e-15)):
        raise ValueError(f"r must lie in (0, pi/(4 sqrt(kappa))] = (0, {top}]")
    out = 2 / s * np.arcsin(math.sqrt((n + 1) / (2 * n)) * np.sin(s * arr))
    return float(out) if out.ndim == 0 else out


# -- checks ------------------------------------------------------------------------

def _diam_and_delta(m: ManifoldModel | None, P: np.ndarray) -> tuple[float, float]:
    if m is None:
        from scipy.spatial.distance import pdist

        return (float(pdist(P).max()) if P.shape[0] > 1 else 0.0), math.inf
    return float(m.pairwise_geodesic(P).max()), m.delta


def check_circum_bound(m: ManifoldModel | None, points, *, seed: int = 0) -> dict:
    """Check ``diam A >= (4/3) radius(A) - 1e-8``.

    ``m=None`` means a Euclidean point cloud. Sets with diameter at least
    ``Delta`` are reported with ``in_hypothesis`` false.
    """
    P = check_point_cloud(points) if m is None else m.check_coords(points)
    diam, delta = _diam_and_delta(m, P)
    res = circumcenter(m, P, seed=seed)
    flags = list(res.flags)
    in_hyp = diam < delta
    if not in_hyp:
        flags.append("out of hypothesis")
    ratio = diam / res.radius if res.radius > 0 else math.inf
    return {"diam": diam, "radius": res.radius, "ratio": ratio,
            "pass": bool(diam >= CIRCUM_CONSTANT * res.radius - CIRCUM_TOL),
            "in_hypothesis": in_hyp, "flags": flags}


def check_subset_center(m: ManifoldModel | None, A, B, *, seed: int = 0) -> dict:
    """Check ``d(Theta(B), Theta(A)) <= (3/4) diam A + 1e-6``.

    ``B`` is a list of row indices into ``A``.
    """
    P = check_point_cloud(A) if m is None else m.check_coords(A)
    idx = list(B)
    if not idx or any(not (0 <= int(i) < P.shape[0]) for i in idx):
        raise ValueError("B must be a non-empty subset of A given by row indices")
    diam, delta = _diam_and_delta(m, P)
    ca = circumcenter(m, P, seed=seed)
    cb = circumcenter(m, P[np.asarray(idx, dtype=int)], seed=seed)
    if m is None:
        dist = float(np.linalg.norm(ca.center - cb.center))
    else:
        dist = float(m.pairwise_geodesic(ca.center[None], cb.center[None])[0, 0])
    flags = list(dict.fromkeys(ca.flags + cb.flags))
    in_hyp = diam < delta
    if not in_hyp:
        flags.append("out of hypothesis")
    bound = SUBSET_CONSTANT * diam
    return {"diam": diam, "distance": dist, "bound": bound, "margin": bound - dist,
            "pass": bool(dist <= bound + SUBSET_TOL), "in_hypothesis": in_hyp, "flags": flags}


def random_small_set(m: ManifoldModel, k: int, rng: np.random.Generator) -> np.ndarray:
    """``k`` chart points inside a random geodesic ball of radius below ``Delta/2``,
    so the diameter is below ``Delta``."""
    centre = _random_coords(m, 1, rng)
    radius = 0.5 * m.delta * rng.uniform(0.02, 0.999)
    return perturb_intrinsic(m, np.repeat(centre, k, axis=0), radius, int(rng.integers(2**32)))


def circum_bound_campaign(m: ManifoldModel, trials: int, seed: int, *,
                          sizes=(2, 3, 4, 5, 6)) -> dict:
    rng = np.random.default_rng(seed)
    worst, failures = math.inf, []
    for t in range(trials):
        P = random_small_set(m, int(sizes[t % len(sizes)]), rng)
        rep = check_circum_bound(m, P)
        worst = min(worst, rep["diam"] - CIRCUM_CONSTANT * rep["radius"])
        if not rep["pass"] or not rep["in_hypothesis"]:
            failures.append(t)
    return {"check": "circumradius", "trials": trials, "failures": failures,
            "min_margin": worst, "pass": not failures}


def subset_center_campaign(m: ManifoldModel, trials: int, seed: int, *,
                           sizes=(2, 3, 4, 5, 6)) -> dict:
    rng = np.random.default_rng(seed)
    worst, failures = math.inf, []
    for t in range(trials):
        k = int(sizes[t % len(sizes)])
        P = random_small_set(m, k, rng)
        size = int(rng.integers(1, k + 1))
        B = sorted(rng.choice(k, size=size, replace=False).tolist())
        rep = check_subset_center(m, P, B)
        worst = min(worst, rep["margin"])
        if not rep["pass"] or not rep["in_hypothesis"]:
            failures.append(t)
    return {"check": "subset_center", "trials": trials, "failures": failures,
            "min_margin": worst, "pass": not failures}
