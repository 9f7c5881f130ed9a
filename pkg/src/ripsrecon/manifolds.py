"""Model manifolds with exact geodesics, embeddings, samplers and constants.

Intrinsic charts:

* ``circle(R)``: angle ``theta``.
* ``sphere2(R)``: ``(colatitude, longitude)``.
* ``flat_torus(L)``: ``(x, y)`` modulo ``L``; abstract, never embedded.
* ``embedded_torus(R, r)``: ``(u, v)`` angles of the standard parametrisation
  in R^3; only Euclidean distances are used for it.

Random draws use NumPy's PCG64 generator seeded with the given integer, so
runs are reproducible bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping

import numpy as np
from scipy.spatial.distance import cdist

from .metric import FiniteMetricSpace, check_point_cloud

KINDS = ("circle", "sphere2", "flat_torus", "embedded_torus")
NET_SIZE_CAP = 5000
# full O(n^3) triangle validation only below this size; larger nets come from closed forms
VALIDATE_LIMIT = 1000


class UnsupportedModel(ValueError):
    """The requested operation has no exact implementation for this model."""


@dataclass(frozen=True)
class ManifoldModel:
    """A model manifold together with its known constants.

    ``params`` holds ``R`` (circle, sphere2), ``L`` (flat_torus) or ``R`` and
    ``r`` (embedded_torus). ``overrides`` replaces any of ``rho``,
    ``kappa_sup``, ``tau``, ``delta`` with user-asserted values.
    """

    kind: str
    params: Mapping[str, float]
    overrides: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown manifold kind {self.kind!r}; expected one of {KINDS}")
        needed = {"circle": ("R",), "sphere2": ("R",), "flat_torus": ("L",),
                  "embedded_torus": ("R", "r")}[self.kind]
        params = {k: float(self.params[k]) for k in needed if k in self.params}
        missing = [k for k in needed if k not in params]
        if missing:
            raise ValueError(f"{self.kind} needs parameters {missing}")
        if any(not v > 0 for v in params.values()):
            raise ValueError(f"{self.kind} parameters must be positive, got {params}")
        if self.kind == "embedded_torus" and not params["R"] > params["r"]:
            raise ValueError("embedded_torus needs R > r")
        unknown = set(self.overrides) - {"rho", "kappa_sup", "tau", "delta"}
        if unknown:
            raise ValueError(f"unknown constant overrides {sorted(unknown)}")
        object.__setattr__(self, "params", params)
        object.__setattr__(self, "overrides", dict(self.overrides))

    # -- constructors ----------------------------------------------------------

    @classmethod
    def circle(cls, R: float = 1.0) -> "ManifoldModel":
        return cls("circle", {"R": R})

    @classmethod
    def sphere2(cls, R: float = 1.0) -> "ManifoldModel":
        return cls("sphere2", {"R": R})

    @classmethod
    def flat_torus(cls, L: float = 2 * math.pi) -> "ManifoldModel":
        return cls("flat_torus", {"L": L})

    @classmethod
    def embedded_torus(cls, R: float = 2.0, r: float = 1.0) -> "ManifoldModel":
        return cls("embedded_torus", {"R": R, "r": r})

    @classmethod
    def from_spec(cls, spec: Mapping) -> "ManifoldModel":
        """Build from a JSON-style spec such as ``{"kind": "sphere2", "R": 1.0}``."""
        spec = dict(spec)
        kind = spec.pop("kind")
        overrides = spec.pop("constants", {}) or {}
        allowed = {"circle": {"R"}, "sphere2": {"R"}, "flat_torus": {"L"},
                   "embedded_torus": {"R", "r"}}.get(kind, set())
        extra = set(spec) - allowed
        if extra:
            raise ValueError(f"unknown {kind} parameters {sorted(extra)}")
        return cls(kind, spec, overrides)

    def to_spec(self) -> dict:
        out = {"kind": self.kind, **self.params}
        if self.overrides:
            out["constants"] = dict(self.overrides)
        return out

    # -- structure -------------------------------------------------------------

    @property
    def intrinsic_dim(self) -> int:
        return 1 if self.kind == "circle" else 2

    @property
    def chart_dim(self) -> int:
        return self.intrinsic_dim

    @property
    def has_geodesic(self) -> bool:
        return self.kind != "embedded_torus"

    @property
    def has_embedding(self) -> bool:
        return self.kind != "flat_torus"

    @property
    def ambient_dim(self) -> int | None:
        return {"circle": 2, "sphere2": 3, "embedded_torus": 3}.get(self.kind)

    @property
    def betti_truth(self) -> tuple[int, ...]:
        return {"circle": (1, 1), "sphere2": (1, 0, 1)}.get(self.kind, (1, 2, 1))

    # -- constants -------------------------------------------------------------

    def _base_constants(self) -> dict[str, tuple[float | None, str]]:
        p = self.params
        if self.kind == "circle":
            R = p["R"]
            return {"rho": (math.pi * R / 2, "certified"), "kappa_sup": (None, "certified"),
                    "tau": (R, "certified")}
        if self.kind == "sphere2":
            R = p["R"]
            return {"rho": (math.pi * R / 2, "certified"), "kappa_sup": (1 / R**2, "certified"),
                    "tau": (R, "certified")}
        if self.kind == "flat_torus":
            # balls of radius < L/4 are isometric to Euclidean discs and convex; at L/4 convexity fails
            return {"rho": (p["L"] / 4, "certified"), "kappa_sup": (0.0, "certified"),
                    "tau": (None, "certified")}
        R, r = p["R"], p["r"]
        tau = min(r, R - r)
        # Gaussian curvature cos v / (r (R + r cos v)) peaks on the outer equator
        return {"rho": (math.pi * tau / 2, "derived-bound"),
                "kappa_sup": (1 / (r * (R + r)), "certified"),
                "tau": (tau, "certified")}

    def constants(self) -> dict[str, tuple[float | None, str]]:
        """``{name: (value, provenance)}`` for rho, kappa_sup, tau, delta."""
        from .conditions import delta_of

        c = self._base_constants()
        for k, v in self.overrides.items():
            if k != "delta":
                c[k] = (v, "user")
        if "delta" in self.overrides:
            c["delta"] = (self.overrides["delta"], "user")
        else:
            rho, rho_tag = c["rho"]
            tag = "certified" if rho_tag == "certified" else "derived-bound"
            c["delta"] = (delta_of(rho, c["kappa_sup"][0]), tag) if rho and rho > 0 else (None, tag)
        return c

    @property
    def rho(self) -> float:
        return self.constants()["rho"][0]

    @property
    def kappa_sup(self) -> float | None:
        return self.constants()["kappa_sup"][0]

    @property
    def tau(self) -> float | None:
        return self.constants()["tau"][0]

    @property
    def delta(self) -> float:
        return self.constants()["delta"][0]

    # -- geometry --------------------------------------------------------------

    def check_coords(self, coords) -> np.ndarray:
        arr = np.asarray(coords, dtype=float)
        if arr.ndim <= 1 and self.chart_dim == 1:
            arr = arr.reshape(-1, 1)
        elif arr.ndim == 1:
            arr = arr.reshape(1, -1)
        if arr.ndim != 2 or arr.shape[1] != self.chart_dim:
            raise ValueError(f"{self.kind} chart coordinates need {self.chart_dim} columns")
        if arr.shape[0] == 0:
            raise ValueError("no points given")
        if not np.all(np.isfinite(arr)):
            raise ValueError("chart coordinates must be finite")
        return arr

    def _unit_vectors(self, coords) -> np.ndarray:
        c = self.check_coords(coords)
        if self.kind == "circle":
            return np.column_stack([np.cos(c[:, 0]), np.sin(c[:, 0])])
        if self.kind == "sphere2":
            th, ph = c[:, 0], c[:, 1]
            return np.column_stack([np.sin(th) * np.cos(ph), np.sin(th) * np.sin(ph), np.cos(th)])
        raise UnsupportedModel(f"{self.kind} has no unit-vector representation")

    def embed(self, coords) -> np.ndarray:
        """Ambient coordinates of chart points (one row per point)."""
        if self.kind == "flat_torus":
            raise UnsupportedModel("abstract metric space; no canonical embedding used")
        if self.kind == "embedded_torus":
            c = self.check_coords(coords)
            R, r = self.params["R"], self.params["r"]
            u, v = c[:, 0], c[:, 1]
            w = R + r * np.cos(v)
            return np.column_stack([w * np.cos(u), w * np.sin(u), r * np.sin(v)])
        return self.params["R"] * self._unit_vectors(coords)

    def pairwise_geodesic(self, P, Q=None) -> np.ndarray:
        """Cross matrix of exact geodesic distances between chart points."""
        if not self.has_geodesic:
            raise UnsupportedModel("geodesic distance unavailable; use Euclidean pipeline")
        P = self.check_coords(P)
        Q = P if Q is None else self.check_coords(Q)
        if self.kind == "circle":
            diff = np.abs(P[:, 0, None] - Q[None, :, 0]) % (2 * math.pi)
            return self.params["R"] * np.minimum(diff, 2 * math.pi - diff)
        if self.kind == "sphere2":
            up, uq = self._unit_vectors(P), self._unit_vectors(Q)
            dot = up @ uq.T
            # atan2 of |u x v| and u.v stays accurate for nearby and antipodal points
            cross = np.sqrt(np.maximum(0.0, cdist(up, uq, "sqeuclidean")
                                       * (1 - cdist(up, uq, "sqeuclidean") / 4)))
            return self.params["R"] * np.arctan2(cross, dot)
        L = self.params["L"]
        diff = np.abs(P[:, None, :] - Q[None, :, :]) % L
        diff = np.minimum(diff, L - diff)
        return np.sqrt((diff**2).sum(axis=2))

    def paired_geodesic(self, P, Q) -> np.ndarray:
        """Row-wise geodesic distances ``d(P[i], Q[i])``."""
        if not self.has_geodesic:
            raise UnsupportedModel("geodesic distance unavailable; use Euclidean pipeline")
        P, Q = self.check_coords(P), self.check_coords(Q)
        if P.shape != Q.shape:
            raise ValueError("P and Q must have the same shape")
        if self.kind == "circle":
            diff = np.abs(P[:, 0] - Q[:, 0]) % (2 * math.pi)
            return self.params["R"] * np.minimum(diff, 2 * math.pi - diff)
        if self.kind == "sphere2":
            up, uq = self._unit_vectors(P), self._unit_vectors(Q)
            cross = np.linalg.norm(np.cross(up, uq), axis=1)
            return self.params["R"] * np.arctan2(cross, (up * uq).sum(axis=1))
        L = self.params["L"]
        diff = np.abs(P - Q) % L
        diff = np.minimum(diff, L - diff)
        return np.sqrt((diff**2).sum(axis=1))

    def pairwise_native(self, P, Q=None) -> np.ndarray:
        """Geodesic distances where available, Euclidean ones for the embedded torus."""
        if self.has_geodesic:
            return self.pairwise_geodesic(P, Q)
        EP = self.embed(P)
        return cdist(EP, EP if Q is None else self.embed(Q))

    def geodesic_interpolate(self, p, q, t: float) -> np.ndarray:
        """Point at fraction ``t`` along a minimising geodesic from ``p`` to ``q``."""
        p = self.check_coords(p)[0]
        q = self.check_coords(q)[0]
        if self.kind == "circle":
            d = (q[0] - p[0] + math.pi) % (2 * math.pi) - math.pi
            return np.array([(p[0] + t * d) % (2 * math.pi)])
        if self.kind == "flat_torus":
            L = self.params["L"]
            d = (q - p + L / 2) % L - L / 2
            return (p + t * d) % L
        if self.kind == "sphere2":
            up, uq = self._unit_vectors(p[None])[0], self._unit_vectors(q[None])[0]
            ang = math.atan2(np.linalg.norm(np.cross(up, uq)), float(up @ uq))
            if ang < 1e-15:
                return p.copy()
            w = (math.sin((1 - t) * ang) * up + math.sin(t * ang) * uq) / math.sin(ang)
            return _xyz_to_sphere(w[None])[0]
        raise UnsupportedModel("geodesic distance unavailable; use Euclidean pipeline")

    def from_ambient_param(self, v) -> np.ndarray:
        """Chart point from an unconstrained parameter vector (used by optimisers)."""
        v = np.asarray(v, dtype=float)
        if self.kind == "circle":
            return np.array([v[0] % (2 * math.pi)])
        if self.kind == "sphere2":
            return _xyz_to_sphere(v[None])[0]
        if self.kind == "flat_torus":
            return v % self.params["L"]
        raise UnsupportedModel("no chart optimisation for the embedded torus")

    def to_ambient_param(self, p) -> np.ndarray:
        p = self.check_coords(p)[0]
        if self.kind == "sphere2":
            return self._unit_vectors(p[None])[0]
        return p.copy()


def _xyz_to_sphere(xyz: np.ndarray) -> np.ndarray:
    xyz = np.asarray(xyz, dtype=float)
    nrm = np.linalg.norm(xyz, axis=1)
    x, y, z = (xyz / nrm[:, None]).T
    theta = np.arctan2(np.hypot(x, y), z)
    phi = np.arctan2(y, x) % (2 * math.pi)
    return np.column_stack([theta, phi])


def geodesic_distance(m: ManifoldModel, p, q) -> float:
    """Exact geodesic distance between two chart points."""
    return float(m.pairwise_geodesic(np.atleast_1d(np.asarray(p, float)).reshape(1, -1),
                                     np.atleast_1d(np.asarray(q, float)).reshape(1, -1))[0, 0])


def embed(m: ManifoldModel, p) -> np.ndarray:
    out = m.embed(np.atleast_1d(np.asarray(p, float)).reshape(1, -1))
    return out[0]


# -- grids -----------------------------------------------------------------------

_PHI = (1 + 5**0.5) / 2
_ICO_V = np.array([(-1, _PHI, 0), (1, _PHI, 0), (-1, -_PHI, 0), (1, -_PHI, 0),
                   (0, -1, _PHI), (0, 1, _PHI), (0, -1, -_PHI), (0, 1, -_PHI),
                   (_PHI, 0, -1), (_PHI, 0, 1), (-_PHI, 0, -1), (-_PHI, 0, 1)], dtype=float)
_ICO_F = [(0, 11, 5), (0, 5, 1), (0, 1, 7), (0, 7, 10), (0, 10, 11), (1, 5, 9), (5, 11, 4),
          (11, 10, 2), (10, 7, 6), (7, 1, 8), (3, 9, 4), (3, 4, 2), (3, 2, 6), (3, 6, 8),
          (3, 8, 9), (4, 9, 5), (2, 4, 11), (6, 2, 10), (8, 6, 7), (9, 8, 1)]


def icosphere(freq: int) -> tuple[np.ndarray, np.ndarray]:
    """Unit vectors and triangles of the frequency-``freq`` geodesic icosphere
    (``10 freq^2 + 2`` vertices)."""
    if freq < 1:
        raise ValueError("frequency must be at least 1")
    keys: dict = {}
    verts = []
    tris = []

    def vid(a, b, c, i, j):
        # lattice point (f-i-j) a + i b + j c, keyed independent of the face it came from
        key = frozenset(((a, freq - i - j), (b, i), (c, j))) - {(a, 0), (b, 0), (c, 0)}
        if key not in keys:
            keys[key] = len(verts)
            x = ((freq - i - j) * _ICO_V[a] + i * _ICO_V[b] + j * _ICO_V[c]) / freq
            verts.append(x / np.linalg.norm(x))
        return keys[key]

    for a, b, c in _ICO_F:
        for i in range(freq):
            for j in range(freq - i):
                tris.append((vid(a, b, c, i, j), vid(a, b, c, i + 1, j), vid(a, b, c, i, j + 1)))
                if i + j < freq - 1:
                    tris.append((vid(a, b, c, i + 1, j), vid(a, b, c, i + 1, j + 1),
                                 vid(a, b, c, i, j + 1)))
    return np.array(verts), np.array(tris, dtype=int)


def _spherical_cover_bound(unit: np.ndarray, tris: np.ndarray) -> float:
    """Largest angular circumradius over the triangles; every point of a
    spherical triangle is that close to one of its corners."""
    A, B, C = unit[tris[:, 0]], unit[tris[:, 1]], unit[tris[:, 2]]
    n = np.cross(B - A, C - A)
    n /= np.linalg.norm(n, axis=1)[:, None]
    n *= np.sign((n * A).sum(axis=1))[:, None]
    cosr = np.clip((n * A).sum(axis=1), -1, 1)
    return float(np.arccos(cosr).max()) + 1e-12


def _grid(m: ManifoldModel, n: int) -> tuple[np.ndarray, float]:
    """Chart points of the model's grid with about ``n`` points and its
    certified covering radius in the native metric."""
    if n < 1:
        raise ValueError("grid size must be at least 1")
    p = m.params
    if m.kind == "circle":
        theta = 2 * math.pi * np.arange(n) / n
        return theta.reshape(-1, 1), math.pi * p["R"] / n
    if m.kind == "sphere2":
        freq = max(1, math.ceil(math.sqrt(max(n - 2, 0) / 10)))
        unit, tris = icosphere(freq)
        return _xyz_to_sphere(unit), p["R"] * _spherical_cover_bound(unit, tris)
    k = math.isqrt(n)
    if k * k != n:
        raise ValueError(f"{m.kind} grids are k x k; {n} is not a perfect square")
    ii, jj = np.meshgrid(np.arange(k), np.arange(k), indexing="ij")
    if m.kind == "flat_torus":
        h = p["L"] / k
        coords = np.column_stack([ii.ravel() * h, jj.ravel() * h])
        return coords, h * math.sqrt(2) / 2
    h = 2 * math.pi / k
    coords = np.column_stack([ii.ravel() * h, jj.ravel() * h])
    # walk along v then along u; chords never exceed the arc lengths
    return coords, (p["r"] * h + (p["R"] + p["r"]) * h) / 2


def _grid_count_for(m: ManifoldModel, fineness: float) -> int:
    p = m.params
    if m.kind == "circle":
        return max(1, math.ceil(math.pi * p["R"] / fineness - 1e-9))
    if m.kind == "sphere2":
        # icosphere edge ~ 1.1 R / freq; start low and let the search refine
        freq = max(1, math.floor(0.5 * p["R"] / fineness))
        return 10 * freq * freq + 2
    if m.kind == "flat_torus":
        k = max(1, math.ceil(p["L"] * math.sqrt(2) / (2 * fineness) - 1e-9))
        return k * k
    k = max(1, math.ceil(math.pi * (p["R"] + 2 * p["r"]) / fineness - 1e-9))
    return k * k


def _next_count(m: ManifoldModel, n: int) -> int:
    if m.kind == "circle":
        return n + 1
    if m.kind == "sphere2":
        freq = math.ceil(math.sqrt((n - 2) / 10)) + 1
        return 10 * freq * freq + 2
    k = math.isqrt(n) + 1
    return k * k


# -- samples and nets --------------------------------------------------------------

@dataclass(frozen=True)
class Grid:
    n: int

    def describe(self) -> dict:
        return {"type": "grid", "n": self.n}


@dataclass(frozen=True)
class Random:
    n: int
    seed: int

    def describe(self) -> dict:
        return {"type": "random", "n": self.n, "seed": self.seed}


def sampler_from_spec(spec: Mapping) -> Grid | Random:
    kind = spec.get("type")
    if kind == "grid":
        return Grid(int(spec["n"]))
    if kind == "random":
        if "seed" not in spec or spec["seed"] is None:
            raise ValueError("random sampler needs an explicit seed")
        return Random(int(spec["n"]), int(spec["seed"]))
    raise ValueError(f"unknown sampler type {kind!r}; expected 'grid' or 'random'")


@dataclass(frozen=True, eq=False)
class Sample:
    """Chart points on a model with a certified bound on their Hausdorff
    distance to the whole model, in the model's native metric."""

    model: ManifoldModel
    coords: np.ndarray
    fill_bound: float
    spec: dict

    def __len__(self) -> int:
        return self.coords.shape[0]

    def points(self) -> np.ndarray:
        return self.model.embed(self.coords)

    def metric_space(self, validate: bool | None = None) -> FiniteMetricSpace:
        if validate is None:
            validate = len(self) <= VALIDATE_LIMIT
        return FiniteMetricSpace(self.model.pairwise_native(self.coords), validate=validate)


@dataclass(frozen=True, eq=False)
class ReferenceNet:
    """A finite stand-in for the whole model with a certified covering radius."""

    model: ManifoldModel
    coords: np.ndarray
    fill_bound: float

    def __len__(self) -> int:
        return self.coords.shape[0]

    @cached_property
    def metric(self) -> FiniteMetricSpace:
        return FiniteMetricSpace(self.model.pairwise_native(self.coords),
                                 validate=len(self) <= VALIDATE_LIMIT)

    def points(self) -> np.ndarray:
        return self.model.embed(self.coords)


def reference_net(m: ManifoldModel, fineness: float, *, cap: int = NET_SIZE_CAP) -> ReferenceNet:
    """Smallest model grid whose certified covering radius is at most ``fineness``."""
    if not fineness > 0:
        raise ValueError("fineness must be positive")
    n = _grid_count_for(m, fineness)
    while True:
        if n > cap:
            raise ValueError(
                f"reference net for fineness {fineness:g} needs more than {cap} points; "
                "use a coarser fineness"
            )
        coords, bound = _grid(m, n)
        if bound <= fineness:
            return ReferenceNet(m, coords, bound)
        n = _next_count(m, n)


def _net_with_about(m: ManifoldModel, count: int) -> ReferenceNet:
    count = min(max(count, 1), NET_SIZE_CAP)
    if m.kind in ("flat_torus", "embedded_torus"):
        k = math.isqrt(count)
        count = k * k
    coords, bound = _grid(m, count)
    return ReferenceNet(m, coords, bound)


def _random_coords(m: ManifoldModel, n: int, rng: np.random.Generator) -> np.ndarray:
    if m.kind == "circle":
        return rng.uniform(0, 2 * math.pi, size=(n, 1))
    if m.kind == "sphere2":
        return _xyz_to_sphere(rng.normal(size=(n, 3)))
    if m.kind == "flat_torus":
        return rng.uniform(0, m.params["L"], size=(n, 2))
    # area element of the torus is r (R + r cos v) du dv; rejection sample v
    R, r = m.params["R"], m.params["r"]
    u = rng.uniform(0, 2 * math.pi, size=n)
    v = np.empty(n)
    filled = 0
    while filled < n:
        cand = rng.uniform(0, 2 * math.pi, size=2 * (n - filled))
        keep = cand[rng.uniform(0, R + r, size=cand.size) < R + r * np.cos(cand)]
        take = keep[: n - filled]
        v[filled:filled + take.size] = take
        filled += take.size
    return np.column_stack([u, v])


def sample(m: ManifoldModel, spec: Grid | Random | Mapping) -> Sample:
    """Sample a model.

    Grids carry a closed-form covering radius. Random samples (uniform with
    respect to the Riemannian area) are certified against a reference net
    with ten times as many points: ``d_H <= max_net min_sample d + fill(net)``.
    """
    if isinstance(spec, Mapping):
        spec = sampler_from_spec(spec)
    if spec.n < 1:
        raise ValueError("sample size must be at least 1")
    if isinstance(spec, Grid):
        coords, bound = _grid(m, spec.n)
        return Sample(m, coords, bound, spec.describe())
    rng = np.random.default_rng(spec.seed)
    coords = _random_coords(m, spec.n, rng)
    net = _net_with_about(m, 10 * spec.n)
    return Sample(m, coords, _cover(m, net, coords), spec.describe())


def perturb(points, eta: float, seed: int) -> np.ndarray:
    """Move each point by an independent vector drawn uniformly from the
    ball of radius ``eta``; the Hausdorff distance moves by at most ``eta``."""
    pts = check_point_cloud(points)
    if eta < 0:
        raise ValueError("eta must be non-negative")
    if eta == 0:
        return pts.copy()
    rng = np.random.default_rng(seed)
    n, d = pts.shape
    direction = rng.normal(size=(n, d))
    direction /= np.linalg.norm(direction, axis=1)[:, None]
    radius = eta * rng.uniform(size=n) ** (1.0 / d)
    return pts + direction * radius[:, None]


def perturb_intrinsic(m: ManifoldModel, coords, eta: float, seed: int) -> np.ndarray:
    """Move each chart point along the model by geodesic distance at most
    ``eta`` (uniform over the geodesic disc in the tangent plane)."""
    c = m.check_coords(coords)
    if eta < 0:
        raise ValueError("eta must be non-negative")
    if eta == 0:
        return c.copy()
    rng = np.random.default_rng(seed)
    n = c.shape[0]
    if m.kind == "circle":
        step = rng.uniform(-eta, eta, size=n) / m.params["R"]
        return ((c[:, 0] + step) % (2 * math.pi)).reshape(-1, 1)
    alpha = rng.uniform(0, 2 * math.pi, size=n)
    s = eta * np.sqrt(rng.uniform(size=n))
    if m.kind == "flat_torus":
        return (c + np.column_stack([s * np.cos(alpha), s * np.sin(alpha)])) % m.params["L"]
    if m.kind == "sphere2":
        u = m._unit_vectors(c)
        helper = np.where(np.abs(u[:, [2]]) < 0.9, [[0.0, 0.0, 1.0]], [[1.0, 0.0, 0.0]])
        e1 = np.cross(u, helper)
        e1 /= np.linalg.norm(e1, axis=1)[:, None]
        e2 = np.cross(u, e1)
        ang = (s / m.params["R"])[:, None]
        t = np.cos(alpha)[:, None] * e1 + np.sin(alpha)[:, None] * e2
        return _xyz_to_sphere(np.cos(ang) * u + np.sin(ang) * t)
    raise UnsupportedModel("the embedded torus has no exact geodesics; perturb ambient points")


def fill_bound_of(m: ManifoldModel, coords, *, net_size: int | None = None) -> float:
    """Certified Hausdorff bound of arbitrary chart points against the model."""
    c = m.check_coords(coords)
    return _cover(m, _net_with_about(m, net_size or 10 * c.shape[0]), c)


def _cover(m: ManifoldModel, net: ReferenceNet, coords: np.ndarray, chunk: int = 256) -> float:
    """``max_net min_coords d + fill(net)``, in row blocks to bound memory."""
    worst = 0.0
    for start in range(0, len(net), chunk):
        block = m.pairwise_native(net.coords[start:start + chunk], coords)
        worst = max(worst, float(block.min(axis=1).max()))
    return worst + net.fill_bound
