"""Finite metric spaces, point clouds, correspondences and their distortion.

Everything downstream (Rips complexes, certificates, verifiers) is built on
:class:`FiniteMetricSpace`, a validated symmetric distance matrix over the
labels ``0..n-1``.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
from scipy.spatial.distance import cdist

TRIANGLE_TOL = 1e-9
_SYMMETRY_TOL = 1e-12


class MetricError(ValueError):
    """Raised when a distance matrix violates the metric axioms."""


def check_point_cloud(points, *, name: str = "points") -> np.ndarray:
    """Validate a point cloud and return it as a 2-D float array.

    A 1-D input is read as points on a line.
    """
    arr = np.asarray(points, dtype=float)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    if arr.ndim != 2:
        raise ValueError(f"{name} must be a 2-D array of shape (n, d), got ndim={arr.ndim}")
    if arr.shape[0] == 0:
        raise ValueError(f"{name} is empty")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite coordinates")
    return arr


class FiniteMetricSpace:
    """Symmetric distance matrix over the labels ``0..n-1``.

    Parameters
    ----------
    dist : array_like of shape (n, n)
        Pairwise distances.
    validate : bool, default=True
        Check the triangle inequality (tolerance ``1e-9``). This is an
        ``O(n^3)`` check; callers that produce distances from a closed-form
        geodesic formula may skip it for large nets. Diagonal, symmetry and
        sign checks always run.
    """

    __slots__ = ("_dist",)

    def __init__(self, dist, *, validate: bool = True):
        d = np.array(dist, dtype=float)
        if d.ndim != 2 or d.shape[0] != d.shape[1]:
            raise MetricError(f"distance matrix must be square, got shape {d.shape}")
        if d.shape[0] == 0:
            raise MetricError("metric space has no points")
        if not np.all(np.isfinite(d)):
            raise MetricError("distance matrix has non-finite entries")
        if np.any(d < 0):
            raise MetricError("distance matrix has negative entries")
        if np.any(np.diag(d) != 0):
            raise MetricError("distance matrix must have a zero diagonal")
        if not np.allclose(d, d.T, rtol=0, atol=_SYMMETRY_TOL):
            raise MetricError("distance matrix is not symmetric")
        # exact symmetry downstream; strict Rips thresholds must not depend on i<j vs j<i
        d = np.minimum(d, d.T)
        if validate:
            _check_triangle(d)
        d.setflags(write=False)
        self._dist = d

    @classmethod
    def from_points(cls, points, *, validate: bool = False) -> "FiniteMetricSpace":
        """Euclidean metric on a point cloud (a metric by construction)."""
        pts = check_point_cloud(points)
        return cls(cdist(pts, pts), validate=validate)

    @property
    def dist(self) -> np.ndarray:
        return self._dist

    @property
    def n(self) -> int:
        return self._dist.shape[0]

    def __len__(self) -> int:
        return self.n

    def __repr__(self) -> str:
        return f"FiniteMetricSpace(n={self.n})"

    def subspace(self, indices: Sequence[int]) -> "FiniteMetricSpace":
        idx = _as_index_array(indices, self.n)
        return FiniteMetricSpace(self._dist[np.ix_(idx, idx)], validate=False)


def _check_triangle(d: np.ndarray, tol: float = TRIANGLE_TOL) -> None:
    n = d.shape[0]
    for k in range(n):
        via = d[:, k, None] + d[None, k, :]
        bad = d > via + tol
        if bad.any():
            i, j = np.argwhere(bad)[0]
            raise MetricError(
                f"triangle inequality fails: d({i},{j})={d[i, j]!r} > "
                f"d({i},{k}) + d({k},{j}) = {via[i, j]!r}"
            )


def _as_index_array(indices, n: int) -> np.ndarray:
    idx = np.asarray(list(indices) if not isinstance(indices, np.ndarray) else indices, dtype=int)
    if idx.ndim != 1:
        idx = idx.ravel()
    if idx.size and (idx.min() < 0 or idx.max() >= n):
        raise IndexError(f"index out of range for metric space with {n} points")
    return idx


def diameter(ms: FiniteMetricSpace, subset: Iterable[int] | None = None) -> float:
    """Largest pairwise distance within ``subset`` (all points if omitted)."""
    idx = np.arange(ms.n) if subset is None else _as_index_array(subset, ms.n)
    if idx.size == 0:
        raise ValueError("empty set has no diameter")
    return float(ms.dist[np.ix_(idx, idx)].max())


def hausdorff_distance(A, B, metric: FiniteMetricSpace | None = None) -> float:
    """Symmetric Hausdorff distance.

    With ``metric`` given, ``A`` and ``B`` are index sets into it; otherwise
    they are point clouds in a common Euclidean space.
    """
    if metric is not None:
        ia = _as_index_array(A, metric.n)
        ib = _as_index_array(B, metric.n)
        if ia.size == 0 or ib.size == 0:
            raise ValueError("Hausdorff distance of an empty set is undefined")
        cross = metric.dist[np.ix_(ia, ib)]
    else:
        pa = check_point_cloud(A, name="A")
        pb = check_point_cloud(B, name="B")
        if pa.shape[1] != pb.shape[1]:
            raise ValueError("point clouds live in different ambient dimensions")
        cross = cdist(pa, pb)
    return hausdorff_from_cross(cross)


def hausdorff_from_cross(cross: np.ndarray) -> float:
    """Hausdorff distance given the full cross-distance matrix ``d(a_i, b_j)``."""
    cross = np.asarray(cross, dtype=float)
    if cross.size == 0:
        raise ValueError("Hausdorff distance of an empty set is undefined")
    return float(max(cross.min(axis=1).max(), cross.min(axis=0).max()))


@dataclass(frozen=True)
class Correspondence:
    """A relation between ``0..n_x-1`` and ``0..n_y-1`` covering both sides."""

    pairs: tuple[tuple[int, int], ...]
    n_x: int
    n_y: int

    def __post_init__(self):
        pairs = tuple(sorted({(int(i), int(j)) for i, j in self.pairs}))
        for i, j in pairs:
            if not (0 <= i < self.n_x and 0 <= j < self.n_y):
                raise IndexError(f"pair ({i}, {j}) out of range for sizes ({self.n_x}, {self.n_y})")
        xs = {i for i, _ in pairs}
        ys = {j for _, j in pairs}
        if len(xs) != self.n_x or len(ys) != self.n_y:
            raise ValueError("correspondence must cover every point of both spaces")
        object.__setattr__(self, "pairs", pairs)

    @classmethod
    def identity(cls, n: int) -> "Correspondence":
        return cls(tuple((i, i) for i in range(n)), n, n)

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)

    def as_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        arr = np.array(self.pairs, dtype=int).reshape(-1, 2)
        return arr[:, 0], arr[:, 1]

    def partners_of_x(self, i: int) -> list[int]:
        return [b for a, b in self.pairs if a == i]

    def partners_of_y(self, j: int) -> list[int]:
        return [a for a, b in self.pairs if b == j]

    def forward_map(self) -> np.ndarray:
        """Lowest-index partner in Y of every x (a vertex map X -> Y)."""
        out = np.full(self.n_x, -1, dtype=int)
        for i, j in self.pairs:  # pairs are sorted, first hit is the lowest j
            if out[i] < 0:
                out[i] = j
        return out

    def backward_map(self) -> np.ndarray:
        """Lowest-index partner in X of every y (a vertex map Y -> X)."""
        out = np.full(self.n_y, -1, dtype=int)
        for i, j in self.pairs:
            if out[j] < 0 or i < out[j]:
                out[j] = i
        return out


def correspondence_distortion(
    C: Correspondence, X: FiniteMetricSpace, Y: FiniteMetricSpace, *, chunk: int = 1024
) -> float:
    """``sup |d_X(x1, x2) - d_Y(y1, y2)|`` over pairs of pairs in ``C``."""
    if C.n_x != X.n or C.n_y != Y.n:
        raise IndexError(
            f"correspondence sizes ({C.n_x}, {C.n_y}) do not match spaces ({X.n}, {Y.n})"
        )
    ix, iy = C.as_arrays()
    worst = 0.0
    for start in range(0, ix.size, chunk):
        sx, sy = ix[start:start + chunk], iy[start:start + chunk]
        block = np.abs(X.dist[np.ix_(sx, ix)] - Y.dist[np.ix_(sy, iy)])
        worst = max(worst, float(block.max()))
    return worst


def nn_correspondence_from_cross(cross: np.ndarray) -> Correspondence:
    """Nearest-neighbour correspondence from a cross-distance matrix.

    Pairs are ``{(x, nn_Y(x))} | {(nn_X(y), y)}``; ties go to the lowest index.
    """
    cross = np.asarray(cross, dtype=float)
    if cross.ndim != 2 or 0 in cross.shape:
        raise ValueError("both sides of a correspondence must be non-empty")
    nx, ny = cross.shape
    fwd = np.argmin(cross, axis=1)
    bwd = np.argmin(cross, axis=0)
    pairs = [(i, int(fwd[i])) for i in range(nx)] + [(int(bwd[j]), j) for j in range(ny)]
    return Correspondence(tuple(pairs), nx, ny)


def nn_correspondence(X, Y) -> Correspondence:
    """Nearest-neighbour correspondence between two Euclidean point clouds."""
    px = check_point_cloud(X, name="X")
    py = check_point_cloud(Y, name="Y")
    if px.shape[1] != py.shape[1]:
        raise ValueError("point clouds live in different ambient dimensions")
    return nn_correspondence_from_cross(cdist(px, py))


def gh_upper_bound(C: Correspondence, X: FiniteMetricSpace, Y: FiniteMetricSpace) -> float:
    """Upper bound ``dist(C) / 2`` on the Gromov-Hausdorff distance.

    This is not the exact Gromov-Hausdorff distance, which is an infimum over
    all correspondences; any single correspondence only bounds it from above.
    """
    return correspondence_distortion(C, X, Y) / 2.0


# -- I/O ---------------------------------------------------------------------

def read_points_csv(path) -> np.ndarray:
    """Read a CSV with one point per row; a non-numeric first row is taken as a header."""
    with open(path, newline="") as fh:
        raw = [row for row in csv.reader(fh) if row]
    if raw:
        try:
            [float(v) for v in raw[0]]
        except ValueError:
            raw = raw[1:]
    try:
        rows = [[float(v) for v in row] for row in raw]
    except ValueError as err:
        raise MetricError(f"{path}: non-numeric entry ({err})") from None
    return check_point_cloud(rows)


def write_points_csv(path, points) -> None:
    pts = check_point_cloud(points)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        for row in pts:
            writer.writerow([repr(float(v)) for v in row])


def read_points_json(path) -> np.ndarray:
    return check_point_cloud(json.loads(Path(path).read_text()))


def write_points_json(path, points) -> None:
    pts = check_point_cloud(points)
    Path(path).write_text(json.dumps(pts.tolist()))


def read_points(path) -> np.ndarray:
    """Read a point cloud from ``.json`` or CSV (anything else)."""
    if str(path).endswith(".json"):
        return read_points_json(path)
    return read_points_csv(path)


def read_distance_csv(path, *, validate: bool = True) -> FiniteMetricSpace:
    with open(path, newline="") as fh:
        rows = [[float(v) for v in row] for row in csv.reader(fh) if row]
    return FiniteMetricSpace(rows, validate=validate)


def write_distance_csv(path, ms: FiniteMetricSpace) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        for row in ms.dist:
            writer.writerow([repr(float(v)) for v in row])
