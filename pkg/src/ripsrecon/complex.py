"""Abstract simplicial complexes, Vietoris-Rips construction, barycentric
subdivision, simplicial maps and contiguity.

Simplices are strictly increasing tuples of integer vertex labels. A complex
stores them per dimension in lexicographic order, which fixes the column
order used by the homology module.

The Rips threshold is strict: a finite set spans a simplex iff its diameter
is *less than* ``beta``. Many libraries use ``<=``; a pair at distance
exactly ``beta`` is not an edge here.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable, Iterator, Mapping, Sequence

import numpy as np

from .metric import FiniteMetricSpace

MAX_SIMPLICES = 50_000_000


class ComplexTooLarge(RuntimeError):
    """Raised when a construction would exceed the simplex budget."""


class PreconditionError(ValueError):
    """A structural precondition (flag target, pure source, ...) does not hold."""


class NotSimplicialError(ValueError):
    """A vertex map sends some simplex outside the target complex."""

    def __init__(self, simplex, image):
        super().__init__(f"image {image} of simplex {simplex} is not a simplex of the target")
        self.simplex = simplex
        self.image = image


@dataclass
class CheckResult:
    """Outcome of a combinatorial check; truthy iff the check passed."""

    ok: bool
    witness: Any = None
    margins: dict = field(default_factory=dict)
    detail: str = ""

    def __bool__(self) -> bool:
        return bool(self.ok)

    def to_dict(self) -> dict:
        witness = self.witness
        if isinstance(witness, tuple):
            witness = _jsonable(witness)
        return {"pass": bool(self.ok), "witness": witness, "margins": dict(self.margins),
                "detail": self.detail}


def _jsonable(obj):
    if isinstance(obj, (tuple, list)):
        return [_jsonable(o) for o in obj]
    if isinstance(obj, np.integer):
        return int(obj)
    return obj


def _canon(simplex: Iterable[int]) -> tuple[int, ...]:
    return tuple(sorted({int(v) for v in simplex}))


class SimplicialComplex:
    """A downward-closed family of simplices, capped at ``max_dim``.

    Parameters
    ----------
    simplices : iterable of vertex collections
        Generating simplices; all their faces up to ``max_dim`` are added.
    max_dim : int, optional
        Dimension cap. Defaults to the largest generator dimension.

    Attributes
    ----------
    complete : bool
        False when the cap discarded simplices, i.e. the stored complex is
        only the ``max_dim``-skeleton of the intended one.
    """

    flag = False

    def __init__(self, simplices: Iterable[Iterable[int]] = (), max_dim: int | None = None):
        gens = {_canon(s) for s in simplices}
        gens.discard(())
        top = max((len(s) - 1 for s in gens), default=0)
        if max_dim is None:
            max_dim = top
        if max_dim < 0:
            raise ValueError("max_dim must be non-negative")
        levels: list[set] = [set() for _ in range(max_dim + 1)]
        for s in gens:
            for k in range(1, min(len(s), max_dim + 1) + 1):
                levels[k - 1].update(itertools.combinations(s, k))
        self._set_levels([sorted(lv) for lv in levels], max_dim, complete=top <= max_dim)

    @classmethod
    def _from_levels(cls, levels, max_dim, complete, **attrs):
        obj = cls.__new__(cls)
        obj._set_levels(levels, max_dim, complete)
        for k, v in attrs.items():
            setattr(obj, k, v)
        return obj

    def _set_levels(self, levels, max_dim, complete):
        while len(levels) < max_dim + 1:
            levels.append([])
        self._levels = [list(lv) for lv in levels[: max_dim + 1]]
        self._index = [{s: i for i, s in enumerate(lv)} for lv in self._levels]
        self.max_dim = max_dim
        self.complete = bool(complete)

    # -- queries --------------------------------------------------------------

    @property
    def vertices(self) -> tuple[int, ...]:
        return tuple(s[0] for s in self._levels[0])

    @property
    def dimension(self) -> int:
        """Largest dimension with a stored simplex (-1 for the empty complex)."""
        for k in range(self.max_dim, -1, -1):
            if self._levels[k]:
                return k
        return -1

    def simplices(self, dim: int) -> list[tuple[int, ...]]:
        if dim < 0 or dim > self.max_dim:
            return []
        return self._levels[dim]

    def index(self, simplex: Sequence[int]) -> int:
        s = _canon(simplex)
        return self._index[len(s) - 1][s]

    def f_vector(self) -> tuple[int, ...]:
        return tuple(len(lv) for lv in self._levels)

    def __len__(self) -> int:
        return sum(self.f_vector())

    def __iter__(self) -> Iterator[tuple[int, ...]]:
        for lv in self._levels:
            yield from lv

    def __contains__(self, simplex) -> bool:
        s = _canon(simplex)
        k = len(s) - 1
        return 0 <= k <= self.max_dim and s in self._index[k]

    def __eq__(self, other) -> bool:
        if not isinstance(other, SimplicialComplex):
            return NotImplemented
        return self._levels_trimmed() == other._levels_trimmed()

    def __hash__(self):
        return hash(tuple(tuple(lv) for lv in self._levels_trimmed()))

    def _levels_trimmed(self):
        return [lv for lv in self._levels[: self.dimension + 1]]

    def __repr__(self) -> str:
        return f"{type(self).__name__}(f_vector={self.f_vector()}, max_dim={self.max_dim})"

    def maximal_simplices(self) -> list[tuple[int, ...]]:
        covered: set = set()
        out = []
        for k in range(self.dimension, -1, -1):
            for s in self._levels[k]:
                if s not in covered:
                    out.append(s)
                for j in range(len(s)):
                    covered.add(s[:j] + s[j + 1:])
        return sorted(out, key=lambda s: (len(s), s))

    def is_pure(self) -> int | None:
        """Return ``m`` if every simplex is a face of an ``m``-simplex, else None."""
        maximal = self.maximal_simplices()
        if not maximal:
            return None
        dims = {len(s) - 1 for s in maximal}
        return dims.pop() if len(dims) == 1 else None

    def is_flag(self) -> bool:
        """Brute-force flag test up to ``max_dim``: every clique of the
        1-skeleton with at most ``max_dim + 1`` vertices is a simplex."""
        adj = _adjacency(self.vertices, self.simplices(1))
        levels, _ = _enumerate_cliques(self.vertices, adj, self.max_dim + 1)
        return [sorted(lv) for lv in levels] == [list(lv) for lv in self._levels]

    def is_subcomplex_of(self, other: "SimplicialComplex") -> bool:
        return all(s in other for s in self)

    def skeleton(self, dim: int) -> "SimplicialComplex":
        dim = min(dim, self.max_dim)
        return SimplicialComplex._from_levels(
            [list(lv) for lv in self._levels[: dim + 1]], dim,
            complete=self.complete and self.dimension <= dim,
        )

    # -- serialisation ----------------------------------------------------------

    def to_json(self) -> dict:
        """``{"max_dim": k, "simplices": [...]}`` listing maximal simplices only.

        A truncated complex also records ``"complete": false``.
        """
        out = {"max_dim": self.max_dim, "simplices": [list(s) for s in self.maximal_simplices()]}
        if not self.complete:
            out["complete"] = False
        return out

    @classmethod
    def from_json(cls, data: Mapping) -> "SimplicialComplex":
        K = SimplicialComplex(data["simplices"], max_dim=int(data["max_dim"]))
        if data.get("complete", True) is False:
            K.complete = False
        return K

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_json()))

    @classmethod
    def load(cls, path) -> "SimplicialComplex":
        return cls.from_json(json.loads(Path(path).read_text()))


class RipsComplex(SimplicialComplex):
    """Vietoris-Rips complex; membership of any vertex set is decided by its
    diameter, so queries above ``max_dim`` are still exact."""

    flag = True
    metric: FiniteMetricSpace
    beta: float

    def __contains__(self, simplex) -> bool:
        s = _canon(simplex)
        if not s:
            return False
        if s[0] < 0 or s[-1] >= self.metric.n:
            return False
        idx = np.fromiter(s, dtype=int)
        return bool(self.metric.dist[np.ix_(idx, idx)].max() < self.beta)

    def margin(self, simplex) -> float:
        """``beta - diam(simplex)``; positive iff the simplex is present."""
        idx = np.fromiter(_canon(simplex), dtype=int)
        return float(self.beta - self.metric.dist[np.ix_(idx, idx)].max())

    def is_flag(self) -> bool:
        return True


def _adjacency(vertices, edges) -> dict[int, set]:
    adj: dict[int, set] = {v: set() for v in vertices}
    for a, b in edges:
        adj[a].add(b)
        adj[b].add(a)
    return adj


def _degeneracy_order(adj: Mapping[int, set]) -> list[int]:
    deg = {v: len(nb) for v, nb in adj.items()}
    buckets: dict[int, set] = {}
    for v, d in deg.items():
        buckets.setdefault(d, set()).add(v)
    removed: set = set()
    order = []
    d = 0
    while len(order) < len(adj):
        while not buckets.get(d):
            d += 1
        v = min(buckets[d])
        buckets[d].discard(v)
        order.append(v)
        removed.add(v)
        for u in adj[v]:
            if u not in removed:
                du = deg[u]
                buckets[du].discard(u)
                deg[u] = du - 1
                buckets.setdefault(du - 1, set()).add(u)
        d = max(d - 1, 0)
    return order


def _enumerate_cliques(vertices, adj, max_size, budget=MAX_SIMPLICES):
    """All cliques with at most ``max_size`` vertices, as per-dimension lists.

    Each clique is generated once from its earliest vertex in a degeneracy
    ordering, extending only by later neighbours. Returns ``(levels, truncated)``
    where ``truncated`` says a larger clique exists.
    """
    order = _degeneracy_order(adj)
    pos = {v: i for i, v in enumerate(order)}
    later = {v: frozenset(u for u in adj[v] if pos[u] > pos[v]) for v in order}
    levels: list[list] = [[] for _ in range(max_size)]
    count = 0
    truncated = False
    stack = [((v,), later[v]) for v in reversed(order)]
    while stack:
        clique, cand = stack.pop()
        levels[len(clique) - 1].append(tuple(sorted(clique)))
        count += 1
        if count > budget:
            raise ComplexTooLarge(
                f"clique expansion exceeded {budget} simplices; lower beta or max_dim"
            )
        if len(clique) == max_size:
            truncated = truncated or bool(cand)
            continue
        for u in sorted(cand, key=pos.__getitem__, reverse=True):
            stack.append((clique + (u,), cand & later[u]))
    for lv in levels:
        lv.sort()
    return levels, truncated


def rips_complex(ms: FiniteMetricSpace, beta: float, max_dim: int = 2,
                 *, budget: int = MAX_SIMPLICES) -> RipsComplex:
    """Vietoris-Rips complex ``{sigma : diam(sigma) < beta}`` up to ``max_dim``.

    Built as the flag complex of the graph ``d(i, j) < beta`` by clique
    enumeration in degeneracy order.
    """
    if not beta > 0:
        raise ValueError(f"beta must be positive, got {beta!r}")
    if max_dim < 0:
        raise ValueError("max_dim must be non-negative")
    d = ms.dist
    mask = d < beta
    np.fill_diagonal(mask, False)
    adj = {i: set(np.flatnonzero(mask[i]).tolist()) for i in range(ms.n)}
    levels, truncated = _enumerate_cliques(range(ms.n), adj, max_dim + 1, budget)
    return RipsComplex._from_levels(levels, max_dim, complete=not truncated,
                                    metric=ms, beta=float(beta))


class SubdivisionComplex(SimplicialComplex):
    """Barycentric subdivision of ``base``.

    Vertex ``i`` is the barycenter of ``barycenters[i]``, a simplex of the base;
    vertices are numbered by (dimension, lexicographic order) of those simplices.
    Simplices are strictly nested chains of base simplices.
    """

    base: SimplicialComplex
    barycenters: tuple[tuple[int, ...], ...]
    vertex_of: dict

    def chain(self, simplex) -> tuple[tuple[int, ...], ...]:
        """The chain of base simplices a subdivision simplex stands for."""
        return tuple(sorted((self.barycenters[v] for v in _canon(simplex)), key=len))


def barycentric_subdivision(K: SimplicialComplex) -> SubdivisionComplex:
    barycenters = tuple(K)
    vertex_of = {s: i for i, s in enumerate(barycenters)}
    # chains ending at s, built in order of increasing dimension
    chains_to: dict[tuple, list[tuple[int, ...]]] = {}
    levels: list[set] = [set() for _ in range(K.max_dim + 1)]
    for s in barycenters:
        own = [(vertex_of[s],)]
        for k in range(1, len(s)):
            for face in itertools.combinations(s, k):
                own.extend(c + (vertex_of[s],) for c in chains_to[face])
        chains_to[s] = own
        for c in own:
            levels[len(c) - 1].add(tuple(sorted(c)))
    return SubdivisionComplex._from_levels(
        [sorted(lv) for lv in levels], K.max_dim, complete=K.complete,
        base=K, barycenters=barycenters, vertex_of=vertex_of,
    )


def cycle_complex(n: int) -> SimplicialComplex:
    """Cycle graph on ``n >= 3`` vertices: a pure 1-dimensional triangulation of the circle."""
    if n < 3:
        raise ValueError("a triangulated circle needs at least 3 vertices")
    return SimplicialComplex([(i, (i + 1) % n) for i in range(n)], max_dim=1)


@dataclass(frozen=True, eq=False)
class SimplicialMap:
    """A vertex map already checked to send simplices to simplices."""

    source: SimplicialComplex
    target: SimplicialComplex
    vertex_map: Mapping[int, int]

    def __call__(self, simplex) -> tuple[int, ...]:
        return _canon(self.vertex_map[v] for v in simplex)

    image = __call__

    def compose(self, inner: "SimplicialMap") -> "SimplicialMap":
        """``self o inner``."""
        vm = {v: self.vertex_map[w] for v, w in inner.vertex_map.items()}
        return SimplicialMap(inner.source, self.target, vm)


def _total_vertex_map(f, K: SimplicialComplex) -> dict[int, int]:
    vm = {}
    for v in K.vertices:
        try:
            vm[v] = int(f[v])
        except (KeyError, IndexError):
            raise ValueError(f"vertex map is not defined on vertex {v}") from None
    return vm


def check_simplicial(f, K: SimplicialComplex, L: SimplicialComplex) -> SimplicialMap:
    """Validate that the vertex map ``f`` induces a simplicial map ``K -> L``.

    Raises
    ------
    ValueError
        If ``f`` is not defined on every vertex of ``K``.
    NotSimplicialError
        For the first simplex (by dimension, then lexicographically) whose
        image is not in ``L``; the offending simplex is ``err.simplex``.
    """
    vm = _total_vertex_map(f, K)
    for s in K:
        img = _canon(vm[v] for v in s)
        if img not in L:
            raise NotSimplicialError(s, img)
    return SimplicialMap(K, L, vm)


def _same_complex(a: SimplicialComplex, b: SimplicialComplex) -> bool:
    return a is b or a == b


def contiguous(phi: SimplicialMap, psi: SimplicialMap) -> CheckResult:
    """Whether ``phi(s) | psi(s)`` is a target simplex for every source simplex ``s``.

    When the target is flag it suffices that this holds on the source's
    vertices and edges, so a source stored only to dimension 1 is exhaustive.
    """
    if not (_same_complex(phi.source, psi.source) and _same_complex(phi.target, psi.target)):
        raise ValueError("contiguity needs maps with the same source and target")
    target = phi.target
    rips = isinstance(target, RipsComplex)
    worst = np.inf
    for s in phi.source:
        union = _canon(phi(s) + psi(s))
        if union not in target:
            return CheckResult(False, witness=s,
                               detail=f"phi({s}) | psi({s}) = {union} is not a simplex")
        if rips:
            worst = min(worst, target.margin(union))
    margins = {"contiguity": float(worst)} if rips and np.isfinite(worst) else {}
    return CheckResult(True, margins=margins)


def check_homotopy_conditions(f: SimplicialMap, g: SimplicialMap, L: SimplicialComplex) -> CheckResult:
    """Check the two combinatorial conditions under which ``|g|`` and
    ``|f| o h`` agree up to homotopy, for ``f: K -> L`` and ``g: sd K -> L``.

    (a) ``g`` agrees with ``f`` on the original vertices of ``K``;
    (b) ``f(s) | {g(barycenter of s)}`` is a simplex of ``L`` for every ``s`` in ``K``.

    Only the conditions are checked; the homotopy itself is not built.
    """
    sd = g.source
    if not isinstance(sd, SubdivisionComplex):
        raise PreconditionError("g must be defined on a barycentric subdivision")
    K = sd.base
    if not _same_complex(f.source, K):
        raise PreconditionError("f must be defined on the complex that g's source subdivides")
    if not L.is_flag():
        raise PreconditionError("target complex L is not a flag complex")
    m = K.is_pure()
    if m is None:
        raise PreconditionError("source complex K is not pure")
    for v in K.vertices:
        gv = g.vertex_map[sd.vertex_of[(v,)]]
        if gv != f.vertex_map[v]:
            return CheckResult(False, witness=("a", (v,)),
                               detail=f"condition (a): g({v}) = {gv} but f({v}) = {f.vertex_map[v]}")
    rips = isinstance(L, RipsComplex)
    worst = np.inf
    for s in K:
        union = _canon(f(s) + (g.vertex_map[sd.vertex_of[s]],))
        if union not in L:
            return CheckResult(False, witness=("b", s),
                               detail=f"condition (b): {union} is not a simplex of L")
        if rips:
            worst = min(worst, L.margin(union))
    margins = {"condition_b": float(worst)} if rips else {}
    return CheckResult(True, margins=margins, detail=f"K pure of dimension {m}")


def connected_components(K: SimplicialComplex) -> int:
    """Number of connected components of the 1-skeleton."""
    parent = {v: v for v in K.vertices}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for a, b in K.simplices(1):
        parent[find(a)] = find(b)
    return len({find(v) for v in parent})


def is_connected(K: SimplicialComplex) -> bool:
    """True iff the 1-skeleton is connected (the empty complex is not)."""
    return connected_components(K) == 1
