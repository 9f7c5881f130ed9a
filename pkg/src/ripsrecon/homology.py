"""Simplicial homology with coefficients in the two-element field.

Betti numbers come from ranks of sparse boundary matrices, reduced column by
column with the clearing optimisation. Columns are Python sets of row
indices; adding two columns is a symmetric difference.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .complex import SimplicialComplex


@dataclass(frozen=True)
class BettiVector:
    """Betti numbers ``b_0..b_k`` plus notes on what could not be computed exactly."""

    betti: tuple[int, ...]
    flags: tuple[str, ...] = field(default=())

    def __iter__(self):
        return iter(self.betti)

    def __len__(self):
        return len(self.betti)

    def __getitem__(self, k):
        return self.betti[k]

    @property
    def exact(self) -> bool:
        return not self.flags

    def matches(self, truth, up_to: int | None = None) -> bool:
        """Compare with ``truth``, padding it with zeros to the computed length."""
        k = len(self.betti) if up_to is None else up_to + 1
        truth = tuple(truth) + (0,) * max(0, k - len(truth))
        return self.betti[:k] == truth[:k]


def boundary_columns(K: SimplicialComplex, dim: int) -> list[set[int]]:
    """Columns of the boundary map from ``dim``-simplices to ``(dim-1)``-simplices."""
    if dim <= 0:
        return [set() for _ in K.simplices(max(dim, 0))]
    index = {s: i for i, s in enumerate(K.simplices(dim - 1))}
    return [{index[s[:j] + s[j + 1:]] for j in range(len(s))} for s in K.simplices(dim)]


def coboundary_columns(K: SimplicialComplex, dim: int) -> list[set[int]]:
    """Columns of the coboundary map from ``dim``-simplices to ``(dim+1)``-simplices."""
    index = {s: i for i, s in enumerate(K.simplices(dim))}
    cols: list[set[int]] = [set() for _ in index]
    for r, s in enumerate(K.simplices(dim + 1)):
        for j in range(len(s)):
            cols[index[s[:j] + s[j + 1:]]].add(r)
    return cols


def reduce_columns(columns: list[set[int]], skip: set[int] = frozenset()) -> dict[int, int]:
    """Standard column reduction over GF(2).

    Columns are processed left to right; the pivot of a column is its largest
    row index. Columns listed in ``skip`` are known to reduce to zero
    (clearing) and are not touched. Returns ``{pivot_row: column}``, whose
    size is the rank. ``columns`` is modified in place.
    """
    pivot_of: dict[int, int] = {}
    for j, col in enumerate(columns):
        if j in skip or not col:
            continue
        low = max(col)
        while low in pivot_of:
            col ^= columns[pivot_of[low]]
            if not col:
                break
            low = max(col)
        if col:
            pivot_of[low] = j
    return pivot_of


def boundary_ranks(K: SimplicialComplex, top: int, method: str = "cohomology") -> list[int]:
    """``rank d_k`` for ``k = 0..top`` (``d_0 = 0``), with clearing.

    ``method="homology"`` reduces boundary matrices from the top dimension
    down, clearing columns of simplices that were pivots one dimension up.
    ``method="cohomology"`` reduces coboundary matrices from dimension 0 up,
    clearing the other way; ``rank d_{k+1} = rank delta_k``. Both give the
    same ranks; cohomology is usually much cheaper on Rips complexes.
    """
    ranks = [0] * (top + 1)
    if method == "homology":
        cleared: set[int] = set()
        for k in range(top, 0, -1):
            pivots = reduce_columns(boundary_columns(K, k), skip=cleared)
            ranks[k] = len(pivots)
            cleared = set(pivots)
    elif method == "cohomology":
        # rows of delta_k and columns of delta_{k+1} share one order; clearing relies on it
        cleared = set()
        for k in range(0, top):
            pivots = reduce_columns(coboundary_columns(K, k), skip=cleared)
            ranks[k + 1] = len(pivots)
            cleared = set(pivots)
    else:
        raise ValueError(f"unknown method {method!r}")
    return ranks


def betti_numbers(K: SimplicialComplex, up_to: int | None = None,
                  method: str = "cohomology") -> BettiVector:
    """Betti numbers ``b_0..b_up_to`` over GF(2).

    ``b_k = dim ker d_k - rank d_{k+1}`` needs the ``(k+1)``-simplices. If
    the complex was truncated at ``max_dim <= up_to``, the Betti numbers at
    and above the cap are not exact and the result is flagged.
    """
    if up_to is None:
        up_to = K.dimension if K.complete else K.max_dim - 1
    up_to = max(up_to, 0)
    flags = []
    reach = up_to
    if up_to > K.max_dim:
        flags.append(f"b_k for k > {K.max_dim} not computed: complex built to dimension {K.max_dim}")
        reach = K.max_dim
    top = min(reach + 1, K.max_dim)
    ranks = boundary_ranks(K, top, method=method) + [0]
    counts = K.f_vector()
    betti = []
    for k in range(reach + 1):
        betti.append(counts[k] - ranks[k] - ranks[k + 1])
    if not K.complete and reach >= K.max_dim:
        flags.append(f"b_{K.max_dim} is an upper bound only: no {K.max_dim + 1}-simplices were built")
    return BettiVector(tuple(betti), tuple(flags))


def euler_characteristic(K: SimplicialComplex) -> int:
    """Alternating sum of simplex counts of the stored complex."""
    return sum((-1) ** k * c for k, c in enumerate(K.f_vector()))


def homology_report(K: SimplicialComplex, up_to: int | None = None) -> dict:
    """``{"betti": [...], "euler": n, "flags": [...]}``."""
    bv = betti_numbers(K, up_to)
    flags = list(bv.flags)
    if not K.complete:
        flags.append("euler characteristic of the truncated complex only")
    return {"betti": list(bv.betti), "euler": euler_characteristic(K), "flags": flags}
