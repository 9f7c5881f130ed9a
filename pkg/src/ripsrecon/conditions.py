"""Scale windows, reach-derived bounds, distortion checks and numerical
verifiers for the surjectivity construction and the contiguity chain.

Windows accept :class:`fractions.Fraction` inputs and then compute exactly;
the range tests on ``zeta`` compare against ``Fraction(1, 14)`` for exact
inputs and against the float ``1/14`` otherwise.

The continuous manifold is replaced by a :class:`~ripsrecon.manifolds.ReferenceNet`
with covering radius ``eps``. Every strict inequality that involves the net
must hold with margin at least ``2 eps``; any point of the manifold is within
``eps`` of a net point, so such a margin survives the passage back.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Real

import numpy as np

from .complex import (
    NotSimplicialError,
    PreconditionError,
    RipsComplex,
    SimplicialComplex,
    SimplicialMap,
    barycentric_subdivision,
    check_homotopy_conditions,
    check_simplicial,
    contiguous,
    rips_complex,
)
from .jung import geodesic_circumcenter
from .manifolds import ManifoldModel, ReferenceNet, UnsupportedModel
from .metric import Correspondence, FiniteMetricSpace, correspondence_distortion

GH_ZETA_MAX = Fraction(1, 14)
NET_FINENESS_FACTOR = Fraction(1, 10)


def _zeta_max(zeta) -> Real:
    return GH_ZETA_MAX if isinstance(zeta, (Fraction, int)) else 1 / 14


def delta_of(rho, kappa_sup=None):
    """``rho`` if the curvature bound is non-positive or absent, else
    ``min(rho, pi / (4 sqrt(kappa)))``."""
    if not rho > 0:
        raise ValueError(f"convexity radius must be positive, got {rho!r}")
    if kappa_sup is None or kappa_sup <= 0:
        return rho
    return min(rho, math.pi / (4 * math.sqrt(kappa_sup)))


@dataclass(frozen=True)
class ScaleWindow:
    """Admissible scales ``lower < beta < upper`` (or ``<= upper``)."""

    lower: Real
    upper: Real
    upper_inclusive: bool
    zeta: Real
    empty: bool = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "empty", bool(self.lower >= self.upper or self.upper <= 0))

    def __contains__(self, beta) -> bool:
        if self.empty or not beta > self.lower:
            return False
        return beta <= self.upper if self.upper_inclusive else beta < self.upper

    def midpoint(self) -> float:
        """Geometric midpoint; half the upper end when the lower end is 0."""
        if self.empty:
            raise ValueError("empty window has no midpoint")
        lo, hi = float(self.lower), float(self.upper)
        return hi / 2 if lo <= 0 else math.sqrt(lo * hi)

    @property
    def width_ratio(self) -> float:
        if self.empty:
            return 0.0
        return math.inf if self.lower <= 0 else float(self.upper) / float(self.lower)

    def to_dict(self) -> dict:
        return {"lower": float(self.lower), "upper": float(self.upper),
                "upper_inclusive": self.upper_inclusive, "empty": self.empty,
                "zeta": float(self.zeta)}


def gh_window(delta, d_gh_bound, zeta) -> ScaleWindow:
    """``d/zeta < beta < Delta/(1+2 zeta)`` for ``0 < zeta <= 1/14``."""
    if not (0 < zeta <= _zeta_max(zeta)):
        raise ValueError(f"zeta must lie in (0, 1/14] for the Gromov-Hausdorff window, got {zeta}")
    if not delta > 0:
        raise ValueError("Delta must be positive")
    if d_gh_bound < 0:
        raise ValueError("distance bound must be non-negative")
    return ScaleWindow(d_gh_bound / zeta, delta / (1 + 2 * zeta), False, zeta)


def h_factor(zeta):
    """``c(zeta) = 3(1+2z)(1-14z) / (8(1-2z)^2)``; the window's upper end is ``c tau``."""
    return 3 * (1 + 2 * zeta) * (1 - 14 * zeta) / (8 * (1 - 2 * zeta) ** 2)


def h_window(tau, d_h_bound, zeta) -> ScaleWindow:
    """``d/zeta < beta <= c(zeta) tau`` for ``0 < zeta < 1/14``.

    At ``zeta = 1/14`` exactly the factor vanishes and an empty window is
    returned; larger or non-positive ``zeta`` is an error.
    """
    if not (0 < zeta <= _zeta_max(zeta)):
        raise ValueError(f"zeta must lie in (0, 1/14) for the Hausdorff window, got {zeta}")
    if tau is None or not tau > 0:
        raise ValueError("reach must be positive")
    if d_h_bound < 0:
        raise ValueError("distance bound must be non-negative")
    return ScaleWindow(d_h_bound / zeta, h_factor(zeta) * tau, True, zeta)


@dataclass(frozen=True)
class ReachBounds:
    B_norm_bound: Real
    kappa_range: tuple
    rho_lower: Real
    delta_lower: Real

    def to_dict(self) -> dict:
        return {"B_norm_bound": float(self.B_norm_bound),
                "kappa_range": [float(k) for k in self.kappa_range],
                "rho_lower": float(self.rho_lower), "delta_lower": float(self.delta_lower)}


def reach_bounds(tau) -> ReachBounds:
    """Second fundamental form, curvature, convexity radius and ``Delta``
    bounds implied by the reach."""
    if tau is None or not tau > 0:
        raise ValueError(f"reach must be positive, got {tau!r}")
    return ReachBounds(1 / tau, (-1 / tau**2, 1 / tau**2), math.pi * tau / 2, math.pi * tau / 4)


def distortion_threshold(xi, tau):
    """Chord length ``2 (xi-1)/xi^2 tau`` below which ``d_M <= xi |p-q|``."""
    if not (1 < xi < 2):
        raise ValueError(f"xi must lie in the open interval (1, 2), got {xi}")
    if tau is None or not tau > 0:
        raise ValueError("reach must be positive")
    return 2 * (xi - 1) / xi**2 * tau


def chord_arc_f(r, tau):
    """``f(r) = tau - tau sqrt(1 - 2r/tau)`` on ``[0, tau/2]``: an upper bound
    on the geodesic length of a chord of length ``r``. Vectorised."""
    arr = np.asarray(r, dtype=float)
    if np.any(arr < 0) or np.any(arr > tau / 2 * (1 + 1e-15)):
        raise ValueError("f is defined on [0, tau/2]")
    out = tau - tau * np.sqrt(np.maximum(0.0, 1 - 2 * arr / tau))
    return float(out) if out.ndim == 0 else out


def xi_for_zeta(zeta):
    """``xi = 4(1-2 zeta) / (3(1+2 zeta))``, the distortion factor used for Hausdorff reconstruction."""
    return 4 * (1 - 2 * zeta) / (3 * (1 + 2 * zeta))


@dataclass(frozen=True)
class ConstantsReport:
    rho: float | None
    kappa_sup: float | None
    tau: float | None
    delta: float | None
    provenance: dict

    def to_dict(self) -> dict:
        return {k: {"value": getattr(self, k), "provenance": self.provenance[k]}
                for k in ("rho", "kappa_sup", "tau", "delta")}


def constants_report(m: ManifoldModel) -> ConstantsReport:
    c = m.constants()
    return ConstantsReport(c["rho"][0], c["kappa_sup"][0], c["tau"][0], c["delta"][0],
                           {k: v[1] for k, v in c.items()})


def check_distortion(m: ManifoldModel, xi: float, trials: int, seed: int) -> dict:
    """Random pairs with chord at most the threshold satisfy ``d_M <= xi |p-q|``
    and ``|p-q| >= d_M - d_M^2 / (2 tau)``.

    Half of the pairs have chords within 1% of the threshold.
    """
    if m.kind not in ("circle", "sphere2"):
        raise UnsupportedModel(f"{m.kind} lacks a geodesic or an embedding evaluator")
    tau = m.tau
    thr = distortion_threshold(xi, tau)
    rng = np.random.default_rng(seed)
    R = m.params["R"]
    frac = np.where(np.arange(trials) % 2 == 0, rng.uniform(0, 1, trials),
                    rng.uniform(0.99, 1, trials))
    chord = frac * thr
    angle = 2 * np.arcsin(np.minimum(1.0, chord / (2 * R)))
    if m.kind == "circle":
        p = rng.uniform(0, 2 * math.pi, trials)
        sign = rng.choice([-1.0, 1.0], trials)
        P = p.reshape(-1, 1)
        Q = ((p + sign * angle) % (2 * math.pi)).reshape(-1, 1)
    else:
        from .manifolds import _xyz_to_sphere

        u = rng.normal(size=(trials, 3))
        u /= np.linalg.norm(u, axis=1)[:, None]
        t = rng.normal(size=(trials, 3))
        t -= (t * u).sum(axis=1)[:, None] * u
        t /= np.linalg.norm(t, axis=1)[:, None]
        w = np.cos(angle)[:, None] * u + np.sin(angle)[:, None] * t
        P, Q = _xyz_to_sphere(u), _xyz_to_sphere(w)
    EP, EQ = m.embed(P), m.embed(Q)
    eu = np.linalg.norm(EP - EQ, axis=1)
    geo = m.paired_geodesic(P, Q)
    under = eu <= thr
    ratio_ok = geo <= xi * eu + 1e-12
    chord_ok = eu >= geo - geo**2 / (2 * tau) - 1e-12
    bad = np.flatnonzero(under & ~(ratio_ok & chord_ok))
    return {"check": "distortion", "xi": float(xi), "threshold": float(thr),
            "pairs": int(under.sum()), "skipped_over_threshold": int((~under).sum()),
            "max_ratio": float(np.max(np.where(under & (eu > 0), geo / np.where(eu > 0, eu, 1), 0))),
            "failures": bad.tolist()[:20], "pass": bad.size == 0}


# -- construction verifiers ------------------------------------------------------------

@dataclass
class VerifierReport:
    """Outcome of a construction check.

    ``hypotheses`` and ``checks`` map names to ``{"ok", ...}``. Strict
    inequalities carry a ``margin`` that must reach ``required_margin``;
    non-strict ones carry a ``slack`` instead.
    """

    name: str
    hypotheses: dict
    checks: dict
    required_margin: float
    flags: list = field(default_factory=list)

    @property
    def hypotheses_ok(self) -> bool:
        return all(h["ok"] for h in self.hypotheses.values())

    @property
    def checks_ok(self) -> bool:
        return all(c["ok"] for c in self.checks.values())

    @property
    def passed(self) -> bool:
        return self.hypotheses_ok and self.checks_ok

    def margins(self) -> dict:
        return {k: v["margin"] for k, v in {**self.hypotheses, **self.checks}.items()
                if v.get("margin") is not None}

    def to_dict(self) -> dict:
        return {"check": self.name, "pass": self.passed, "hypotheses_ok": self.hypotheses_ok,
                "hypotheses": self.hypotheses, "checks": self.checks,
                "required_margin": self.required_margin, "margins": self.margins(),
                "flags": list(self.flags)}


def _strict(value_margin: float, required: float, **extra) -> dict:
    out = {"ok": bool(value_margin >= required and value_margin > 0), "margin": float(value_margin)}
    out.update(extra)
    return out


def _sample_metric(S, variant: str) -> tuple[FiniteMetricSpace, np.ndarray | None]:
    if variant == "gh":
        if not isinstance(S, FiniteMetricSpace):
            raise TypeError("the Gromov-Hausdorff variant takes the sample as a FiniteMetricSpace")
        return S, None
    if variant == "h":
        pts = np.asarray(S, dtype=float)
        return FiniteMetricSpace.from_points(pts), pts
    raise ValueError(f"unknown variant {variant!r}; expected 'gh' or 'h'")


def _check_zeta(zeta, variant: str) -> None:
    top = _zeta_max(zeta)
    if not (0 < zeta <= top) or (variant == "h" and zeta == top):
        rng = "(0, 1/14]" if variant == "gh" else "(0, 1/14)"
        raise ValueError(f"zeta must lie in {rng}, got {zeta}")


def _hypotheses(net: ReferenceNet, SM, S_pts, C: Correspondence, beta, zeta, variant, eps):
    m = net.model
    hyp = {}
    if variant == "gh":
        dist = correspondence_distortion(C, net.metric, SM)
        hyp["distortion_below_2_zeta_beta"] = _strict(2 * zeta * beta - dist, 2 * eps,
                                                      distortion=dist)
        upper = m.delta / (1 + 2 * zeta)
        hyp["beta_below_delta_over_1_plus_2zeta"] = _strict(float(upper - beta), 0.0)
    else:
        ix, iy = C.as_arrays()
        gaps = np.linalg.norm(net.points()[ix] - S_pts[iy], axis=1)
        hyp["pairs_within_zeta_beta"] = _strict(zeta * beta - float(gaps.max()), eps,
                                                max_gap=float(gaps.max()))
        cap = h_factor(zeta) * m.tau
        hyp["beta_at_most_c_zeta_tau"] = {"ok": bool(beta <= cap), "slack": float(cap - beta)}
    fine = float(NET_FINENESS_FACTOR) * zeta * beta
    hyp["net_fineness"] = {"ok": bool(eps <= fine), "slack": float(fine - eps)}
    return hyp


def _phi_for(C: Correspondence, fixed: dict[int, int]) -> np.ndarray:
    """Lowest-partner map net -> S, overridden on ``fixed`` (which must be pairs of C)."""
    phi = C.forward_map()
    for p, s in fixed.items():
        phi[p] = s
    return phi


def verify_surjectivity_construction(net: ReferenceNet, S, C: Correspondence, beta, zeta,
                                     K: SimplicialComplex, g, *, variant: str = "gh",
                                     seed: int = 0) -> VerifierReport:
    """Rebuild the map ``g~(barycenter of s) = Theta(s')`` from a simplicial
    map ``g: K -> R_beta(S)`` and check every bound its construction uses.

    Parameters
    ----------
    net : ReferenceNet
        Finite stand-in for the manifold, with geodesic metric.
    S : FiniteMetricSpace or array_like
        The sample: a metric space (``variant="gh"``) or ambient points
        (``variant="h"``, Euclidean distances).
    C : Correspondence
        Between net (x side) and sample (y side).
    K : SimplicialComplex
        Pure source complex, e.g. a triangulated sphere.
    g : mapping or sequence
        Vertex map ``K -> S``.

    Returns
    -------
    VerifierReport
        Hypothesis failures are reported, not raised.
    """
    _check_zeta(zeta, variant)
    m = net.model
    if not m.has_geodesic:
        raise UnsupportedModel("circumcenters need exact geodesics")
    SM, S_pts = _sample_metric(S, variant)
    eps = float(net.fill_bound)
    req = 2 * eps
    hyp = _hypotheses(net, SM, S_pts, C, beta, zeta, variant, eps)
    flags = []
    checks: dict = {}

    if K.is_pure() is None:
        raise PreconditionError("source complex K is not pure")
    R_S = rips_complex(SM, beta, max_dim=1)
    try:
        g_map = check_simplicial(g, K, R_S)
    except NotSimplicialError as err:
        checks["g_simplicial"] = {"ok": False, "margin": None, "witness": list(err.simplex)}
        return VerifierReport("surjectivity_construction", hyp, checks, req, flags)
    checks["g_simplicial"] = {"ok": True, "margin": None}

    # a partner p_v of every used sample point, fixed once so that phi(p_v) = g(v)
    rep: dict[int, int] = {}
    fixed: dict[int, int] = {}
    for s in sorted(set(g_map.vertex_map.values())):
        partners = [p for p in C.partners_of_y(s) if p not in fixed]
        if not partners:
            checks["partner_choice"] = {"ok": False, "margin": None,
                                        "detail": f"sample point {s} has no free partner"}
            return VerifierReport("surjectivity_construction", hyp, checks, req, flags)
        rep[s] = partners[0]
        fixed[partners[0]] = s
    phi = _phi_for(C, fixed)

    sd = barycentric_subdivision(K)
    D = net.metric.dist
    sigma_scale = (1 + 2 * zeta) * beta if variant == "gh" else _four_thirds(zeta) * beta
    worst_sigma = math.inf
    centers, snapped = {}, {}
    for s in K:
        pts = [rep[g_map.vertex_map[v]] for v in s]  # p_0..p_l
        idx = np.array(pts)
        diam = float(D[np.ix_(idx, idx)].max())
        worst_sigma = min(worst_sigma, float(sigma_scale) - diam)
        res = geodesic_circumcenter(m, net.coords[idx], seed=seed)
        flags.extend(f for f in res.flags if f not in flags)
        centers[s] = res.center
        snapped[s] = int(np.argmin(m.pairwise_geodesic(res.center[None], net.coords)[0]))
    name = "diam_sigma_below_(1+2zeta)beta" if variant == "gh" else "diam_sigma_below_4/3(1-2zeta)beta"
    checks[name] = _strict(worst_sigma, req)
    if variant == "gh":
        checks["(1+2zeta)beta_below_delta"] = _strict(float(m.delta - sigma_scale), 0.0)
    else:
        checks["4/3(1-2zeta)beta_below_delta"] = _strict(float(m.delta - sigma_scale), 0.0)

    # g~ into R_{(1-2 zeta) beta}(M): diameters of center chains, measured before snapping
    low = float((1 - 2 * zeta) * beta)
    worst = math.inf
    for chain in (c for c in sd if len(c) > 1):
        cs = np.array([centers[sd.barycenters[v]] for v in chain])
        diam = float(m.pairwise_geodesic(cs).max())
        worst = min(worst, low - diam)
    checks["center_chains_below_(1-2zeta)beta"] = _strict(worst, req)
    gt = {v: snapped[sd.barycenters[v]] for v in sd.vertices}
    R_N = rips_complex(net.metric, low, max_dim=1) if low > 0 else None
    try:
        gt_map = check_simplicial(gt, sd, R_N)
        checks["g_tilde_simplicial"] = {"ok": True, "margin": None}
    except NotSimplicialError as err:
        checks["g_tilde_simplicial"] = {"ok": False, "margin": None, "witness": list(err.simplex)}
        return VerifierReport("surjectivity_construction", hyp, checks, req, flags)

    composite = SimplicialMap(sd, R_S, {v: int(phi[gt_map.vertex_map[v]]) for v in sd.vertices})
    try:
        cond = check_homotopy_conditions(g_map, composite, R_S)
    except PreconditionError as err:
        checks["homotopy_conditions"] = {"ok": False, "margin": None, "detail": str(err)}
        return VerifierReport("surjectivity_construction", hyp, checks, req, flags)
    failed = None if cond.ok else cond.witness[0]
    checks["condition_a"] = {"ok": failed != "a", "margin": None}
    if cond.ok:
        checks["condition_b"] = _strict(cond.margins["condition_b"], req)
    else:
        checks["condition_b"] = {"ok": False, "margin": None, "detail": cond.detail}
    flags.append("(3/4)(1+2zeta)beta <= (1-2zeta)beta holds with slack (1-14zeta)beta/4 = "
                 f"{float((1 - 14 * zeta) * beta / 4):.6g}")
    return VerifierReport("surjectivity_construction", hyp, checks, req, flags)


def _four_thirds(zeta):
    """``(4/3)(1 - 2 zeta)``, exact for rational ``zeta``."""
    return Fraction(4, 3) * (1 - 2 * zeta) if isinstance(zeta, (Fraction, int)) else 4 / 3 * (1 - 2 * zeta)


def _min_edge_margin(f: SimplicialMap, K: SimplicialComplex, L: RipsComplex) -> float:
    worst = math.inf
    vm = f.vertex_map
    for a, b in K.simplices(1):
        worst = min(worst, L.beta - float(L.metric.dist[vm[a], vm[b]]))
    return worst


def verify_contiguity_chain(net: ReferenceNet, S, C: Correspondence, beta, zeta, *,
                            variant: str = "gh") -> VerifierReport:
    """Build ``phi: R_{(1-2z)b}(net) -> R_b(S)`` and ``psi: R_b(S) -> R_t(net)``
    from ``C`` and check both are simplicial and ``psi o phi`` is contiguous
    to the inclusion. ``t = (1+2z)b`` (``variant="gh"``) or ``(4/3)(1-2z)b``
    (``variant="h"``). Targets are flag, so edges decide everything.
    """
    _check_zeta(zeta, variant)
    SM, S_pts = _sample_metric(S, variant)
    eps = float(net.fill_bound)
    req = 2 * eps
    hyp = _hypotheses(net, SM, S_pts, C, beta, zeta, variant, eps)
    checks: dict = {}
    low = float((1 - 2 * zeta) * beta)
    high = float((1 + 2 * zeta) * beta if variant == "gh" else _four_thirds(zeta) * beta)
    src = rips_complex(net.metric, low, max_dim=1)
    mid = rips_complex(SM, beta, max_dim=1)
    top = rips_complex(net.metric, high, max_dim=1)
    phi_v, psi_v = C.forward_map(), C.backward_map()
    maps = {}
    for name, f, K, L in (("phi", phi_v, src, mid), ("psi", psi_v, mid, top)):
        try:
            maps[name] = check_simplicial(f, K, L)
            checks[f"{name}_simplicial"] = _strict(_min_edge_margin(maps[name], K, L), req)
        except NotSimplicialError as err:
            checks[f"{name}_simplicial"] = {"ok": False, "margin": None,
                                            "witness": list(err.simplex)}
    if "phi" in maps and "psi" in maps:
        iota = SimplicialMap(src, top, {v: v for v in src.vertices})
        cont = contiguous(maps["psi"].compose(maps["phi"]), iota)
        checks["contiguity"] = (_strict(cont.margins.get("contiguity", math.inf), req)
                                if cont.ok else {"ok": False, "margin": None,
                                                 "witness": list(cont.witness)})
    return VerifierReport("contiguity_chain", hyp, checks, req, [])
