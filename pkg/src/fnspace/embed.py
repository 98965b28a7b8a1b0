"""Embedding verdicts for Besov spaces of logarithmic smoothness.

The routines here combine the symbolic hypothesis checks of :mod:`svfunc`,
the norms of :mod:`spaces` and the weighted criteria of :mod:`hardy` into
reports: the main ``q >= r`` verdict, the optimality chain, the sharpness
probe for a bounded factor ``kappa``, the strict-inclusion demonstrations
and the criterion for embeddings of Lorentz-Karamata type.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from . import hardy
from .hardy import ConditionReport, KernelSpec, Weight, growth_verdict
from .quad import DIVERGENT, integrate_finite, safe_exp
from .rearrange import RearrangementProfile, SampledFunction, rearrange
from .spaces import besov_hypotheses, besov_norm, lk_norm, z_norm
from .svfunc import (CONVERGENT, DIVERGENT_V, SV, DerivedSV, ExpLogFactor, SVExpr,
                     check_non_increasing, classify_integrability, compose_root,
                     log_power_vector, make_bbar, make_btilde, make_brn, make_d_max,
                     make_d_min, power_table, product, tail_integral_br)

HOLDS = "embedding holds"
FAILS = "embedding fails"
TRIVIAL = "hypothesis fails"

BOUNDED = "bounded"
UNBOUNDED = hardy.UNBOUNDED

INDICATOR_KS = tuple(range(-8, 9))
HAT_KS = tuple(range(-4, 6))
RANDOM_MEMBERS = 13

STRICTNESS_KS = tuple(range(2, 13)) + (20, 50, 100, 200, 300)
SHARPNESS_TS = tuple(10.0 ** -(k / 4) for k in range(4, 49)) + (1e-20, 1e-50, 1e-100)
SAWYER_ZS = tuple(10.0 ** k for k in range(-12, 13))


# --- case -----------------------------------------------------------------------------


@dataclass
class EmbeddingCase:
    n: int
    p: float
    r: float
    q: float
    b: SVExpr
    kappa: SVExpr | None = None

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ValueError(f"n must be a positive integer, got {self.n}")
        self.n = int(self.n)
        if not 1 < self.p < math.inf:
            raise ValueError(f"need 1 < p < inf, got {self.p}")
        for name in ("r", "q"):
            v = getattr(self, name)
            if not 1 <= v < math.inf:
                raise ValueError(f"need 1 <= {name} < inf, got {v}")
        if self.kappa is not None and not check_non_increasing(self.kappa):
            raise ValueError("kappa fails the non-increasing check")

    @property
    def rho(self) -> float:
        if self.p <= self.q:
            return math.inf
        return 1.0 / (1.0 / self.q - 1.0 / self.p)

    def to_json(self) -> dict:
        out = {"n": self.n, "p": self.p, "r": self.r, "q": self.q, "b": self.b.to_json()}
        if self.kappa is not None:
            out["kappa"] = self.kappa.to_json()
        return out

    @classmethod
    def from_json(cls, d: dict) -> "EmbeddingCase":
        if not isinstance(d, dict):
            raise ValueError("case must be a JSON object")
        allowed = {"n", "p", "r", "q", "b", "kappa"}
        extra = set(d) - allowed
        if extra:
            raise ValueError(f"unknown case fields: {sorted(extra)}")
        missing = {"p", "r", "q"} - set(d)
        if missing:
            raise ValueError(f"missing case fields: {sorted(missing)}")
        b = SVExpr.from_json(d["b"]) if "b" in d else SVExpr.standard()
        kappa = SVExpr.from_json(d["kappa"]) if d.get("kappa") is not None else None
        return cls(d.get("n", 1), float(d["p"]), float(d["r"]), float(d["q"]), b, kappa)


def standard_case(p: float = 3, r: float = 1, q: float = 2, n: int = 1) -> EmbeddingCase:
    return EmbeddingCase(n, p, r, q, SVExpr.standard())


def kappa_at_zero(kappa: SVExpr) -> float:
    """Symbolic ``kappa(0+)`` read off the factors on ``(0, 1]``."""
    piece = kappa.left
    exps = [f for f in piece if isinstance(f, ExpLogFactor) and f.c != 0]
    if exps:
        top = max(f.a for f in exps)
        c = sum(f.c for f in exps if f.a == top)
        if c != 0:
            return math.inf if c > 0 else 0.0
    for alpha in log_power_vector(piece):
        if alpha != 0:
            return math.inf if alpha > 0 else 0.0
    return kappa.scale


# --- analysis -------------------------------------------------------------------------


@dataclass
class EmbeddingReport:
    case: EmbeddingCase
    hypothesis: dict
    hypothesis_holds: bool
    verdict: str
    bbar: SV | None = None
    btilde: SV | None = None
    head_check: dict = field(default_factory=dict)
    tail_check: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)
    traces: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"case": self.case.to_json(), "hypothesis": self.hypothesis,
                "hypothesis_holds": self.hypothesis_holds, "verdict": self.verdict,
                "bbar": getattr(self.bbar, "tag", None), "btilde": getattr(self.btilde, "tag", None),
                "head_check": self.head_check, "tail_check": self.tail_check,
                "notes": self.notes, "traces": self.traces, "provenance": "quadrature"}


def analyze(case: EmbeddingCase, grid=None) -> EmbeddingReport:
    """Hypothesis check, ``q >= r`` verdict and the two integrals of ``bbar``.

    The embedding of ``B^{0,b}_{p,r}`` into ``Z_{p,q,n,bbar}`` holds iff
    ``q >= r``, provided ``int_0^1 t^{-1} b^r`` diverges and
    ``int_1^inf t^{-1} b^r`` converges.
    """
    hyp = classify_integrability(case.b, case.r)
    holds = hyp.at_zero == DIVERGENT_V and hyp.at_infinity == CONVERGENT
    verdict = (HOLDS if case.q >= case.r else FAILS) if holds else TRIVIAL
    rep = EmbeddingReport(case, hyp.to_json(), holds, verdict)
    if not holds:
        rep.notes.extend(besov_hypotheses(case.b, case.r) or
                         ["integrability at an end could not be decided"])
        return rep
    if case.q == case.r:
        rep.notes.append("q == r: bbar equals b")
    rep.bbar = make_bbar(case.b, case.r, case.q)
    rep.btilde = make_btilde(case.b, case.r, case.q, case.p, case.n)

    # ||t^{-1/q} bbar||_{q;(0,1)} diverges: bbar^q >= b_r(1)^{q-r} b^r on (0,1]
    head = power_table(rep.bbar, case.q).head_end
    rep.head_check = {"numeric_status": head.status, "value": head.value,
                      "symbolic": "divergent (b^r not integrable at 0 and b_r >= b_r(1) there)",
                      "agrees": head.status == DIVERGENT, "provenance": "quadrature"}
    tab = power_table(rep.bbar, case.q)
    value = tab.tail(0.0) ** (1.0 / case.q)
    br1 = tail_integral_br(case.b, case.r)(1.0)
    closed = (case.r / case.q) ** (1.0 / case.q) * br1
    rep.tail_check = {"value": value, "b_r(1)": br1, "closed_form": closed,
                      "rel_err": abs(value - closed) / closed, "provenance": "quadrature"}
    if grid is not None:
        rep.traces["bbar"] = [[float(t), rep.bbar(float(t))] for t in grid]
        rep.traces["btilde"] = [[float(t), rep.btilde(float(t))] for t in grid]
    return rep


# --- test family and empirical constant --------------------------------------------------


def builtin_family(seed: int = 42) -> list[tuple[str, SampledFunction]]:
    """17 indicators, 10 hats and 13 random monotone step functions."""
    fam = [(f"indicator k={k}", SampledFunction.indicator(0.0, 2.0 ** k, 1.0))
           for k in INDICATOR_KS]
    fam += [(f"hat k={k}", SampledFunction.hat(2.0 ** k, 2.0 ** k, 1.0)) for k in HAT_KS]
    rng = np.random.default_rng(seed)
    for i in range(RANDOM_MEMBERS):
        m = int(rng.integers(2, 7))
        widths = 2.0 ** rng.uniform(-6.0, 4.0, size=m)
        heights = np.cumsum(rng.exponential(1.0, size=m))[::-1]
        breaks = np.concatenate([[0.0], np.cumsum(widths)])
        fam.append((f"random #{i}", SampledFunction.from_steps(breaks.tolist(), heights.tolist())))
    return fam


@dataclass
class EmpiricalConstant:
    max_ratio: float
    min_ratio: float
    rows: list  # (label, z_norm, besov_norm, ratio)
    skipped: list

    @property
    def bracket(self) -> float:
        return self.max_ratio / self.min_ratio if self.min_ratio > 0 else math.inf

    def to_json(self) -> dict:
        return {"max_ratio": self.max_ratio, "min_ratio": self.min_ratio,
                "bracket": self.bracket, "skipped": self.skipped,
                "rows": [list(r) for r in self.rows], "provenance": "quadrature"}


def empirical_embedding_constant(case: EmbeddingCase, family=None) -> EmpiricalConstant:
    """``max ||f||_{Z_{p,q,n,bbar}} / ||f||_{B^{0,b}_{p,r}}`` over a family (``n = 1``)."""
    if case.q < case.r:
        raise ValueError("the embedding needs q >= r")
    if case.n != 1:
        raise ValueError("Besov norms are one-dimensional here; need n = 1")
    family = builtin_family() if family is None else family
    bbar = make_bbar(case.b, case.r, case.q)
    rows, skipped = [], []
    for i, item in enumerate(family):
        label, f = item if isinstance(item, tuple) else (f"#{i}", item)
        B = besov_norm(f, case.p, case.r, case.b)
        if B == 0:
            skipped.append([label, "zero function: ratio 0/0"])
            continue
        if not math.isfinite(B):
            skipped.append([label, "infinite Besov norm"])
            continue
        Z = z_norm(rearrange(f), case.p, case.q, case.n, bbar)
        rows.append((label, Z, B, Z / B))
    ratios = [r[3] for r in rows]
    return EmpiricalConstant(max(ratios, default=0.0), min(ratios, default=0.0), rows, skipped)


def indicator_slope(const: EmpiricalConstant) -> float:
    """Least-squares slope of ``log ratio`` against ``k`` over the indicator rows."""
    pts = [(int(lbl.split("=")[1]), math.log(r)) for lbl, _, _, r in const.rows
           if lbl.startswith("indicator")]
    if len(pts) < 2:
        return math.nan
    ks, lr = zip(*pts)
    return float(np.polyfit(ks, lr, 1)[0])


# --- optimality ------------------------------------------------------------------------


def optimality_chain(case: EmbeddingCase, grid=None) -> ConditionReport:
    """Heinig-Stepanov criterion for ``Z_{p,r,n,b} -> Z_{p,q,n,bbar}``.

    Weights ``w = t^{-1} bbar^q(t^{1/n})`` and ``v = t^{-1} b^r(t^{1/n})``;
    the report also carries the ratio of the two Z norms on indicators.
    """
    if case.r > case.q:
        raise ValueError("the optimality chain needs r <= q")
    bbar = make_bbar(case.b, case.r, case.q)
    w = Weight.power(-1.0, bbar, case.q, case.n, "t^-1 bbar^q")
    v = Weight.power(-1.0, case.b, case.r, case.n, "t^-1 b^r")
    rep = hardy.heinig_stepanov(w, v, case.q, case.r, grid)
    expected = (case.n * case.r / case.q) ** (1 / case.q) * case.n ** (-1 / case.r)
    rep.params.update({"expected": expected, "n": case.n})
    ratios = []
    for k in INDICATOR_KS:
        f = RearrangementProfile.indicator(2.0 ** k, 1.0)
        big = z_norm(f, case.p, case.q, case.n, bbar)
        small = z_norm(f, case.p, case.r, case.n, case.b)
        ratios.append([k, big / small])
    rep.params["indicator_ratios"] = ratios
    return rep


# --- Lorentz-Karamata criterion ----------------------------------------------------------


def _restrict_unit(w: Weight) -> Weight:
    rest = w.rest
    return Weight(lambda u: rest(u) if u <= 0 else -math.inf, w.gamma, w.tag)


def cgo2_condition(case: EmbeddingCase, w: Weight, grid=None) -> ConditionReport:
    """Trace of ``(W_q(1) + ||s^{-1/p-1/rho} W_q(s)||_{rho;(t,1)}) / b_{r,n}(t)``.

    ``W_q(t) = ||w||_{q;(0,t)}`` and ``w`` is only used on ``(0, 1)``.
    """
    p, q, rho = case.p, case.q, case.rho
    grid = hardy.log_grid(1e-12, 1.0, 97)[:-1] if grid is None else np.asarray(grid, float)
    wq = _restrict_unit(w).pow(q)
    W1 = wq.head_u(0.0) ** (1 / q)
    if not math.isfinite(W1):
        return ConditionReport("cgo2", math.inf, math.nan, [], UNBOUNDED,
                               notes=["W_q(1) is infinite"])
    brn = make_brn(case.b, case.r, case.n)

    def logW(u):
        h = wq.head_u(u)
        return math.log(h) / q if h > 0 else -math.inf

    us = sorted((math.log(float(t)) for t in grid), reverse=True)
    trace = []
    acc, prev = 0.0, 0.0
    for u in us:
        if rho == math.inf:
            pts = np.linspace(u, prev, 9) if u < prev else [u]
            cand = [-x / p + logW(float(x)) for x in pts]
            acc = max([acc] + [safe_exp(c) for c in cand])
            norm = acc
        else:
            def g(x):
                lw = logW(x)
                return 0.0 if lw == -math.inf else safe_exp(rho * (lw - x / p))
            acc += integrate_finite(g, u, prev)
            norm = acc ** (1 / rho)
        prev = u
        trace.append((math.exp(u), (W1 + norm) / brn.at_log(u)))
    trace.sort()
    vals = [v for _, v in trace]
    i = int(np.argmax(vals))
    return ConditionReport("cgo2", vals[i], trace[i][0], trace, growth_verdict(trace),
                           params={"p": p, "q": q, "rho": rho, "W_q(1)": W1})


# --- sharpness -------------------------------------------------------------------------


@dataclass
class SharpnessReport:
    trace: list
    verdict: str
    kappa_limit: float
    grid_verdict: str
    rho: float
    A: float
    notes: list = field(default_factory=list)

    def value_at(self, t: float) -> float:
        for s, v in self.trace:
            if math.isclose(s, t, rel_tol=1e-9):
                return v
        raise KeyError(t)

    def to_json(self) -> dict:
        return {"trace": [list(x) for x in self.trace], "verdict": self.verdict,
                "kappa_limit": self.kappa_limit, "grid_verdict": self.grid_verdict,
                "rho": self.rho, "A": self.A, "notes": self.notes, "provenance": "quadrature"}


def sharpness_probe(case: EmbeddingCase, ts=SHARPNESS_TS) -> SharpnessReport:
    """Trace of ``((Bbar_q(t^{1/n}))^rho - A^rho)^{1/rho} / bbar_q(t^{1/n})`` as ``t -> 0``.

    ``Bbar = kappa bbar``, ``F_q(x) = (int_x^inf tau^{-1} F^q)^{1/q}``;
    ``A = 0`` when ``rho = inf`` and ``A = Bbar_q(1)`` otherwise.  The limit
    of the trace is ``kappa(0+)``.
    """
    if case.kappa is None:
        raise ValueError("sharpness_probe needs kappa")
    kappa = case.kappa
    if not check_non_increasing(kappa):
        raise ValueError("kappa fails the non-increasing check")
    bbar = make_bbar(case.b, case.r, case.q)
    Bbar = product((kappa, 1.0), (bbar, 1.0), tag="kappa*bbar")
    Bq = tail_integral_br(Bbar, case.q)
    bq = tail_integral_br(bbar, case.q)
    rho = case.rho
    A = 0.0 if rho == math.inf else Bq(1.0)
    trace = []
    for t in sorted(ts, reverse=True):
        u = math.log(t) / case.n
        num, den = Bq.log_eval(u), bq.log_eval(u)
        if rho == math.inf:
            val = safe_exp(num - den)
        else:
            # (e^{rho num} - A^rho)^{1/rho} / e^{den}, computed in logs
            d = rho * (math.log(A) - num) if A > 0 else -math.inf
            val = safe_exp(num - den + math.log1p(-math.exp(d)) / rho) if d < 0 else 0.0
        trace.append((float(t), val))
    limit = kappa_at_zero(kappa)
    vals = [v for _, v in trace]
    growing = all(b >= a for a, b in zip(vals[:-1], vals[1:]))
    grid_verdict = growth_verdict(sorted(trace))
    notes = []
    if math.isinf(limit):
        verdict = UNBOUNDED if growing else hardy.INCONCLUSIVE
        notes.append("kappa(0+) = inf; trace grows toward t = 0 on the grid"
                     if growing else "kappa(0+) = inf but the trace is not monotone")
    else:
        span = vals[-4:]
        stable = max(span) <= 1.05 * min(span)
        verdict = BOUNDED if stable else hardy.INCONCLUSIVE
        notes.append(f"kappa(0+) = {limit:g}")
    return SharpnessReport(trace, verdict, limit, grid_verdict, rho, A, notes)


# --- strictness --------------------------------------------------------------------------


@dataclass
class StrictnessReport:
    branch: str
    trace: list
    verdict: str
    oracle: list = field(default_factory=list)
    extra: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {"branch": self.branch, "trace": [list(x) for x in self.trace],
                "verdict": self.verdict, "oracle": [list(x) for x in self.oracle],
                "extra": _jsonable(self.extra), "notes": self.notes, "provenance": "quadrature"}


def _jsonable(x: Any) -> Any:
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if hasattr(x, "to_json"):
        return x.to_json()
    return x


def equality_bracket(case: EmbeddingCase) -> StrictnessReport:
    """``q = p``: the ratio ``||f||_Z / ||f||_{L_{p,q;btilde}}`` over indicators and hats."""
    bbar = make_bbar(case.b, case.r, case.q)
    bt = make_btilde(case.b, case.r, case.q, case.p, case.n)
    trace = []
    for k in INDICATOR_KS:
        f = RearrangementProfile.indicator(2.0 ** k, 1.0)
        trace.append((2.0 ** k, z_norm(f, case.p, case.q, case.n, bbar) /
                      lk_norm(f, case.p, case.q, bt)))
    hats = []
    for k in HAT_KS:
        f = rearrange(SampledFunction.hat(2.0 ** k, 2.0 ** k, 1.0))
        hats.append([2.0 ** k, z_norm(f, case.p, case.q, case.n, bbar) /
                     lk_norm(f, case.p, case.q, bt)])
    vals = [v for _, v in trace]
    bracket = max(vals) / min(vals)
    diffs = np.diff(vals)
    monotone = bool(np.all(diffs > 0) or np.all(diffs < 0))
    verdict = "equal" if bracket <= 50 and not monotone else "inconclusive"
    return StrictnessReport("q=p", trace, verdict,
                            extra={"bracket": bracket, "monotone": monotone, "hats": hats})


def strict_witness_trace(case: EmbeddingCase, ks=STRICTNESS_KS) -> StrictnessReport:
    """``q < p``: ``(||f_z||_Z / ||f_z||_{L_{p,q;btilde}})^p`` for ``f_z* = chi_{(0,z)}``.

    This power of the norm ratio is the quotient of the two sides of the
    Hardy-type inequality the embedding would force; its closed-form
    asymptotics are ``((b_r/b)(z^{1/n}))^{(p-q) r/q}`` up to constants.
    """
    p, q, r, n = case.p, case.q, case.r, case.n
    bbar = make_bbar(case.b, r, q)
    bt = make_btilde(case.b, r, q, p, n)
    br = tail_integral_br(case.b, r)
    trace, norm_ratio, oracle = [], [], []
    for k in ks:
        z = 10.0 ** -k
        f = RearrangementProfile.indicator(z, 1.0)
        ratio = z_norm(f, p, q, n, bbar) / lk_norm(f, p, q, bt)
        norm_ratio.append([z, ratio])
        trace.append((z, ratio ** p))
        x = z ** (1 / n)
        oracle.append((z, (br(x) / case.b(x)) ** ((p - q) * r / q)))
    vals = [v for _, v in trace]
    growing = all(b > a for a, b in zip(vals[:-1], vals[1:]))
    verdict = UNBOUNDED if growing and vals[-1] >= 10 * vals[0] else hardy.INCONCLUSIVE
    return StrictnessReport("q<p", trace, verdict, oracle,
                            extra={"norm_ratio": norm_ratio, "growing": growing})


def sawyer_trace(case: EmbeddingCase, zs=SAWYER_ZS) -> StrictnessReport:
    """``q > p``: Sawyer's criterion for the weights the embedding would force.

    ``Q = q/p``, ``v(x) = x^{Q-1} btilde(x)^q`` and the right-hand weight
    ``w(x) = x^{Q-1} bbar^q(x^{1/n})``; the left-hand weight of the
    inequality, ``x^{-1} bbar^q(x^{1/n})``, is what the criterion sees after
    the factor ``x^{-Q}`` is applied.
    """
    p, q, r, n = case.p, case.q, case.r, case.n
    Q = q / p
    bbar = make_bbar(case.b, r, q)
    bt = make_btilde(case.b, r, q, p, n)
    v = Weight.power(Q - 1, bt, q, 1.0, "x^{Q-1} btilde^q")
    w = Weight.power(Q - 1, bbar, q, n, "x^{Q-1} bbar^q(x^{1/n})")
    rep = hardy.sawyer_conditions(v, w, Q, Q, zs)
    trace = [(z, val) for z, val in rep.trace]
    notes = []
    if all(math.isinf(val) for _, val in trace):
        notes.append("the inner integral of (x/V)^{Q'} v diverges at 0: B is infinite for every z")
    return StrictnessReport("q>p", trace, rep.verdict, extra={"sawyer": rep}, notes=notes)


def strictness_demo(case: EmbeddingCase) -> StrictnessReport:
    rep = analyze(case)
    if not rep.hypothesis_holds or case.q < case.r:
        raise ValueError("strictness demo needs the embedding to hold")
    if case.q == case.p:
        return equality_bracket(case)
    if case.q < case.p:
        return strict_witness_trace(case)
    return sawyer_trace(case)


# --- consistency of btilde ------------------------------------------------------------------


def btilde_consistency(case: EmbeddingCase, grid=None) -> dict:
    """``btilde`` against ``dtilde`` built from ``d(t^{1/p}) = bbar(t^{1/n})``.

    ``dtilde(t) = (d o rho)(t) (int_t^inf y^{-1} (d o rho)^q / (d o rho)^q(t))^{1/max(p,q)}``
    is :func:`make_d_max` with ``a = 1`` applied to ``d o rho``.
    """
    grid = hardy.log_grid(1e-12, 1e12, 49) if grid is None else grid
    bbar = make_bbar(case.b, case.r, case.q)
    d_rho = compose_root(bbar, case.n)
    if not isinstance(d_rho, DerivedSV):
        d_rho = DerivedSV(d_rho.log_eval, "d o rho")
    dt = make_d_max(d_rho, None, case.q, case.p)
    bt = make_btilde(case.b, case.r, case.q, case.p, case.n)
    ratios = [[float(t), dt(float(t)) / bt(float(t))] for t in grid]
    vals = [v for _, v in ratios]
    return {"ratios": ratios, "bracket": max(vals) / min(vals), "provenance": "quadrature"}


# --- d-function embeddings -------------------------------------------------------------------


@dataclass(frozen=True)
class DFunctionWeights:
    kernel: KernelSpec
    w: Weight
    v_max: Weight
    v_min: Weight
    d_max: SV
    d_min: SV
    a: SV


def d_function_weights(theta: float, r: float, q: float, a: SV | None, b: SV) -> DFunctionWeights:
    """Weights ``v(x) = x^{(1-theta) r - 1} d^r(x)``, ``w(x) = x^{-1} (b/a)^r(x)`` and the
    kernel ``psi(y) = y^{(1-theta) q - 1} a^q(y)``, for ``d = d_max`` and ``d = d_min``."""
    if not 0 <= theta < 1:
        raise ValueError("theta must lie in [0,1)")
    a = SVExpr.constant() if a is None else a
    ratio = DerivedSV(lambda u: b.log_eval(u) - a.log_eval(u), "b/a")
    if not math.isfinite(power_table(ratio, r).tail_end.value):
        raise ValueError("int^inf y^{-1} (b/a)^r diverges")
    kernel = KernelSpec(Weight.power((1 - theta) * q - 1, a, q, 1.0, "psi"))
    w = Weight.power(-1.0, ratio, r, 1.0, "x^-1 (b/a)^r")
    d_max, d_min = make_d_max(b, a, r, q), make_d_min(b, a, r, q)
    v_max = Weight.power((1 - theta) * r - 1, d_max, r, 1.0, "v(d_max)")
    v_min = Weight.power((1 - theta) * r - 1, d_min, r, 1.0, "v(d_min)")
    return DFunctionWeights(kernel, w, v_max, v_min, d_max, d_min, a)


def theorem48_410_check(theta: float, r: float, q: float, a: SV | None, b: SV,
                        grid=None) -> dict:
    """Criteria behind the two d-function embeddings.

    The first embedding uses ``d = d_max`` with Lai's forward criterion
    (``q <= r``) or the Evans-Opic weight construction (``r < q``); the second
    uses ``d = d_min`` with Lai's reverse criterion (``r <= q``) or Hardy's
    inequality (``q < r``).  All use ``P = Q = r/q``.
    """
    wts = d_function_weights(theta, r, q, a, b)
    P = r / q
    out = {}
    if q <= r:
        rep = hardy.lai_forward_condition(wts.kernel, wts.v_max, wts.w, P, P, grid)
        rep.params["branch"] = "lai_forward"
    else:
        rep = _eo_comparison(wts.w, wts.kernel.psi, wts.v_max, P, grid)
    out["first"] = rep
    if r <= q:
        rep = hardy.lai_reverse_condition(wts.kernel, wts.v_min, wts.w, P, P, grid)
        rep.params["branch"] = "lai_reverse"
    else:
        # Hardy with v = t^{r/q-1} (d_min/a)^r and w = t^{-1} (b/a)^r
        d_min, a_ = wts.d_min, wts.a
        da = DerivedSV(lambda u: d_min.log_eval(u) - a_.log_eval(u), "d_min/a")
        vh = Weight.power(P - 1, da, r, 1.0, "t^{r/q-1} (d/a)^r")
        rep = hardy.ok_hardy_condition(vh, wts.w, P, P, grid)
        rep.params["branch"] = "hardy"
    out["second"] = rep
    return out


def _eo_comparison(w: Weight, psi: Weight, v: Weight, P: float, grid=None) -> ConditionReport:
    """Ratio of the constructed weight to ``v``; finite both ways means ``v`` is admissible."""
    v_eo = hardy.eo_weight_construct(w, psi, P)
    grid = hardy.log_grid() if grid is None else np.asarray(grid, float)
    trace = []
    for z in grid:
        u = math.log(float(z))
        trace.append((float(z), safe_exp(v_eo.log_fn(u) - v.log_fn(u))))
    vals = [x for _, x in trace]
    hi, lo = max(vals), min(vals)
    verdict = hardy.FINITE if math.isfinite(hi) and lo > 0 else hardy.UNBOUNDED
    i = int(np.argmax(vals))
    return ConditionReport("eo_construction", hi, trace[i][0], trace, verdict,
                           params={"branch": "eo", "s": P, "min": lo})
