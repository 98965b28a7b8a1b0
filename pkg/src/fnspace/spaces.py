"""Lorentz-Karamata, Z-space and Besov(0,b) norms of profiles and sampled functions."""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np

from .quad import integrate_line, safe_exp, semi_infinite_left
from .rearrange import RearrangementProfile, SampledFunction, rearrange
from .svfunc import SV, DIVERGENT_V, SVExpr, classify_integrability, power_table

GLOBAL = "global"
LOCAL = "local"

MODULUS_NODES = 64
MODULUS_REL = 1e-4
MODULUS_CAP = 4096
BESOV_NODES_PER_UNIT = 12  # log-grid density in u = log t
BESOV_DELTA = 1e-10


def _upper(interval: str) -> float:
    if interval == GLOBAL:
        return math.inf
    if interval == LOCAL:
        return 1.0
    raise ValueError(f"interval must be 'global' or 'local', got {interval!r}")


def _profile_log_breaks(fstar: RearrangementProfile) -> list[float]:
    return [math.log(float(t)) for t in fstar.breakpoints[1:]]


def lk_norm(fstar: RearrangementProfile, p: float, q: float, b: SV,
            interval: str = GLOBAL) -> float:
    """``||t^{1/p-1/q} b(t) f*(t)||_{q;(0,T)}`` with ``T = inf`` or ``1``."""
    T = _upper(interval)
    if not fstar.segments:
        return 0.0
    top = min(float(fstar.measure), T)
    ut = math.log(top)
    if q == math.inf:
        # sup over the log grid plus breakpoints (t^{1/p} b(t) f*(t))
        us = sorted(set(np.linspace(-60.0, ut, 4000).tolist())
                    | {u for u in _profile_log_breaks(fstar) if u <= ut})
        best = 0.0
        for u in us:
            for uu in (u, np.nextafter(u, -math.inf)):
                val = float(fstar(math.exp(uu)))
                if val > 0:
                    best = max(best, safe_exp(uu / p + b.log_eval(uu) + math.log(val)))
        return best
    e = 1.0 / p - 1.0 / q

    def g(u):
        val = float(fstar(math.exp(u)))
        if val <= 0:
            return 0.0
        return safe_exp(q * (e * u + b.log_eval(u) + math.log(val)) + u)

    total = integrate_line(g, -math.inf, ut, _profile_log_breaks(fstar))
    return total ** (1.0 / q) if math.isfinite(total) else math.inf


def z_norm(fstar: RearrangementProfile, p: float, q: float, n: float, b: SV,
           interval: str = GLOBAL) -> float:
    """``||t^{-1/q} b(t^{1/n}) ||f*||_{p;(0,t)}||_{q;(0,T)}``.

    The inner norm is exact; past the support it is the constant ``||f||_p``
    and the outer integral there is a tabulated tail of ``t^{-1} b(t^{1/n})^q``.
    """
    T = _upper(interval)
    if not fstar.segments:
        return 0.0
    meas = float(fstar.measure)
    if q == math.inf:
        us = np.linspace(-60.0, math.log(T) if T < math.inf else 60.0, 6000)
        best = 0.0
        for u in us:
            inner = fstar.lp_norm(p, math.exp(u))
            if inner > 0:
                best = max(best, safe_exp(b.log_eval(u / n) + math.log(inner)))
        return best
    top = min(meas, T)
    ut = math.log(top)

    def g(u):
        inner = fstar.power_integral(p, math.exp(u))
        if inner <= 0:
            return 0.0
        return safe_exp(q * (b.log_eval(u / n) + math.log(inner) / p))

    head = integrate_line(g, -math.inf, ut, _profile_log_breaks(fstar))
    full = fstar.lp_norm(p) ** q
    tab = power_table(b, q, n)
    if T == math.inf:
        tail = tab.tail(ut)
    elif meas < T:
        tail = tab.between(ut, math.log(T))
    else:
        tail = 0.0
    total = head + full * tail
    return total ** (1.0 / q) if math.isfinite(total) else math.inf


# --- modulus of smoothness --------------------------------------------------------


def diff_norm(f: SampledFunction, h: float, p: float) -> float:
    """``||f(. + h) - f||_p`` computed exactly for piecewise-linear ``f``."""
    if h == 0 or not f.segments:
        return 0.0
    return (f.shift(-h) - f).lp_norm(p)


def _breakpoint_gaps(f: SampledFunction) -> list[float]:
    bp = [float(x) for x in f.breakpoints]
    return sorted({abs(a - b) for a in bp for b in bp if a != b})


def _refine_sup(f: SampledFunction, hs: list[float], p: float, cap: int = MODULUS_CAP) -> dict:
    """Evaluate ``||Delta_h f||_p`` on ``hs`` and bisect around local maxima."""
    vals = {h: diff_norm(f, h, p) for h in hs}
    prev_best = max(vals.values(), default=0.0)
    while len(vals) < cap:
        xs = sorted(vals)
        new = []
        for i in range(1, len(xs) - 1):
            if vals[xs[i]] >= vals[xs[i - 1]] and vals[xs[i]] >= vals[xs[i + 1]]:
                new += [(xs[i - 1] + xs[i]) / 2, (xs[i] + xs[i + 1]) / 2]
        new = [h for h in new if h not in vals][: cap - len(vals)]
        if not new:
            break
        for h in new:
            vals[h] = diff_norm(f, h, p)
        best = max(vals.values())
        if best <= prev_best * (1 + MODULUS_REL):
            break
        prev_best = best
    return vals


def modulus(f: SampledFunction, t: float, p: float) -> float:
    """``omega_1(f, t)_p = sup_{|h| <= t} ||Delta_h f||_p`` (``h >= 0`` suffices on the line)."""
    if t < 0:
        raise ValueError("t must be non-negative")
    if t == 0 or not f.segments:
        return 0.0
    hs = [t * k / MODULUS_NODES for k in range(1, MODULUS_NODES + 1)]
    hs += [g for g in _breakpoint_gaps(f) if g <= t]
    vals = _refine_sup(f, sorted(set(hs)), p)
    return max(vals.values())


def modulus_curve(f: SampledFunction, ts: Sequence[float], p: float) -> np.ndarray:
    """``omega_1(f, t)_p`` on an increasing grid via a running max over shared shifts."""
    ts = np.asarray(ts, dtype=float)
    if not f.segments:
        return np.zeros_like(ts)
    hs = set(ts.tolist()) | {g for g in _breakpoint_gaps(f) if g <= ts[-1]}
    if len(ts) < MODULUS_NODES:
        hs |= {ts[-1] * k / MODULUS_NODES for k in range(1, MODULUS_NODES + 1)}
    vals = _refine_sup(f, sorted(h for h in hs if h > 0), p)
    xs = sorted(vals)
    run = np.maximum.accumulate(np.array([vals[h] for h in xs]))
    idx = np.searchsorted(np.array(xs), ts, side="right") - 1
    return np.where(idx >= 0, run[np.clip(idx, 0, None)], 0.0)


# --- Besov -------------------------------------------------------------------------


@dataclass
class BesovResult:
    value: float
    lp_part: float
    seminorm: float
    notes: list = field(default_factory=list)
    small_t: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"value": self.value, "lp": self.lp_part, "seminorm": self.seminorm,
                "notes": self.notes, "small_t": self.small_t}


def besov_hypotheses(b: SV, r: float) -> list[str]:
    notes = []
    if isinstance(b, SVExpr):
        v = classify_integrability(b, r)
        if v.at_infinity == DIVERGENT_V:
            notes.append("trivial: int_1^inf t^{-1} b^r diverges, only f = 0 has finite norm")
        if v.at_zero != DIVERGENT_V:
            notes.append("Lp-equivalent: int_0^1 t^{-1} b^r converges, the norm is equivalent to ||f||_p")
    return notes


def _simpson(y: np.ndarray, dx: float) -> float:
    n = len(y)
    if n < 3:
        return float(np.sum(y) * dx)
    if n % 2 == 0:
        # Simpson on the first n-1 points and a trapezoid on the last interval
        return _simpson(y[:-1], dx) + 0.5 * dx * float(y[-2] + y[-1])
    return float(dx / 3 * (y[0] + y[-1] + 4 * y[1:-1:2].sum() + 2 * y[2:-1:2].sum()))


def besov_norm(f: SampledFunction, p: float, r: float, b: SV, variant: str = GLOBAL,
               details: bool = False):
    """``||f||_p + ||t^{-1/r} b(t) omega_1(f,t)_p||_{r;(0,T)}``, ``T = inf`` or ``1``.

    The seminorm integral runs over a log grid between ``delta`` and the support
    width ``W``.  Past ``W`` the modulus is constant, giving an exact tail in
    terms of ``b_r(W)``.  Below ``delta`` the modulus behaves like ``C t^gamma``
    with ``gamma`` fitted from two small shifts; that piece is integrated
    against ``b`` analytically in ``u``.
    """
    if p < 1 or r < 1:
        raise ValueError("need p >= 1 and r >= 1")
    T = _upper(variant)
    notes = besov_hypotheses(b, r)
    lp = f.lp_norm(p)
    if not f.segments or lp == 0:
        res = BesovResult(0.0, 0.0, 0.0, notes)
        return res if details else 0.0
    lo, hi = (float(x) for x in f.support)
    W = hi - lo
    gaps = _breakpoint_gaps(f)
    delta = min(BESOV_DELTA * W, 1e-6 * gaps[0]) if gaps else BESOV_DELTA * W
    top = min(W, T)
    u0, u1 = math.log(delta), math.log(top)
    npts = max(int((u1 - u0) * BESOV_NODES_PER_UNIT) | 1, 33)
    us = np.linspace(u0, u1, npts)
    om = modulus_curve(f, np.exp(us), p)
    logb = np.array([b.log_eval(u) for u in us])
    with np.errstate(divide="ignore"):
        y = np.exp(r * (logb + np.log(om)))
    y[om == 0] = 0.0
    body = _simpson(y, us[1] - us[0])

    # small-t piece: omega(t) ~ C t^gamma below delta
    w1, w2 = modulus(f, delta, p), modulus(f, delta * 10, p)
    gamma = math.log(w2 / w1) / math.log(10.0) if w1 > 0 and w2 > 0 else 1.0
    C = w1 / delta ** gamma if w1 > 0 else 0.0
    small = 0.0
    if C > 0:
        small = semi_infinite_left(lambda u: safe_exp(r * (gamma * u + b.log_eval(u))) * C ** r,
                                   u0).value

    tail = 0.0
    if T > W:
        tab = power_table(b, r)
        wmax = float(om[-1])
        tail = wmax ** r * (tab.tail(u1) if T == math.inf else tab.between(u1, math.log(T)))
    total = body + small + tail
    semi = total ** (1.0 / r) if math.isfinite(total) else math.inf
    value = lp + semi
    if details:
        return BesovResult(value, lp, semi, notes,
                           {"delta": delta, "gamma": gamma, "C": C, "piece": small})
    return value


# --- dispatcher ---------------------------------------------------------------------

KINDS = ("LK", "LK-local", "Z", "Z-local", "Besov", "Besov-local")


@dataclass
class NormSpec:
    kind: str
    p: float
    q: float
    b: SV
    n: float = 1
    interval: str = GLOBAL

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}, got {self.kind!r}")
        if self.kind.endswith("-local"):
            self.interval = LOCAL
        base = self.kind.split("-")[0]
        if base == "Besov" and not 1 <= self.p < math.inf:
            raise ValueError("Besov norms need 1 <= p < inf")
        if base == "Z" and not (1 < self.p < math.inf and 1 <= self.q <= math.inf):
            raise ValueError("Z norms need 1 < p < inf and 1 <= q <= inf")
        if base == "LK" and not (self.p > 0 and self.q > 0):
            raise ValueError("LK norms need p, q > 0")

    @property
    def base(self) -> str:
        return self.kind.split("-")[0]

    def evaluate(self, f: SampledFunction | RearrangementProfile) -> float:
        if self.base == "Besov":
            if not isinstance(f, SampledFunction):
                raise TypeError("Besov norms need a sampled function")
            return besov_norm(f, self.p, self.q, self.b, self.interval)
        fstar = rearrange(f) if isinstance(f, SampledFunction) else f
        if self.base == "LK":
            return lk_norm(fstar, self.p, self.q, self.b, self.interval)
        return z_norm(fstar, self.p, self.q, self.n, self.b, self.interval)

    @classmethod
    def from_json(cls, d: dict) -> "NormSpec":
        allowed = {"kind", "p", "q", "r", "n", "interval", "b"}
        extra = set(d) - allowed
        if extra:
            raise ValueError(f"unknown NormSpec fields: {sorted(extra)}")
        q = d.get("q", d.get("r"))
        if q is None:
            raise ValueError("NormSpec needs q (or r)")
        b = SVExpr.from_json(d["b"]) if "b" in d else SVExpr.constant()
        return cls(d["kind"], float(d["p"]), float(q), b, float(d.get("n", 1)),
                   d.get("interval", GLOBAL))
