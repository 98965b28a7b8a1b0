"""Piecewise-linear functions on the line, their rearrangements and K-functionals.

Arithmetic on breakpoints and values is written so that ``fractions.Fraction``
inputs stay exact all the way through :func:`rearrange`.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from collections.abc import Sequence
from dataclasses import dataclass

from .quad import integrate_line, safe_exp
from .svfunc import SV, DomainError


def linear_power_integral(v0, v1, length, s: float) -> float:
    """``int_0^L |linear from v0 to v1|^s`` for ``v0, v1 >= 0``."""
    if length == 0:
        return 0.0
    if s == 1:
        return length * (v0 + v1) / 2
    if v0 == v1:
        return length * float(v0) ** s
    v0f, v1f = float(v0), float(v1)
    return float(length) * (v0f ** (s + 1) - v1f ** (s + 1)) / ((s + 1) * (v0f - v1f))


def _split_at_zero(x0, x1, v0, v1):
    """Split a linear segment where it changes sign."""
    if (v0 < 0 < v1) or (v1 < 0 < v0):
        xc = x0 + (x1 - x0) * v0 / (v0 - v1)
        return [(x0, xc, v0, v0 * 0), (xc, x1, v1 * 0, v1)]
    return [(x0, x1, v0, v1)]


@dataclass(frozen=True)
class SampledFunction:
    """Compactly supported piecewise-linear function, zero off its segments.

    ``segments`` holds ``(x0, x1, v0, v1)`` tuples with ``x0 < x1``, sorted and
    non-overlapping; the function is linear from ``v0`` to ``v1`` on each.
    """

    segments: tuple

    def __post_init__(self):
        segs = tuple(tuple(s) for s in self.segments if s[1] > s[0])
        for (a0, a1, _, _), (b0, _, _, _) in zip(segs[:-1], segs[1:]):
            if b0 < a1:
                raise ValueError("segments must be sorted and non-overlapping")
        for s in segs:
            if len(s) != 4 or not all(math.isfinite(float(x)) for x in s):
                raise ValueError(f"bad segment {s!r}")
        object.__setattr__(self, "segments", segs)

    @classmethod
    def from_steps(cls, breaks: Sequence, values: Sequence) -> "SampledFunction":
        if len(values) != len(breaks) - 1:
            raise ValueError("need one value per interval")
        return cls(tuple((breaks[i], breaks[i + 1], v, v) for i, v in enumerate(values)))

    @classmethod
    def from_linear(cls, xs: Sequence, ys: Sequence) -> "SampledFunction":
        """Continuous piecewise-linear interpolant of the nodes, zero outside ``[xs[0], xs[-1]]``."""
        if len(xs) != len(ys):
            raise ValueError("xs and ys differ in length")
        return cls(tuple((xs[i], xs[i + 1], ys[i], ys[i + 1]) for i in range(len(xs) - 1)))

    @classmethod
    def indicator(cls, a, b, height=1) -> "SampledFunction":
        return cls(((a, b, height, height),))

    @classmethod
    def hat(cls, center=0, width=1, height=1) -> "SampledFunction":
        """``height * max(0, 1 - |x - center|/width)``."""
        z = height * 0
        return cls(((center - width, center, z, height), (center, center + width, height, z)))

    @classmethod
    def zero(cls) -> "SampledFunction":
        return cls(())

    @property
    def breakpoints(self) -> list:
        pts = set()
        for x0, x1, _, _ in self.segments:
            pts.add(x0)
            pts.add(x1)
        return sorted(pts)

    @property
    def support(self) -> tuple:
        if not self.segments:
            return (0, 0)
        return (self.segments[0][0], self.segments[-1][1])

    def __call__(self, x):
        for x0, x1, v0, v1 in self.segments:
            if x0 <= x < x1:
                return v0 + (v1 - v0) * (x - x0) / (x1 - x0)
        return 0 * x

    def scale(self, c) -> "SampledFunction":
        return SampledFunction(tuple((x0, x1, c * v0, c * v1) for x0, x1, v0, v1 in self.segments))

    def __mul__(self, c):
        return self.scale(c)

    __rmul__ = __mul__

    def shift(self, h) -> "SampledFunction":
        """``x -> f(x - h)``."""
        return SampledFunction(tuple((x0 + h, x1 + h, v0, v1) for x0, x1, v0, v1 in self.segments))

    def dilate(self, lam) -> "SampledFunction":
        """``x -> f(x / lam)``."""
        return SampledFunction(tuple((x0 * lam, x1 * lam, v0, v1) for x0, x1, v0, v1 in self.segments))

    def _value_limits(self, a, b):
        """Values at ``a+`` and ``b-`` inside ``[a, b]`` assumed within one segment or a gap."""
        for x0, x1, v0, v1 in self.segments:
            if x0 <= a and b <= x1:
                d = x1 - x0
                return (v0 + (v1 - v0) * (a - x0) / d, v0 + (v1 - v0) * (b - x0) / d)
        return (0 * a, 0 * a)

    def __add__(self, other: "SampledFunction") -> "SampledFunction":
        pts = sorted(set(self.breakpoints) | set(other.breakpoints))
        segs = []
        for a, b in zip(pts[:-1], pts[1:]):
            f0, f1 = self._value_limits(a, b)
            g0, g1 = other._value_limits(a, b)
            segs.append((a, b, f0 + g0, f1 + g1))
        return SampledFunction(tuple(segs))

    def __sub__(self, other: "SampledFunction") -> "SampledFunction":
        return self + other.scale(-1)

    def abs_segments(self) -> list:
        out = []
        for seg in self.segments:
            for x0, x1, v0, v1 in _split_at_zero(*seg):
                out.append((x0, x1, abs(v0), abs(v1)))
        return out

    def measure_gt(self, lam) -> float:
        """``|{x : |f(x)| > lam}|``."""
        return sum((_seg_measure_gt(s, lam) for s in self.abs_segments()), 0 * lam)

    def lp_norm(self, p: float) -> float:
        segs = self.abs_segments()
        if p == math.inf:
            return float(max((max(v0, v1) for _, _, v0, v1 in segs), default=0.0))
        total = sum(linear_power_integral(v0, v1, x1 - x0, p) for x0, x1, v0, v1 in segs)
        return float(total) ** (1.0 / p)


def _seg_measure_gt(seg, lam):
    x0, x1, v0, v1 = seg
    lo, hi = min(v0, v1), max(v0, v1)
    if lam < lo:
        return x1 - x0
    if lam >= hi:
        return 0 * (x1 - x0)
    return (x1 - x0) * (hi - lam) / (hi - lo)


@dataclass(frozen=True)
class RearrangementProfile:
    """Non-increasing right-continuous function on ``(0, inf)``.

    ``segments`` are contiguous ``(t0, t1, v0, v1)`` pieces starting at
    ``t = 0``; the profile vanishes after the last piece.
    """

    segments: tuple

    def __post_init__(self):
        segs = tuple(tuple(s) for s in self.segments if s[1] > s[0])
        prev_t, prev_v = 0, math.inf
        for t0, t1, v0, v1 in segs:
            if t0 != prev_t:
                raise ValueError("profile segments must be contiguous from 0")
            if not (prev_v >= v0 >= v1 >= 0):
                raise ValueError("profile must be non-increasing and non-negative")
            prev_t, prev_v = t1, v1
        object.__setattr__(self, "segments", segs)

    @classmethod
    def indicator(cls, a, height=1) -> "RearrangementProfile":
        return cls(((0, a, height, height),))

    @classmethod
    def from_steps(cls, breaks: Sequence, values: Sequence) -> "RearrangementProfile":
        """Step profile with ``values[i]`` on ``[breaks[i], breaks[i+1])``, ``breaks[0] = 0``."""
        return cls(tuple((breaks[i], breaks[i + 1], v, v) for i, v in enumerate(values)))

    @property
    def measure(self):
        """Measure of the support."""
        return self.segments[-1][1] if self.segments else 0

    @property
    def breakpoints(self) -> list:
        return [0] + [s[1] for s in self.segments]

    def __call__(self, t):
        if t < 0:
            raise DomainError("t must be non-negative")
        i = bisect_right([s[0] for s in self.segments], t) - 1
        if i < 0 or t >= self.segments[i][1]:
            return 0 * t
        t0, t1, v0, v1 = self.segments[i]
        return v0 + (v1 - v0) * (t - t0) / (t1 - t0)

    def measure_gt(self, lam):
        return sum((_seg_measure_gt(s, lam) for s in self.segments), 0 * lam)

    def scale(self, c) -> "RearrangementProfile":
        return RearrangementProfile(tuple((a, b, c * v0, c * v1) for a, b, v0, v1 in self.segments))

    def dilate(self, lam) -> "RearrangementProfile":
        """``t -> f*(t / lam)``."""
        return RearrangementProfile(tuple((a * lam, b * lam, v0, v1) for a, b, v0, v1 in self.segments))

    def power_integral(self, s: float, upto: float = math.inf) -> float:
        """``int_0^upto f*(t)^s dt`` exactly (``s = inf`` gives the sup)."""
        total = 0.0
        for t0, t1, v0, v1 in self.segments:
            if t0 >= upto:
                break
            if t1 > upto:
                v1 = v0 + (v1 - v0) * (upto - t0) / (t1 - t0)
                t1 = upto
            total += linear_power_integral(v0, v1, t1 - t0, s)
        return total

    def integral(self, upto: float = math.inf) -> float:
        return self.power_integral(1.0, upto)

    def lp_norm(self, p: float, upto: float = math.inf) -> float:
        """``||f*||_{p;(0,upto)}``."""
        if p == math.inf:
            return float(self.segments[0][2]) if self.segments and upto > 0 else 0.0
        return self.power_integral(p, upto) ** (1.0 / p)

    def to_json(self) -> list:
        return [{"t0": float(a), "t1": float(b), "v0": float(v0), "v1": float(v1)}
                for a, b, v0, v1 in self.segments]

    @classmethod
    def from_json(cls, rows: list) -> "RearrangementProfile":
        out = []
        for r in rows:
            if set(r) != {"t0", "t1", "v0", "v1"}:
                raise ValueError(f"bad profile segment {r!r}")
            out.append((float(r["t0"]), float(r["t1"]), float(r["v0"]), float(r["v1"])))
        return cls(tuple(out))


def rearrange(f: SampledFunction) -> RearrangementProfile:
    """Non-increasing rearrangement by inverting the distribution function of ``|f|``.

    The distribution function of a piecewise-linear ``|f|`` is piecewise linear
    in the level between consecutive segment-end values, so the inversion is
    exact.  Constant pieces produce plateaus; equal values merge.
    """
    segs = f.abs_segments()
    if not segs:
        return RearrangementProfile(())
    zero = segs[0][2] * 0
    levels = sorted({v for s in segs for v in (s[2], s[3])} | {zero}, reverse=True)
    out = []

    for k, c in enumerate(levels):
        mu = sum((_seg_measure_gt(s, c) for s in segs), zero)
        plateau = sum((s[1] - s[0] for s in segs if s[2] == c and s[3] == c), zero)
        if c > 0 and plateau > 0:
            out.append((mu, mu + plateau, c, c))
        if k + 1 < len(levels):
            nxt = levels[k + 1]
            mu_next = sum((_seg_measure_gt(s, nxt) for s in segs), zero)
            start = mu + plateau
            if mu_next > start:
                out.append((start, mu_next, c, nxt))
    return RearrangementProfile(tuple(out))


def maximal(fstar: RearrangementProfile, t) -> float:
    """``f**(t) = t^{-1} int_0^t f*``."""
    if not t > 0:
        raise DomainError(f"t must be positive, got {t}")
    return fstar.integral(t) / t


def k_functional(fstar: RearrangementProfile, t, s: float = 1.0) -> float:
    """Holmstedt form ``(int_0^{t^s} f*^s)^{1/s}`` of ``K(f, t; L_s, L_inf)``."""
    if not t > 0:
        raise DomainError(f"t must be positive, got {t}")
    return fstar.power_integral(s, float(t) ** s) ** (1.0 / s)


def _log_breaks(points, power: float = 1.0) -> list:
    return [math.log(float(x)) * power for x in points if x > 0]


def verify_lemma_5_10(fstar: RearrangementProfile, theta: float, q: float, s: float,
                      b: SV, t: float) -> float:
    """Ratio of the K-functional side to the rearrangement side of the Holmstedt equivalence.

    LHS ``||tau^{-theta-1/q} b(tau) K(f,tau;L_s,L_inf)||_{q;(0,t)}`` and RHS
    ``||y^{(1-theta)/s-1/q} b(y^{1/s}) f*(y)||_{q;(0,t^s)}``.
    """
    if not 0 < theta < 1:
        raise DomainError("theta must lie in (0,1)")
    if not t > 0:
        raise DomainError("t must be positive")
    ut = math.log(t)

    def lhs_g(u):
        k = k_functional(fstar, math.exp(u), s)
        if k == 0:
            return 0.0
        return safe_exp(q * (-theta * u + b.log_eval(u) + math.log(k)))

    def rhs_g(v):
        y = math.exp(v)
        val = fstar(y)
        if val == 0:
            return 0.0
        return safe_exp(q * ((1 - theta) * v / s + b.log_eval(v / s) + math.log(float(val))))

    bps = fstar.breakpoints[1:]
    lhs = integrate_line(lhs_g, -math.inf, ut, _log_breaks(bps, 1.0 / s))
    rhs = integrate_line(rhs_g, -math.inf, s * ut, _log_breaks(bps))
    if not (math.isfinite(lhs) and math.isfinite(rhs)) or rhs == 0:
        raise ValueError("both sides must be finite and the right side non-zero")
    return (lhs / rhs) ** (1.0 / q)
