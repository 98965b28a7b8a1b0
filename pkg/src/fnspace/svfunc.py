"""Slowly varying functions: symbolic log/exp-log expressions and derived weights.

Every object here exposes ``log_eval(u)``, the natural logarithm of the
function at ``t = e^u``.  Working with logarithms keeps evaluations finite far
beyond the double range of ``t`` and turns every weighted integral
``int tau^{-1} b(tau)^r d tau`` into a plain integral in ``u``.
"""

from __future__ import annotations

import json
import math
from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Union

import numpy as np

from .quad import (CONVERGED, DIVERGENT, LogIntegral, safe_exp, semi_infinite,
                   semi_infinite_left)

CONVERGENT = "convergent"
DIVERGENT_V = "divergent"
UNKNOWN = "unknown-numeric"

DEFAULT_EPSILONS = (0.25, 0.5, 1.0)
SV_TOLERANCE = 1.05


class DomainError(ValueError):
    """Raised for arguments outside the domain of a function (e.g. ``t <= 0``)."""


class InfiniteIntegralError(ValueError):
    """Raised when a transform needs a weighted integral that diverges."""


@dataclass(frozen=True)
class LogFactor:
    level: int
    alpha: float

    def __post_init__(self):
        if int(self.level) != self.level or self.level < 1:
            raise ValueError(f"log level must be a positive integer, got {self.level}")


@dataclass(frozen=True)
class ExpLogFactor:
    c: float
    a: float

    def __post_init__(self):
        if not 0.0 < self.a < 1.0:
            raise ValueError(f"exp-log exponent a must lie in (0,1), got {self.a}")


Factor = Union[LogFactor, ExpLogFactor]


def log_ell(level: int, x: float) -> float:
    """``log l_level`` at ``x = |log t|``; ``l_1 = 1 + x`` and ``l_i = 1 + log l_{i-1}``."""
    val = math.log1p(x)
    for _ in range(level - 1):
        val = math.log1p(val)
    return val


def _piece_log(piece: Sequence[Factor], x: float) -> float:
    total = 0.0
    for f in piece:
        if isinstance(f, LogFactor):
            if f.alpha:
                total += f.alpha * log_ell(f.level, x)
        else:
            total += f.c * x ** f.a
    return total


def _factor_to_json(f: Factor) -> dict:
    if isinstance(f, LogFactor):
        return {"log_level": f.level, "alpha": f.alpha}
    return {"explog": {"c": f.c, "a": f.a}}


def _factor_from_json(d: dict) -> Factor:
    if not isinstance(d, dict):
        raise ValueError(f"factor must be an object, got {d!r}")
    if set(d) == {"log_level", "alpha"}:
        return LogFactor(int(d["log_level"]), float(d["alpha"]))
    if set(d) == {"explog"} and isinstance(d["explog"], dict) and set(d["explog"]) == {"c", "a"}:
        return ExpLogFactor(float(d["explog"]["c"]), float(d["explog"]["a"]))
    raise ValueError(f"unrecognised factor {d!r}")


@dataclass(frozen=True)
class SVExpr:
    """Product of iterated-log powers and exp-log factors, broken at ``t = 1``.

    ``left`` governs ``(0, 1]`` and ``right`` governs ``[1, inf)``; both are
    functions of ``|log t|``, so they agree at ``t = 1`` automatically.
    """

    left: tuple = ()
    right: tuple = ()
    scale: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "left", tuple(self.left))
        object.__setattr__(self, "right", tuple(self.right))
        if not (self.scale > 0 and math.isfinite(self.scale)):
            raise ValueError("scale must be positive and finite")
        for f in self.left + self.right:
            if not isinstance(f, (LogFactor, ExpLogFactor)):
                raise TypeError(f"bad factor {f!r}")
        # both pieces reduce to log(scale) at t = 1
        assert _piece_log(self.left, 0.0) == 0.0 and _piece_log(self.right, 0.0) == 0.0

    @classmethod
    def log_power(cls, alpha_left: float, alpha_right: float | None = None,
                  level: int = 1, scale: float = 1.0) -> "SVExpr":
        if alpha_right is None:
            alpha_right = alpha_left
        return cls((LogFactor(level, alpha_left),), (LogFactor(level, alpha_right),), scale)

    @classmethod
    def standard(cls) -> "SVExpr":
        """``l^{-1}`` on ``(0,1]`` and ``l^{-2}`` on ``[1,inf)``."""
        return cls.log_power(-1.0, -2.0)

    @classmethod
    def constant(cls, c: float = 1.0) -> "SVExpr":
        return cls((), (), c)

    @classmethod
    def explog(cls, c: float, a: float) -> "SVExpr":
        f = ExpLogFactor(c, a)
        return cls((f,), (f,))

    def log_eval(self, u: float) -> float:
        piece = self.left if u <= 0 else self.right
        return math.log(self.scale) + _piece_log(piece, abs(u))

    def at_log(self, u: float) -> float:
        return safe_exp(self.log_eval(u))

    def __call__(self, t: float) -> float:
        return eval_sv(self, t)

    def piece(self, end: str) -> tuple:
        return self.left if end == "zero" else self.right

    def to_json(self) -> dict:
        return {"left": [_factor_to_json(f) for f in self.left],
                "right": [_factor_to_json(f) for f in self.right],
                "scale": self.scale}

    @classmethod
    def from_json(cls, d: dict | str) -> "SVExpr":
        if isinstance(d, str):
            d = json.loads(d)
        extra = set(d) - {"left", "right", "scale"}
        if extra:
            raise ValueError(f"unknown SVExpr fields: {sorted(extra)}")
        return cls(tuple(_factor_from_json(f) for f in d.get("left", [])),
                   tuple(_factor_from_json(f) for f in d.get("right", [])),
                   float(d.get("scale", 1.0)))


@dataclass(frozen=True, eq=False)
class DerivedSV:
    """A positive function given by its log-evaluator plus provenance metadata."""

    log_fn: Callable[[float], float]
    tag: str
    params: dict = field(default_factory=dict)
    note: str = ""
    infinite: bool = False

    def log_eval(self, u: float) -> float:
        if self.infinite:
            return math.inf
        return self.log_fn(u)

    def at_log(self, u: float) -> float:
        return safe_exp(self.log_eval(u))

    def __call__(self, t: float) -> float:
        return eval_sv(self, t)

    @classmethod
    def wrap(cls, fn: Callable[[float], float], tag: str = "wrapped", **params) -> "DerivedSV":
        """Wrap a plain evaluator ``t -> value``."""
        return cls(lambda u: math.log(fn(math.exp(u))), tag, params)

    @classmethod
    def infinite_value(cls, tag: str, **params) -> "DerivedSV":
        return cls(lambda u: math.inf, tag, params, "infinite for all t", True)


SV = Union[SVExpr, DerivedSV]


def eval_sv(b: SV, t: float) -> float:
    if not t > 0:
        raise DomainError(f"t must be positive, got {t}")
    return safe_exp(b.log_eval(math.log(t)))


# alias matching the operation name
eval = eval_sv  # noqa: A001


def product(*terms: tuple[SV, float], tag: str = "product") -> DerivedSV:
    """``prod b_i^{e_i}`` as a DerivedSV; terms are ``(function, exponent)`` pairs."""
    def log_fn(u):
        return sum(e * f.log_eval(u) for f, e in terms if e)
    return DerivedSV(log_fn, tag, {"terms": [(getattr(f, "tag", "sv"), e) for f, e in terms]})


def compose_root(b: SV, n: float) -> SV:
    """``t -> b(t^{1/n})``."""
    if n == 1:
        return b
    return DerivedSV(lambda u: b.log_eval(u / n), "root", {"n": n})


# --- weighted log integrals ----------------------------------------------------


@lru_cache(maxsize=256)
def power_table(b: SV, power: float, n: float = 1.0) -> LogIntegral:
    """Running integrals of ``u -> b(e^{u/n})^power``, i.e. of ``tau^{-1} b(tau^{1/n})^power``."""
    def g(u):
        return safe_exp(power * b.log_eval(u / n))
    return LogIntegral(g)


# --- slowly varying check --------------------------------------------------------


@dataclass
class SVCheckReport:
    passed: bool
    epsilons: list
    constants: list  # per epsilon: (up_full, up_half, down_full, down_half)
    tolerance: float

    def to_json(self) -> dict:
        return {"passed": self.passed, "epsilons": self.epsilons,
                "constants": self.constants, "tolerance": self.tolerance}


def default_grid(lo: float = 1e-12, hi: float = 1e12, points: int = 200) -> np.ndarray:
    return np.logspace(math.log10(lo), math.log10(hi), points)


def _monotone_constant(vals: np.ndarray, increasing: bool) -> float:
    """Smallest C with ``v_i <= C v_j`` for all ``i < j`` (non-decreasing case), in log form."""
    if increasing:
        running = np.maximum.accumulate(vals)
        return float(np.max(running - vals))
    running = np.minimum.accumulate(vals)
    return float(np.max(vals - running))


def check_slowly_varying(b: SV, epsilons: Iterable[float] = DEFAULT_EPSILONS,
                         grid: Sequence[float] | None = None,
                         tolerance: float = SV_TOLERANCE) -> SVCheckReport:
    """Numeric slow-variation test.

    For every ``eps`` the functions ``t^eps b`` and ``t^-eps b`` should be
    equivalent to monotone ones.  On a finite grid every positive function is
    monotone up to *some* constant, so the test asks that the constant has
    saturated: the constant over the whole grid may exceed the constant over
    the middle half of the grid (in log scale) by at most ``tolerance``.
    """
    grid = default_grid() if grid is None else np.asarray(grid, dtype=float)
    us = np.log(grid)
    lo, hi = us[0], us[-1]
    mid = (lo + hi) / 2
    inner = (us >= mid - (hi - lo) / 4) & (us <= mid + (hi - lo) / 4)
    logb = np.array([b.log_eval(u) for u in us])
    log_tol = math.log(tolerance)
    consts = []
    ok = bool(np.all(np.isfinite(logb)))
    for eps in epsilons:
        row = []
        for sign in (1.0, -1.0):
            vals = logb + sign * eps * us
            full = _monotone_constant(vals, sign > 0) if ok else math.inf
            half = _monotone_constant(vals[inner], sign > 0) if ok else math.inf
            row += [math.exp(full), math.exp(half)]
            if not full <= max(log_tol, half + log_tol):
                ok = False
        consts.append(row)
    return SVCheckReport(ok, list(epsilons), consts, tolerance)


def check_non_increasing(b: SV, grid: Sequence[float] | None = None,
                         tolerance: float = SV_TOLERANCE) -> bool:
    grid = default_grid() if grid is None else np.asarray(grid, dtype=float)
    vals = np.array([b.log_eval(math.log(t)) for t in grid])
    return _monotone_constant(vals, increasing=False) <= math.log(tolerance)


# --- integrability -----------------------------------------------------------------


@dataclass
class IntegrabilityVerdict:
    at_zero: str
    at_infinity: str
    exponents: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"at_zero": self.at_zero, "at_infinity": self.at_infinity,
                "exponents": self.exponents}


def log_power_vector(piece: Sequence[Factor]) -> list[float]:
    levels: dict[int, float] = {}
    for f in piece:
        if isinstance(f, LogFactor):
            levels[f.level] = levels.get(f.level, 0.0) + f.alpha
    top = max(levels, default=0)
    return [levels.get(i, 0.0) for i in range(1, top + 1)]


def log_power_converges(beta: Sequence[float]) -> bool:
    """Iterated-log integral test for ``int^inf prod l_i(u)^{beta_i} du``.

    The integral converges iff the first entry of ``beta`` (padded with 0)
    that differs from -1 is smaller than -1.
    """
    for x in list(beta) + [0.0]:
        if x != -1.0:
            return x < -1.0
    return False  # unreachable


def _classify_piece(b: SVExpr, end: str, r: float) -> tuple[str, dict]:
    piece = b.piece(end)
    beta = [r * x for x in log_power_vector(piece)]
    info: dict[str, Any] = {"beta": beta}
    if any(isinstance(f, ExpLogFactor) and f.c != 0 for f in piece):
        # numeric classification along the end of the half line
        def g(u):
            return safe_exp(r * b.log_eval(u))
        res = semi_infinite(g, 0.0) if end == "infinity" else semi_infinite_left(g, 0.0)
        info["numeric"] = {"value": res.value, "status": res.status, "windows": res.windows}
        verdict = {CONVERGED: CONVERGENT, DIVERGENT: DIVERGENT_V}.get(res.status, UNKNOWN)
        return verdict, info
    return (CONVERGENT if log_power_converges(beta) else DIVERGENT_V), info


def classify_integrability(b: SVExpr, r: float) -> IntegrabilityVerdict:
    """Convergence of ``int_0^1 t^{-1} b^r`` and ``int_1^inf t^{-1} b^r``."""
    if not isinstance(b, SVExpr):
        raise TypeError("classify_integrability needs a symbolic SVExpr")
    z, zi = _classify_piece(b, "zero", r)
    i, ii = _classify_piece(b, "infinity", r)
    return IntegrabilityVerdict(z, i, {"zero": zi, "infinity": ii})


def _tail_finite(b: SV, r: float, n: float = 1.0) -> bool:
    if isinstance(b, SVExpr):
        return classify_integrability(b, r).at_infinity != DIVERGENT_V
    tab = power_table(b, r, n)
    return math.isfinite(tab.tail_end.value)


def _head_finite(b: SV, r: float, n: float = 1.0) -> bool:
    if isinstance(b, SVExpr):
        return classify_integrability(b, r).at_zero != DIVERGENT_V
    tab = power_table(b, r, n)
    return math.isfinite(tab.head_end.value)


# --- transforms ------------------------------------------------------------------


def tail_integral_br(b: SV, r: float) -> DerivedSV:
    """``b_r(t) = (int_t^inf tau^{-1} b(tau)^r d tau)^{1/r}``."""
    if not _tail_finite(b, r):
        return DerivedSV.infinite_value("b_r", r=r)
    tab = power_table(b, r)

    def log_fn(u):
        return math.log(tab.tail(u)) / r
    return DerivedSV(log_fn, "b_r", {"r": r}, "tail r-mean of t^{-1/r} b")


make_br = tail_integral_br


def head_integral_Bq(b: SV, q: float, t: float) -> float:
    """``B_q(t) = (int_0^t tau^{-1} b(tau)^q d tau)^{1/q}``; ``inf`` when divergent."""
    if not t > 0:
        raise DomainError(f"t must be positive, got {t}")
    if not _head_finite(b, q):
        return math.inf
    return power_table(b, q).head(math.log(t)) ** (1.0 / q)


def make_Bq(b: SV, q: float) -> DerivedSV:
    if not _head_finite(b, q):
        return DerivedSV.infinite_value("B_q", q=q)
    tab = power_table(b, q)
    return DerivedSV(lambda u: math.log(tab.head(u)) / q, "B_q", {"q": q})


def make_brn(b: SV, r: float, n: float) -> DerivedSV:
    """``b_{r,n}(t) = (int_t^inf s^{-1} b(s^{1/n})^r ds)^{1/r}``, integrated directly."""
    if not _tail_finite(b, r):
        return DerivedSV.infinite_value("b_rn", r=r, n=n)
    tab = power_table(b, r, n)
    return DerivedSV(lambda u: math.log(tab.tail(u)) / r, "b_rn", {"r": r, "n": n})


def tail_integral_brn(b: SV, r: float, n: float, t: float) -> float:
    if not t > 0:
        raise DomainError(f"t must be positive, got {t}")
    f = make_brn(b, r, n)
    if f.infinite:
        return math.inf
    return f(t)


def make_bbar(b: SV, r: float, q: float) -> SV:
    """``b_r^{1-r/q} b^{r/q}``; returns ``b`` itself when ``q == r``."""
    if q == r:
        return b
    br = tail_integral_br(b, r)
    if br.infinite:
        raise InfiniteIntegralError("b_r is infinite: tail integral of t^{-1} b^r diverges")
    e = r / q
    return DerivedSV(lambda u: (1 - e) * br.log_eval(u) + e * b.log_eval(u),
                     "bbar", {"r": r, "q": q})


def bbar_q_closed(b: SV, r: float, q: float) -> DerivedSV:
    """``(int_t^inf tau^{-1} bbar^q)^{1/q} = (r/q)^{1/q} b_r(t)``."""
    br = tail_integral_br(b, r)
    if br.infinite:
        raise InfiniteIntegralError("b_r is infinite")
    c = math.log(r / q) / q
    return DerivedSV(lambda u: c + br.log_eval(u), "bbar_q", {"r": r, "q": q}, "closed form")


def make_btilde(b: SV, r: float, q: float, p: float, n: float = 1) -> DerivedSV:
    """``b_r(t^{1/n})^{1-r/q+r/max(p,q)} b(t^{1/n})^{r/q-r/max(p,q)}``."""
    br = tail_integral_br(b, r)
    if br.infinite:
        raise InfiniteIntegralError("b_r is infinite")
    m = max(p, q)
    e1 = 1 - r / q + r / m
    e2 = r / q - r / m

    def log_fn(u):
        v = u / n
        out = e1 * br.log_eval(v)
        if e2:
            out += e2 * b.log_eval(v)
        return out
    return DerivedSV(log_fn, "btilde", {"r": r, "q": q, "p": p, "n": n})


def _make_d(b: SV, a: SV | None, r: float, q: float, m: float, tag: str) -> DerivedSV:
    if a is None:
        ratio: SV = b
    else:
        ratio = DerivedSV(lambda u: b.log_eval(u) - a.log_eval(u), "b/a")
    if isinstance(b, SVExpr) and a is None:
        finite = _tail_finite(b, r)
    else:
        finite = math.isfinite(power_table(ratio, r).tail_end.value)
    if not finite:
        raise InfiniteIntegralError("int_x^inf y^{-1} (b/a)^r dy diverges")
    tab = power_table(ratio, r)

    def log_fn(u):
        return b.log_eval(u) + (math.log(tab.tail(u)) - r * ratio.log_eval(u)) / m
    return DerivedSV(log_fn, tag, {"r": r, "q": q})


def make_d_max(b: SV, a: SV | None, r: float, q: float) -> DerivedSV:
    """``d(x) = b(x) (int_x^inf y^{-1}(b/a)^r dy / (b/a)^r(x))^{1/max(q,r)}``."""
    return _make_d(b, a, r, q, max(q, r), "d_max")


def make_d_min(b: SV, a: SV | None, r: float, q: float) -> DerivedSV:
    """Same as :func:`make_d_max` with exponent ``1/min(q,r)``."""
    return _make_d(b, a, r, q, min(q, r), "d_min")


@dataclass
class ProbeTrace:
    end: str
    points: list  # (x, ratio)

    def exceeds(self, threshold: float) -> bool:
        return any(v > threshold for _, v in self.points)

    @property
    def strictly_growing(self) -> bool:
        """Growing toward the probed end."""
        vals = [v for _, v in sorted(self.points, reverse=(self.end == "zero"))]
        return all(b > a for a, b in zip(vals[:-1], vals[1:]))

    def to_json(self) -> dict:
        return {"end": self.end, "trace": [list(p) for p in self.points]}


def limsup_probe(b: SV, q: float, end: str, grid: Sequence[float]) -> ProbeTrace:
    """Trace of ``b_q(x)/b(x)`` (end ``zero``) or ``B_q(x)/b(x)`` (end ``infinity``)."""
    if end == "zero":
        f = tail_integral_br(b, q)
        if f.infinite:
            raise InfiniteIntegralError("tail integral diverges")
    elif end == "infinity":
        f = make_Bq(b, q)
        if f.infinite:
            raise InfiniteIntegralError("head integral diverges")
    else:
        raise ValueError(f"end must be 'zero' or 'infinity', got {end!r}")
    pts = [(float(x), safe_exp(f.log_eval(math.log(x)) - b.log_eval(math.log(x)))) for x in grid]
    return ProbeTrace(end, pts)


def tail_to_local_ratio(b: SV, r: float, n: float, t: float) -> float:
    """``int_t^inf tau^{-1} b^r(tau^{1/n}) / int_t^2 tau^{-1} b^r(tau^{1/n})`` for ``t in (0,1)``."""
    if not 0 < t < 1:
        raise DomainError("t must lie in (0,1)")
    tab = power_table(b, r, n)
    u = math.log(t)
    full = tab.tail(u)
    return full / (full - tab.tail(math.log(2.0)))
