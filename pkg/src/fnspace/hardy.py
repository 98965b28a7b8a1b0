"""Weighted Hardy-type criteria on the half line and witness functions for them.

Weights are stored through ``log w(e^u)``; every integral ``int w(x) dx`` is
computed in ``u = log x`` from cached running-integral tables.
"""

from __future__ import annotations

import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from functools import cached_property, lru_cache

import numpy as np

from .quad import TABLE_SPAN, LogIntegral, integrate_line, safe_exp
from .svfunc import SV

FINITE = "finite"
UNBOUNDED = "unbounded"
INCONCLUSIVE = "inconclusive"

GRID_MIN = 1e-12
GRID_MAX = 1e12
GRID_POINTS = 240

_NEG_INF = -math.inf
_LAG_X, _LAG_W = (a.tolist() for a in np.polynomial.laguerre.laggauss(32))


def _log(x: float) -> float:
    return math.log(x) if x > 0 else _NEG_INF


# --- weights ---------------------------------------------------------------------


def _zero_rest(u: float) -> float:
    return 0.0


@dataclass(frozen=True, eq=False)
class Weight:
    """Positive function on ``(0, inf)``: ``log w(e^u) = gamma u + rest(u)``.

    Keeping the power ``gamma`` apart from the (typically slowly varying)
    remainder avoids cancellation in ``log w + u`` at large ``|u|``.
    """

    rest: Callable[[float], float] = _zero_rest
    gamma: float = 0.0
    tag: str = "weight"

    def log_fn(self, u: float) -> float:
        r = self.rest(u)
        if r == _NEG_INF:
            return _NEG_INF
        return self.gamma * u + r

    log_w = log_fn

    def log_density(self, u: float) -> float:
        r = self.rest(u)
        if r == _NEG_INF:
            return _NEG_INF
        return (self.gamma + 1.0) * u + r

    def __call__(self, x: float) -> float:
        if not x > 0:
            raise ValueError("x must be positive")
        return safe_exp(self.log_fn(math.log(x)))

    def density(self, u: float) -> float:
        """``w(e^u) e^u``, the integrand of ``int w(x) dx`` in ``u``."""
        ld = self.log_density(u)
        if ld == _NEG_INF:
            return 0.0
        return safe_exp(ld)

    @cached_property
    def table(self) -> LogIntegral:
        return LogIntegral(self.density)

    def head_u(self, u: float) -> float:
        """``int_0^{e^u} w``."""
        return self.table.head(u)

    def tail_u(self, u: float) -> float:
        """``int_{e^u}^inf w``."""
        return self.table.tail(u)

    def log_head_rest(self, u: float) -> float:
        """``log int_0^{e^u} w - (gamma+1) u``, free of underflow and cancellation.

        For ``u < -TABLE_SPAN`` and ``gamma > -1`` the integral equals
        ``e^{(gamma+1) u + rest(u)} / (gamma+1)`` times a Laplace-type
        integral of ``exp(rest(u - y/(gamma+1)) - rest(u))`` against ``e^{-y}``,
        evaluated by Gauss-Laguerre.
        """
        c = self.gamma + 1.0
        if c > 0 and u < -TABLE_SPAN:
            r0 = self.rest(u)
            if r0 != _NEG_INF:
                acc = sum(w * safe_exp(self.rest(u - x / c) - r0) for x, w in zip(_LAG_X, _LAG_W))
                if acc > 0 and math.isfinite(acc):
                    return r0 - math.log(c) + math.log(acc)
        return _log(self.head_u(u)) - c * u

    def log_head(self, u: float) -> float:
        """``log int_0^{e^u} w``."""
        return self.log_head_rest(u) + (self.gamma + 1.0) * u

    def head(self, x: float) -> float:
        return self.head_u(math.log(x))

    def tail(self, x: float) -> float:
        return self.tail_u(math.log(x))

    @classmethod
    def power(cls, gamma: float, sv: SV | None = None, sv_power: float = 1.0,
              n: float = 1.0, tag: str | None = None) -> "Weight":
        """``x^gamma sv(x^{1/n})^sv_power``."""
        if sv is None or sv_power == 0:
            return cls(_zero_rest, gamma, tag or f"x^{gamma:g}")
        return cls(lambda u: sv_power * sv.log_eval(u / n), gamma,
                   tag or f"x^{gamma:g} sv^{sv_power:g}")

    @classmethod
    def terms(cls, gamma: float, factors: Sequence[tuple], tag: str = "weight") -> "Weight":
        """``x^gamma prod f_i(x^{1/n_i})^{e_i}`` for factors ``(f, e[, n])``."""
        facs = [(f[0], f[1], f[2] if len(f) > 2 else 1.0) for f in factors]

        def rest(u):
            return sum(e * f.log_eval(u / n) for f, e, n in facs if e)
        return cls(rest, gamma, tag)

    @classmethod
    def zero(cls) -> "Weight":
        return cls(lambda u: _NEG_INF, 0.0, "zero")

    @classmethod
    def from_callable(cls, fn: Callable[[float], float], tag: str = "callable") -> "Weight":
        return cls(lambda u: _log(fn(math.exp(u))), 0.0, tag)

    def pow(self, s: float) -> "Weight":
        rest = self.rest
        return Weight(lambda u: s * rest(u), s * self.gamma, f"({self.tag})^{s:g}")

    def __mul__(self, other: "Weight") -> "Weight":
        r1, r2 = self.rest, other.rest
        return Weight(lambda u: r1(u) + r2(u), self.gamma + other.gamma,
                      f"{self.tag}*{other.tag}")

    def times_power(self, gamma: float) -> "Weight":
        return Weight(self.rest, self.gamma + gamma, f"x^{gamma:g}*{self.tag}")


@dataclass(frozen=True, eq=False)
class KernelSpec:
    """Kernel ``phi(x, y) = chi_{(0,x)}(y) psi(y)``."""

    psi: Weight

    def Psi_u(self, u: float) -> float:
        """``int_0^{e^u} psi``."""
        return self.psi.head_u(u)

    def inner(self, z: float) -> Callable[[float], float]:
        """``x -> int_0^z phi(x, y) dy = Psi(min(x, z))``."""
        uz = math.log(z)
        return lambda u: self.Psi_u(min(u, uz))

    @classmethod
    def identity(cls) -> "KernelSpec":
        return cls(Weight.power(0.0))


def _kernel_power_weight(kernel: KernelSpec, w: Weight, P: float) -> Weight:
    """``Psi(x)^P w(x)``."""
    def rest(u):
        lw = w.rest(u)
        if lw == _NEG_INF:
            return _NEG_INF
        return P * _log(kernel.Psi_u(u)) + lw
    return Weight(rest, w.gamma, "Psi^P w")


# --- reports -----------------------------------------------------------------------


@dataclass
class ConditionReport:
    criterion: str
    sup: float
    argmax_z: float
    trace: list
    verdict: str
    A: float | None = None
    B: float | None = None
    params: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {"criterion": self.criterion, "sup": self.sup, "A": self.A, "B": self.B,
                "argmax_z": self.argmax_z, "trace": [[z, v] for z, v in self.trace],
                "verdict": self.verdict, "params": self.params, "notes": self.notes,
                "provenance": "grid-sup"}


def log_grid(lo: float = GRID_MIN, hi: float = GRID_MAX, points: int = GRID_POINTS) -> np.ndarray:
    return np.logspace(math.log10(lo), math.log10(hi), points)


def _golden_max(f: Callable[[float], float], a: float, b: float, iters: int = 40) -> tuple:
    g = (math.sqrt(5) - 1) / 2
    c, d = b - g * (b - a), a + g * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(iters):
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - g * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + g * (b - a)
            fd = f(d)
    return (c, fc) if fc >= fd else (d, fd)


def _safe_value(fn: Callable[[float], float], u: float) -> float:
    try:
        v = fn(u)
    except (ZeroDivisionError, OverflowError, ValueError):
        return math.nan
    return v


def decade_values(trace: Sequence[tuple]) -> list[tuple]:
    """Trace values at integer decades ``z = 10^k`` by log-linear interpolation."""
    zs = np.log10([z for z, _ in trace])
    vs = np.array([v for _, v in trace], dtype=float)
    out = []
    for k in range(math.ceil(zs[0]), math.floor(zs[-1]) + 1):
        out.append((10.0 ** k, float(np.interp(k, zs, vs))))
    return out


def growth_verdict(trace: Sequence[tuple], factor: float = 3.0, decades: int = 3) -> str:
    """Grid-based verdict for a sup trace (never a proof).

    ``unbounded`` when some value is infinite, or when toward either end of
    the grid the trace grows monotonically and at least triples across each of
    ``decades`` successive decades.  ``inconclusive`` when the trace grows
    monotonically over the last ``decades`` decades at an end without slowing
    down, and ``finite`` otherwise.
    """
    vals = [v for _, v in trace]
    if any(math.isnan(v) for v in vals):
        return INCONCLUSIVE
    if any(math.isinf(v) for v in vals):
        return UNBOUNDED
    if not trace:
        return INCONCLUSIVE
    dec = decade_values(trace)
    verdict = FINITE
    for direction in (1, -1):
        seq = dec if direction == 1 else dec[::-1]
        pts = list(trace) if direction == 1 else list(trace)[::-1]
        for i in range(len(seq) - decades):
            window = seq[i:i + decades + 1]
            if all(b >= factor * a > 0 for (_, a), (_, b) in zip(window[:-1], window[1:])):
                lo, hi = sorted((window[0][0], window[-1][0]))
                inner = [v for z, v in pts if lo <= z <= hi]
                if all(b >= a for a, b in zip(inner[:-1], inner[1:])):
                    return UNBOUNDED
        if len(seq) > decades:
            end = [v for _, v in seq[-(decades + 1):]]
            incs = [b - a for a, b in zip(end[:-1], end[1:])]
            if all(x > 0 for x in incs) and incs[-1] >= 0.9 * incs[-2] and \
                    end[-1] > end[0] * (1 + 1e-3):
                verdict = INCONCLUSIVE
    return verdict


def sup_report(criterion: str, fn_u: Callable[[float], float], grid: Sequence[float] | None = None,
               refine: bool = True, **extra) -> ConditionReport:
    """Supremum of ``fn_u(log z)`` over a log grid with golden-section refinement."""
    grid = log_grid() if grid is None else np.asarray(grid, dtype=float)
    us = np.log(grid)
    vals = [_safe_value(fn_u, float(u)) for u in us]
    trace = [(float(z), float(v)) for z, v in zip(grid, vals)]
    finite = [(v, i) for i, v in enumerate(vals) if not math.isnan(v)]
    if not finite:
        return ConditionReport(criterion, math.nan, math.nan, trace, INCONCLUSIVE, **extra)
    best, i = max(finite)
    best_u = float(us[i])
    if refine and math.isfinite(best) and 0 < i < len(us) - 1:
        def safe(u):
            v = _safe_value(fn_u, u)
            return -math.inf if math.isnan(v) else v
        u_opt, v_opt = _golden_max(safe, float(us[i - 1]), float(us[i + 1]))
        if v_opt > best:
            best, best_u = v_opt, u_opt
    verdict = growth_verdict(trace)
    return ConditionReport(criterion, best, math.exp(best_u), trace, verdict, **extra)


# --- criteria ------------------------------------------------------------------------


def heinig_stepanov(w: Weight, v: Weight, q: float, r: float, grid=None) -> ConditionReport:
    """``sup_t W(t)^{1/q} V(t)^{-1/r}`` with ``W, V`` the tails of ``w, v``."""
    if math.isinf(v.table.tail_end.value):
        return ConditionReport("heinig_stepanov", math.nan, math.nan, [], INCONCLUSIVE,
                               notes=["V is infinite"])

    def fn(u):
        W, V = w.tail_u(u), v.tail_u(u)
        if V == 0:
            return math.inf if W > 0 else math.nan
        return safe_exp(_log(W) / q - _log(V) / r) if W > 0 else 0.0
    return sup_report("heinig_stepanov", fn, grid, params={"q": q, "r": r})


def lai_denominator(kernel: KernelSpec, w: Weight, P: float) -> Callable[[float], float]:
    """``u -> int_0^inf (int_0^z phi(x,y) dy)^P w(x) dx`` at ``z = e^u``."""
    kw = _kernel_power_weight(kernel, w, P)

    def D(u):
        Psi = kernel.Psi_u(u)
        head = kw.head_u(u)
        tail = w.tail_u(u)
        return head + (Psi ** P * tail if Psi > 0 and tail > 0 else 0.0)
    return D


def lai_forward_condition(kernel: KernelSpec, v: Weight, w: Weight, P: float, Q: float,
                          grid=None) -> ConditionReport:
    """``sup_z (int_0^z v)^{1/Q} / (int_0^inf (int_0^z phi)^P w)^{1/P}``."""
    if not 1 <= P <= Q < math.inf:
        raise ValueError("need 1 <= P <= Q < inf")
    D = lai_denominator(kernel, w, P)

    def fn(u):
        num, den = v.head_u(u), D(u)
        if den == 0:
            return math.nan if num > 0 else 0.0
        if num == 0:
            return 0.0
        return safe_exp(_log(num) / Q - _log(den) / P)
    rep = sup_report("lai_forward", fn, grid, params={"P": P, "Q": Q})
    if all(math.isnan(v) for _, v in rep.trace):
        rep.verdict = INCONCLUSIVE
    return rep


def lai_reverse_condition(kernel: KernelSpec, v: Weight, w: Weight, P: float, Q: float,
                          grid=None) -> ConditionReport:
    """``sup_z (int_0^inf (int_0^z phi)^P w)^{1/P} / (int_0^z v)^{1/Q}``."""
    if not 0 < Q <= P <= 1:
        raise ValueError("need 0 < Q <= P <= 1")
    D = lai_denominator(kernel, w, P)

    def fn(u):
        num, den = D(u), v.head_u(u)
        if den == 0:
            return math.nan if num > 0 else 0.0
        if num == 0:
            return 0.0
        return safe_exp(_log(num) / P - _log(den) / Q)
    return sup_report("lai_reverse", fn, grid, params={"P": P, "Q": Q})


def conjugate(P: float) -> float:
    if P == 1:
        return math.inf
    if P == math.inf:
        return 1.0
    return P / (P - 1)


def _ess_sup_head(g: Weight, u: float, lo: float = -80.0, per_unit: int = 8) -> float:
    """``ess sup_{(0, e^u)} g`` sampled on a log grid."""
    if u <= lo:
        return safe_exp(g.log_fn(u))
    us = np.linspace(lo, u, max(int((u - lo) * per_unit), 2))
    return safe_exp(max(g.log_fn(float(x)) for x in us))


def ok_hardy_condition(v: Weight, w: Weight, P: float, Q: float, grid=None) -> ConditionReport:
    """``sup_x ||w^{1/Q}||_{Q;(x,inf)} ||v^{-1/P}||_{P';(0,x)}``."""
    if not 1 <= P <= Q <= math.inf:
        raise ValueError("need 1 <= P <= Q <= inf")
    Pp = conjugate(P)
    vneg = v.pow(-Pp / P) if Pp < math.inf else v.pow(-1.0 / P)

    def first(u):
        if Q == math.inf:
            return 1.0
        return w.tail_u(u) ** (1.0 / Q)

    def second(u):
        if Pp == math.inf:
            return _ess_sup_head(vneg, u)
        return vneg.head_u(u) ** (1.0 / Pp)

    def fn(u):
        a, b = first(u), second(u)
        if a == 0 or b == 0:
            return 0.0
        return a * b
    rep = sup_report("ok_hardy", fn, grid, params={"P": P, "Q": Q})
    if Pp < math.inf and math.isinf(vneg.table.head_end.value):
        rep.verdict = UNBOUNDED
        rep.notes.append("int_0^x v^{-P'/P} is infinite for every x")
    return rep


def sawyer_parts(v: Weight, w: Weight, P: float, Q: float) -> tuple:
    """Per-``u`` evaluators of the two Sawyer quantities."""
    Pp = conjugate(P)
    wq = w.times_power(-Q)

    # (x/V)^{P'} v with V = e^{(gamma+1) u + R(u)}: the powers of x are combined exactly
    def rest(u):
        R = v.log_head_rest(u)
        lv = v.rest(u)
        if R == _NEG_INF or lv == _NEG_INF:
            return _NEG_INF
        return lv - Pp * R
    inner = Weight(rest, v.gamma * (1.0 - Pp), "(x/V)^{P'} v")

    def A(u):
        W, V = w.head_u(u), v.head_u(u)
        if W == 0:
            return 0.0
        if V == 0:
            return math.inf
        return safe_exp(_log(W) / Q - _log(V) / P)

    def B(u):
        a, b = wq.tail_u(u), inner.head_u(u)
        if a == 0 or b == 0:
            return 0.0
        return safe_exp(_log(a) / Q + _log(b) / Pp)
    return A, B


def sawyer_conditions(v: Weight, w: Weight, P: float, Q: float, grid=None) -> ConditionReport:
    """Sawyer's two constants ``A`` and ``B``; the report trace is that of ``B``."""
    if not 1 < P <= Q < math.inf:
        raise ValueError("need 1 < P <= Q < inf")
    A, B = sawyer_parts(v, w, P, Q)
    ra = sup_report("sawyer_A", A, grid)
    rb = sup_report("sawyer_B", B, grid)
    verdict = UNBOUNDED if UNBOUNDED in (ra.verdict, rb.verdict) else (
        INCONCLUSIVE if INCONCLUSIVE in (ra.verdict, rb.verdict) else FINITE)
    return ConditionReport("sawyer", ra.sup + rb.sup, rb.argmax_z, rb.trace, verdict,
                           A=ra.sup, B=rb.sup, params={"P": P, "Q": Q, "A_trace": ra.trace})


def eo_weight_construct(w: Weight, phi: Weight, s: float) -> Weight:
    """``v(y) = w(y)^{1-s} (phi(y) int_y^inf w)^s``."""
    if not 0 < s < 1:
        raise ValueError("s must lie in (0,1)")
    if math.isinf(w.table.tail_end.value):
        raise ValueError("int_y^inf w diverges")

    def rest(u):
        lw = w.rest(u)
        W = w.tail_u(u)
        if lw == _NEG_INF or W <= 0:
            return _NEG_INF
        return (1 - s) * lw + s * (phi.rest(u) + math.log(W))
    return Weight(rest, (1 - s) * w.gamma + s * phi.gamma, "eo")


# --- witnesses -------------------------------------------------------------------------


NON_INCREASING = "non-increasing"
NON_DECREASING = "non-decreasing"
ANY = "non-negative"


@dataclass(frozen=True)
class StepFunction:
    """``values[i]`` on ``[breaks[i], breaks[i+1])`` with ``breaks[0] = 0``;
    the last value holds on ``[breaks[-1], inf)``."""

    breaks: tuple
    values: tuple

    def __post_init__(self):
        object.__setattr__(self, "breaks", tuple(float(x) for x in self.breaks))
        object.__setattr__(self, "values", tuple(float(x) for x in self.values))
        if len(self.values) != len(self.breaks):
            raise ValueError("need one value per break")
        if self.breaks[0] != 0 or any(b <= a for a, b in zip(self.breaks[:-1], self.breaks[1:])):
            raise ValueError("breaks must start at 0 and increase")
        if any(v < 0 for v in self.values):
            raise ValueError("values must be non-negative")

    @classmethod
    def indicator(cls, z: float) -> "StepFunction":
        """``chi_{(0,z)}``."""
        return cls((0.0, z), (1.0, 0.0))

    def is_class(self, cls: str) -> bool:
        v = self.values
        if cls == NON_INCREASING:
            return all(b <= a for a, b in zip(v[:-1], v[1:]))
        if cls == NON_DECREASING:
            return all(b >= a for a, b in zip(v[:-1], v[1:]))
        return True

    def __call__(self, x: float) -> float:
        i = int(np.searchsorted(self.breaks, x, side="right")) - 1
        return self.values[max(i, 0)]

    @property
    def log_breaks(self) -> list:
        return [math.log(b) for b in self.breaks[1:]]


def monotone_function_family(seed: int, count: int, cls: str = NON_INCREASING,
                             pieces: tuple = (2, 8), log_range: tuple = (-25.0, 25.0),
                             lattice: float = 0.25) -> list[StepFunction]:
    """Reproducible random step functions with log-spaced breakpoints.

    Breakpoints are drawn on the lattice ``exp(lattice * k)`` inside
    ``log_range``; all members vanish after their last breakpoint, except the
    non-decreasing class, whose members vanish before their first breakpoint.
    """
    rng = np.random.default_rng(seed)
    lo, hi = (int(round(x / lattice)) for x in log_range)
    out = []
    for _ in range(count):
        m = int(rng.integers(pieces[0], pieces[1] + 1))
        ks = np.sort(rng.choice(np.arange(lo, hi + 1), size=m, replace=False))
        breaks = (0.0,) + tuple(math.exp(lattice * int(k)) for k in ks)
        heights = rng.exponential(1.0, size=m)
        if cls == NON_INCREASING:
            vals = tuple(np.cumsum(heights[::-1])[::-1].tolist()) + (0.0,)
        elif cls == NON_DECREASING:
            vals = (0.0,) + tuple(np.cumsum(heights).tolist())
        else:
            vals = tuple(heights.tolist()) + (0.0,)
        out.append(StepFunction(breaks, vals))
    return out


class WitnessClassError(ValueError):
    """Raised when a witness is outside the admissible class of an inequality."""


def _power_integral(h: StepFunction, v: Weight, E: float) -> float:
    """``int_0^inf h^E v``: tabulated end integrals, direct quadrature for inner steps."""
    total = 0.0
    lb = [-math.inf] + h.log_breaks + [math.inf]
    for val, a, b in zip(h.values, lb[:-1], lb[1:]):
        if val <= 0:
            continue
        if a == -math.inf and b == math.inf:
            piece = integrate_line(v.density, a, b)
        elif a == -math.inf:
            piece = v.head_u(b)
        elif b == math.inf:
            piece = v.tail_u(a)
        else:
            hb = v.head_u(b)
            piece = hb - v.head_u(a)
            if not math.isfinite(hb) or piece < 1e-3 * hb:
                # cancellation: integrate the step directly
                piece = integrate_line(v.density, a, b)
        total += val ** E * piece
    return total


@lru_cache(maxsize=64)
def _psi_power_weight(kernel: KernelSpec, w: Weight, E: float) -> Weight:
    """``Psi^E w`` as a weight, so its running integral is tabulated once."""
    psi = kernel.psi
    rest_w = w.rest

    def rest(u):
        a, b = psi.log_head_rest(u), rest_w(u)
        if a == _NEG_INF or b == _NEG_INF:
            return _NEG_INF
        return E * a + b
    return Weight(rest, E * (psi.gamma + 1.0) + w.gamma, f"Psi^{E:g} {w.tag}")


def _kernel_integral(h: StepFunction, kernel: KernelSpec, w: Weight, E: float) -> float:
    """``int_0^inf (int_0^x psi h)^E w(x) dx`` by direct quadrature in ``log x``."""
    lb = h.log_breaks
    Psi_b = [kernel.Psi_u(u) for u in lb]
    # H at the breakpoints
    H_b = []
    acc, prev = 0.0, 0.0
    for i, u in enumerate(lb):
        acc += h.values[i] * (Psi_b[i] - prev)
        prev = Psi_b[i]
        H_b.append(acc)

    def H(u):
        i = int(np.searchsorted(lb, u, side="right"))
        if i == 0:
            return h.values[0] * kernel.Psi_u(u)
        return H_b[i - 1] + h.values[i] * (kernel.Psi_u(u) - Psi_b[i - 1])

    def g(u):
        val = H(u)
        if val <= 0:
            return 0.0
        lw = w.log_fn(u)
        if lw == _NEG_INF:
            return 0.0
        return safe_exp(E * math.log(val) + lw + u)

    if not lb:
        return integrate_line(g, -math.inf, math.inf)
    # below the first break H = h_0 Psi
    total = h.values[0] ** E * _psi_power_weight(kernel, w, E).head_u(lb[0]) \
        if h.values[0] > 0 else 0.0
    total += integrate_line(g, lb[0], lb[-1], lb)
    if h.values[-1] == 0:
        total += H_b[-1] ** E * w.tail_u(lb[-1]) if H_b[-1] > 0 else 0.0
    else:
        total += integrate_line(g, lb[-1], math.inf)
    return total


def witness_test(inequality: str, h: StepFunction, *, v: Weight, w: Weight,
                 P: float, Q: float, kernel: KernelSpec | None = None, s: float | None = None,
                 **_) -> float:
    """Observed ``LHS/RHS`` of an inequality for one witness.

    ``forward``: ``(int h^Q v)^{1/Q} / (int (int_0^x psi h)^P w)^{1/P}``, ``h`` non-increasing.
    ``reverse``: the reciprocal pairing with ``h`` non-increasing.
    ``hardy``: ``(int (int_0^x g)^Q w)^{1/Q} / (int g^P v)^{1/P}``, ``g >= 0``.
    ``sawyer``: ``(int (x^{-1} int_0^x g)^Q w)^{1/Q} / (int g^P v)^{1/P}``, ``g`` non-increasing.
    ``eo``: ``int h^s v / int (int_0^x psi h)^s w`` (compare with ``s^s``).
    """
    kernel = kernel or KernelSpec.identity()
    if inequality in ("forward", "reverse", "sawyer") and not h.is_class(NON_INCREASING):
        raise WitnessClassError(f"{inequality} needs a non-increasing witness")
    if inequality == "forward":
        return (_power_integral(h, v, Q) ** (1 / Q)) / (_kernel_integral(h, kernel, w, P) ** (1 / P))
    if inequality == "reverse":
        return (_kernel_integral(h, kernel, w, P) ** (1 / P)) / (_power_integral(h, v, Q) ** (1 / Q))
    if inequality == "hardy":
        one = KernelSpec.identity()
        return (_kernel_integral(h, one, w, Q) ** (1 / Q)) / (_power_integral(h, v, P) ** (1 / P))
    if inequality == "sawyer":
        one = KernelSpec.identity()
        wq = w.times_power(-Q)
        return (_kernel_integral(h, one, wq, Q) ** (1 / Q)) / (_power_integral(h, v, P) ** (1 / P))
    if inequality == "eo":
        if s is None:
            raise ValueError("eo needs s")
        return _power_integral(h, v, s) / _kernel_integral(h, kernel, w, s)
    raise ValueError(f"unknown inequality {inequality!r}")


def sawyer_b_witness_ratio(v: Weight, w: Weight, P: float, Q: float, z: float) -> float:
    """Ratio of the Sawyer inequality for ``g_z = chi_{(0,z)} (x / int_0^x v)^{P'/P}``.

    Returns ``nan`` when ``g_z`` is not an admissible test function, i.e. when
    ``int_0^z g_z^P v`` is zero or infinite.
    """
    Pp = conjugate(P)
    uz = math.log(z)

    e = Pp / P

    def log_g(u):
        R = v.log_head_rest(u)
        return -e * R if R > _NEG_INF else math.inf

    g = Weight(log_g, -e * v.gamma, "g_z")
    gpv = Weight(lambda u: P * log_g(u) + v.rest(u), v.gamma * (1.0 - P * e), "g^P v")
    den = gpv.head_u(uz) ** (1 / P)
    if den == 0 or math.isinf(den):
        return math.nan
    wq = w.times_power(-Q)
    Gz = g.head_u(uz)

    def lhs_g(u):
        G = g.head_u(min(u, uz))
        lw = wq.log_fn(u)
        if G <= 0 or lw == _NEG_INF:
            return 0.0
        return safe_exp(Q * math.log(G) + lw + u)
    num = integrate_line(lhs_g, -math.inf, uz) + Gz ** Q * wq.tail_u(uz)
    return num ** (1 / Q) / den
