"""Quadrature on the half line, carried out in logarithmic coordinates.

Every integral of the form ``int_a^b w(x) dx`` with ``0 <= a < b <= inf`` is
rewritten with ``x = e^u`` and handled as an integral over ``u``.  Slowly
varying integrands become log-polynomial in ``u``; the infinite ends are
covered by windows that grow geometrically in ``1 + |u|``.
"""

from __future__ import annotations

import math
import warnings
from bisect import bisect_right
from collections.abc import Callable, Sequence
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy import integrate

REL_TOL = 1e-10
MAX_WINDOWS = 60
# beyond this |u| the windows stop and the remaining tail is extrapolated;
# doubles still resolve log-densities there to about 1e-3
U_CAP = 1e13
QUAD_EPSREL = 1e-11

CONVERGED = "converged"
DIVERGENT = "divergent"
INCONCLUSIVE = "inconclusive"


class QuadratureWarning(UserWarning):
    pass


def safe_exp(x: float) -> float:
    if x > 709.0:
        return math.inf
    return math.exp(x)


def _guard(g: Callable[[float], float]) -> Callable[[float], float]:
    def wrapped(u: float) -> float:
        try:
            val = g(u)
        except OverflowError:
            return math.inf
        return val

    return wrapped


def quad(g: Callable[[float], float], a: float, b: float, epsrel: float = QUAD_EPSREL) -> float:
    """Adaptive Gauss-Kronrod on a finite interval; returns ``inf`` on overflow."""
    if a == b:
        return 0.0
    if a > b:
        return -quad(g, b, a, epsrel)
    f = _guard(g)
    fa, fb = f(a), f(b)
    if math.isinf(fa) or math.isinf(fb):
        return math.inf
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        val, _ = integrate.quad(f, a, b, epsabs=0.0, epsrel=epsrel, limit=200)
    if math.isnan(val):
        return math.inf
    return val


def _split_points(a: float, b: float, breaks: Sequence[float] = ()) -> list[float]:
    # geometric splitting in |u| around the origin keeps each piece a single scale
    pts = {a, b}
    for s in (1.0, -1.0):
        k = 0
        while True:
            x = s * (math.exp(k) - 1.0)
            if abs(x) > max(abs(a), abs(b)):
                break
            if a < x < b:
                pts.add(x)
            k += 1
    for x in breaks:
        if a < x < b:
            pts.add(x)
    return sorted(pts)


def integrate_finite(g: Callable[[float], float], a: float, b: float,
                     breaks: Sequence[float] = ()) -> float:
    if a == b:
        return 0.0
    if a > b:
        return -integrate_finite(g, b, a, breaks)
    pts = _split_points(a, b, breaks)
    total = 0.0
    for lo, hi in zip(pts[:-1], pts[1:]):
        total += quad(g, lo, hi)
        if math.isinf(total):
            return math.inf
    return total


@dataclass(frozen=True)
class TailResult:
    value: float
    status: str
    windows: int


def semi_infinite(g: Callable[[float], float], u0: float, tol: float = REL_TOL,
                  max_windows: int = MAX_WINDOWS, u_cap: float = U_CAP) -> TailResult:
    """``int_{u0}^{inf} g(u) du`` for a non-negative integrand.

    Windows satisfy ``1 + u_{k+1} = e (1 + u_k)``.  Once the increments decay
    geometrically the remaining tail is extrapolated (Aitken) and added.
    Divergence is declared when the increments stop decaying.
    """
    total = 0.0
    start = u0
    if u0 < 0.0:
        total = integrate_finite(g, u0, 0.0)
        start = 0.0
        if math.isinf(total):
            return TailResult(math.inf, DIVERGENT, 0)
    base = 1.0 + start
    incs: list[float] = []
    k = 0
    for k in range(max_windows):
        lo = base * math.exp(k) - 1.0
        hi = base * math.exp(k + 1) - 1.0
        inc = quad(g, lo, hi)
        if math.isinf(inc) or math.isinf(total + inc):
            return TailResult(math.inf, DIVERGENT, k + 1)
        total += inc
        incs.append(inc)
        if inc == 0.0:
            if k >= 2 and incs[-2] == 0.0:
                return TailResult(total, CONVERGED, k + 1)
            continue
        if len(incs) >= 2 and incs[-2] > 0.0:
            rho = inc / incs[-2]
            if rho < 1.0:
                tail = inc * rho / (1.0 - rho)
                if tail <= tol * total:
                    return TailResult(total + tail, CONVERGED, k + 1)
        if k >= 20:
            last = incs[-10:]
            if all(y >= x * (1.0 - 1e-9) for x, y in zip(last[:-1], last[1:])):
                return TailResult(math.inf, DIVERGENT, k + 1)
        if hi >= u_cap and len(incs) >= 3:
            break
    if incs[-1] == 0.0:
        return TailResult(total, CONVERGED, k + 1)
    rho = incs[-1] / incs[-2] if len(incs) >= 2 and incs[-2] > 0 else 1.0
    if rho >= 1.0 - 1e-3:
        return TailResult(math.inf, DIVERGENT, k + 1)
    tail = incs[-1] * rho / (1.0 - rho)
    rho_prev = incs[-2] / incs[-3] if len(incs) >= 3 and incs[-3] > 0 else math.nan
    # log-power tails give exactly geometric window increments
    if tail <= 1e-6 * total or abs(rho - rho_prev) <= 1e-2 * rho:
        return TailResult(total + tail, CONVERGED, k + 1)
    warnings.warn(f"slow tail convergence from u={u0:g}; extrapolated tail {tail:.3g}",
                  QuadratureWarning, stacklevel=2)
    return TailResult(total + tail, INCONCLUSIVE, k + 1)


def semi_infinite_left(g: Callable[[float], float], u0: float, **kw) -> TailResult:
    """``int_{-inf}^{u0} g(u) du``."""
    return semi_infinite(lambda s: g(-s), -u0, **kw)


def integrate_line(g: Callable[[float], float], lo: float, hi: float,
                   breaks: Sequence[float] = ()) -> float:
    """``int_lo^hi g(u) du`` where either end may be infinite."""
    if hi <= lo:
        return 0.0
    inner = sorted(x for x in breaks if lo < x < hi and math.isfinite(x))
    if inner:
        a, b = inner[0], inner[-1]
    elif math.isfinite(lo):
        a = b = lo
    elif math.isfinite(hi):
        a = b = hi
    else:
        a = b = 0.0
    total = 0.0
    if not math.isfinite(lo):
        total += semi_infinite_left(g, a).value
    elif a > lo:
        total += integrate_finite(g, lo, a)
    total += integrate_finite(g, a, b, inner)
    if not math.isfinite(hi):
        total += semi_infinite(g, b).value
    elif hi > b:
        total += integrate_finite(g, b, hi)
    return total


TABLE_SPAN = 64.0
TABLE_STEP = 0.125
_GL_X, _GL_W = np.polynomial.legendre.leggauss(8)
_GL_X = _GL_X.tolist()
_GL_W = _GL_W.tolist()


def gauss8(g: Callable[[float], float], a: float, b: float) -> float:
    """Fixed 8-point Gauss-Legendre rule; accurate for smooth ``g`` over short spans."""
    half, mid = (b - a) / 2, (a + b) / 2
    return half * sum(w * g(mid + half * x) for x, w in zip(_GL_X, _GL_W))


_GL16_X, _GL16_W = (a.tolist() for a in np.polynomial.legendre.leggauss(16))


def _gauss_log_once(g: Callable[[float], float], a: float, b: float,
                    xs: list, ws: list) -> float:
    # u = s e^y, du = u dy with y over [log|a|, log|b|]
    s = 1.0 if a > 0 else -1.0
    ya, yb = math.log(abs(a)), math.log(abs(b))
    half, mid = (yb - ya) / 2, (ya + yb) / 2
    total = 0.0
    for x, w in zip(xs, ws):
        y = mid + half * x
        e = math.exp(y)
        total += w * g(s * e) * e
    return s * half * total


def far_integral(g: Callable[[float], float], a: float, b: float) -> float:
    """``int_a^b g`` for ``a < b`` of one sign, far from the origin.

    The interval is cut into pieces with endpoint ratio at most 2 and each
    piece is integrated in ``log |u|`` with 16- and 8-point Gauss-Legendre
    rules; when the two disagree the piece goes to adaptive quadrature.
    Fixed rules keep nested integrals smooth in their parameters.
    """
    if a == b:
        return 0.0
    if not (a > 0 or b < 0):
        return integrate_finite(g, a, b)
    f = _guard(g)
    lo, hi = (abs(a), abs(b)) if a > 0 else (abs(b), abs(a))
    pts = [lo]
    while pts[-1] * 2.0 < hi:
        pts.append(pts[-1] * 2.0)
    pts.append(hi)
    total = 0.0
    for x0, x1 in zip(pts[:-1], pts[1:]):
        p0, p1 = (x0, x1) if a > 0 else (-x1, -x0)
        v16 = _gauss_log_once(f, p0, p1, _GL16_X, _GL16_W)
        v8 = _gauss_log_once(f, p0, p1, _GL_X, _GL_W)
        if math.isfinite(v16) and abs(v16 - v8) <= 1e-10 * abs(v16):
            total += v16
        else:
            total += quad(f, p0, p1)
    return total


def _table_nodes(span: float = TABLE_SPAN, step: float = TABLE_STEP,
                 far: float = 1e12) -> list[float]:
    inner = [k * step for k in range(int(-span / step), int(span / step) + 1)]
    outer = []
    x = span * 2.0
    while x <= far:
        outer.append(x)
        x *= 2.0
    return [-x for x in reversed(outer)] + inner + outer


class LogIntegral:
    """Tabulated running integrals of ``g`` over the real line.

    ``head(u) = int_{-inf}^u g`` and ``tail(u) = int_u^inf g``.  Node values are
    built lazily; a lookup adds a single short quadrature to the nearest node
    (a fixed Gauss-Legendre rule inside the dense node range).
    """

    def __init__(self, g: Callable[[float], float]):
        self.g = _guard(g)
        self.nodes = _table_nodes()

    @cached_property
    def _segments(self) -> list[float]:
        out = []
        for a, b in zip(self.nodes[:-1], self.nodes[1:]):
            far = a >= TABLE_SPAN or b <= -TABLE_SPAN
            out.append(far_integral(self.g, a, b) if far else quad(self.g, a, b))
        return out

    @cached_property
    def head_end(self) -> TailResult:
        return semi_infinite_left(self.g, self.nodes[0])

    @cached_property
    def tail_end(self) -> TailResult:
        return semi_infinite(self.g, self.nodes[-1])

    @cached_property
    def _head_table(self) -> list[float]:
        acc = self.head_end.value
        out = [acc]
        for s in self._segments:
            acc += s
            out.append(acc)
        return out

    @cached_property
    def _tail_table(self) -> list[float]:
        acc = self.tail_end.value
        out = [acc]
        for s in reversed(self._segments):
            acc += s
            out.append(acc)
        out.reverse()
        return out

    @property
    def head_status(self) -> str:
        return self.head_end.status

    @property
    def tail_status(self) -> str:
        return self.tail_end.status

    def head(self, u: float) -> float:
        nodes = self.nodes
        # the integrand is non-negative, so a divergent end makes every head infinite
        if math.isinf(self.head_end.value):
            return math.inf
        if u < nodes[0]:
            return semi_infinite_left(self.g, u).value
        if u >= nodes[-1]:
            return self._head_table[-1] + far_integral(self.g, nodes[-1], u)
        i = bisect_right(nodes, u) - 1
        base = self._head_table[i]
        if math.isinf(base):
            return math.inf
        return base + self._piece(nodes[i], u)

    def tail(self, u: float) -> float:
        nodes = self.nodes
        if math.isinf(self.tail_end.value):
            return math.inf
        if u > nodes[-1]:
            return semi_infinite(self.g, u).value
        if u <= nodes[0]:
            return self._tail_table[0] + far_integral(self.g, u, nodes[0])
        i = bisect_right(nodes, u) - 1
        if u == nodes[i]:
            return self._tail_table[i]
        base = self._tail_table[i + 1]
        if math.isinf(base):
            return math.inf
        return base + self._piece(u, nodes[i + 1])

    def _piece(self, a: float, b: float) -> float:
        if a == b:
            return 0.0
        if -TABLE_SPAN <= a and b <= TABLE_SPAN:
            val = gauss8(self.g, a, b)
            if math.isfinite(val) and val >= 0:
                return val
            return quad(self.g, a, b)
        return far_integral(self.g, a, b)

    def between(self, lo: float, hi: float) -> float:
        """``int_lo^hi g`` for finite ``lo < hi``."""
        return integrate_finite(self.g, lo, hi)
