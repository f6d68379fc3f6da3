"""The two far-field kernels E(c, xi), F(c, xi) and their expansions in xi.

Both kernels are ratios built from s = 1 - 2 c xi + xi^2.  For integer
exponent pairs they admit an expansion

    f(c, xi) = sum_{j=0..m} coeff_j(c) xi^j + remainder(c, xi) xi^(m+1)

with polynomial coefficients.  The expansion is constructed by truncated
power-series arithmetic in xi whose coefficients are polynomials in c:
binomial series for the half-integer powers of s, series products and one
series reciprocal.  All scalar binomials are dyadic rationals, so for the
low-order rows the floating-point construction is exact and the coefficient
polynomials come out with exact integer entries.

The remainder is evaluated by a hybrid rule: for xi above a fixed switch
point it is the directly computed difference quotient; below it that
quotient is catastrophically ill-conditioned in double precision, so the
remainder's own series (48 extra coefficient rows, convergent well past the
switch point) is used instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
from numpy.polynomial import polynomial as npoly

from .envelopes import ProblemParams
from .errors import (
    InvalidArgumentError,
    OutOfRegimeError,
    SingularPointError,
    UnsupportedExponentsError,
)
from .gridmax import GridMaxConfig, box_maximize

_EXTRA_ROWS = 48  # remainder-series depth beyond the expansion order
_SWITCH_XI = 0.125  # below this, the remainder is evaluated by its series

Series = list[np.ndarray]  # row i = polynomial-in-c coefficient of xi^i


# -- series arithmetic ------------------------------------------------------


def _trim(p: np.ndarray) -> np.ndarray:
    nz = np.nonzero(p)[0]
    return p[: nz[-1] + 1] if len(nz) else np.zeros(1)


def _padd(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if len(a) < len(b):
        a, b = b, a
    out = a.copy()
    out[: len(b)] += b
    return out


def _szero(order: int) -> Series:
    return [np.zeros(1) for _ in range(order + 1)]


def _sadd(a: Series, b: Series) -> Series:
    return [_padd(x, y) for x, y in zip(a, b)]


def _sscale(a: Series, c: float) -> Series:
    return [x * c for x in a]


def _smul(a: Series, b: Series, order: int) -> Series:
    out = _szero(order)
    for i, ai in enumerate(a):
        if i > order:
            break
        if len(ai) == 1 and ai[0] == 0.0:
            continue
        for j, bj in enumerate(b):
            if i + j > order:
                break
            if len(bj) == 1 and bj[0] == 0.0:
                continue
            out[i + j] = _padd(out[i + j], np.convolve(ai, bj))
    return [_trim(r) for r in out]


def _sshift(a: Series, k: int, order: int) -> Series:
    out = _szero(order)
    for i, ai in enumerate(a):
        if i + k <= order:
            out[i + k] = ai.copy()
    return out


def _sinv(a: Series, order: int) -> Series:
    """Reciprocal of a series whose xi^0 row is a nonzero constant."""
    a0 = a[0]
    if len(_trim(a0)) != 1 or a0[0] == 0.0:
        raise InvalidArgumentError("series reciprocal needs a nonzero constant leading row")
    c0 = float(a0[0])
    out = _szero(order)
    out[0] = np.array([1.0 / c0])
    for i in range(1, order + 1):
        acc = np.zeros(1)
        for t in range(1, min(i, len(a) - 1) + 1):
            at = a[t]
            if len(at) == 1 and at[0] == 0.0:
                continue
            acc = _padd(acc, np.convolve(at, out[i - t]))
        out[i] = _trim(-acc / c0)
    return out


def _binom_exact(alpha: Fraction, k: int) -> float:
    num = Fraction(1)
    for i in range(k):
        num *= alpha - i
    return float(num / math.factorial(k))


def _s_base(order: int) -> Series:
    """The series of s = 1 - 2 c xi + xi^2."""
    s = _szero(order)
    s[0] = np.array([1.0])
    if order >= 1:
        s[1] = np.array([0.0, -2.0])
    if order >= 2:
        s[2] = np.array([1.0])
    return s


def _spow(alpha: Fraction, order: int) -> Series:
    """s^alpha as a series, via the binomial expansion of (1 + (s-1))^alpha.

    (s - 1) has xi-valuation 1, so the binomial sum terminates at ``order``.
    """
    u = _szero(order)
    if order >= 1:
        u[1] = np.array([0.0, -2.0])
    if order >= 2:
        u[2] = np.array([1.0])
    out = _szero(order)
    out[0] = np.array([1.0])
    uk = None
    for k in range(1, order + 1):
        uk = u if uk is None else _smul(uk, u, order)
        coef = _binom_exact(alpha, k)
        if coef != 0.0:
            out = _sadd(out, _sscale(uk, coef))
    return out


# -- closed forms ------------------------------------------------------------


def _check_domain(c: np.ndarray, xi: np.ndarray) -> None:
    if np.any(np.abs(c) > 1.0):
        raise InvalidArgumentError("c must lie in [-1, 1]")
    if np.any(xi < 0.0):
        raise InvalidArgumentError("xi must be nonnegative")
    if np.any((c == 1.0) & (xi == 1.0)):
        raise SingularPointError("the kernel is undefined at (c, xi) = (1, 1)")


def _require_positive_pair(params: ProblemParams) -> None:
    if not (params.p >= params.n > 0):
        raise OutOfRegimeError(f"kernels need p >= n > 0, got p={params.p}, n={params.n}")


def eval_E(params: ProblemParams, c, xi):
    """Far-field kernel of the basic inequality:

        E(c, xi) = (1 - c^2) / (s^((p+1)/2) + xi^(p-n) s^((n+1)/2))^2,
        s = 1 - 2 c xi + xi^2.
    """
    _require_positive_pair(params)
    scalar = np.isscalar(c) and np.isscalar(xi)
    c = np.asarray(c, dtype=float)
    xi = np.asarray(xi, dtype=float)
    _check_domain(c, xi)
    p, n = params.p, params.n
    s = 1.0 - 2.0 * c * xi + xi * xi
    denom = s ** ((p + 1.0) / 2.0) + xi ** (p - n) * s ** ((n + 1.0) / 2.0)
    out = (1.0 - c * c) / (denom * denom)
    return float(out) if scalar else out


def eval_F(params: ProblemParams, c, xi):
    """Far-field kernel of the Kato inequality, with its xi = 0 branch
    F(c, 0) = (1 - c^2)(1 + p^2 c^2) / (1 + 3 delta_pn)."""
    _require_positive_pair(params)
    scalar = np.isscalar(c) and np.isscalar(xi)
    c = np.asarray(c, dtype=float)
    xi = np.asarray(xi, dtype=float)
    _check_domain(c, xi)
    p, n = params.p, params.n
    branch0 = (1.0 - c * c) * (1.0 + p * p * c * c) / (1.0 + 3.0 * params.delta_pn)
    with np.errstate(divide="ignore", invalid="ignore"):
        s = 1.0 - 2.0 * c * xi + xi * xi
        sp2 = s ** (p / 2.0)
        denom = sp2 + xi ** (p - n) * s ** (n / 2.0)
        bracket = (1.0 - xi**p) ** 2 / s + ((1.0 - sp2) / xi) ** 2
        out = (1.0 - c * c) / (denom * denom) * bracket
    out = np.where(xi == 0.0, branch0, out)
    return float(out) if scalar else out


# -- expansions --------------------------------------------------------------


@dataclass(frozen=True)
class SeriesExpansion:
    """Expansion of one kernel to order m, plus a remainder evaluator."""

    kind: str  # "E" or "F"
    p: int
    n: int
    order: int
    ladder: tuple[int, ...]  # exponents 0 .. m+1 (consecutive for integer p, n)
    coeffs: tuple[np.ndarray, ...]  # m+1 coefficient polynomials, ascending powers of c
    tail: tuple[np.ndarray, ...]  # remainder-series coefficient polynomials

    def coefficient(self, j: int) -> np.ndarray:
        return self.coeffs[j].copy()

    def _direct(self, c, xi):
        fn = eval_E if self.kind == "E" else eval_F
        # the kernels are dimension-free; d merely tags the params object
        return fn(ProblemParams(self.p, self.n, 2), c, xi)

    def partial_sum(self, c, xi):
        c = np.asarray(c, dtype=float)
        xi = np.asarray(xi, dtype=float)
        total = np.zeros(np.broadcast(c, xi).shape)
        for j, poly in enumerate(self.coeffs):
            total = total + npoly.polyval(c, poly) * xi**j
        return total

    def remainder(self, c, xi):
        """Hybrid remainder evaluator on [-1,1] x [0, ~0.6]."""
        scalar = np.isscalar(c) and np.isscalar(xi)
        c, xi = np.broadcast_arrays(np.asarray(c, dtype=float), np.asarray(xi, dtype=float))
        out = np.empty(c.shape)
        m1 = self.order + 1
        near = xi < _SWITCH_XI
        if np.any(near):
            cn, xn = c[near], xi[near]
            acc = np.zeros(cn.shape)
            for t in range(len(self.tail) - 1, -1, -1):
                acc = acc * xn + npoly.polyval(cn, self.tail[t])
            out[near] = acc
        far = ~near
        if np.any(far):
            cf, xf = c[far], xi[far]
            out[far] = (self._direct(cf, xf) - self.partial_sum(cf, xf)) / xf**m1
        return float(out) if scalar else out

    def reconstruct(self, c, xi):
        """Partial sum plus remainder * xi^(m+1); equals the kernel."""
        xi = np.asarray(xi, dtype=float)
        return self.partial_sum(c, xi) + self.remainder(c, xi) * xi ** (self.order + 1)


def _series_E(p: int, n: int, order: int) -> Series:
    s_p = _spow(Fraction(p + 1, 2), order)
    s_n = _spow(Fraction(n + 1, 2), order)
    D = _sadd(s_p, _sshift(s_n, p - n, order))
    inv = _sinv(_smul(D, D, order), order)
    one_minus_c2 = _szero(order)
    one_minus_c2[0] = np.array([1.0, 0.0, -1.0])
    return _smul(one_minus_c2, inv, order)


def _series_F(p: int, n: int, order: int) -> Series:
    s = _s_base(order)
    s_p2 = _spow(Fraction(p, 2), order + 1)
    s_n2 = _spow(Fraction(n, 2), order)
    DF = _sadd(s_p2[: order + 1], _sshift(s_n2, p - n, order))
    inv_DF2 = _sinv(_smul(DF, DF, order), order)
    inv_s = _sinv(s, order)
    # g = (1 - s^(p/2)) / xi : drop the vanishing constant row and shift down
    g_rows = [-r for r in s_p2]
    g_rows[0] = _padd(g_rows[0], np.array([1.0]))
    assert np.all(g_rows[0] == 0.0)
    g: Series = [_trim(r) for r in g_rows[1 : order + 2]]
    while len(g) < order + 1:
        g.append(np.zeros(1))
    poly_part = _szero(order)
    poly_part[0] = np.array([1.0])
    if p <= order:
        poly_part[p] = _padd(poly_part[p], np.array([-2.0]))
    if 2 * p <= order:
        poly_part[2 * p] = _padd(poly_part[2 * p], np.array([1.0]))
    bracket = _sadd(
        _smul(_smul(inv_DF2, inv_s, order), poly_part, order),
        _smul(inv_DF2, _smul(g, g, order), order),
    )
    one_minus_c2 = _szero(order)
    one_minus_c2[0] = np.array([1.0, 0.0, -1.0])
    return _smul(one_minus_c2, bracket, order)


@lru_cache(maxsize=64)
def expand_series(params: ProblemParams, kind: str, m: int) -> SeriesExpansion:
    """Expansion of kernel E or F to order m with exact polynomial rows.

    Only integer exponent pairs are supported here (the exponent ladder is
    then 0, 1, ..., m+1); the closed-form evaluators accept real pairs.
    """
    if kind not in ("E", "F"):
        raise InvalidArgumentError(f"kind must be 'E' or 'F', got {kind!r}")
    if m < 0:
        raise InvalidArgumentError("order must be nonnegative")
    p, n = params.p, params.n
    if int(p) != p or int(n) != n:
        raise UnsupportedExponentsError(
            f"series expansion needs integer exponents, got p={p}, n={n}"
        )
    _require_positive_pair(params)
    p, n = int(p), int(n)
    depth = m + 1 + _EXTRA_ROWS
    rows = _series_E(p, n, depth) if kind == "E" else _series_F(p, n, depth)
    return SeriesExpansion(
        kind=kind,
        p=p,
        n=n,
        order=m,
        ladder=tuple(range(m + 2)),
        coeffs=tuple(rows[: m + 1]),
        tail=tuple(rows[m + 1 :]),
    )


def remainder_max(
    params: ProblemParams,
    kind: str,
    m: int,
    mu: float,
    cfg: GridMaxConfig = GridMaxConfig(),
) -> float:
    """Box maximum of the order-m remainder over [-1,1] x [0, 1/mu]."""
    if mu <= 1:
        raise OutOfRegimeError(f"factor mu must exceed 1, got {mu}")
    exp = expand_series(params, kind, m)
    res = box_maximize(
        lambda C, X: exp.remainder(C, X), [(-1.0, 1.0), (0.0, 1.0 / mu)], cfg
    )
    return res.value
