"""Envelope functions controlling the lattice-sum truncation error.

Two continuous envelopes on [0,4] x [0,1] bound the normalized summands of
the two sharp-constant lattice sums from above.  Their box maxima (B for
the basic inequality, C for the Kato one) multiply a closed-form zeta tail
bound to give the truncation constants delta_K and delta_G.

For interior u the envelopes are evaluated in an algebraically reduced form
that avoids the 0/0 cancellations of the raw display and is numerically
stable all the way to the endpoints.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import InvalidArgumentError, OutOfRegimeError
from .gridmax import GridMaxConfig, GridMaxResult, box_maximize
from .lattice import zeta_tail_bound


@dataclass(frozen=True)
class ProblemParams:
    """Exponent pair (p, n) and dimension d, with p >= n and d >= 2."""

    p: float
    n: float
    d: int

    def __post_init__(self) -> None:
        if int(self.d) != self.d or self.d < 2:
            raise InvalidArgumentError(f"dimension must be an integer >= 2, got {self.d}")
        if not (self.p >= self.n):
            raise OutOfRegimeError(f"need p >= n, got p={self.p}, n={self.n}")

    @property
    def delta_pn(self) -> int:
        """Kronecker delta of p and n (exact comparison)."""
        return 1 if self.p == self.n else 0

    def require_regime(self, kind: str) -> None:
        """Validate n > d/2 (kind 'K') or n > d/2 + 1 (kind 'G')."""
        if kind == "K":
            if not self.n > self.d / 2:
                raise OutOfRegimeError(f"K-regime needs n > d/2, got n={self.n}, d={self.d}")
        elif kind == "G":
            if not self.n > self.d / 2 + 1:
                raise OutOfRegimeError(f"G-regime needs n > d/2 + 1, got n={self.n}, d={self.d}")
        else:
            raise InvalidArgumentError(f"kind must be 'K' or 'G', got {kind!r}")


@dataclass(frozen=True)
class EnvelopeConstant:
    """Numerically computed box maximum of one envelope."""

    kind: str  # "B" or "C"
    value: float
    argmax: tuple[float, float]
    grid_resolution: tuple[float, float]
    conjecture: float | None = None  # closed-form candidate for B, cross-check only
    conjecture_gap: float | None = None


def _check_box(z, u) -> None:
    z = np.asarray(z, dtype=float)
    u = np.asarray(u, dtype=float)
    if np.any(z < 0) or np.any(z > 4) or np.any(u < 0) or np.any(u > 1):
        raise InvalidArgumentError("(z, u) must lie in [0,4] x [0,1]")


def _require_pn(params: ProblemParams) -> None:
    if not (params.p >= params.n > 1):
        raise OutOfRegimeError(f"envelopes need p >= n > 1, got p={params.p}, n={params.n}")


def _envelope_b_arrays(params: ProblemParams, z: np.ndarray, u: np.ndarray) -> np.ndarray:
    p, n = params.p, params.n
    endpoint = 2.0 * z * (4.0 - z) / (1.0 + 3.0 * params.delta_pn)
    with np.errstate(divide="ignore", invalid="ignore"):
        omu = 1.0 - u
        core = 1.0 - z * u + z * u * u
        denom = (omu ** (2 * n) + u ** (2 * n)) * (omu ** (p - n) + u ** (p - n)) ** 2
        inner = 2.0 * z * (4.0 - z) * core**p / denom
    return np.where((u == 0.0) | (u == 1.0), endpoint, inner)


def _envelope_c_arrays(params: ProblemParams, z: np.ndarray, u: np.ndarray) -> np.ndarray:
    p, n = params.p, params.n
    dp = params.delta_pn
    end0 = p * p * z * (4.0 - z) * (2.0 - z) ** 2 / (2.0 * (1.0 + 3.0 * dp))
    end1 = 2.0 * z * (4.0 - z) / (1.0 + 3.0 * dp)
    with np.errstate(divide="ignore", invalid="ignore"):
        omu = 1.0 - u
        core = 1.0 - z * u + z * u * u
        diff = core ** (p / 2.0) - omu**p
        denom = (
            u * u
            * (omu ** (2 * n - 2) + u ** (2 * n - 2))
            * (omu ** (p - n) + u ** (p - n)) ** 2
        )
        inner = 2.0 * z * (4.0 - z) * diff * diff / denom
    return np.where(u == 0.0, end0, np.where(u == 1.0, end1, inner))


def envelope_b(params: ProblemParams, z, u):
    """Envelope of the basic-inequality summand on [0,4] x [0,1]."""
    _require_pn(params)
    _check_box(z, u)
    out = _envelope_b_arrays(params, np.asarray(z, dtype=float), np.asarray(u, dtype=float))
    return float(out) if np.isscalar(z) and np.isscalar(u) else out


def envelope_c(params: ProblemParams, z, u):
    """Envelope of the Kato-inequality summand on [0,4] x [0,1]."""
    _require_pn(params)
    _check_box(z, u)
    out = _envelope_c_arrays(params, np.asarray(z, dtype=float), np.asarray(u, dtype=float))
    return float(out) if np.isscalar(z) and np.isscalar(u) else out


def b_conjecture_value(p: float) -> float:
    """Closed-form candidate for the B maximum: the critical value at
    z = 4/(p+2), u = 1/2.  Verified numerically case by case, never used
    in place of the grid maximum."""
    return 4.0 ** (p + 1) / (p + 2) * ((p + 1) / (p + 2)) ** (p + 1)


@lru_cache(maxsize=128)
def envelope_max(
    params: ProblemParams, kind: str, cfg: GridMaxConfig = GridMaxConfig()
) -> EnvelopeConstant:
    """Grid-plus-refinement maximum of one envelope over [0,4] x [0,1]."""
    _require_pn(params)
    if kind not in ("B", "C"):
        raise InvalidArgumentError(f"kind must be 'B' or 'C', got {kind!r}")
    fn = _envelope_b_arrays if kind == "B" else _envelope_c_arrays
    res: GridMaxResult = box_maximize(
        lambda Z, U: fn(params, Z, U), [(0.0, 4.0), (0.0, 1.0)], cfg
    )
    conj = gap = None
    if kind == "B":
        conj = b_conjecture_value(params.p)
        gap = abs(res.value - conj) / conj
    return EnvelopeConstant(
        kind=kind,
        value=res.value,
        argmax=(res.argmax[0], res.argmax[1]),
        grid_resolution=(res.resolution[0], res.resolution[1]),
        conjecture=conj,
        conjecture_gap=gap,
    )


def tail_delta(params: ProblemParams, kind: str, rho: float) -> float:
    """Truncation-error constant delta_K (kind 'K') or delta_G (kind 'G').

    Both are an envelope maximum times the closed-form zeta tail bound: the
    K constant pairs B with the tail of exponent 2n, the G constant pairs C
    with the tail of exponent 2n - 2.
    """
    if kind not in ("K", "G"):
        raise InvalidArgumentError(f"kind must be 'K' or 'G', got {kind!r}")
    params.require_regime(kind)
    if rho <= 2.0 * math.sqrt(params.d):
        raise OutOfRegimeError(f"need rho > 2*sqrt(d), got rho={rho}")
    if kind == "K":
        env = envelope_max(params, "B")
        return env.value * zeta_tail_bound(params.d, 2.0 * params.n, rho)
    env = envelope_max(params, "C")
    return env.value * zeta_tail_bound(params.d, 2.0 * params.n - 2.0, rho)
