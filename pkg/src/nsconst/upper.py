"""Assembled upper bounds for the two sharp constants.

The refined bound combines three ingredients computed elsewhere:

    raw = (2 pi)^(-d/2) * sqrt( max(ball_max, farfield) + tail_delta ),

where ball_max is the scan maximum of the folded sum over |k| < mu rho,
farfield bounds the folded sum beyond mu rho, and tail_delta bounds the
truncation error uniformly in k.  The published value is the roundup of
raw to three significant digits.

The rough closed-form bounds (a power of two times a full zeta value) are
much weaker but survive the large-p limit analysis.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

from .envelopes import EnvelopeConstant, ProblemParams, envelope_max, tail_delta
from .errors import InvalidArgumentError, OutOfRegimeError, PropertyFailureError
from .farfield import FarfieldResult, farfield_detail
from .flatsums import ScanResult, ball_scan, full_sum_oracle_batch, g_flat, k_flat
from .lattice import zeta_full
from .rounding import round_sig

_LOG_DOMAIN_P = 300.0  # beyond this, 2^p work happens on logarithms


@dataclass(frozen=True)
class TruncationConfig:
    """Cutoff rho, factor mu and expansion order m of one bound run."""

    rho: float
    mu: float = 2.0
    m: int = 6

    def __post_init__(self) -> None:
        if self.mu <= 1:
            raise OutOfRegimeError(f"factor mu must exceed 1, got {self.mu}")
        if self.m < 0 or int(self.m) != self.m:
            raise InvalidArgumentError("order m must be a nonnegative integer")

    def validate_for(self, d: int) -> None:
        if self.rho <= 2.0 * math.sqrt(d):
            raise OutOfRegimeError(
                f"cutoff rho must exceed 2*sqrt(d) = {2.0 * math.sqrt(d):.6f}, got {self.rho}"
            )


@dataclass(frozen=True)
class UpperReport:
    """Everything entering one refined upper bound.

    ``farfield`` is the polynomial-part far-field maximum, the quantity the
    published tables list; ``farfield_bound`` additionally carries the
    uniform remainder term and is what the final bound must use (it is the
    larger of the two, so the final is always valid).
    """

    kind: str
    params: ProblemParams
    config: TruncationConfig
    ball_max: float
    ball_argmax: tuple[int, ...]
    points_scanned: int
    farfield: float
    farfield_bound: float
    tail_delta: float
    envelope: EnvelopeConstant
    remainder_bound: float  # V (kind K) or W (kind G)
    tail_sum: float  # Y or Z
    raw_final: float
    final_bound: float  # roundup of raw_final to 3 significant digits
    quality: dict[str, float | bool] = field(default_factory=dict)
    seconds: float = 0.0


def upper_bound(
    kind: str,
    params: ProblemParams,
    cfg: TruncationConfig,
    *,
    threads: int | None = None,
    use_symmetry: bool = True,
) -> UpperReport:
    """Full refined upper-bound pipeline for one exponent pair."""
    params.require_regime(kind)
    cfg.validate_for(params.d)
    t0 = time.monotonic()
    env = envelope_max(params, "B" if kind == "K" else "C")
    delta = tail_delta(params, kind, cfg.rho)
    scan: ScanResult = ball_scan(
        kind, params, cfg.rho, cfg.mu, threads=threads, use_symmetry=use_symmetry
    )
    ff: FarfieldResult = farfield_detail(params, kind, cfg.rho, cfg.mu, cfg.m)
    sup_bound = max(scan.max_value, ff.value) + delta
    raw = (2.0 * math.pi) ** (-params.d / 2.0) * math.sqrt(sup_bound)
    final = round_sig(raw, 3, "up")
    peak = max(scan.max_value, ff.value)
    quality = {
        "farfield_over_ball": ff.value / scan.max_value,
        "delta_over_peak": delta / peak,
        # the approximation is meaningful when the far-field bound does not
        # dwarf the scanned maximum and the tail error is comparatively small
        "farfield_ok": bool(ff.value <= 2.0 * scan.max_value),
        "delta_ok": bool(delta <= peak),
    }
    return UpperReport(
        kind=kind,
        params=params,
        config=cfg,
        ball_max=scan.max_value,
        ball_argmax=scan.argmax,
        points_scanned=scan.points_scanned,
        farfield=ff.poly_max,
        farfield_bound=ff.value,
        tail_delta=delta,
        envelope=env,
        remainder_bound=ff.remainder_bound,
        tail_sum=ff.tail_sum,
        raw_final=raw,
        final_bound=final,
        quality=quality,
        seconds=time.monotonic() - t0,
    )


# -- rough closed-form bounds --------------------------------------------------


def rough_sup_bound_log(kind: str, params: ProblemParams) -> float:
    """log of the crude bound on the sup of the lattice-sum function:
    2^(2p+2) zeta_{2n} for the basic case, 2^(2p) p^2 zeta_{2n-2} for Kato."""
    params.require_regime(kind)
    p, n, d = params.p, params.n, params.d
    if kind == "K":
        return (2.0 * p + 2.0) * math.log(2.0) + math.log(zeta_full(d, 2.0 * n))
    return 2.0 * p * math.log(2.0) + 2.0 * math.log(p) + math.log(zeta_full(d, 2.0 * n - 2.0))


def rough_sup_bound(kind: str, params: ProblemParams) -> float:
    return math.exp(rough_sup_bound_log(kind, params))


def rough_upper_log(kind: str, params: ProblemParams) -> float:
    """log of the rough constant bound: square root of the sup bound over
    (2 pi)^(d/2)."""
    return 0.5 * rough_sup_bound_log(kind, params) - (params.d / 2.0) * math.log(
        2.0 * math.pi
    )


def rough_upper(kind: str, params: ProblemParams) -> float:
    """Rough closed-form upper bound: 2^(p+1) (2 pi)^(-d/2) sqrt(zeta_{2n})
    for the basic constant, 2^p p (2 pi)^(-d/2) sqrt(zeta_{2n-2}) for Kato.

    Evaluated through logarithms once p is large enough for 2^p to matter.
    """
    lg = rough_upper_log(kind, params)
    if params.p > _LOG_DOMAIN_P or lg > 700.0:
        return math.exp(lg)  # may legitimately overflow to inf for huge p
    params.require_regime(kind)
    p, n, d = params.p, params.n, params.d
    pref = (2.0 * math.pi) ** (-d / 2.0)
    if kind == "K":
        return 2.0 ** (p + 1.0) * pref * math.sqrt(zeta_full(d, 2.0 * n))
    return 2.0**p * p * pref * math.sqrt(zeta_full(d, 2.0 * n - 2.0))


def rough_upper_root(kind: str, params: ProblemParams) -> float:
    """(rough bound)^(1/p), always computed in the log domain."""
    return math.exp(rough_upper_log(kind, params) / params.p)


# -- sandwich diagnostics ------------------------------------------------------


@dataclass(frozen=True)
class SandwichRecord:
    kind: str
    rho: float
    big_radius: float
    checked: int
    worst_lower_margin: float  # min over k of oracle - flat (want > 0)
    worst_upper_margin: float  # min over k of flat + delta - oracle (want >= 0)
    strict_lower_checked: bool


def sandwich_check(
    kind: str,
    params: ProblemParams,
    cfg: TruncationConfig,
    samples,
    big_radius: float = 200.0,
) -> SandwichRecord:
    """Verify flat(k) < oracle(k) <= flat(k) + delta on the given k samples.

    The oracle is the unfolded truncation at ``big_radius``.  If the
    configuration is degenerate (big_radius <= rho the oracle cannot exceed
    the flat sum) the strict lower comparison is skipped so that no spurious
    failure is reported.
    """
    samples = [tuple(int(x) for x in k) for k in samples]
    if not samples:
        raise InvalidArgumentError("samples must be nonempty")
    params.require_regime(kind)
    cfg.validate_for(params.d)
    delta = tail_delta(params, kind, cfg.rho)
    flat_fn = k_flat if kind == "K" else g_flat
    flats = [flat_fn(k, params, cfg.rho) for k in samples]
    oracles = full_sum_oracle_batch(kind, samples, params, big_radius)
    strict = big_radius > cfg.rho
    worst_lo = math.inf
    worst_hi = math.inf
    for k, f, o in zip(samples, flats, oracles):
        lo = o - f
        hi = f + delta - o
        worst_lo = min(worst_lo, lo)
        worst_hi = min(worst_hi, hi)
        if strict and lo <= 0.0:
            raise PropertyFailureError(
                f"sandwich violated at k={k}: oracle {o} not above flat {f}"
            )
        if hi < 0.0:
            raise PropertyFailureError(
                f"sandwich violated at k={k}: oracle {o} exceeds flat + delta {f + delta}"
            )
    return SandwichRecord(
        kind=kind,
        rho=cfg.rho,
        big_radius=big_radius,
        checked=len(samples),
        worst_lower_margin=worst_lo,
        worst_upper_margin=worst_hi,
        strict_lower_checked=strict,
    )
