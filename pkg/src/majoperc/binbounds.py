"""Exact binomial probabilities and the binomial bound toolkit.

Two groups of bounds live here.

* Finite-n bounds that hold as stated: the Bollobás pointwise lower and upper
  bounds on ``P(B(n,p) = k)`` and Bernstein's tail inequality.  These are
  checked against the exact oracles with zero tolerance in direction.
* Leading-form bounds whose statements carry ``o(1)`` terms: cumulative upper
  and lower bounds, and the two-binomial sum and point-mass bounds.  They are
  evaluated with every ``o(1)`` set to zero and reported with a signed slack;
  no direction is claimed at finite n.

Every probability is accumulated in log space with a max shift, and tails are
summed from the small end.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

import numpy as np

from .graph import Graph, VertexSet, set_edge_counts
from .rng import make_rng

__all__ = [
    "BoundDomainError",
    "BinomialSpec",
    "TwoBinomialSpec",
    "BoundKind",
    "BoundReport",
    "binom_log_pmf_array",
    "binom_pmf_array",
    "binom_pmf_exact",
    "binom_tail_exact",
    "two_binom_compare_exact",
    "diff_point_mass_phi",
    "bollobas_pmf_lower",
    "bollobas_pmf_upper",
    "bernstein_tail",
    "asymptotic_bound_eval",
    "bound_report",
    "logconcavity_check",
    "convolve_pmfs",
    "difference_pmf",
    "sweep_bollobas_lower",
    "sweep_bollobas_upper",
    "sweep_bernstein",
    "run_sweep",
    "write_reports_csv",
    "EdgeCheck",
    "EdgeAuditReport",
    "audit_edge_bounds",
]

_LOG_2PI = math.log(2.0 * math.pi)


class BoundDomainError(ValueError):
    """A bound was asked for outside the region its statement covers."""


@dataclass(frozen=True)
class BinomialSpec:
    n: int
    p: float

    def __post_init__(self):
        if self.n < 0 or int(self.n) != self.n:
            raise ValueError(f"n must be a non-negative integer, got {self.n}")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"p must lie in [0, 1], got {self.p}")

    @property
    def q(self) -> float:
        return 1.0 - self.p

    @property
    def mean(self) -> float:
        return self.n * self.p

    @property
    def variance(self) -> float:
        return self.n * self.p * (1.0 - self.p)


@dataclass(frozen=True)
class TwoBinomialSpec:
    """``X1 = B(N-S, p)`` and ``X2 = B(N+S-T, .)``; trial counts rounded to
    the nearest integer."""

    capital_n: float
    s: float
    t_shift: float
    p: float

    def __post_init__(self):
        if not 0.0 < self.p < 1.0:
            raise ValueError(f"p must lie in (0, 1), got {self.p}")
        if self.n1 < 0 or self.n2 < 0:
            raise ValueError(f"trial counts N-S={self.n1}, N+S-T={self.n2} must be non-negative")

    @property
    def n1(self) -> int:
        return int(math.floor(self.capital_n - self.s + 0.5))

    @property
    def n2(self) -> int:
        return int(math.floor(self.capital_n + self.s - self.t_shift + 0.5))


# ----------------------------------------------------------------- exact pmf

def _stirlerr_small_table() -> np.ndarray:
    out = np.zeros(16)
    for k in range(1, 16):
        out[k] = math.lgamma(k + 1.0) - (k + 0.5) * math.log(k) + k - 0.5 * _LOG_2PI
    return out


_STIRLERR_SMALL = _stirlerr_small_table()


def _stirlerr(k: np.ndarray) -> np.ndarray:
    """``log(k!) - log(sqrt(2 pi k) (k/e)^k)`` for integer ``k >= 1``."""
    k = np.asarray(k, dtype=float)
    out = np.empty_like(k)
    small = k <= 15
    out[small] = _STIRLERR_SMALL[k[small].astype(np.int64)]
    kk = k[~small]
    k2 = kk * kk
    out[~small] = (1 / 12 - (1 / 360 - (1 / 1260 - (1 / 1680 - 1 / (1188 * k2)) / k2) / k2) / k2) / kk
    return out


def _bd0(x: np.ndarray, m: float | np.ndarray) -> np.ndarray:
    """``x log(x/m) + m - x`` without cancellation near ``x = m``."""
    x = np.asarray(x, dtype=float)
    m = np.broadcast_to(np.asarray(m, dtype=float), x.shape)
    out = np.empty_like(x)
    near = np.abs(x - m) < 0.1 * (x + m)
    far = ~near
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        out[far] = x[far] * np.log(x[far] / m[far]) + m[far] - x[far]
    if near.any():
        xn, mn = x[near], m[near]
        v = (xn - mn) / (xn + mn)
        s = (xn - mn) * v
        ej = 2.0 * xn * v
        v2 = v * v
        j = 1
        while True:
            ej = ej * v2
            s_new = s + ej / (2 * j + 1)
            if np.all(s_new == s):
                break
            s = s_new
            j += 1
        out[near] = s
    return out


def _log_pmf(n: int, p: float, k: np.ndarray) -> np.ndarray:
    k = np.asarray(k, dtype=np.int64)
    out = np.full(k.shape, -np.inf)
    if p == 0.0:
        out[k == 0] = 0.0
        return out
    if p == 1.0:
        out[k == n] = 0.0
        return out
    q = 1.0 - p
    out[k == 0] = n * math.log1p(-p)
    out[k == n] = n * math.log(p)
    mid = (k > 0) & (k < n)
    if mid.any():
        km = k[mid].astype(float)
        rest = n - km
        se = _stirlerr(np.array([n]))[0]
        out[mid] = (se - _stirlerr(km) - _stirlerr(rest)
                    - _bd0(km, n * p) - _bd0(rest, n * q)
                    + 0.5 * (np.log(n) - _LOG_2PI - np.log(km) - np.log(rest)))
    return out


@lru_cache(maxsize=64)
def _cached_log_pmf(n: int, p: float) -> np.ndarray:
    arr = _log_pmf(n, p, np.arange(n + 1))
    arr.flags.writeable = False
    return arr


def binom_log_pmf_array(spec: BinomialSpec) -> np.ndarray:
    """``log P(B(n,p) = k)`` for ``k = 0..n`` (read-only, cached)."""
    return _cached_log_pmf(int(spec.n), float(spec.p))


def binom_pmf_array(spec: BinomialSpec) -> np.ndarray:
    return np.exp(binom_log_pmf_array(spec))


def _check_k(spec: BinomialSpec, k: int):
    if not 0 <= k <= spec.n:
        raise ValueError(f"k={k} outside [0, {spec.n}]")


def binom_pmf_exact(spec: BinomialSpec, k: int) -> float:
    _check_k(spec, k)
    return float(np.exp(_log_pmf(spec.n, spec.p, np.array([k]))[0]))


def _log_sum(lp: np.ndarray) -> float:
    if lp.size == 0:
        return -math.inf
    mx = float(lp.max())
    if mx == -math.inf:
        return -math.inf
    return mx + math.log(math.fsum(np.exp(lp - mx)))


def binom_tail_exact(spec: BinomialSpec, k: int, direction: str = ">=") -> float:
    """``P(B(n,p) >= k)`` or ``P(B(n,p) <= k)``."""
    if direction not in (">=", "<="):
        raise ValueError(f"direction must be '>=' or '<=', got {direction!r}")
    _check_k(spec, k)
    lp = binom_log_pmf_array(spec)
    cut = k if direction == ">=" else k + 1     # requested side is lp[cut:] or lp[:cut]
    upper = math.exp(_log_sum(lp[cut:]))
    lower = math.exp(_log_sum(lp[:cut]))
    if direction == ">=":
        return upper if upper <= lower else 1.0 - lower
    return lower if lower <= upper else 1.0 - upper


def _log_upper_tails(spec: BinomialSpec) -> np.ndarray:
    """``log P(B >= k)`` for ``k = 0..n+1``."""
    lp = binom_log_pmf_array(spec)
    rev = np.logaddexp.accumulate(lp[::-1])[::-1]
    return np.append(rev, -np.inf)


# ----------------------------------------------------------- two binomials

def two_binom_compare_exact(m1: BinomialSpec, m2: BinomialSpec, k: int, mode: str = ">=") -> float:
    """``P(X1 >= X2 + k)`` or ``P(X1 = X2 + k)`` for independent ``X1 ~ m1``,
    ``X2 ~ m2``, by direct convolution over the shorter support."""
    if mode not in (">=", "="):
        raise ValueError(f"mode must be '>=' or '=', got {mode!r}")
    k = int(k)
    f1, f2 = binom_pmf_array(m1), binom_pmf_array(m2)
    n1, n2 = m1.n, m2.n
    if mode == "=":
        # sum_j f2[j] f1[j + k] over j with 0 <= j <= n2 and 0 <= j + k <= n1
        lo, hi = max(0, -k), min(n2, n1 - k)
        if lo > hi:
            return 0.0
        return float(math.fsum(f2[lo:hi + 1] * f1[lo + k:hi + k + 1]))
    if n2 <= n1:
        # sum over X2 = j of f2[j] * P(X1 >= j + k)
        surv1 = np.append(np.cumsum(f1[::-1])[::-1], 0.0)
        idx = np.arange(n2 + 1) + k
        vals = np.where(idx <= 0, 1.0, surv1[np.clip(idx, 0, n1 + 1)])
        return float(min(1.0, math.fsum(f2 * vals)))
    # sum over X1 = i of f1[i] * P(X2 <= i - k)
    cdf2 = np.cumsum(f2)
    idx = np.arange(n1 + 1) - k
    vals = np.where(idx >= n2, 1.0, np.where(idx < 0, 0.0, cdf2[np.clip(idx, 0, n2)]))
    return float(min(1.0, math.fsum(f1 * vals)))


def diff_point_mass_phi(spec: TwoBinomialSpec, k: int | None = None) -> float:
    """``P(Z1 = Z2 + k)`` for ``Z1 = B(N-S, p)``, ``Z2 = B(N+S-T, p)`` written
    as the sum over ``i`` of the product term

        C(N-S, j) C(N+S-T, j-k) p^(2j-k) (1-p)^(n1+n2-2j+k),  j = Z1,

    evaluated with log-gamma.  ``k`` defaults to ``round(pT)``.  An
    independent route to the same number as ``two_binom_compare_exact(..., '=')``.
    """
    p = spec.p
    n1, n2 = spec.n1, spec.n2
    if k is None:
        k = int(math.floor(p * spec.t_shift + 0.5))
    j = np.arange(max(0, k), min(n1, n2 + k) + 1, dtype=float)
    if j.size == 0:
        return 0.0
    lg = np.vectorize(math.lgamma)
    logc = (math.lgamma(n1 + 1) - lg(j + 1) - lg(n1 - j + 1)
            + math.lgamma(n2 + 1) - lg(j - k + 1) - lg(n2 - j + k + 1))
    logterm = logc + (2 * j - k) * math.log(p) + (n1 + n2 - 2 * j + k) * math.log1p(-p)
    return math.exp(_log_sum(logterm))


# ------------------------------------------------------------- finite bounds

def _require(conditions: dict[str, bool], what: str):
    failed = [name for name, ok in conditions.items() if not ok]
    if failed:
        raise BoundDomainError(f"{what}: precondition(s) violated: {', '.join(failed)}")


def _bollobas_lower_conditions(n, p, k):
    h = k - p * n
    return {"pn_ge_1": p * n >= 1.0, "k_lt_n": k < n, "h_gt_0": h > 0}


def _bollobas_lower_log(n, p, k):
    q = 1.0 - p
    h = k - p * n
    beta = 1.0 / (12.0 * k) + 1.0 / (12.0 * (n - k))
    return (-0.5 * (_LOG_2PI + np.log(p * q * n))
            - h ** 2 / (2 * p * q * n) - h ** 3 / (2 * q ** 2 * n ** 2)
            - h ** 4 / (3 * p ** 3 * n ** 3) - h / (2 * p * n) - beta)


def bollobas_pmf_lower(spec: BinomialSpec, k: int) -> float:
    """Lower bound on ``P(B(n,p) = k)`` for ``k = pn + h``, ``h > 0``, ``k < n``,
    ``pn >= 1`` (classical local-limit estimate)."""
    n, p = spec.n, spec.p
    _require(_bollobas_lower_conditions(n, p, k), "bollobas_pmf_lower")
    return float(np.exp(_bollobas_lower_log(n, p, float(k))))


def _h_tol(h):
    return 1e-12 * max(1.0, abs(h))


def _bollobas_upper_conditions(n, p, k, h):
    return {
        "pn_ge_1": p * n >= 1.0,
        "k_ge_pn_plus_h": k - p * n >= h - _h_tol(h),
        "h_qn_ge_3": h * (1.0 - p) * n >= 3.0,
    }


def _bollobas_upper_log(n, p, h):
    q = 1.0 - p
    return (-0.5 * (_LOG_2PI + np.log(p * q * n))
            - h ** 2 / (2 * p * q * n) + h ** 3 / (p ** 2 * n ** 2) + h / (q * n))


def bollobas_pmf_upper(spec: BinomialSpec, k: int, h: float) -> float:
    """Upper bound on ``P(B(n,p) = k)`` valid for every ``k >= pn + h`` when
    ``h(1-p)n >= 3`` and ``pn >= 1`` (classical local-limit estimate)."""
    n, p = spec.n, spec.p
    _require(_bollobas_upper_conditions(n, p, k, h), "bollobas_pmf_upper")
    return float(np.exp(_bollobas_upper_log(n, p, h)))


def bernstein_tail(sum_var: float, m_bound: float, t: float) -> float:
    """``exp(-t^2 / (2 sum_var + 2 M t / 3))`` bounding ``P(sum X_i > t)`` for
    independent zero-mean ``|X_i| <= M``."""
    if not t > 0:
        raise BoundDomainError(f"bernstein_tail needs t > 0, got {t}")
    if sum_var < 0:
        raise BoundDomainError(f"bernstein_tail needs sum_var >= 0, got {sum_var}")
    if not m_bound > 0:
        raise BoundDomainError(f"bernstein_tail needs M > 0, got {m_bound}")
    return math.exp(_bernstein_log(sum_var, m_bound, t))


def _bernstein_log(sum_var, m_bound, t):
    return -t * t / (2.0 * sum_var + 2.0 * m_bound * t / 3.0)


# --------------------------------------------------------- leading-form bounds

class BoundKind(str, Enum):
    BOLLOBAS_PMF_LOWER = "bollobas_pmf_lower"
    BOLLOBAS_PMF_UPPER = "bollobas_pmf_upper"
    BERNSTEIN_TAIL = "bernstein_tail"
    CUM_UPPER = "cum_upper"
    CUM_LOWER = "cum_lower"
    TWOBINOM_LOWER = "twobinom_lower"
    TWOBINOM_UPPER = "twobinom_upper"
    TWOBINOM_DIFF_UPPER = "twobinom_diff_upper"

    @property
    def is_upper(self) -> bool:
        return self not in (BoundKind.BOLLOBAS_PMF_LOWER, BoundKind.CUM_LOWER, BoundKind.TWOBINOM_LOWER)

    @property
    def is_asymptotic(self) -> bool:
        return self not in (BoundKind.BOLLOBAS_PMF_LOWER, BoundKind.BOLLOBAS_PMF_UPPER, BoundKind.BERNSTEIN_TAIL)


ASYMPTOTIC_KINDS = tuple(k for k in BoundKind if k.is_asymptotic)


def _positive(name, value):
    if not value > 0:
        raise BoundDomainError(f"{name} must be positive, got {value}")


def _cum_validity(n, p, h):
    var = p * (1 - p) * n
    return {"h_gt_0": h > 0, "h_le_var_two_thirds": h <= var ** (2 / 3)}


def _twobinom_validity(capital_n, s, h, p):
    var = p * (1 - p) * capital_n
    return {
        "h_gt_2sqrt_2var": h > 2.0 * math.sqrt(2.0 * var),
        "h_le_var_two_thirds": h <= var ** (2 / 3),
        "hS_lt_N_sd": abs(h * s) < capital_n * math.sqrt(var),
    }


def _diff_validity(capital_n, s, t_shift, p):
    var = p * (1 - p) * capital_n
    return {
        "pS_gt_sd": p * s > math.sqrt(var),
        "pS_le_var_two_thirds": p * s <= var ** (2 / 3),
        "T_small": abs(t_shift) <= 0.1 * capital_n,
    }


def asymptotic_bound_eval(kind: BoundKind | str, **params) -> float:
    """Evaluate a leading-form bound with its ``o(1)`` terms set to zero.

    Parameters by kind: ``cum_upper``/``cum_lower`` take ``n, p, h``;
    ``twobinom_lower``/``twobinom_upper`` take ``capital_n, s, h, p``;
    ``twobinom_diff_upper`` takes ``capital_n, s, t_shift, p``.
    """
    kind = BoundKind(kind)
    if not kind.is_asymptotic:
        raise ValueError(f"{kind.value} is a finite-n bound; call it directly")
    p = params["p"]
    if not 0 < p < 1:
        raise BoundDomainError(f"p must lie in (0, 1), got {p}")
    if kind in (BoundKind.CUM_UPPER, BoundKind.CUM_LOWER):
        n, h = params["n"], params["h"]
        _positive("h", h)
        var = p * (1 - p) * n
        _positive("p(1-p)n", var)
        val = math.sqrt(var) / (math.sqrt(2 * math.pi) * h) * math.exp(-h * h / (2 * var))
        return val if kind is BoundKind.CUM_UPPER else val * math.exp(-1.5)
    big_n, s = params["capital_n"], params["s"]
    var = p * (1 - p) * big_n
    _positive("p(1-p)N", var)
    if kind is BoundKind.TWOBINOM_DIFF_UPPER:
        t_shift = params["t_shift"]
        _positive("S", s)
        if not 2 * big_n - t_shift > 0:
            raise BoundDomainError(f"2N - T must be positive, got {2 * big_n - t_shift}")
        q = 1 - p
        first = s / (2 * math.pi * q * big_n) * math.exp(-2 * p * s * s / (q * (2 * big_n - t_shift)))
        second = 3 / (math.pi * p * s) * math.exp(-9 * p * s * s / (8 * q * big_n))
        return first + second
    h = params["h"]
    _positive("h", h)
    lead = math.sqrt(2 * var) / h * math.exp(-h * h / (4 * var))
    if kind is BoundKind.TWOBINOM_LOWER:
        return lead / (2 * math.pi) * math.exp(-4)
    return lead * math.exp(3)


# ----------------------------------------------------------------- reports

@dataclass(frozen=True)
class BoundReport:
    """One bound evaluated next to its exact oracle.

    ``slack`` is signed so that a non-negative value means the inequality
    holds: ``bound - exact`` for upper bounds, ``exact - bound`` for lower
    bounds.  ``log_slack`` is the same comparison on a log scale, which stays
    meaningful when both sides underflow.
    """

    bound_id: str
    params: dict
    bound_value: float
    exact_value: float
    slack: float
    validity: dict
    asymptotic: bool
    log_slack: float = field(default=math.nan)

    @property
    def valid(self) -> bool:
        return all(self.validity.values())

    @property
    def violated(self) -> bool:
        """Direction fails beyond a relative numerical slack of 1e-12."""
        return self.log_slack < -1e-12


def _make_report(kind: BoundKind, params, log_bound, log_exact, validity) -> BoundReport:
    bound, exact = _safe_exp(log_bound), _safe_exp(log_exact)
    if kind.is_upper:
        slack, log_slack = bound - exact, log_bound - log_exact
    else:
        slack, log_slack = exact - bound, log_exact - log_bound
    if math.isnan(log_slack):   # both sides zero
        log_slack = 0.0
    return BoundReport(kind.value, dict(params), bound, exact, slack,
                       {k: bool(v) for k, v in validity.items()}, kind.is_asymptotic, log_slack)


def _safe_exp(x: float) -> float:
    return math.inf if x > 709.0 else math.exp(x)


def _safe_log(x: float) -> float:
    return math.log(x) if x > 0 else -math.inf


def _two_binom_sum_tail(spec: TwoBinomialSpec, h: float) -> float:
    """``P(X1 + X2 >= mu1 + mu2 + h)``, ``X1 = B(n1, p)``, ``X2 = B(n2, 1-p)``."""
    n1, n2, p = spec.n1, spec.n2, spec.p
    c = n1 * p + n2 * (1 - p) + h
    # X2 = n2 - Y with Y ~ B(n2, p): X1 - Y >= c - n2
    k = math.ceil(c - n2 - 1e-9)
    return two_binom_compare_exact(BinomialSpec(n1, p), BinomialSpec(n2, p), k, ">=")


def bound_report(kind: BoundKind | str, **params) -> BoundReport:
    """Evaluate ``kind`` at ``params`` and compare it with the exact value."""
    kind = BoundKind(kind)
    if kind is BoundKind.BOLLOBAS_PMF_LOWER:
        n, p, k = params["n"], params["p"], params["k"]
        spec = BinomialSpec(n, p)
        val = _bollobas_lower_conditions(n, p, k)
        return _make_report(kind, params, float(_bollobas_lower_log(n, p, float(k))),
                            float(binom_log_pmf_array(spec)[k]), val)
    if kind is BoundKind.BOLLOBAS_PMF_UPPER:
        n, p, k, h = params["n"], params["p"], params["k"], params["h"]
        spec = BinomialSpec(n, p)
        val = _bollobas_upper_conditions(n, p, k, h)
        return _make_report(kind, params, float(_bollobas_upper_log(n, p, h)),
                            float(binom_log_pmf_array(spec)[k]), val)
    if kind is BoundKind.BERNSTEIN_TAIL:
        n, p, t = params["n"], params["p"], params["t"]
        spec = BinomialSpec(n, p)
        bernstein_tail(spec.variance, max(p, 1 - p), t)     # domain checks
        log_bound = _bernstein_log(spec.variance, max(p, 1 - p), t)
        kk = math.floor(n * p + t + 1e-9) + 1      # B - np > t  <=>  B >= kk
        log_exact = float(_log_upper_tails(spec)[min(max(kk, 0), n + 1)])
        return _make_report(kind, params, log_bound, log_exact, {"t_gt_0": t > 0})
    if kind in (BoundKind.CUM_UPPER, BoundKind.CUM_LOWER):
        n, p, h = params["n"], params["p"], params["h"]
        spec = BinomialSpec(n, p)
        validity = _cum_validity(n, p, h)
        if kind is BoundKind.CUM_LOWER:
            validity["h_gt_sd"] = h > math.sqrt(spec.variance)
        bound = asymptotic_bound_eval(kind, **params)
        kk = math.ceil(n * p + h - 1e-9)
        log_exact = float(_log_upper_tails(spec)[min(max(kk, 0), n + 1)])
        return _make_report(kind, params, _safe_log(bound), log_exact, validity)
    if kind in (BoundKind.TWOBINOM_LOWER, BoundKind.TWOBINOM_UPPER):
        big_n, s, h, p = params["capital_n"], params["s"], params["h"], params["p"]
        spec = TwoBinomialSpec(big_n, s, 0.0, p)
        validity = _twobinom_validity(big_n, s, h, p)
        bound = asymptotic_bound_eval(kind, **params)
        exact = _two_binom_sum_tail(spec, h)
        full = dict(params, n1=spec.n1, n2=spec.n2)
        return _make_report(kind, full, _safe_log(bound), _safe_log(exact), validity)
    big_n, s, t_shift, p = params["capital_n"], params["s"], params["t_shift"], params["p"]
    spec = TwoBinomialSpec(big_n, s, t_shift, p)
    shift = int(math.floor(p * t_shift + 0.5))
    bound = asymptotic_bound_eval(kind, **params)
    exact = two_binom_compare_exact(BinomialSpec(spec.n1, p), BinomialSpec(spec.n2, p), shift, "=")
    full = dict(params, n1=spec.n1, n2=spec.n2, pT_rounded=shift)
    return _make_report(kind, full, _safe_log(bound), _safe_log(exact), _diff_validity(big_n, s, t_shift, p))


# ------------------------------------------------------------- log-concavity

def _check_pmf(pmf) -> np.ndarray:
    f = np.asarray(pmf, dtype=float)
    if f.ndim != 1 or f.size == 0:
        raise ValueError("pmf must be a non-empty one-dimensional sequence")
    if np.any(f < 0) or not np.all(np.isfinite(f)):
        raise ValueError("pmf entries must be finite and non-negative")
    if abs(math.fsum(f) - 1.0) > 1e-9:
        raise ValueError(f"pmf must sum to 1 within 1e-9, sums to {math.fsum(f)!r}")
    return f


def logconcavity_check(pmf: Sequence[float], cumulative: bool = False, atol: float = 1e-12) -> bool:
    """``f(k-1) f(k+1) <= f(k)^2`` at every interior ``k``.

    With ``cumulative=True`` the same test runs on the distribution function
    ``F(k) = P(X <= k)``.
    """
    f = _check_pmf(pmf)
    if cumulative:
        f = np.minimum(np.cumsum(f), 1.0)
    if f.size < 3:
        return True
    return bool(np.all(f[:-2] * f[2:] <= f[1:-1] ** 2 + atol))


def convolve_pmfs(*pmfs: Sequence[float]) -> np.ndarray:
    """Distribution of a sum of independent variables on ``0, 1, ...``."""
    out = np.array([1.0])
    for f in pmfs:
        out = np.convolve(out, np.asarray(f, dtype=float))
    return out


def difference_pmf(pmf1: Sequence[float], pmf2: Sequence[float]) -> np.ndarray:
    """Distribution of ``X1 - X2 + n2`` (support shifted to start at 0)."""
    return np.convolve(np.asarray(pmf1, dtype=float), np.asarray(pmf2, dtype=float)[::-1])


# ------------------------------------------------------------------ sweeps

DEFAULT_SWEEP_N = (10, 20, 50, 100, 200, 500, 1000, 2000, 5000, 10000)
DEFAULT_SWEEP_P = (0.01, 0.05, 0.1, 0.2, 0.3, 0.5, 0.7, 0.9, 0.99)


def _thin(values: np.ndarray, cap: int | None) -> np.ndarray:
    if cap is None or values.size <= cap:
        return values
    return values[np.unique(np.linspace(0, values.size - 1, cap).round().astype(np.int64))]


def sweep_bollobas_lower(n_values=DEFAULT_SWEEP_N, p_values=DEFAULT_SWEEP_P,
                         max_per_cell: int | None = None) -> Iterator[BoundReport]:
    """Every integer ``k`` with ``pn < k < n`` for each ``(n, p)`` with ``pn >= 1``."""
    kind = BoundKind.BOLLOBAS_PMF_LOWER
    for n in n_values:
        for p in p_values:
            if p * n < 1:
                continue
            lp = binom_log_pmf_array(BinomialSpec(n, p))
            ks = np.arange(math.floor(p * n) + 1, n)
            ks = _thin(ks[ks - p * n > 0], max_per_cell)
            logs = _bollobas_lower_log(n, p, ks.astype(float))
            for k, lb in zip(ks.tolist(), logs.tolist()):
                yield _make_report(kind, {"n": n, "p": p, "k": k}, lb, float(lp[k]),
                                   _bollobas_lower_conditions(n, p, k))


def sweep_bollobas_upper(n_values=DEFAULT_SWEEP_N, p_values=DEFAULT_SWEEP_P,
                         h_fractions=(1.0, 0.75, 0.5, 0.25), max_per_cell: int | None = None
                         ) -> Iterator[BoundReport]:
    """Pairs ``(k, h)`` with ``h = f (k - pn)`` for ``f`` in ``h_fractions``,
    kept when ``h (1-p) n >= 3``; ``k`` ranges over all of ``(pn, n]``."""
    kind = BoundKind.BOLLOBAS_PMF_UPPER
    for n in n_values:
        for p in p_values:
            if p * n < 1:
                continue
            lp = binom_log_pmf_array(BinomialSpec(n, p))
            h_min = 3.0 / ((1 - p) * n)
            ks = np.arange(math.floor(p * n) + 1, n + 1)
            ks = _thin(ks[ks - p * n >= h_min], max_per_cell)
            for f in h_fractions:
                hs = f * (ks - p * n)
                keep = hs * (1 - p) * n >= 3.0
                logs = _bollobas_upper_log(n, p, hs[keep])
                for k, h, ub in zip(ks[keep].tolist(), hs[keep].tolist(), logs.tolist()):
                    yield _make_report(kind, {"n": n, "p": p, "k": k, "h": h}, ub, float(lp[k]),
                                       _bollobas_upper_conditions(n, p, k, h))


def sweep_bernstein(n_values=DEFAULT_SWEEP_N, p_values=DEFAULT_SWEEP_P,
                    sd_multiples=(0.05, 0.1, 0.25, 0.5, 1, 1.5, 2, 3, 4, 6, 8, 12),
                    extra_fractions=(0.25, 0.5, 0.9)) -> Iterator[BoundReport]:
    """``t`` at multiples of the standard deviation plus fractions of the
    distance ``n(1-p)`` to the top of the support."""
    kind = BoundKind.BERNSTEIN_TAIL
    for n in n_values:
        for p in p_values:
            spec = BinomialSpec(n, p)
            tails = _log_upper_tails(spec)
            sd = math.sqrt(spec.variance)
            ts = [c * sd for c in sd_multiples] + [f * n * (1 - p) for f in extra_fractions]
            log_b = [_bernstein_log(spec.variance, max(p, 1 - p), t) for t in ts]
            for t, lb in zip(ts, log_b):
                kk = math.floor(n * p + t + 1e-9) + 1
                yield _make_report(kind, {"n": n, "p": p, "t": t}, lb,
                                   float(tails[min(max(kk, 0), n + 1)]), {"t_gt_0": t > 0})


def _sweep_cum(kind, n_values=(100, 1000, 10000), p_values=(0.1, 0.3, 0.5),
               sd_multiples=(0.5, 1.0, 1.5, 2.0, 3.0)):
    for n in n_values:
        for p in p_values:
            sd = math.sqrt(p * (1 - p) * n)
            for c in sd_multiples:
                yield bound_report(kind, n=n, p=p, h=c * sd)


def _sweep_twobinom(kind, n_values=(1000, 5000, 20000), p_values=(0.1, 0.3, 0.5),
                    h_multiples=(2.9, 3.5, 4.5), s_fraction=0.01):
    for big_n in n_values:
        for p in p_values:
            sd = math.sqrt(p * (1 - p) * big_n)
            for c in h_multiples:
                yield bound_report(kind, capital_n=big_n, s=s_fraction * big_n, h=c * sd, p=p)


def _sweep_diff(n_values=(1000, 5000, 20000), p_values=(0.1, 0.3), s_multiples=(2.0, 3.0, 4.0)):
    for big_n in n_values:
        for p in p_values:
            sd = math.sqrt(p * (1 - p) * big_n)
            for c in s_multiples:
                yield bound_report(BoundKind.TWOBINOM_DIFF_UPPER, capital_n=big_n,
                                   s=c * sd / p, t_shift=0.0, p=p)


def run_sweep(kinds: Iterable[BoundKind | str] | None = None) -> list[BoundReport]:
    """Default audit sweep for each selected bound, in a fixed order."""
    kinds = list(BoundKind) if kinds is None else [BoundKind(k) for k in kinds]
    out: list[BoundReport] = []
    for kind in kinds:
        if kind is BoundKind.BOLLOBAS_PMF_LOWER:
            out.extend(sweep_bollobas_lower())
        elif kind is BoundKind.BOLLOBAS_PMF_UPPER:
            out.extend(sweep_bollobas_upper())
        elif kind is BoundKind.BERNSTEIN_TAIL:
            out.extend(sweep_bernstein())
        elif kind in (BoundKind.CUM_UPPER, BoundKind.CUM_LOWER):
            out.extend(_sweep_cum(kind))
        elif kind in (BoundKind.TWOBINOM_LOWER, BoundKind.TWOBINOM_UPPER):
            out.extend(_sweep_twobinom(kind))
        else:
            out.extend(_sweep_diff())
    return out


def _fmt(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return format(x, ".17g")
    return str(x)


def write_reports_csv(reports: Sequence[BoundReport], fh) -> None:
    """Columns: ``bound_id``, the union of parameter names in first-seen order,
    ``bound_value, exact_value, slack, validity, asymptotic``."""
    param_cols: list[str] = []
    for r in reports:
        for key in r.params:
            if key not in param_cols:
                param_cols.append(key)
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(["bound_id", *param_cols, "bound_value", "exact_value", "slack", "validity", "asymptotic"])
    for r in reports:
        validity = ";".join(f"{k}={int(v)}" for k, v in r.validity.items())
        writer.writerow([r.bound_id, *(_fmt(r.params[c]) if c in r.params else "" for c in param_cols),
                         _fmt(r.bound_value), _fmt(r.exact_value), _fmt(r.slack), validity,
                         _fmt(r.asymptotic)])


# --------------------------------------------------------- edge-count audit

@dataclass
class EdgeCheck:
    applicable: bool
    checked: int = 0
    violations: int = 0


@dataclass
class EdgeAuditReport:
    n: int
    p: float
    set_size: int
    samples: int
    within: np.ndarray
    boundary: np.ndarray
    min_degree: int
    checks: dict[str, EdgeCheck]

    @property
    def total_violations(self) -> int:
        return sum(c.violations for c in self.checks.values())


def audit_edge_bounds(g: Graph, set_size: int, samples: int, seed: int) -> EdgeAuditReport:
    """Sample uniform vertex sets of size ``set_size`` and count, per edge-count
    statement, how many samples break it.  Statements whose size or density
    regime does not cover ``(n, p, set_size)`` are marked not applicable.

    Checks:

    * ``edges_within_large`` (t > n/5): within <= p C(t,2) + 2 t sqrt(p(1-p)t)
    * ``edges_between_large`` (n/5 < t <= n/2): boundary >= p t (n-t) - 3 t sqrt(p(1-p)(n-t))
    * ``min_degree`` (pn > log n): minimum degree > 8, once per graph
    * ``edges_within_small`` (log n < pn <= 5 log n, t <= n^(29/30)): within <= 2t
    * ``boundary_twice_within`` (p(1-p)n >= 4 log n, t <= n/5): boundary >= 2 within
    * ``boundary_twice_within_sparse`` (pn >= log n, n^(24/25) <= t <= n/5): same
    """
    if g.p is None:
        raise ValueError("graph carries no edge probability; audit needs the generating p")
    n, p, t = g.n, float(g.p), int(set_size)
    if not 0 <= t <= n:
        raise ValueError(f"set_size={t} outside [0, {n}]")
    if samples < 1:
        raise ValueError("samples must be >= 1")
    q = 1.0 - p
    log_n = math.log(n) if n > 1 else 0.0

    rng = make_rng(seed)
    within = np.empty(samples, dtype=np.int64)
    boundary = np.empty(samples, dtype=np.int64)
    for i in range(samples):
        s = VertexSet(n, rng.choice(n, size=t, replace=False))
        within[i], boundary[i] = set_edge_counts(g, s)

    def run(applicable, ok):
        if not applicable:
            return EdgeCheck(False)
        return EdgeCheck(True, int(ok.size), int(np.count_nonzero(~ok)))

    checks = {
        "edges_within_large": run(
            t > n / 5, within <= p * t * (t - 1) / 2 + 2 * t * math.sqrt(p * q * t)),
        "edges_between_large": run(
            n / 5 < t <= n / 2, boundary >= p * t * (n - t) - 3 * t * math.sqrt(p * q * (n - t))),
        "edges_within_small": run(
            log_n < p * n <= 5 * log_n and t <= n ** (29 / 30), within <= 2 * t),
        "boundary_twice_within": run(
            p * q * n >= 4 * log_n and t <= n / 5, boundary >= 2 * within),
        "boundary_twice_within_sparse": run(
            p * n >= log_n and n ** (24 / 25) <= t <= n / 5, boundary >= 2 * within),
    }
    mdeg = int(g.degrees.min())
    checks["min_degree"] = run(p * n > log_n, np.array([mdeg > 8]))
    return EdgeAuditReport(n, p, t, samples, within, boundary, mdeg, checks)
