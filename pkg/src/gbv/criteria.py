"""Truncated embedding-criterion scans.

Each criterion is a limsup-of-max over sequence growth kernels. A limsup
is undecidable from finitely many terms, so reports carry the truncated
running sup together with a least-squares slope of ``log a_n`` over the
last half of the levels; the verdict is ``diverging-trend`` iff that slope
exceeds ``SLOPE_TOL``, and ``bounded-up-to-horizon`` otherwise.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import HorizonError, HypothesisError, ValidationError
from .sequences import ConvexBase, GaugePair, SchrammFamily, WeightSequence

SLOPE_TOL = 0.01
DENSE_SCAN_CAP = 1 << 20
GEOMETRIC_POINTS_PER_BINADE = 64

VERDICT_BOUNDED = "bounded-up-to-horizon"
VERDICT_DIVERGING = "diverging-trend"


@dataclass(frozen=True)
class CriterionReport:
    levels: tuple  # of dicts {"n": int, "a_n": float, "argmax_k": int}
    sup: float
    argmax_level: int
    verdict: str
    slope: float
    horizon: int
    inexact_scan: bool = False

    def to_json_dict(self):
        return {
            "levels": [dict(lv) for lv in self.levels],
            "sup": self.sup,
            "argmax_level": self.argmax_level,
            "verdict": self.verdict,
            "slope": self.slope,
            "horizon": self.horizon,
            "inexact_scan": self.inexact_scan,
        }

    def to_csv(self):
        buf = io.StringIO()
        buf.write("n,a_n,argmax_k\n")
        for lv in self.levels:
            buf.write(f"{lv['n']},{lv['a_n']!r},{lv['argmax_k']}\n")
        return buf.getvalue()


def _scan_ks(delta, dense_cap=DENSE_SCAN_CAP):
    """Indices to scan in 1..delta; dense when affordable, otherwise a
    geometric grid plus both endpoints (flagged inexact)."""
    delta = int(delta)
    if delta <= dense_cap:
        return np.arange(1, delta + 1), False
    n_binades = math.log2(delta)
    count = int(n_binades * GEOMETRIC_POINTS_PER_BINADE)
    ks = np.unique(np.concatenate([
        [1, delta],
        np.geomspace(1, delta, count).astype(np.int64),
    ]))
    return ks, True


def _trend(values):
    """Least-squares slope of log(a_n) over the last half of levels."""
    a = np.asarray(values, dtype=float)
    tail = a[len(a) // 2:]
    if len(tail) < 2 or np.any(tail <= 0):
        return 0.0
    x = np.arange(len(tail), dtype=float)
    y = np.log(tail)
    slope = np.polyfit(x, y, 1)[0]
    return float(slope)


def _assemble(level_rows, inexact):
    sups = [lv["a_n"] for lv in level_rows]
    best = int(np.argmax(sups))
    slope = _trend(sups)
    verdict = VERDICT_DIVERGING if slope > SLOPE_TOL else VERDICT_BOUNDED
    return CriterionReport(
        levels=tuple(level_rows),
        sup=float(max(sups)),
        argmax_level=level_rows[best]["n"],
        verdict=verdict,
        slope=slope,
        horizon=len(level_rows),
        inexact_scan=inexact,
    )


def _check_ratio_nondecreasing(w_gamma, w_lambda, horizon):
    """Gamma(k)/Lambda(k) nondecreasing over k <= horizon."""
    g = w_gamma.prefix_sums(horizon)
    l = w_lambda.prefix_sums(horizon)
    ratio = g / l
    bad = np.where(np.diff(ratio) < -1e-12 * ratio[:-1])[0]
    if len(bad):
        raise HypothesisError(
            f"Gamma(n)/Lambda(n) decreases at n={int(bad[0]) + 2}",
            index=int(bad[0]) + 2)


def criterion_lambda_gamma(w_lambda: WeightSequence, w_gamma: WeightSequence,
                           p: float, gauge: GaugePair, n_cap: int,
                           second_part: bool = False) -> CriterionReport:
    """Scan ``a_n = max_{1<=k<=delta_n} Gamma(k)^{1/q_n} Lambda(k)^{-1/p}``.

    Requires ``1 <= p <= q_1``; with ``second_part`` the alternative
    hypothesis that Gamma(n)/Lambda(n) is nondecreasing is checked instead.
    """
    if p < 1:
        raise ValidationError("p must be >= 1")
    if not 1 <= n_cap <= gauge.n_max:
        raise ValidationError(f"n_cap must be in 1..{gauge.n_max}")
    q1 = gauge.qn[0]
    max_delta = int(gauge.deltas[n_cap - 1])
    if p > q1 + 1e-12:
        if not second_part:
            raise HypothesisError(
                "p > q_1 requires the second-part flag with "
                "Gamma/Lambda nondecreasing")
        _check_ratio_nondecreasing(w_gamma, w_lambda,
                                   min(max_delta, w_gamma.k_max, w_lambda.k_max))
    if max_delta > min(w_gamma.k_max, w_lambda.k_max):
        raise HorizonError(
            f"delta_{n_cap}={max_delta} exceeds the weight-sequence horizon")

    rows, inexact_any = [], False
    for n in range(1, n_cap + 1):
        q_n, delta_n = gauge.level(n)
        ks, inexact = _scan_ks(min(int(delta_n), min(w_gamma.k_max, w_lambda.k_max)))
        inexact_any |= inexact
        gamma = w_gamma.prefix_sums(int(ks[-1]))[ks - 1]
        lam = w_lambda.prefix_sums(int(ks[-1]))[ks - 1]
        kernel = gamma ** (1.0 / q_n) * lam ** (-1.0 / p)
        i = int(np.argmax(kernel))
        rows.append({"n": n, "a_n": float(kernel[i]), "argmax_k": int(ks[i])})
    return _assemble(rows, inexact_any)


def criterion_corollary_q(w_lambda: WeightSequence, w_gamma: WeightSequence,
                          p: float, q: float,
                          horizon: int | None = None) -> CriterionReport:
    """Truncated ``sup_n Gamma(n)^{1/q} Lambda(n)^{-1/p}`` (fixed exponents).

    Levels in the report are dyadic checkpoints of the running sup, which
    gives the trend classifier something meaningful to look at.
    """
    if not 1 <= p <= q < math.inf:
        raise ValidationError("need 1 <= p <= q < inf")
    horizon = min(horizon or min(w_gamma.k_max, w_lambda.k_max),
                  w_gamma.k_max, w_lambda.k_max)
    gamma = w_gamma.prefix_sums(horizon)
    lam = w_lambda.prefix_sums(horizon)
    kernel = gamma ** (1.0 / q) * lam ** (-1.0 / p)
    rows = []
    level = 1
    checkpoint = 1
    while checkpoint <= horizon:
        upto = kernel[:checkpoint]
        i = int(np.argmax(upto))
        rows.append({"n": level, "a_n": float(upto[i]), "argmax_k": i + 1})
        level += 1
        checkpoint *= 2
    if checkpoint // 2 < horizon:
        i = int(np.argmax(kernel))
        rows.append({"n": level, "a_n": float(kernel[i]), "argmax_k": i + 1})
    return _assemble(rows, False)


def criterion_schramm(family: SchrammFamily, gauge: GaugePair,
                      n_cap: int) -> CriterionReport:
    """Scan ``a_n = max_{1<=k<=delta_n} k^{1/q_n} Phi_k^{-1}(1)``."""
    if not 1 <= n_cap <= gauge.n_max:
        raise ValidationError(f"n_cap must be in 1..{gauge.n_max}")
    # root-finding per k is expensive without a closed-form inverse, so the
    # dense-scan budget is tightened for such families
    dense_cap = DENSE_SCAN_CAP if family.has_analytic_inverse() else 4096
    rows, inexact_any = [], False
    for n in range(1, n_cap + 1):
        q_n, delta_n = gauge.level(n)
        ks, inexact = _scan_ks(min(int(delta_n), family.k_max), dense_cap)
        inexact_any |= inexact
        inv = np.asarray(family.partial_inverse_many(ks, 1.0), dtype=float)
        kernel = ks ** (1.0 / q_n) * inv
        i = int(np.argmax(kernel))
        rows.append({"n": n, "a_n": float(kernel[i]), "argmax_k": int(ks[i])})
    return _assemble(rows, inexact_any)


def criterion_phi_lambda(base: ConvexBase, weights: WeightSequence,
                         gauge: GaugePair, n_cap: int,
                         cross_check: bool = True) -> CriterionReport:
    """Scan ``a_n = max_k k^{1/q_n} phi^{-1}(Lambda(k)^{-1})``.

    Equivalent to :func:`criterion_schramm` on the scaled family
    phi_j = phi/lam_j (since Phi_k = phi * Lambda(k)); the equivalence is
    asserted on the fly when ``cross_check`` is set.
    """
    if not 1 <= n_cap <= gauge.n_max:
        raise ValidationError(f"n_cap must be in 1..{gauge.n_max}")
    rows, inexact_any = [], False
    for n in range(1, n_cap + 1):
        q_n, delta_n = gauge.level(n)
        ks, inexact = _scan_ks(min(int(delta_n), weights.k_max))
        inexact_any |= inexact
        lam = weights.prefix_sums(int(ks[-1]))[ks - 1]
        kernel = ks ** (1.0 / q_n) * np.asarray(base.inverse(1.0 / lam), dtype=float)
        i = int(np.argmax(kernel))
        rows.append({"n": n, "a_n": float(kernel[i]), "argmax_k": int(ks[i])})
    report = _assemble(rows, inexact_any)
    if cross_check:
        scaled = SchrammFamily("scaled", base=base, weights=weights)
        other = criterion_schramm(scaled, gauge, n_cap)
        for mine, theirs in zip(report.levels, other.levels):
            if abs(mine["a_n"] - theirs["a_n"]) > 1e-9 * max(1.0, abs(theirs["a_n"])):
                raise HypothesisError(
                    f"phi-Lambda criterion disagrees with the scaled-family "
                    f"scan at level n={mine['n']}")
    return report


def criterion_union_p(weights: WeightSequence, p: float, gauge: GaugePair,
                      n_cap: int) -> CriterionReport:
    """The union criterion: Gamma = Lambda with ``1 <= p < q``; the scan
    must come out bounded for every admissible ``p``."""
    if not 1 <= p < gauge.q_limit:
        raise ValidationError(f"need 1 <= p < q (p={p}, q={gauge.q_limit})")
    # Gamma = Lambda makes the ratio hypothesis trivial, so levels with
    # q_n < p are admissible through the second-part route
    return criterion_lambda_gamma(weights, weights, p, gauge, n_cap,
                                  second_part=True)
