"""Variation functionals of sampled functions.

All functionals share one search problem: pick nonoverlapping grid
intervals and sum per-interval gains. When the gain of an interval depends
only on its own increment (modulus of variation, the unweighted q-form,
any constant-weight family) a dynamic program over (grid position,
intervals used) is exact. When gains are rank-dependent -- the j-th
largest increment is charged phi_j -- no polynomial exact scheme is known,
so we run a proven-exact branch-and-bound up to ``oracle_cap`` grid cells
and fall back to certified lower/upper bounds beyond it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InternalConsistencyError, RangeError, ValidationError
from .sequences import GaugePair, SchrammFamily, WeightSequence
from .stepfn import IntervalCollection, StepFunction

#: largest grid resolution at which rank-dependent search runs exactly
ORACLE_CAP_DEFAULT = 16

_REL_TOL = 1e-12


@dataclass(frozen=True)
class VariationResult:
    value: float
    mode: str  # exact-oracle | exact-dp | bounds
    lower: float
    upper: float
    witness: IntervalCollection
    level: int | None = None

    def to_json_dict(self):
        return {
            "value": self.value,
            "mode": self.mode,
            "lower": self.lower,
            "upper": self.upper,
            "level": self.level,
            "witness": self.witness.to_json_dict(),
        }


def _exact(value, witness, mode="exact-dp", level=None):
    return VariationResult(value=value, mode=mode, lower=value, upper=value,
                           witness=witness, level=level)


# ---------------------------------------------------------------------------
# rank-independent dynamic program

def _dp_table(values, gainfn, max_count, min_len):
    """best[i][k] = max gain-sum over <= k nonoverlapping intervals in
    [i, m], each of grid length >= min_len."""
    m = len(values) - 1
    K = max(0, min(max_count, m // min_len if min_len else 0))
    best = np.zeros((m + 2, K + 1))
    for i in range(m - min_len, -1, -1):
        ends = np.arange(i + min_len, m + 1)
        gains = gainfn(np.abs(values[ends] - values[i]))
        for k in range(1, K + 1):
            take = np.max(gains + best[ends, k - 1])
            best[i, k] = max(best[i + 1, k], take)
    return best, K


def _dp_witness(values, gainfn, best, k, min_len):
    """Reconstruct a witness for best[0][k]; prefers intervals with positive
    increment and, among those, the leftmost start with the smallest end."""
    m = len(values) - 1
    pairs = []
    i, rem = 0, k
    while rem > 0 and i + min_len <= m:
        target = best[i, rem]
        if target <= 0:
            break
        chosen = None
        for b in range(i + min_len, m + 1):
            inc = abs(values[b] - values[i])
            if inc <= 0:
                continue
            if gainfn(np.array([inc]))[0] + best[b, rem - 1] == target:
                chosen = b
                break
        if chosen is None:
            i += 1
            continue
        pairs.append((i, chosen))
        i, rem = chosen, rem - 1
    return pairs


def _dp_solve(f, gainfn, max_count, min_len):
    best, K = _dp_table(f.values, gainfn, max_count, min_len)
    k = min(max_count, K)
    value = float(best[0, k]) if K else 0.0
    pairs = _dp_witness(f.values, gainfn, best, k, min_len) if K else []
    return value, IntervalCollection.from_pairs(f, pairs), best, K


# ---------------------------------------------------------------------------
# rank-dependent objectives

class _RankObjective:
    """Per-rank gains phi_j(x), nonincreasing in j for every x."""

    def gain(self, j, x):
        raise NotImplementedError

    def objective(self, sorted_desc):
        return sum(self.gain(j, x) for j, x in enumerate(sorted_desc, start=1))

    def surrogate(self, x):
        """Rank-free gain used for witness-producing lower-bound DPs."""
        raise NotImplementedError


class _WeightedPower(_RankObjective):
    """phi_j(x) = x^p / lam_j (Waterman-Shiba inner sum)."""

    def __init__(self, weights: WeightSequence, p: float):
        self.w = weights
        self.p = float(p)

    def gain(self, j, x):
        return x ** self.p / self.w.weight(j)

    def surrogate(self, x):
        return x ** self.p


class _SchrammGain(_RankObjective):
    def __init__(self, family: SchrammFamily):
        self.family = family

    def gain(self, j, x):
        return float(self.family.phi(j, x))

    def surrogate(self, x):
        return x


def _future_bounds(values, objective, min_len):
    """F[pos] = upper bound on the rank objective of any feasible collection
    inside [pos, m], charging ranks from 1.

    Uses the suffix modulus table: the j-th largest increment of any
    collection with top-j sum <= nu(j) is at most nu(j)/j, and the per-rank
    gains are increasing in x.
    """
    m = len(values) - 1
    nu, K = _dp_table(values, lambda x: x, m, min_len)
    F = np.zeros(m + 2)
    for pos in range(m - min_len, -1, -1):
        k_pos = (m - pos) // min_len
        total = 0.0
        for j in range(1, min(k_pos, K) + 1):
            cap = nu[pos, j] / j
            if cap <= 0:
                break
            total += objective.gain(j, cap)
        F[pos] = total
    return F


def _branch_and_bound(f, objective, min_len=1):
    """Exact maximum of the rank objective over nonoverlapping collections.

    Every DFS node is itself a feasible collection; pruning uses the
    position-indexed future bound, which is valid because merging two
    increment multisets under nonincreasing per-rank gains never beats
    charging each multiset from rank 1.
    """
    values = f.values
    m = len(values) - 1
    F = _future_bounds(values, objective, min_len)
    best = {"value": 0.0, "pairs": []}

    def visit(pos, pairs, incs_sorted, obj):
        if obj > best["value"]:
            best["value"] = obj
            best["pairs"] = list(pairs)
        for a in range(pos, m - min_len + 1):
            if obj + F[a] <= best["value"]:
                break
            for b in range(a + min_len, m + 1):
                inc = abs(values[b] - values[a])
                if inc <= 0:
                    continue
                merged = sorted(incs_sorted + [inc], reverse=True)
                pairs.append((a, b))
                visit(b, pairs, merged, objective.objective(merged))
                pairs.pop()

    visit(0, [], [], 0.0)
    return best["value"], IntervalCollection.from_pairs(f, best["pairs"])


def _rank_bounds(f, objective, min_len=1):
    """Certified (lower, upper, witness) when exact search is off the table.

    Lower: evaluate the true rank objective on the witnesses of the
    surrogate DP for every interval count, keep the best. Upper: the
    future bound at position 0 (an over-estimate in general, since optimal
    k-collections need not nest)."""
    values = f.values
    m = len(values) - 1
    if min_len > m:
        empty = IntervalCollection.from_pairs(f, [])
        return 0.0, 0.0, empty
    best_tab, K = _dp_table(values, lambda x: objective.surrogate(x), m, min_len)
    lower, witness_pairs = 0.0, []
    for k in range(1, K + 1):
        pairs = _dp_witness(values, lambda x: objective.surrogate(x),
                            best_tab, k, min_len)
        incs = sorted((abs(values[b] - values[a]) for a, b in pairs), reverse=True)
        val = objective.objective(incs)
        if val > lower:
            lower, witness_pairs = val, pairs
    upper = float(_future_bounds(values, objective, min_len)[0])
    upper = max(upper, lower)
    return lower, upper, IntervalCollection.from_pairs(f, witness_pairs)


def _rank_solve(f, objective, min_len, oracle_cap):
    if min_len > f.m:
        empty = IntervalCollection.from_pairs(f, [])
        return 0.0, 0.0, 0.0, empty, "exact-oracle"
    if f.m <= oracle_cap:
        value, witness = _branch_and_bound(f, objective, min_len)
        return value, value, value, witness, "exact-oracle"
    lower, upper, witness = _rank_bounds(f, objective, min_len)
    return lower, lower, upper, witness, "bounds"


# ---------------------------------------------------------------------------
# public functionals

def modulus_of_variation(f: StepFunction, n: int) -> VariationResult:
    """Maximum total increment over at most ``n`` nonoverlapping intervals."""
    if n < 1:
        raise ValidationError("n must be >= 1")
    value, witness, best, K = _dp_solve(f, lambda x: x, n, 1)
    # the modulus is nondecreasing and concave in the interval count
    per_k = best[0, : min(n, K) + 1]
    diffs = np.diff(per_k)
    if np.any(diffs < -1e-12) or np.any(np.diff(diffs) > 1e-12):
        raise InternalConsistencyError("modulus of variation not concave")
    return _exact(value, witness)


def variation_unweighted_q(f: StepFunction, q: float, s_max: int | None = None,
                           min_len: int = 1) -> VariationResult:
    """``(max sum |f(I_j)|^q)^(1/q)`` over at most ``s_max`` intervals of
    grid length >= ``min_len``. Exact: the weights are rank-independent."""
    if q < 1:
        raise ValidationError("q must be >= 1")
    if min_len < 1:
        raise ValidationError("min_len must be >= 1 grid cell")
    if min_len > f.m:
        return _exact(0.0, IntervalCollection.from_pairs(f, []))
    if s_max is None:
        s_max = f.m // min_len
    inner, witness, _, _ = _dp_solve(f, lambda x: x ** q, s_max, min_len)
    return _exact(inner ** (1.0 / q), witness)


def variation_weighted(f: StepFunction, weights: WeightSequence, p: float = 1.0,
                       oracle_cap: int = ORACLE_CAP_DEFAULT) -> VariationResult:
    """Waterman-Shiba variation ``sup (sum |f(I_j)|^p / lam_j)^(1/p)`` with
    increments matched to weights in descending order."""
    if p < 1:
        raise ValidationError("p must be >= 1")
    if weights.kind == "constant":
        w = 1.0 / weights.weight(1)
        inner, witness, _, _ = _dp_solve(f, lambda x: w * x ** p, f.m, 1)
        return _exact(inner ** (1.0 / p), witness)
    objective = _WeightedPower(weights, p)
    inner, lo, up, witness, mode = _rank_solve(f, objective, 1, oracle_cap)
    root = lambda v: v ** (1.0 / p)
    return VariationResult(value=root(inner), mode=mode, lower=root(lo),
                           upper=root(up), witness=witness)


def variation_schramm(f: StepFunction, family: SchrammFamily,
                      oracle_cap: int = ORACLE_CAP_DEFAULT) -> VariationResult:
    """``sup sum phi_j(|f(I_j)|)`` over nonoverlapping collections."""
    objective = _SchrammGain(family)
    inner, lo, up, witness, mode = _rank_solve(f, objective, 1, oracle_cap)
    return VariationResult(value=inner, mode=mode, lower=lo, upper=up,
                           witness=witness)


def variation_gauged(f: StepFunction, weights: WeightSequence, gauge: GaugePair,
                     n_cap: int, oracle_cap: int = ORACLE_CAP_DEFAULT) -> VariationResult:
    """Constrained variation: max over levels n <= n_cap of the supremum of
    ``(sum |f(I_j)|^{q_n} / lam_j)^{1/q_n}`` over collections whose
    intervals all have length >= ``ceil(m / delta_n)`` grid cells.

    On the grid the interval count is implicitly capped at
    ``floor(m / min_len) <= delta_n``, which coincides with the count cap
    used in the sufficiency arguments.
    """
    if not 1 <= n_cap <= gauge.n_max:
        raise ValidationError(f"n_cap must be in 1..{gauge.n_max}")
    m = f.m
    empty = IntervalCollection.from_pairs(f, [])
    best = VariationResult(0.0, "exact-dp", 0.0, 0.0, empty, level=None)
    all_exact = True
    cache = {}
    for n in range(1, n_cap + 1):
        q_n, delta_n = gauge.level(n)
        min_len = max(1, math.ceil(m / delta_n))
        if min_len > m:
            continue
        key = (q_n, min_len)
        if key in cache:
            value, lo, up, witness, mode = cache[key]
        else:
            if weights.kind == "constant":
                w = 1.0 / weights.weight(1)
                inner, witness, _, _ = _dp_solve(
                    f, lambda x, q=q_n, w=w: w * x ** q, m, min_len)
                value = lo = up = inner ** (1.0 / q_n)
                mode = "exact-dp"
            else:
                objective = _WeightedPower(weights, q_n)
                inner, lo, up, witness, mode = _rank_solve(
                    f, objective, min_len, oracle_cap)
                value = inner ** (1.0 / q_n)
                lo, up = lo ** (1.0 / q_n), up ** (1.0 / q_n)
            cache[key] = (value, lo, up, witness, mode)
        if mode == "bounds":
            all_exact = False
        if value > best.value:
            best = VariationResult(value, mode, lo, up, witness, level=n)
    mode = best.mode if all_exact else "bounds"
    upper = max(c[2] for c in cache.values()) if cache else 0.0
    return VariationResult(value=best.value, mode=mode, lower=best.lower,
                           upper=max(upper, best.upper), witness=best.witness,
                           level=best.level)


def schramm_norm(f: StepFunction, family: SchrammFamily, f_a: float | None = None,
                 oracle_cap: int = ORACLE_CAP_DEFAULT, rel_tol: float = 1e-10) -> float:
    """Luxemburg-style norm ``|f(a)| + inf{c > 0 : V_Phi(f/c) <= 1}``.

    ``c -> V_Phi(f/c)`` is nonincreasing, so the infimum is found by
    bracket doubling plus bisection.
    """
    if f_a is None:
        f_a = float(f.values[0])
    if np.ptp(f.values) == 0.0:
        return abs(f_a)

    def var_at(c):
        return variation_schramm(f.scaled(1.0 / c), family, oracle_cap).value

    hi = 1.0
    for _ in range(200):
        if var_at(hi) <= 1.0:
            break
        hi *= 2.0
    else:
        raise RangeError("variation never drops to 1 within the bracket cap")
    lo = hi / 2.0
    while lo > 1e-300 and var_at(lo) <= 1.0:
        hi = lo
        lo /= 2.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if var_at(mid) <= 1.0:
            hi = mid
        else:
            lo = mid
        if hi - lo <= rel_tol * hi:
            break
    return abs(f_a) + 0.5 * (lo + hi)
