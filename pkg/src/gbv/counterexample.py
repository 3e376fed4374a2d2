"""Witness functions refuting embeddings when the criterion fails.

Given per-level violations of an embedding criterion, these routines plan
and build a plateau-train function whose source variation is certifiably
finite while its target variation blows up level by level. The constants
(eps_n, sep_n, blow_n) default to (2^-n, 2^{n+2}, 2^{4n}); the default
blow-up forces astronomically large violation indices for most families,
so desk-scale runs pass milder constants and the inequality chain is
re-verified numerically at every level.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (InfeasibleError, InternalConsistencyError,
                     ResolutionError, ValidationError)
from .sequences import GaugePair, SchrammFamily, WeightSequence
from .stepfn import StepFunction, generate_block
from .variation import (ORACLE_CAP_DEFAULT, variation_gauged,
                        variation_schramm, variation_weighted)

GRID_CAP = 1 << 22


def paper_constants(n_levels):
    """The canonical constants: eps 2^-n, separation 2^{n+2}, blow-up 2^{4n}."""
    n = np.arange(1, n_levels + 1)
    return 0.5 ** n, 2.0 ** (n + 2), 2.0 ** (4 * n)


@dataclass(frozen=True)
class LevelPlan:
    n: int
    q_n: float
    delta_n: int
    b_n: float       # criterion budget: Gamma(delta_n) or delta_n
    r_n: int         # smallest criterion-violating index
    s_n: int         # greatest s with 2s - 1 <= eps_n * b_n
    s_fit: int       # cap keeping the plateau train inside [2^-n, 2^-(n-1))
    t_n: int
    height: float
    eps: float
    sep: float
    blow: float

    def to_json_dict(self):
        return {
            "n": self.n, "q_n": self.q_n, "delta_n": self.delta_n,
            "b_n": self.b_n, "r_n": self.r_n, "s_n": self.s_n,
            "s_fit": self.s_fit, "t_n": self.t_n, "height": self.height,
            "eps": self.eps, "sep": self.sep, "blow": self.blow,
        }


@dataclass(frozen=True)
class ConstructionSpec:
    kind: str  # "lambda" | "schramm"
    levels: tuple
    p: float = 1.0
    w_lambda: WeightSequence | None = None
    w_gamma: WeightSequence | None = None
    family: SchrammFamily | None = None

    @property
    def n_levels(self):
        return len(self.levels)

    def gauge(self):
        if not self.levels:
            raise ValidationError("empty construction has no gauge")
        return GaugePair([lv.q_n for lv in self.levels],
                         [lv.delta_n for lv in self.levels])

    def to_json_dict(self):
        doc = {
            "kind": self.kind,
            "p": self.p,
            "levels": [lv.to_json_dict() for lv in self.levels],
        }
        if self.w_lambda is not None:
            doc["lambda"] = self.w_lambda.to_config()
        if self.w_gamma is not None:
            doc["gamma"] = self.w_gamma.to_config()
        if self.family is not None:
            doc["family"] = self.family.to_config()
        return doc

    @classmethod
    def from_json_dict(cls, doc):
        levels = tuple(LevelPlan(**lv) for lv in doc["levels"])
        return cls(
            kind=doc["kind"], levels=levels, p=doc.get("p", 1.0),
            w_lambda=WeightSequence.from_config(doc["lambda"]) if "lambda" in doc else None,
            w_gamma=WeightSequence.from_config(doc["gamma"]) if "gamma" in doc else None,
            family=SchrammFamily.from_config(doc["family"]) if "family" in doc else None,
        )


def _greatest_s(budget):
    """Greatest integer s with 2s - 1 <= budget."""
    return math.floor((budget + 1.0 + 1e-12) / 2.0)


def plan_construction(kind, gauge, n_levels, *, w_lambda=None, w_gamma=None,
                      p=1.0, family=None, eps=None, sep=None, blow=None):
    """Resolve per-level violation indices, plateau counts and heights.

    Fails loudly (:class:`InfeasibleError`) at the first level where the
    separation budget is too small or no violating index exists -- the
    criterion may simply hold.
    """
    if kind not in ("lambda", "schramm"):
        raise ValidationError(f"unknown construction kind {kind!r}")
    if n_levels < 0 or n_levels > gauge.n_max:
        raise ValidationError(f"n_levels must be in 0..{gauge.n_max}")
    if kind == "lambda" and (w_lambda is None or w_gamma is None):
        raise ValidationError("lambda construction needs both weight sequences")
    if kind == "schramm" and family is None:
        raise ValidationError("schramm construction needs a family")

    d_eps, d_sep, d_blow = paper_constants(max(n_levels, 1))
    eps = np.asarray(eps if eps is not None else d_eps, dtype=float)
    sep = np.asarray(sep if sep is not None else d_sep, dtype=float)
    blow = np.asarray(blow if blow is not None else d_blow, dtype=float)

    levels = []
    for n in range(1, n_levels + 1):
        q_n, delta_f = gauge.level(n)
        delta_n = int(delta_f)
        if delta_n != delta_f:
            raise ValidationError(f"delta_{n}={delta_f} is not an integer")
        e_n, sep_n, blow_n = eps[n - 1], sep[n - 1], blow[n - 1]

        if kind == "lambda":
            b_n = w_gamma.prefix_sum(delta_n)
        else:
            b_n = float(delta_n)
        if b_n < sep_n:
            raise InfeasibleError(
                f"level {n}: separation budget {b_n:.6g} below sep_n={sep_n:.6g}",
                level=n)

        ks = np.arange(1, delta_n + 1)
        if kind == "lambda":
            gam = w_gamma.prefix_sums(delta_n)
            lam = w_lambda.prefix_sums(delta_n)
            kernel = gam ** (1.0 / q_n) * lam ** (-1.0 / p)
        else:
            inv = np.asarray(family.partial_inverse_many(ks, 1.0), dtype=float)
            kernel = ks ** (1.0 / q_n) * inv
        violating = np.where(kernel > blow_n)[0]
        if len(violating) == 0:
            raise InfeasibleError(
                f"level {n}: no index r <= {delta_n} violates the criterion "
                f"at blow-up {blow_n:.6g} (the embedding may simply hold)",
                level=n)
        r_n = int(violating[0]) + 1

        s_n = _greatest_s(e_n * b_n)
        s_fit = _greatest_s(e_n * delta_n)
        t_n = min(r_n, s_n, s_fit)
        if t_n < 1:
            raise InfeasibleError(
                f"level {n}: plateau budget empty (s_n={s_n}, s_fit={s_fit})",
                level=n)

        if kind == "lambda":
            height = e_n * w_lambda.prefix_sum(r_n) ** (-1.0 / p)
        else:
            height = e_n * family.partial_inverse(r_n, 1.0)
        levels.append(LevelPlan(
            n=n, q_n=q_n, delta_n=delta_n, b_n=float(b_n), r_n=r_n,
            s_n=s_n, s_fit=s_fit, t_n=t_n, height=float(height),
            eps=float(e_n), sep=float(sep_n), blow=float(blow_n)))

    return ConstructionSpec(kind=kind, levels=tuple(levels), p=float(p),
                            w_lambda=w_lambda, w_gamma=w_gamma, family=family)


def witness_resolution(spec, grid_cap=GRID_CAP):
    """Smallest uniform grid on which every plateau edge is a grid point."""
    m = 1 << spec.n_levels if spec.levels else 2
    for lv in spec.levels:
        m = math.lcm(m, lv.delta_n)
        if m > grid_cap:
            raise ResolutionError(
                f"grid lcm exceeds cap {grid_cap} at level {lv.n} "
                f"(delta={lv.delta_n})")
    return m


def build_witness(spec, m=None, grid_cap=GRID_CAP):
    """Sum of per-level plateau trains; supports are checked disjoint."""
    if m is None:
        m = witness_resolution(spec, grid_cap)
    total = np.zeros(m + 1)
    for lv in spec.levels:
        block = generate_block(lv.n, lv.height, lv.t_n, lv.delta_n, m)
        overlap = (total != 0) & (block.values != 0)
        if np.any(overlap):
            raise InternalConsistencyError(
                f"level {lv.n} support overlaps an earlier level")
        total += block.values
    return StepFunction(total)


def certify_membership(spec, f=None, oracle_cap=ORACLE_CAP_DEFAULT):
    """Certified upper bound on the source variation of the witness.

    Per level: 2 * eps_n in the weighted case (the plateau count never
    exceeds 2 r_n and doubling the index at most doubles the prefix sum),
    and 2 * Phi_{r_n}(eps_n * Phi_{r_n}^{-1}(1)) in the convex-family case
    (convexity pulls eps inside). When a small witness is supplied the
    exact engine value is checked against the bound.
    """
    rows = []
    for lv in spec.levels:
        if spec.kind == "lambda":
            bound = 2.0 * lv.eps
            level_value = lv.height * spec.w_lambda.prefix_sum(2 * lv.t_n) ** (1.0 / spec.p)
        else:
            bound = 2.0 * float(spec.family.partial_sum(lv.r_n, lv.height))
            level_value = float(spec.family.partial_sum(2 * lv.t_n, lv.height))
        rows.append({"n": lv.n, "bound": bound, "level_value": level_value})
    total = math.fsum(row["bound"] for row in rows)
    report = {"kind": spec.kind, "total_bound": total, "levels": rows,
              "exact": None}
    if f is not None and f.m <= oracle_cap and spec.levels:
        if spec.kind == "lambda":
            exact = variation_weighted(f, spec.w_lambda, spec.p,
                                       oracle_cap=oracle_cap).value
        else:
            exact = variation_schramm(f, spec.family, oracle_cap=oracle_cap).value
        if exact > total * (1 + 1e-9):
            raise InternalConsistencyError(
                f"exact source variation {exact} exceeds certified bound {total}")
        report["exact"] = exact
    return report


def certify_blowup(spec, f, oracle_cap=ORACLE_CAP_DEFAULT):
    """Per-level lower bounds on the target variation, from the designated
    consecutive intervals of length 1/delta_n.

    Each bound is constructive: the intervals satisfy the level-n minimum
    length exactly, so L_n really is a feasible inner value. The report
    also re-verifies the two chain inequalities behind the construction
    with the supplied constants; a failure is reported, not silently fixed.
    """
    m = f.m
    rows = []
    for lv in spec.levels:
        if m % (1 << lv.n) != 0 or m % lv.delta_n != 0:
            raise ResolutionError(f"witness grid m={m} misaligned at level {lv.n}")
        base = m >> lv.n
        step = m // lv.delta_n
        count = 2 * lv.t_n - 1
        idx = base + step * np.arange(count + 1)
        incs = np.abs(np.diff(f.values[idx]))
        if np.any(np.abs(incs - lv.height) > 1e-9 * max(1.0, lv.height)):
            raise InternalConsistencyError(
                f"level {lv.n}: designated increments differ from the "
                f"planned height")
        if spec.kind == "lambda":
            gamma_w = spec.w_gamma.weights(count)
            inner = float(np.sum(incs ** lv.q_n / gamma_w))
            growth_ok = bool(
                spec.w_gamma.prefix_sum(count)
                >= (lv.eps / 2.0) * spec.w_gamma.prefix_sum(lv.r_n) * (1 - 1e-9))
        else:
            inner = float(np.sum(incs ** lv.q_n))
            growth_ok = bool(count >= (lv.eps / 2.0) * lv.r_n * (1 - 1e-9))
        L_n = inner ** (1.0 / lv.q_n)
        floor = lv.eps * (lv.eps / 2.0) ** (1.0 / lv.q_n) * lv.blow
        rows.append({
            "n": lv.n, "t_n": lv.t_n, "s_n": lv.s_n, "r_n": lv.r_n,
            "h_n": lv.height, "L_n": L_n, "chain_floor": floor,
            "growth_ok": growth_ok,
            "floor_ok": bool(L_n >= floor * (1 - 1e-9)),
        })
    report = {"kind": spec.kind, "levels": rows,
              "max_L": max((r["L_n"] for r in rows), default=0.0),
              "cross_checked": False}
    if f.m <= oracle_cap and spec.levels:
        target_w = spec.w_gamma if spec.kind == "lambda" else WeightSequence(
            "constant", value=1.0, k_max=max(lv.delta_n for lv in spec.levels))
        gauged = variation_gauged(f, target_w, spec.gauge(), spec.n_levels,
                                  oracle_cap=oracle_cap)
        for row in rows:
            if gauged.value < row["L_n"] * (1 - 1e-9):
                raise InternalConsistencyError(
                    f"gauged variation {gauged.value} below constructive "
                    f"bound {row['L_n']} at level {row['n']}")
        report["cross_checked"] = True
        report["gauged_value"] = gauged.value
    return report
