"""Functions on [0, 1] sampled on a uniform grid.

The grid convention: a :class:`StepFunction` with resolution ``m`` stores
``m + 1`` values, value ``i`` living at ``t_i = i/m``. All interval
endpoints used by the variation machinery are grid points, which makes
every variation computation exact combinatorics.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ResolutionError, ValidationError


@dataclass(frozen=True)
class StepFunction:
    values: np.ndarray
    interpretation: str = "sampled"  # or "right-continuous-step"

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 1 or len(values) < 2:
            raise ValidationError("need at least 2 samples")
        if not np.all(np.isfinite(values)):
            raise ValidationError("samples must be finite")
        values = values.copy()
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def m(self):
        return len(self.values) - 1

    def increment(self, a, b):
        """``|f(t_b) - f(t_a)|`` for grid indices a < b."""
        if not 0 <= a < b <= self.m:
            raise ValidationError(f"need 0 <= a < b <= {self.m}, got ({a}, {b})")
        return abs(float(self.values[b]) - float(self.values[a]))

    def scaled(self, c):
        return StepFunction(self.values * c, self.interpretation)

    def __add__(self, other):
        if other.m != self.m:
            raise ValidationError("resolution mismatch")
        return StepFunction(self.values + other.values, self.interpretation)

    def to_json_dict(self):
        return {"m": self.m, "values": [float(v) for v in self.values]}

    def write(self, path, fmt="json"):
        if fmt == "json":
            with open(path, "w") as fh:
                json.dump(self.to_json_dict(), fh)
        elif fmt == "csv":
            with open(path, "w") as fh:
                for v in self.values:
                    fh.write(f"{float(v)!r}\n")
        else:
            raise ValidationError(f"unknown format {fmt!r}")


def ingest(path, fmt="csv"):
    """Load a StepFunction from a file.

    CSV: one value per line. JSON: ``{"m": int, "values": [...]}`` with
    ``m`` optional but checked when present.
    """
    if fmt == "csv":
        values = []
        with open(path) as fh:
            for row in csv.reader(fh):
                if not row or not row[0].strip():
                    continue
                try:
                    values.append(float(row[0]))
                except ValueError as exc:
                    raise ValidationError(f"bad value {row[0]!r} in {path}") from exc
    elif fmt == "json":
        with open(path) as fh:
            try:
                doc = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ValidationError(f"cannot parse {path}: {exc}") from exc
        values = doc.get("values")
        if values is None:
            raise ValidationError("JSON input needs a 'values' field")
        if "m" in doc and doc["m"] != len(values) - 1:
            raise ValidationError("declared m inconsistent with values length")
    else:
        raise ValidationError(f"unknown format {fmt!r}")
    if len(values) < 2:
        raise ValidationError("need at least 2 samples")
    arr = np.asarray(values, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise ValidationError("non-finite sample values")
    return StepFunction(arr)


def increment(f: StepFunction, a: int, b: int) -> float:
    """Functional alias for :meth:`StepFunction.increment`."""
    return f.increment(a, b)


def generate_block(n, height, t_n, delta_n, m):
    """A train of ``t_n`` plateaus of the given height at level ``n``.

    Plateau j (1-based) covers the half-open interval
    ``[2^-n + (2j-2)/delta_n, 2^-n + (2j-1)/delta_n)``; the value at the
    closing grid point is 0, so the increment across the closing edge is
    exact. ``m`` must be divisible by ``2^n`` and by ``delta_n``.
    """
    if t_n < 0 or n < 1 or m < 1:
        raise ValidationError("need n >= 1, t_n >= 0, m >= 1")
    delta_n = int(delta_n)
    if delta_n < 2:
        raise ValidationError("delta_n must be >= 2")
    values = np.zeros(m + 1)
    if t_n == 0 or height == 0:
        return StepFunction(values)
    if m % (1 << n) != 0 or m % delta_n != 0:
        raise ResolutionError(
            f"grid m={m} cannot represent level n={n} plateaus with delta={delta_n}")
    base = m >> n
    step = m // delta_n
    last = base + (2 * t_n - 1) * step
    if last > m:
        raise ResolutionError(
            f"plateaus exceed [0, 1] at level n={n} (t_n={t_n}, delta={delta_n})")
    for j in range(1, t_n + 1):
        start = base + (2 * j - 2) * step
        end = base + (2 * j - 1) * step
        values[start:end] = height
    return StepFunction(values)


@dataclass(frozen=True)
class IntervalCollection:
    """An ordered list of nonoverlapping grid intervals with increments.

    Endpoint sharing counts as nonoverlapping: consecutive pairs must
    satisfy ``b_j <= a_{j+1}``.
    """

    pairs: tuple
    increments: tuple

    @classmethod
    def from_pairs(cls, f: StepFunction, pairs):
        pairs = tuple((int(a), int(b)) for a, b in pairs)
        prev_end = None
        for a, b in pairs:
            if not 0 <= a < b <= f.m:
                raise ValidationError(f"bad interval ({a}, {b}) for m={f.m}")
            if prev_end is not None and a < prev_end:
                raise ValidationError("intervals overlap")
            prev_end = b
        incs = tuple(f.increment(a, b) for a, b in pairs)
        return cls(pairs, incs)

    def __len__(self):
        return len(self.pairs)

    @property
    def min_length(self):
        if not self.pairs:
            return 0
        return min(b - a for a, b in self.pairs)

    def to_json_dict(self):
        return {"pairs": [list(p) for p in self.pairs],
                "increments": list(self.increments)}
