"""Richardson extrapolation of sequences indexed by consecutive integers.

For S(n) ~ L + c/n the first-order extrapolant R(n) = (n+1) S(n+1) - n S(n)
removes the 1/n term exactly.  Two ways of going further:

* ``"repeated"`` applies that same first-order step to its own output.  This
  is how the published repeated extrapolants were produced; it removes a 1/n
  term at each pass but does not annihilate 1/n^2 and higher.
* ``"classical"`` uses the order-r formula
  R_r(n) = sum_k (-1)^(k+r) (n+k)^r S(n+k) / (k! (r-k)!), k = 0..r,
  which is exact on L + c_1/n + ... + c_r/n^r.

Both agree at the first level.  Each output entry is labelled by the
smallest index it uses.

The boundary differences a_crit(J+1)^2 - a_crit(J)^2 are indexed by
n = J - 1 (so the J=2 -> 3 difference is S(1)); :func:`differences_sequence`
builds that base sequence.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Sequence

from .errors import TooShort


def richardson_step(seq: Sequence[tuple]) -> list[tuple]:
    """One extrapolation pass over ``[(n, S(n)), ...]`` with consecutive ``n``."""
    if len(seq) < 2:
        raise TooShort(f"need at least 2 entries, got {len(seq)}")
    out = []
    for (n, s), (m, t) in zip(seq, seq[1:]):
        if m != n + 1:
            raise ValueError(f"indices must be consecutive, got {n} then {m}")
        out.append((n, (n + 1) * t - n * s))
    return out


@dataclass(frozen=True)
class ExtrapolationTable:
    """``levels[0]`` is the base sequence, ``levels[r]`` the r-fold extrapolants."""

    base: tuple
    levels: tuple
    labels: tuple = field(default=())

    def level(self, r: int) -> list[tuple]:
        return list(self.levels[r])

    def value(self, r: int, n: int):
        for m, v in self.levels[r]:
            if m == n:
                return v
        raise KeyError(f"no entry n={n} at level {r}")


def default_labels(levels: int, base_name: str = "S") -> tuple:
    labels = [base_name]
    name = base_name
    for _ in range(levels):
        name = f"R[{name}]"
        labels.append(name)
    return tuple(labels)


def classical_extrapolants(seq: Sequence[tuple], order: int) -> list[tuple]:
    """Order-``order`` Richardson extrapolants of ``[(n, S(n)), ...]``."""
    if order < 1:
        raise ValueError("order must be >= 1")
    if len(seq) < order + 1:
        raise TooShort(f"order {order} needs at least {order + 1} entries, got {len(seq)}")
    for (n, _), (m, _) in zip(seq, seq[1:]):
        if m != n + 1:
            raise ValueError(f"indices must be consecutive, got {n} then {m}")
    weights = [(-1) ** (k + order) * Fraction(1, factorial(k) * factorial(order - k)) for k in range(order + 1)]
    out = []
    for i in range(len(seq) - order):
        n = seq[i][0]
        acc = 0
        for k, w in enumerate(weights):
            acc += w * (n + k) ** order * seq[i + k][1]
        out.append((n, acc))
    return out


SCHEMES = ("repeated", "classical")


def repeated_richardson(
    seq: Sequence[tuple], levels: int, base_name: str = "S", scheme: str = "repeated"
) -> ExtrapolationTable:
    """Levels 0..``levels`` of extrapolants; see the module notes on ``scheme``."""
    if levels < 1:
        raise ValueError("levels must be >= 1")
    if scheme not in SCHEMES:
        raise ValueError(f"scheme must be one of {SCHEMES}")
    if len(seq) < levels + 1:
        raise TooShort(f"{levels} levels need at least {levels + 1} entries, got {len(seq)}")
    rows = [tuple(seq)]
    for r in range(1, levels + 1):
        if scheme == "repeated":
            rows.append(tuple(richardson_step(rows[-1])))
        else:
            rows.append(tuple(classical_extrapolants(seq, r)))
    return ExtrapolationTable(tuple(seq), tuple(rows), default_labels(levels, base_name))


def _spread(values):
    return max(values) - min(values)


def estimate_limit(table: ExtrapolationTable, window: int = 3):
    """Limit estimate and uncertainty from the most settled level.

    For every level r >= 1 with at least ``window`` entries, the spread
    (max - min) of its last ``window`` entries is computed.  The level with
    the smallest spread wins, deeper levels winning ties; the estimate is its
    last entry and the uncertainty is that spread.
    """
    if len(table.levels) < 2:
        raise ValueError("table needs at least one extrapolation level")
    best = None
    for r in range(1, len(table.levels)):
        vals = [v for _, v in table.levels[r]]
        if len(vals) < window:
            continue
        spread = _spread(vals[-window:])
        if best is None or spread <= best[0]:
            best = (spread, r, vals[-1])
    if best is None:
        vals = [v for _, v in table.levels[1]]
        return vals[-1], _spread(vals) if len(vals) > 1 else float("inf")
    spread, _, estimate = best
    return estimate, spread


def differences_sequence(differences: Sequence) -> list[tuple]:
    """Index boundary differences from n = 1 (the J=2 -> 3 step)."""
    return [(n, d) for n, d in enumerate(differences, start=1)]
