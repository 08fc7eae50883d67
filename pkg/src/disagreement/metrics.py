"""Balance, dispersion and geometric discrepancy of categorical share vectors.

Shares are fractions on the probability simplex. For a three-category
question the order is (up, unchanged, down); consumer questions use
(sharp increase, slight increase, unchanged, slight fall, sharp fall[, don't know]).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

SUM_TOLERANCE = 1e-6
RADICAND_TOLERANCE = 1e-12


class InvalidArityError(ValueError):
    pass


class InvalidSharesError(ValueError):
    pass


@dataclass(frozen=True)
class SharesVector:
    """Immutable share vector on the simplex.

    Use :meth:`normalized` to build one from raw values whose sum is only
    approximately one (ingest does this after its own tolerance check).
    """

    shares: tuple[float, ...]

    def __post_init__(self) -> None:
        shares = tuple(float(s) for s in self.shares)
        object.__setattr__(self, "shares", shares)
        if len(shares) < 2:
            raise InvalidArityError(f"share vector needs at least 2 categories, got {len(shares)}")
        for s in shares:
            if not (0.0 <= s <= 1.0) or math.isnan(s):
                raise InvalidSharesError(f"share {s!r} outside [0, 1]")
        total = math.fsum(shares)
        if abs(total - 1.0) > SUM_TOLERANCE:
            raise InvalidSharesError(f"shares sum to {total!r}, expected 1 within {SUM_TOLERANCE}")

    @classmethod
    def normalized(cls, values: Iterable[float]) -> "SharesVector":
        values = [float(v) for v in values]
        if any(v < 0 or math.isnan(v) for v in values):
            raise InvalidSharesError(f"negative or missing share in {values!r}")
        total = math.fsum(values)
        if total <= 0:
            raise InvalidSharesError("shares sum to zero")
        return cls(tuple(v / total for v in values))

    @property
    def arity(self) -> int:
        return len(self.shares)

    def __len__(self) -> int:
        return len(self.shares)

    def __iter__(self):
        return iter(self.shares)

    def __getitem__(self, i):
        return self.shares[i]


def _as_shares(s: SharesVector | Sequence[float]) -> SharesVector:
    return s if isinstance(s, SharesVector) else SharesVector(tuple(s))


def _three(s: SharesVector | Sequence[float]) -> tuple[float, float, float]:
    s = _as_shares(s)
    if s.arity != 3:
        raise InvalidArityError(f"expected (up, same, down) shares, got arity {s.arity}")
    return s.shares  # type: ignore[return-value]


def balance(s: SharesVector | Sequence[float]) -> float:
    """Share of "up" answers minus share of "down" answers."""
    up, _, down = _three(s)
    return up - down


def dispersion(s: SharesVector | Sequence[float]) -> float:
    """Standard deviation of the balance: sqrt(P + M - (P - M)**2).

    The neutral share only enters through the simplex constraint.
    """
    up, _, down = _three(s)
    radicand = up + down - (up - down) ** 2
    if radicand < 0:
        if radicand < -RADICAND_TOLERANCE:
            raise InvalidSharesError(f"negative dispersion radicand {radicand!r}")
        radicand = 0.0
    return min(math.sqrt(radicand), 1.0)


def max_vertex_distance(arity: int) -> float:
    """Euclidean distance from the simplex barycenter to any vertex."""
    if arity < 2:
        raise InvalidArityError(f"arity must be >= 2, got {arity}")
    return math.sqrt((arity - 1) / arity)


def discrepancy(s: SharesVector | Sequence[float]) -> float:
    """Geometric discrepancy: 1 minus the barycenter distance over the vertex distance.

    1 when answers are spread evenly over every category, 0 when a single
    category collects all of them.
    """
    s = _as_shares(s)
    n = s.arity
    c = 1.0 / n
    dist = math.sqrt(math.fsum((x - c) ** 2 for x in s.shares))
    value = 1.0 - dist / max_vertex_distance(n)
    # rounding can push a vertex a few ulps past the bound
    return min(max(value, 0.0), 1.0)


def point_at_discrepancy(value: float, arity: int = 3, towards: int = 0) -> SharesVector:
    """Share vector on the segment from the barycenter to vertex ``towards`` with the given discrepancy.

    Handy for building synthetic datasets that hit known indicator levels.
    """
    if not 0.0 <= value <= 1.0:
        raise ValueError(f"discrepancy {value!r} outside [0, 1]")
    if arity < 2:
        raise InvalidArityError(f"arity must be >= 2, got {arity}")
    t = 1.0 - value
    c = 1.0 / arity
    shares = [c - t * c] * arity
    shares[towards] = c + t * (1.0 - c)
    return SharesVector.normalized(max(x, 0.0) for x in shares)
