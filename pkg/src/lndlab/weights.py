"""Weights ``a + b*rho`` with rho a positive infinitesimal, and leading forms.

Because rho is irrational, two weights are equal only when both parts agree;
treating it as infinitesimal makes the comparison lexicographic on ``(a, b)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .algebra import ChartPresentation, LaurentPoly, Monomial, format_fraction, to_fraction
from .errors import WeightError


@dataclass(frozen=True, order=True)
class Weight:
    a: Fraction = Fraction(0)
    b: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "a", to_fraction(self.a))
        object.__setattr__(self, "b", to_fraction(self.b))

    def __add__(self, other: "Weight") -> "Weight":
        return Weight(self.a + other.a, self.b + other.b)

    def __sub__(self, other: "Weight") -> "Weight":
        return Weight(self.a - other.a, self.b - other.b)

    def __neg__(self) -> "Weight":
        return Weight(-self.a, -self.b)

    def __mul__(self, k: int) -> "Weight":
        return Weight(self.a * k, self.b * k)

    __rmul__ = __mul__

    def to_json(self) -> list[str]:
        return [format_fraction(self.a), format_fraction(self.b)]

    @classmethod
    def from_json(cls, value) -> "Weight":
        try:
            a, b = value
        except (TypeError, ValueError) as exc:
            raise WeightError(f"weight must be a pair [a, b], got {value!r}") from exc
        return cls(to_fraction(a), to_fraction(b))

    def __str__(self) -> str:
        a, b = format_fraction(self.a), format_fraction(abs(self.b))
        if self.b == 0:
            return a
        sign = "-" if self.b < 0 else "+"
        return f"{a}{sign}{b}*rho"


ZERO_WEIGHT = Weight()

WeightAssignment = Mapping[str, Weight]


def make_weights(raw: Mapping[str, object]) -> dict[str, Weight]:
    """Build an assignment from ``{var: Weight | (a, b) | [a, b]}``."""
    out = {}
    for var, w in raw.items():
        out[var] = w if isinstance(w, Weight) else Weight.from_json(w)
    return out


def weight_of(m: Monomial, weights: WeightAssignment) -> Weight:
    total = ZERO_WEIGHT
    for var, e in m.items():
        try:
            total = total + weights[var] * e
        except KeyError:
            raise WeightError(f"no weight assigned to variable {var!r}") from None
    return total


def max_weight(p: LaurentPoly, weights: WeightAssignment) -> Weight:
    if p.is_zero():
        raise WeightError("the zero polynomial has no leading form")
    return max(weight_of(m, weights) for m, _ in p.items())


def leading_form(p: LaurentPoly, weights: WeightAssignment) -> LaurentPoly:
    """Sum of the terms of ``p`` of maximal weight.

    Usually one term, but ties are kept: nothing here assumes the weights are
    incommensurable.
    """
    top = max_weight(p, weights)
    return LaurentPoly({m: c for m, c in p.items() if weight_of(m, weights) == top})


def is_homogeneous(p: LaurentPoly, weights: WeightAssignment) -> bool:
    return len({weight_of(m, weights) for m, _ in p.items()}) <= 1


def induced_weights(chart: ChartPresentation, weights: WeightAssignment) -> dict[str, Weight]:
    missing = [v for v in chart.ambient_vars if v not in weights]
    if missing:
        raise WeightError(f"chart variables without a weight: {missing}")
    return {name: max_weight(g, weights) for name, g in chart.generators.items()}
