"""Derivations of chart-presented algebras.

A derivation is determined by the images of the chart variables; it acts on
Laurent polynomials by the Leibniz rule, so the image of an inverted variable
``v**-1`` is ``-v**-2 * D(v)`` automatically.
"""

from __future__ import annotations

import ast
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .algebra import ChartPresentation, LaurentPoly, Monomial, evaluate, parse
from .errors import DerivationError, InvertibilityError, PreconditionError, WeightError
from .weights import Weight, WeightAssignment, weight_of

DEFAULT_MAX_ITER = 64


def max_iterations() -> int:
    """Iteration bound for nilpotency checks, from ``LNDLAB_MAX_ITER``."""
    raw = os.environ.get("LNDLAB_MAX_ITER")
    if raw is None:
        return DEFAULT_MAX_ITER
    try:
        value = int(raw)
    except ValueError:
        raise PreconditionError(f"LNDLAB_MAX_ITER must be an integer, got {raw!r}") from None
    if value < 1:
        raise PreconditionError("LNDLAB_MAX_ITER must be at least 1")
    return value


@dataclass(frozen=True)
class Derivation:
    images: dict[str, LaurentPoly]
    chart: ChartPresentation | None = None

    def __post_init__(self):
        images = {}
        inv = self.chart.inverted_vars if self.chart else ()
        for var, img in self.images.items():
            images[var] = evaluate(img, inv) if isinstance(img, str) else LaurentPoly.coerce(img)
        object.__setattr__(self, "images", images)

    @classmethod
    def on_chart(cls, chart: ChartPresentation, images: Mapping[str, object]) -> "Derivation":
        """Derivation on ``chart``; variables not mentioned map to zero."""
        unknown = set(images) - set(chart.ambient_vars)
        if unknown:
            raise DerivationError(f"images given for non-chart variables {sorted(unknown)}")
        full = {v: images.get(v, 0) for v in chart.ambient_vars}
        return cls(full, chart)

    def __call__(self, p) -> LaurentPoly:
        return apply(self, p)

    def scaled(self, factor: LaurentPoly) -> "Derivation":
        return Derivation({v: factor * img for v, img in self.images.items()}, self.chart)

    def __add__(self, other: "Derivation") -> "Derivation":
        keys = set(self.images) | set(other.images)
        zero = LaurentPoly.zero()
        return Derivation({k: self.images.get(k, zero) + other.images.get(k, zero) for k in keys}, self.chart)

    def is_zero(self) -> bool:
        return all(img.is_zero() for img in self.images.values())


def apply(d: Derivation, p) -> LaurentPoly:
    """Leibniz-rule image of ``p``."""
    if isinstance(p, str):
        p = evaluate(p, d.chart.inverted_vars if d.chart else ())
    p = LaurentPoly.coerce(p)
    acc: dict[Monomial, Fraction] = {}
    for mono, c in p.items():
        exps = mono.exponents
        for var, e in exps.items():
            try:
                img = d.images[var]
            except KeyError:
                raise DerivationError(f"no image assigned to variable {var!r}") from None
            if img.is_zero():
                continue
            rest = dict(exps)
            rest[var] = e - 1
            factor = LaurentPoly.monomial(Monomial(rest), c * e)
            for m, v in (factor * img).items():
                acc[m] = acc.get(m, Fraction(0)) + v
    return LaurentPoly(acc)


# ---------------------------------------------------------------------------
# nilpotency
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NilpotencyCertificate:
    """``iterates[k] = D^k(element)``, all nonzero, and ``D`` of the last is 0."""

    element: LaurentPoly
    index: int
    iterates: tuple[LaurentPoly, ...]


@dataclass(frozen=True)
class NotNilpotentWithinBound:
    element: LaurentPoly
    bound: int
    last: LaurentPoly


def nilpotency_index(d: Derivation, p, bound: int | None = None):
    """Least ``k`` with ``D^k(p) = 0``, if it is at most ``bound``.

    Never claims non-nilpotency: exhausting the bound returns
    :class:`NotNilpotentWithinBound`.
    """
    if bound is None:
        bound = max_iterations()
    if bound < 1:
        raise PreconditionError("bound must be at least 1")
    if isinstance(p, str):
        p = evaluate(p, d.chart.inverted_vars if d.chart else ())
    p = LaurentPoly.coerce(p)
    chain = []
    current = p
    while not current.is_zero():
        if len(chain) >= bound:
            return NotNilpotentWithinBound(p, bound, current)
        chain.append(current)
        current = apply(d, current)
    return NilpotencyCertificate(p, len(chain), tuple(chain))


# ---------------------------------------------------------------------------
# regularity via witnesses
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RegularityFailure:
    generator: str
    reason: str
    discrepancy: LaurentPoly | None = None


@dataclass(frozen=True)
class RegularityReport:
    failures: tuple[RegularityFailure, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.failures

    @property
    def failing_generators(self) -> list[str]:
        return [f.generator for f in self.failures]


def verify_regular(
    d: Derivation,
    witnesses: Mapping[str, object],
    invertible_generators: Iterable[str] = (),
) -> RegularityReport:
    """Check that ``D`` maps each chart generator into the algebra.

    ``witnesses[g]`` is an expression in generator names claimed to equal
    ``D(g)``.  It certifies membership if it is a polynomial in the
    generators (negative powers only on ``invertible_generators``) and it
    agrees with the Leibniz image once pushed into the chart.
    """
    chart = d.chart
    if chart is None:
        raise DerivationError("verify_regular needs a derivation attached to a chart")
    gens = chart.generators
    missing = [g for g in gens if g not in witnesses]
    if missing:
        raise DerivationError(f"missing witnesses for {missing}")
    inv = frozenset(invertible_generators)
    failures = []
    for name, expr in gens.items():
        raw = witnesses[name]
        names = _names(raw)
        unknown = names - set(gens)
        if unknown:
            raise DerivationError(f"witness for {name} references unknown generators {sorted(unknown)}")
        try:
            w = evaluate(raw, inv) if isinstance(raw, str) else LaurentPoly.coerce(raw)
        except InvertibilityError as exc:
            failures.append(RegularityFailure(name, f"witness is not in the algebra: {exc}"))
            continue
        bad = sorted({v for m, _ in w.items() for v, e in m.items() if e < 0 and v not in inv})
        if bad:
            failures.append(RegularityFailure(name, f"witness has negative powers of {', '.join(bad)}"))
            continue
        diff = chart.to_chart(w) - apply(d, expr)
        if not diff.is_zero():
            failures.append(RegularityFailure(name, "witness differs from the image", diff))
    return RegularityReport(tuple(failures))


def _names(raw) -> set[str]:
    if isinstance(raw, str):
        return {n.id for n in ast.walk(parse(raw)) if isinstance(n, ast.Name)}
    return set(LaurentPoly.coerce(raw).variables)


# ---------------------------------------------------------------------------
# transforms
# ---------------------------------------------------------------------------

def localize_lift(d: Derivation, r: str, generators: Sequence) -> tuple[Derivation, int]:
    """Clear the ``r``-denominators of ``D`` on a generating set.

    Returns ``(r**m * D, m)`` with ``m`` the largest pole order in ``r`` among
    the images of ``generators``.
    """
    if not apply(d, LaurentPoly.var(r)).is_zero():
        raise DerivationError(f"the derivation does not annihilate {r}")
    polys = [LaurentPoly.coerce(g) if not isinstance(g, str) else evaluate(g, d.chart.inverted_vars if d.chart else {r}) for g in generators]
    m = max((apply(d, g).pole_order(r) for g in polys), default=0)
    if m == 0:
        return d, 0
    return d.scaled(LaurentPoly.var(r, m)), m


def homogeneous_components(d: Derivation, weights: WeightAssignment) -> list[tuple[Weight, Derivation]]:
    """Split ``D`` into weight-homogeneous pieces, highest degree first.

    The piece of degree ``delta`` sends a monomial of weight ``mu`` to a sum
    of monomials of weight ``mu + delta``.
    """
    pieces: dict[Weight, dict[str, dict[Monomial, Fraction]]] = {}
    for var, img in d.images.items():
        if var not in weights:
            raise WeightError(f"no weight assigned to variable {var!r}")
        base = weights[var]
        for m, c in img.items():
            delta = weight_of(m, weights) - base
            pieces.setdefault(delta, {}).setdefault(var, {})[m] = c
    out = []
    for delta in sorted(pieces, reverse=True):
        images = {v: LaurentPoly(pieces[delta].get(v, {})) for v in d.images}
        out.append((delta, Derivation(images, d.chart)))
    return out


def is_homogeneous_derivation(d: Derivation, weights: WeightAssignment) -> bool:
    return len(homogeneous_components(d, weights)) <= 1


@dataclass(frozen=True)
class BundleLift:
    derivation: Derivation
    order: int  # tau vanishes to this order along {f = 0}
    images: dict[int, LaurentPoly] = field(default_factory=dict)


def order_along(p: LaurentPoly, f: str, tau: str, m: int) -> int:
    """Vanishing order along ``{f = 0}`` when ``tau`` vanishes there to order ``m``."""
    if p.is_zero():
        raise DerivationError("order of the zero function is infinite")
    return min(mono.degree(f) + m * mono.degree(tau) for mono, _ in p.items())


def bundle_lift(
    d1: Derivation,
    omegas: Sequence,
    f: str,
    tau: str,
    N: int,
    pole_orders: Sequence[int] | None = None,
) -> BundleLift:
    """Lift a base derivation to the line bundle ``O(S)[tau, tau*omega_i]``.

    ``D'(tau) = 0`` and ``D'(v) = tau**N * D1(v)`` on base variables.  The
    trivialization vanishes to order ``m`` (the largest declared pole order
    of the omegas) along ``{f = 0}``; ``N`` must exceed the pole order of
    every ``D1(omega_i)``.
    """
    if f not in d1.images:
        raise DerivationError(f"base derivation has no image for {f}")
    if not d1.images[f].is_zero():
        raise DerivationError(f"the base derivation does not annihilate {f}")
    if tau in d1.images:
        raise DerivationError(f"{tau} already names a base variable")
    inv = d1.chart.inverted_vars if d1.chart else {f}
    polys = [evaluate(w, inv) if isinstance(w, str) else LaurentPoly.coerce(w) for w in omegas]
    if pole_orders is None:
        pole_orders = [w.pole_order(f) for w in polys]
    if len(pole_orders) != len(polys):
        raise PreconditionError("one pole order per omega is required")
    m = max([0, *pole_orders])
    for w, k in zip(polys, pole_orders):
        if w.pole_order(f) > k:
            raise PreconditionError(f"omega {w} has a pole of order {w.pole_order(f)} > declared {k}")
    for w in polys:
        pole = apply(d1, w).pole_order(f)
        if N <= pole:
            raise PreconditionError(
                f"N = {N} does not exceed the pole order {pole} of D1({w}) along {f}"
            )
    chart = None
    if d1.chart is not None:
        base = d1.chart
        chart = ChartPresentation(
            base.ambient_vars + (tau,),
            base.inverted_vars,
            {**base.generators, tau: LaurentPoly.var(tau), **{f"{tau}*omega{i}": LaurentPoly.var(tau) * w for i, w in enumerate(polys, 1)}},
        )
    lift_factor = LaurentPoly.var(tau, N)
    images = {v: lift_factor * img for v, img in d1.images.items()}
    images[tau] = LaurentPoly.zero()
    lifted = Derivation(images, chart)
    bundle_images = {}
    for i, w in enumerate(polys, 1):
        img = apply(lifted, LaurentPoly.var(tau) * w)
        if not img.is_zero() and order_along(img, f, tau, m) < 0:
            raise PreconditionError(f"image of {tau}*omega{i} keeps a pole along {f}")
        bundle_images[i] = img
    return BundleLift(lifted, m, bundle_images)
