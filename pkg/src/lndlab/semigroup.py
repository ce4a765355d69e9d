"""Two-dimensional affine semigroups and the homogeneous-lnd obstruction.

A monomial algebra in two variables is described by the exponent vectors of
its generators.  If a nonzero homogeneous locally nilpotent derivation
existed, its kernel would be generated by a monomial on a boundary ray of the
cone, and the induced degree function (the primitive functional vanishing on
that ray) would have to take the value 1 on some monomial and satisfy
``deg(D x) = deg(x) - 1`` on the generators.  We check those necessary
conditions ray by ray; failing them on every ray proves nonexistence.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from math import gcd
from typing import Iterable, Sequence

from .errors import ConeError, PreconditionError

Point = tuple[int, int]


def _primitive(v: Point) -> Point:
    g = gcd(v[0], v[1])
    return (v[0] // g, v[1] // g)


def _dot(f: Point, p: Point) -> int:
    return f[0] * p[0] + f[1] * p[1]


def _det(p: Point, q: Point) -> int:
    return p[0] * q[1] - p[1] * q[0]


@dataclass(frozen=True)
class SemigroupPresentation:
    generators: tuple[Point, ...]

    def __post_init__(self):
        pts = []
        for g in self.generators:
            try:
                r, s = g
            except (TypeError, ValueError):
                raise PreconditionError(f"lattice point must have two coordinates: {g!r}") from None
            if int(r) != r or int(s) != s:
                raise PreconditionError(f"lattice point must be integral: {g!r}")
            pts.append((int(r), int(s)))
        if len(set(pts)) != len(pts):
            raise PreconditionError("duplicate generators")
        object.__setattr__(self, "generators", tuple(pts))

    @property
    def nonzero(self) -> list[Point]:
        return [g for g in self.generators if g != (0, 0)]


@dataclass(frozen=True)
class Ray:
    direction: Point
    functional: Point

    def describe_functional(self) -> str:
        a, b = self.functional
        parts = []
        for coef, name in ((a, "r"), (b, "s")):
            if coef == 0:
                continue
            mag = "" if abs(coef) == 1 else str(abs(coef))
            sign = "-" if coef < 0 else "+"
            parts.append((sign, f"{mag}{name}"))
        text = "".join(f"{s}{t}" for s, t in parts)
        return text[1:] if text.startswith("+") else text


@dataclass(frozen=True)
class Cone:
    ray1: Ray
    ray2: Ray

    @property
    def rays(self) -> tuple[Ray, Ray]:
        return (self.ray1, self.ray2)

    def contains(self, p: Point) -> bool:
        return all(_dot(r.functional, p) >= 0 for r in self.rays)


def cone_rays(S: SemigroupPresentation) -> Cone:
    """The two extremal rays of the cone spanned by ``S``, clockwise first.

    A direction ``g`` is extremal when one of its two primitive normals is
    nonnegative on every generator.  Anything but exactly two non-opposite
    extremal directions means the cone is a line, a half-plane or the whole
    plane, and the obstruction does not apply.
    """
    pts = S.nonzero
    if not pts:
        raise ConeError("no nonzero generators")
    rays: dict[Point, Point] = {}
    for g in pts:
        d = _primitive(g)
        if d in rays:
            continue
        for normal in ((-d[1], d[0]), (d[1], -d[0])):
            if all(_dot(normal, p) >= 0 for p in pts):
                rays[d] = normal
                break
    if len(rays) != 2:
        raise ConeError(f"cone is not strictly convex and two-dimensional ({len(rays)} boundary directions)")
    (d1, f1), (d2, f2) = rays.items()
    if _det(d1, d2) == 0:
        raise ConeError("cone is one-dimensional or a half-plane")
    if _det(d1, d2) < 0:
        d1, f1, d2, f2 = d2, f2, d1, f1
    return Cone(Ray(d1, f1), Ray(d2, f2))


# ---------------------------------------------------------------------------
# numerical semigroups
# ---------------------------------------------------------------------------

def numerical_semigroup_elements(gens: Iterable[int], limit: int) -> list[bool]:
    """``table[k]`` is True iff ``k`` is a nonnegative combination of ``gens``."""
    gens = sorted({g for g in gens if g > 0})
    table = [False] * (limit + 1)
    if limit >= 0:
        table[0] = True
    for k in range(1, limit + 1):
        table[k] = any(g <= k and table[k - g] for g in gens)
    return table


def in_numerical_semigroup(k: int, gens: Iterable[int]) -> bool:
    if k < 0:
        return False
    return numerical_semigroup_elements(gens, k)[k]


# ---------------------------------------------------------------------------
# membership
# ---------------------------------------------------------------------------

class Membership(enum.Enum):
    MEMBER = "Member"
    NON_MEMBER = "NonMember"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class MembershipResult:
    status: Membership
    witness: tuple[Point, ...] = ()
    violated: Point | None = None


def membership(p: Point, S: SemigroupPresentation, bound: int) -> MembershipResult:
    """Decide ``p`` in the semigroup up to a multiplicity bound.

    Cone violation proves non-membership regardless of the bound.  Otherwise
    all sums of at most ``bound`` generators are searched; a hit carries the
    summands as witness.
    """
    if bound < 1:
        raise PreconditionError("bound must be at least 1")
    p = (int(p[0]), int(p[1]))
    try:
        cone = cone_rays(S)
    except ConeError:
        cone = None
    if cone is not None:
        for ray in cone.rays:
            if _dot(ray.functional, p) < 0:
                return MembershipResult(Membership.NON_MEMBER, violated=ray.functional)
    if p == (0, 0):
        return MembershipResult(Membership.MEMBER)
    gens = S.nonzero  # presentation order keeps witnesses deterministic
    # breadth-first over number of summands; parent pointers give the witness
    parent: dict[Point, tuple[Point, Point] | None] = {(0, 0): None}
    frontier = [(0, 0)]
    for _ in range(bound):
        nxt = []
        for q in frontier:
            for g in gens:
                t = (q[0] + g[0], q[1] + g[1])
                if t in parent:
                    continue
                parent[t] = (q, g)
                if t == p:
                    return MembershipResult(Membership.MEMBER, witness=_unwind(parent, t))
                nxt.append(t)
        frontier = nxt
    return MembershipResult(Membership.UNKNOWN)


def _unwind(parent, t: Point) -> tuple[Point, ...]:
    out = []
    while parent[t] is not None:
        t, g = parent[t]
        out.append(g)
    return tuple(sorted(out))


# ---------------------------------------------------------------------------
# the obstruction
# ---------------------------------------------------------------------------

class Verdict(enum.Enum):
    NONEXISTENT = "Nonexistent"
    UNDECIDED = "Undecided"


@dataclass
class RayCertificate:
    ray: Ray
    degrees: list[int]
    positive_degrees: list[int]
    degree_one_attainable: bool
    off_ray_failures: list[Point] = field(default_factory=list)
    scaled_functionals_excluded: bool = True
    failed: list[str] = field(default_factory=list)

    @property
    def obstructed(self) -> bool:
        return bool({"C1", "C2"} & set(self.failed))


@dataclass
class ObstructionReport:
    verdict: Verdict
    cone: Cone
    certificates: list[RayCertificate]

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict.value,
            "rays": [
                {
                    "direction": list(c.ray.direction),
                    "functional": list(c.ray.functional),
                    "functional_text": c.ray.describe_functional(),
                    "degrees": c.degrees,
                    "degree_one_attainable": c.degree_one_attainable,
                    "off_ray_failures": [list(p) for p in c.off_ray_failures],
                    "scaled_functionals_excluded": c.scaled_functionals_excluded,
                    "failed_conditions": c.failed,
                }
                for c in self.certificates
            ],
        }


def _check_ray(S: SemigroupPresentation, ray: Ray) -> RayCertificate:
    degrees = [_dot(ray.functional, g) for g in S.generators]
    positive = sorted({d for d in degrees if d > 0})
    top = max(degrees, default=0)
    table = numerical_semigroup_elements(positive, max(top, 1))
    # C1: some monomial of degree 1 (the element g with D g in the kernel)
    c1 = table[1]
    # C2: D maps each off-ray generator to a monomial of degree one less
    off = [g for g, d in zip(S.generators, degrees) if d > 0 and not table[d - 1]]
    # C3: for n >= 2 every degree is a multiple of n while n*d(x) - 1 is not
    c3 = bool(positive)
    failed = []
    if not c1:
        failed.append("C1")
    if off:
        failed.append("C2")
    return RayCertificate(
        ray=ray,
        degrees=degrees,
        positive_degrees=positive,
        degree_one_attainable=c1,
        off_ray_failures=off,
        scaled_functionals_excluded=c3,
        failed=failed,
    )


def homogeneous_lnd_obstruction(S: SemigroupPresentation) -> ObstructionReport:
    """Sound test for the absence of nonzero homogeneous lnd's.

    ``NONEXISTENT`` is a proof; ``UNDECIDED`` claims nothing.
    """
    cone = cone_rays(S)
    certs = [_check_ray(S, ray) for ray in cone.rays]
    verdict = Verdict.NONEXISTENT if all(c.obstructed for c in certs) else Verdict.UNDECIDED
    return ObstructionReport(verdict, cone, certs)


def linear_image(S: SemigroupPresentation, matrix: Sequence[Sequence[int]]) -> SemigroupPresentation:
    """Apply an integer 2x2 matrix to every generator."""
    (a, b), (c, d) = matrix
    return SemigroupPresentation(tuple((a * r + b * s, c * r + d * s) for r, s in S.generators))
