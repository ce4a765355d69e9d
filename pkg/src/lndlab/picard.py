"""Picard classes relative to a C-fibration over P^1.

A class is written ``m[F] + sum m_ij [E_ij]`` where ``F`` is the generic
fiber and ``E_ij`` are the components of the singular fibers, subject to
``[F] = sum_j alpha_ij [E_ij]`` for each fiber ``i``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import PreconditionError


@dataclass(frozen=True)
class FibrationPresentation:
    multiplicities: tuple[tuple[int, ...], ...]
    labels: tuple[tuple[str, ...], ...] | None = None

    def __post_init__(self):
        mults = tuple(tuple(int(a) for a in fiber) for fiber in self.multiplicities)
        for fiber in mults:
            if not fiber:
                raise PreconditionError("every singular fiber needs at least one component")
            if any(a < 1 for a in fiber):
                raise PreconditionError(f"multiplicities must be positive: {list(fiber)}")
        object.__setattr__(self, "multiplicities", mults)
        if self.labels is not None:
            labels = tuple(tuple(f) for f in self.labels)
            if [len(f) for f in labels] != [len(f) for f in mults]:
                raise PreconditionError("labels do not match the fiber shape")
            object.__setattr__(self, "labels", labels)

    @property
    def n(self) -> int:
        return len(self.multiplicities)

    @property
    def component_counts(self) -> list[int]:
        return [len(f) for f in self.multiplicities]

    @classmethod
    def from_json(cls, data) -> "FibrationPresentation":
        try:
            return cls(tuple(tuple(f) for f in data["fibers"]), data.get("labels"))
        except (KeyError, TypeError) as exc:
            raise PreconditionError(f"malformed fibration JSON: {exc}") from exc

    def to_json(self) -> dict:
        out = {"fibers": [list(f) for f in self.multiplicities]}
        if self.labels is not None:
            out["labels"] = [list(f) for f in self.labels]
        return out


@dataclass(frozen=True)
class PicardElement:
    m: int
    coeffs: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "m", int(self.m))
        object.__setattr__(self, "coeffs", tuple(tuple(int(c) for c in f) for f in self.coeffs))

    @classmethod
    def zero(cls, f: FibrationPresentation) -> "PicardElement":
        return cls(0, tuple((0,) * len(fiber) for fiber in f.multiplicities))

    @classmethod
    def from_json(cls, data) -> "PicardElement":
        try:
            return cls(data.get("m", 0), tuple(tuple(c) for c in data["coeffs"]))
        except (KeyError, TypeError, AttributeError) as exc:
            raise PreconditionError(f"malformed Picard element JSON: {exc}") from exc

    def to_json(self) -> dict:
        return {"m": self.m, "coeffs": [list(c) for c in self.coeffs]}

    def add_fiber_relation(self, f: FibrationPresentation, i: int, t: int) -> "PicardElement":
        """Add ``t * ([F] - sum_j alpha_ij [E_ij])`` (which is zero in Pic)."""
        coeffs = list(self.coeffs)
        coeffs[i] = tuple(c - t * a for c, a in zip(coeffs[i], f.multiplicities[i]))
        return PicardElement(self.m + t, tuple(coeffs))


def _check_shape(l: PicardElement, f: FibrationPresentation) -> None:
    if [len(c) for c in l.coeffs] != f.component_counts:
        raise PreconditionError(
            f"element shape {[len(c) for c in l.coeffs]} does not match fibration {f.component_counts}"
        )


def pic_rank(f: FibrationPresentation) -> int:
    return sum(f.component_counts) - f.n + 1


def standard_form(l: PicardElement, f: FibrationPresentation) -> PicardElement:
    """Normalize so that ``m_ij < alpha_ij`` for all j and some ``m_ij >= 0``.

    Per fiber, ``t = max_j floor(m_ij / alpha_ij)`` copies of the fiber
    relation are moved into ``m``.
    """
    _check_shape(l, f)
    out = l
    for i, (coeffs, alphas) in enumerate(zip(l.coeffs, f.multiplicities)):
        t = max(c // a for c, a in zip(coeffs, alphas))
        if t:
            out = out.add_fiber_relation(f, i, t)
    return out


def is_standard(l: PicardElement, f: FibrationPresentation) -> bool:
    _check_shape(l, f)
    return all(
        all(c < a for c, a in zip(coeffs, alphas)) and any(c >= 0 for c in coeffs)
        for coeffs, alphas in zip(l.coeffs, f.multiplicities)
    )


def is_positive(l: PicardElement, f: FibrationPresentation) -> bool:
    return standard_form(l, f).m >= 0


# ---------------------------------------------------------------------------
# intersection bookkeeping for a hypothetical second fibration
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CountTable:
    N: int
    r: int
    bp_phiq: int
    b0_phiq: int
    bp_phi0: int
    bp_phiinf: int
    b0_phiinf: int
    b0_phi0: int
    deg_p1: int
    deg_q1: int
    h2_target: int
    h4_target: int
    leading_exponent: int

    def to_json(self) -> dict:
        return {
            "N": self.N,
            "r": self.r,
            "|B_p,Phi_q|": self.bp_phiq,
            "|B_0,Phi_q|": self.b0_phiq,
            "|B_p,Phi_0|": self.bp_phi0,
            "|B_p,Phi_inf|": self.bp_phiinf,
            "|B_0,Phi_inf|": self.b0_phiinf,
            "|B_0,Phi_0|": self.b0_phi0,
            "deg P1": self.deg_p1,
            "deg Q1": self.deg_q1,
            "2deg_y P + deg_u P": self.h2_target,
            "2deg_y Q + deg_u Q": self.h4_target,
            "leading exponent of phi": self.leading_exponent,
        }


def intersection_counts(N: int, r: int) -> CountTable:
    """Intersection numbers of the fibers of ``b`` with those of ``phi``.

    ``N`` is the generic count, ``r`` the vanishing order of ``phi`` along
    the exceptional curve ``A_0``.  The leading form of ``phi`` is then
    ``y**(-r/4)``.
    """
    if N <= 0:
        raise PreconditionError("N must be positive")
    if not 0 <= r <= N:
        raise PreconditionError("r must satisfy 0 <= r <= N")
    if N % 4:
        raise PreconditionError(f"4 does not divide N = {N}")
    if (N - r) % 4:
        raise PreconditionError(f"4 does not divide N - r = {N - r}")
    return CountTable(
        N=N,
        r=r,
        bp_phiq=N,
        b0_phiq=N // 2,
        bp_phi0=(N - r) // 2,
        bp_phiinf=N // 2,
        b0_phiinf=N // 4,
        b0_phi0=(N - r) // 4,
        deg_p1=(N - r) // 4,
        deg_q1=N // 4,
        h2_target=(N - r) // 2,
        h4_target=N // 2,
        leading_exponent=-(r // 4),
    )


def element_from_divisor(f: FibrationPresentation, m: int, coeffs: Sequence[Sequence[int]]) -> PicardElement:
    el = PicardElement(m, tuple(tuple(c) for c in coeffs))
    _check_shape(el, f)
    return el
