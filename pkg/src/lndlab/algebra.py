"""Exact multivariate Laurent polynomials over the rationals.

Everything else in the package computes in :class:`LaurentPoly`.  Values are
immutable; arithmetic returns new objects and always renormalizes (no zero
coefficients, no zero exponents).
"""

from __future__ import annotations

import ast
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Union

from .errors import ExpressionError, InvertibilityError

Rational = Union[int, Fraction]


def to_fraction(value) -> Fraction:
    """Coerce an int, Fraction or ``"p/q"`` string to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ExpressionError(f"not a rational number: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ExpressionError(f"not a rational number: {value!r}") from exc
    raise ExpressionError(f"not a rational number: {value!r}")


def format_fraction(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


class Monomial:
    """A product of variables with integer (possibly negative) exponents."""

    __slots__ = ("_exps", "_hash")

    def __init__(self, exponents: Mapping[str, int] | Iterable[tuple[str, int]] | None = None):
        items = exponents.items() if isinstance(exponents, Mapping) else (exponents or ())
        acc: dict[str, int] = {}
        for var, e in items:
            acc[var] = acc.get(var, 0) + int(e)
        self._exps = tuple(sorted((v, e) for v, e in acc.items() if e != 0))
        self._hash = hash(self._exps)

    @classmethod
    def var(cls, name: str, exponent: int = 1) -> "Monomial":
        return cls({name: exponent})

    @property
    def exponents(self) -> dict[str, int]:
        return dict(self._exps)

    @property
    def variables(self) -> frozenset[str]:
        return frozenset(v for v, _ in self._exps)

    def degree(self, var: str) -> int:
        for v, e in self._exps:
            if v == var:
                return e
        return 0

    def total_degree(self) -> int:
        return sum(e for _, e in self._exps)

    def is_one(self) -> bool:
        return not self._exps

    def items(self):
        return iter(self._exps)

    def __mul__(self, other: "Monomial") -> "Monomial":
        return Monomial(self._exps + other._exps)

    def __pow__(self, k: int) -> "Monomial":
        return Monomial((v, e * k) for v, e in self._exps)

    def inverse(self) -> "Monomial":
        return self ** -1

    def __eq__(self, other) -> bool:
        return isinstance(other, Monomial) and self._exps == other._exps

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"Monomial({dict(self._exps)!r})"

    def format(self, order: list[str] | None = None) -> str:
        if not self._exps:
            return "1"
        exps = dict(self._exps)
        names = _ordered_vars(exps, order)
        parts = []
        for v in names:
            e = exps[v]
            parts.append(v if e == 1 else f"{v}^{e}")
        return "*".join(parts)

    def __str__(self) -> str:
        return self.format()


ONE_MONOMIAL = Monomial()


def _ordered_vars(names: Iterable[str], order: list[str] | None) -> list[str]:
    names = list(names)
    if not order:
        return sorted(names)
    rank = {v: i for i, v in enumerate(order)}
    return sorted(names, key=lambda v: (rank.get(v, len(rank)), v))


class LaurentPoly:
    """A finite rational combination of monomials.

    Construction normalizes: equal coefficients are merged and zero ones
    dropped, so two polynomials are equal iff their term dicts are equal.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, Rational] | Iterable[tuple[Monomial, Rational]] | None = None):
        items = terms.items() if isinstance(terms, Mapping) else (terms or ())
        acc: dict[Monomial, Fraction] = {}
        for mono, c in items:
            acc[mono] = acc.get(mono, Fraction(0)) + to_fraction(c)
        self._terms = {m: c for m, c in acc.items() if c != 0}
        self._hash = None

    # -- constructors -----------------------------------------------------
    @classmethod
    def zero(cls) -> "LaurentPoly":
        return cls()

    @classmethod
    def const(cls, c) -> "LaurentPoly":
        return cls({ONE_MONOMIAL: to_fraction(c)})

    @classmethod
    def var(cls, name: str, exponent: int = 1) -> "LaurentPoly":
        return cls({Monomial.var(name, exponent): 1})

    @classmethod
    def monomial(cls, mono: Monomial, coeff=1) -> "LaurentPoly":
        return cls({mono: coeff})

    @classmethod
    def coerce(cls, value) -> "LaurentPoly":
        if isinstance(value, LaurentPoly):
            return value
        if isinstance(value, Monomial):
            return cls.monomial(value)
        return cls.const(value)

    # -- inspection -------------------------------------------------------
    @property
    def terms(self) -> dict[Monomial, Fraction]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(m.is_one() for m in self._terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ExpressionError(f"not a constant: {self}")
        return self._terms.get(ONE_MONOMIAL, Fraction(0))

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    @property
    def variables(self) -> frozenset[str]:
        out: set[str] = set()
        for m in self._terms:
            out |= m.variables
        return frozenset(out)

    def min_degree(self, var: str) -> int:
        """Smallest exponent of ``var`` across terms (0 for the zero polynomial)."""
        return min((m.degree(var) for m in self._terms), default=0)

    def max_degree(self, var: str) -> int:
        return max((m.degree(var) for m in self._terms), default=0)

    def pole_order(self, var: str) -> int:
        return max(0, -self.min_degree(var))

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other) -> "LaurentPoly":
        other = LaurentPoly.coerce(other)
        return LaurentPoly(list(self._terms.items()) + list(other._terms.items()))

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly({m: -c for m, c in self._terms.items()})

    def __sub__(self, other) -> "LaurentPoly":
        return self + (-LaurentPoly.coerce(other))

    def __rsub__(self, other) -> "LaurentPoly":
        return LaurentPoly.coerce(other) - self

    def __mul__(self, other) -> "LaurentPoly":
        other = LaurentPoly.coerce(other)
        acc: dict[Monomial, Fraction] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = m1 * m2
                acc[m] = acc.get(m, Fraction(0)) + c1 * c2
        return LaurentPoly(acc)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "LaurentPoly":
        if not isinstance(k, int):
            raise ExpressionError(f"exponent must be an integer, got {k!r}")
        if k < 0:
            return self.inverse() ** (-k)
        result = LaurentPoly.const(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def inverse(self) -> "LaurentPoly":
        """Inverse of a single nonzero term; anything else is not a unit."""
        if len(self._terms) != 1:
            raise InvertibilityError(f"{self} is not a monomial and cannot be inverted")
        (m, c), = self._terms.items()
        return LaurentPoly({m.inverse(): 1 / c})

    def scale(self, c) -> "LaurentPoly":
        c = to_fraction(c)
        return LaurentPoly({m: c * v for m, v in self._terms.items()})

    def __eq__(self, other) -> bool:
        if isinstance(other, LaurentPoly):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self._terms == LaurentPoly.const(other)._terms
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # -- display ----------------------------------------------------------
    def sorted_terms(self, order: list[str] | None = None) -> list[tuple[Monomial, Fraction]]:
        """Terms in graded-lex order: total degree descending, then lex on
        exponents with variables in ``order`` (alphabetical by default)."""
        names = _ordered_vars(self.variables, order)

        def key(item):
            m = item[0]
            return (-m.total_degree(), tuple(-m.degree(v) for v in names))

        return sorted(self._terms.items(), key=key)

    def format(self, order: list[str] | None = None) -> str:
        if not self._terms:
            return "0"
        out = []
        for i, (m, c) in enumerate(self.sorted_terms(order)):
            sign = "-" if c < 0 else "+"
            a = -c if c < 0 else c
            if m.is_one():
                body = format_fraction(a)
            elif a == 1:
                body = m.format(order)
            else:
                body = f"{format_fraction(a)}*{m.format(order)}"
            if i == 0:
                out.append(("-" if sign == "-" else "") + body)
            else:
                out.append(f" {sign} {body}")
        return "".join(out)

    def __str__(self) -> str:
        return self.format()

    def __repr__(self) -> str:
        return f"LaurentPoly({self.format()!r})"

    def leading_sign(self, order: list[str] | None = None) -> int:
        if not self._terms:
            return 0
        return 1 if self.sorted_terms(order)[0][1] > 0 else -1


PolyLike = Union[LaurentPoly, str, int, Fraction]


# ---------------------------------------------------------------------------
# expressions
# ---------------------------------------------------------------------------

def parse(text: str) -> ast.expr:
    """Parse the CLI expression syntax into a Python AST.

    ``^`` is exponentiation; ``/`` is accepted only between rational constants.
    """
    if not isinstance(text, str):
        raise ExpressionError(f"expression must be a string, got {type(text).__name__}")
    src = text.replace("^", "**").strip()
    if not src:
        raise ExpressionError("empty expression")
    try:
        tree = ast.parse(src, mode="eval")
    except SyntaxError as exc:
        raise ExpressionError(f"malformed expression {text!r}: {exc.msg}") from exc
    return tree.body


def evaluate(expr, invertible: Iterable[str] = (), bindings: Mapping[str, LaurentPoly] | None = None) -> LaurentPoly:
    """Normal form of an expression.

    ``expr`` is a string in the CLI syntax, an already-parsed AST node, or a
    LaurentPoly (returned unchanged).  Variables listed in ``bindings`` are
    replaced by their values; a negative power is allowed only on a declared
    invertible variable, or on a bound name whose value is a single term.
    """
    if isinstance(expr, LaurentPoly):
        return expr
    node = parse(expr) if isinstance(expr, str) else expr
    inv = frozenset(invertible)
    bind = dict(bindings or {})
    return _eval(node, inv, bind)


def _eval(node, inv, bind) -> LaurentPoly:
    if isinstance(node, ast.Constant):
        if isinstance(node.value, int) and not isinstance(node.value, bool):
            return LaurentPoly.const(node.value)
        raise ExpressionError(f"unsupported literal {node.value!r}")
    if isinstance(node, ast.Name):
        if node.id in bind:
            return bind[node.id]
        return LaurentPoly.var(node.id)
    if isinstance(node, ast.UnaryOp):
        val = _eval(node.operand, inv, bind)
        if isinstance(node.op, ast.USub):
            return -val
        if isinstance(node.op, ast.UAdd):
            return val
        raise ExpressionError("unsupported unary operator")
    if isinstance(node, ast.BinOp):
        op = node.op
        if isinstance(op, ast.Pow):
            exponent = _integer_exponent(node.right)
            base = _eval(node.left, inv, bind)
            if exponent < 0:
                _check_invertible(node.left, base, inv, bind)
            return base ** exponent
        left = _eval(node.left, inv, bind)
        right = _eval(node.right, inv, bind)
        if isinstance(op, ast.Add):
            return left + right
        if isinstance(op, ast.Sub):
            return left - right
        if isinstance(op, ast.Mult):
            return left * right
        if isinstance(op, ast.Div):
            if not right.is_constant() or right.is_zero():
                raise ExpressionError("division is only allowed by a nonzero rational constant")
            return left.scale(1 / right.constant_value())
        raise ExpressionError(f"unsupported operator {type(op).__name__}")
    raise ExpressionError(f"unsupported syntax: {ast.dump(node)}")


def _integer_exponent(node) -> int:
    sign = 1
    while isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        if isinstance(node.op, ast.USub):
            sign = -sign
        node = node.operand
    if isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
        return sign * node.value
    raise ExpressionError("exponents must be integer literals")


def _check_invertible(node, value: LaurentPoly, inv, bind) -> None:
    if value.is_zero():
        raise InvertibilityError("negative power of zero")
    if not value.is_monomial():
        raise InvertibilityError(f"negative power of non-monomial {value}")
    # a bound name only needs its value to be a single term
    names = {n.id for n in ast.walk(node) if isinstance(n, ast.Name)}
    bad = sorted(n for n in names if n not in inv and n not in bind)
    if bad:
        raise InvertibilityError(f"negative power of non-invertible variable {', '.join(bad)}")


def poly(expr, invertible: Iterable[str] = ()) -> LaurentPoly:
    """Shorthand used throughout the fixtures and tests."""
    return evaluate(expr, invertible)


def substitute(p: LaurentPoly, bindings: Mapping[str, PolyLike]) -> LaurentPoly:
    """Replace variables by polynomials and renormalize.

    A variable occurring with a negative exponent must be bound to a single
    nonzero term, otherwise the inverse does not exist in the Laurent ring.
    """
    values = {k: LaurentPoly.coerce(v) if not isinstance(v, str) else evaluate(v) for k, v in bindings.items()}
    cache: dict[tuple[str, int], LaurentPoly] = {}
    acc: dict[Monomial, Fraction] = {}
    for mono, c in p.items():
        term = LaurentPoly.const(c)
        free = []
        for var, e in mono.items():
            if var not in values:
                free.append((var, e))
                continue
            key = (var, e)
            if key not in cache:
                val = values[var]
                if e < 0 and not val.is_monomial():
                    raise InvertibilityError(
                        f"{var} occurs with exponent {e} but is bound to non-monomial {val}"
                    )
                cache[key] = val ** e
            term = term * cache[key]
        if free:
            term = term * LaurentPoly.monomial(Monomial(free))
        for m, v in term.items():
            acc[m] = acc.get(m, Fraction(0)) + v
    return LaurentPoly(acc)


@dataclass(frozen=True)
class ChartPresentation:
    """Generators of an algebra written as Laurent polynomials in chart variables.

    Only ``inverted_vars`` may carry negative exponents in the generator
    expressions; those are the localizations the chart allows.
    """

    ambient_vars: tuple[str, ...]
    inverted_vars: frozenset[str]
    generators: dict[str, LaurentPoly] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "ambient_vars", tuple(self.ambient_vars))
        object.__setattr__(self, "inverted_vars", frozenset(self.inverted_vars))
        unknown = self.inverted_vars - set(self.ambient_vars)
        if unknown:
            raise ExpressionError(f"inverted variables not in chart: {sorted(unknown)}")
        gens = {}
        for name, g in self.generators.items():
            g = evaluate(g, self.inverted_vars) if isinstance(g, str) else g
            stray = g.variables - set(self.ambient_vars)
            if stray:
                raise ExpressionError(f"generator {name} uses non-chart variables {sorted(stray)}")
            if not self.is_regular(g):
                raise InvertibilityError(f"generator {name} has a negative power of a non-inverted variable")
            gens[name] = g
        object.__setattr__(self, "generators", gens)

    @classmethod
    def build(cls, ambient_vars, inverted_vars, generators: Mapping[str, PolyLike]) -> "ChartPresentation":
        inverted = frozenset(inverted_vars)
        gens = {k: evaluate(v, inverted) if isinstance(v, str) else LaurentPoly.coerce(v) for k, v in generators.items()}
        return cls(tuple(ambient_vars), inverted, gens)

    def is_regular(self, p: LaurentPoly) -> bool:
        """True iff ``p`` has no negative power of a non-inverted variable."""
        return all(e >= 0 or v in self.inverted_vars for m, _ in p.items() for v, e in m.items())

    def poly(self, expr) -> LaurentPoly:
        """Evaluate an expression written in the chart's own variables."""
        return evaluate(expr, self.inverted_vars)

    def to_chart(self, p: LaurentPoly) -> LaurentPoly:
        """Rewrite a polynomial in generator names into chart variables."""
        return substitute(p, self.generators)

    def evaluate_in_generators(self, expr, invertible: Iterable[str] = ()) -> LaurentPoly:
        """Evaluate an expression in generator names, then push it into the chart."""
        p = evaluate(expr, invertible)
        unknown = p.variables - set(self.generators) - set(self.ambient_vars)
        if unknown:
            raise ExpressionError(f"unknown generators {sorted(unknown)}")
        return self.to_chart(p)
