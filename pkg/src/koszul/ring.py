"""Exact arithmetic in the local ring k[x1..xd] localized at the origin.

Polynomials are python-flint ``fmpq_mpoly`` (k = Q) or ``nmod_mpoly``
(k = F_p) objects.  A fraction is stored in lowest terms with its
denominator normalized, so two fractions are equal exactly when their
stored numerators and denominators agree.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import flint

from .errors import InvalidParams, NotInvertible


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True)
class BaseField:
    """Q when ``p == 0``, otherwise the prime field F_p."""

    p: int = 0

    def __post_init__(self):
        if self.p != 0 and not _is_prime(self.p):
            raise InvalidParams(f"{self.p} is not prime")

    @classmethod
    def rationals(cls) -> "BaseField":
        return cls(0)

    @classmethod
    def prime(cls, p: int) -> "BaseField":
        return cls(p)

    @property
    def is_rational(self) -> bool:
        return self.p == 0

    def __str__(self):
        return "QQ" if self.p == 0 else f"GF({self.p})"

    @classmethod
    def parse(cls, text: str) -> "BaseField":
        t = text.strip().upper()
        if t in ("QQ", "Q", "RATIONALS"):
            return cls(0)
        for prefix in ("GF(", "F_", "GF", "F"):
            if t.startswith(prefix):
                digits = t[len(prefix):].rstrip(")")
                if digits.isdigit():
                    return cls(int(digits))
        raise InvalidParams(f"unknown base field {text!r}")


class LocalRing:
    """L_d over a base field; instances are cached per (field, variables)."""

    _cache: dict = {}

    def __new__(cls, field: BaseField, variables: Iterable[str]):
        variables = tuple(variables)
        key = (field, variables)
        ring = cls._cache.get(key)
        if ring is None:
            ring = super().__new__(cls)
            ring._setup(field, variables)
            cls._cache[key] = ring
        return ring

    def _setup(self, field, variables):
        if len(set(variables)) != len(variables):
            raise InvalidParams("repeated variable name")
        self.field = field
        self.variables = variables
        self.nvars = len(variables)
        if not variables:
            # flint contexts need at least one generator; use a dummy that never appears
            names = ("_",)
        else:
            names = variables
        if field.is_rational:
            self.ctx = flint.fmpq_mpoly_ctx.get(names)
        else:
            self.ctx = flint.nmod_mpoly_ctx.get(names, modulus=field.p)
        self._origin = (0,) * len(names)
        self._zero_poly = self.ctx.constant(0)
        self._one_poly = self.ctx.constant(1)
        self.zero = LocalScalar._mk(self, self._zero_poly, self._one_poly)
        self.one = LocalScalar._mk(self, self._one_poly, self._one_poly)

    def __reduce__(self):
        return (LocalRing, (self.field, self.variables))

    def __repr__(self):
        return f"LocalRing({self.field}, {list(self.variables)})"

    # constructors
    def const(self, c) -> "LocalScalar":
        if isinstance(c, Fraction):
            c = flint.fmpq(c.numerator, c.denominator) if self.field.is_rational else (
                c.numerator * pow(c.denominator, -1, self.field.p))
        if not self.field.is_rational:
            c = int(c) % self.field.p
        return LocalScalar._mk(self, self.ctx.constant(c), self._one_poly)

    def var(self, name: str) -> "LocalScalar":
        i = self.variables.index(name)
        return LocalScalar._mk(self, self.ctx.gens()[i], self._one_poly)

    def gens(self):
        return [self.var(v) for v in self.variables]

    def scalar(self, num, den=None) -> "LocalScalar":
        """Build num/den from polynomials or ints; den must be a unit."""
        num = self._coerce_poly(num)
        den = self._one_poly if den is None else self._coerce_poly(den)
        return LocalScalar(self, num, den)

    def frac(self, num, den=None) -> "Frac":
        num = self._coerce_poly(num)
        den = self._one_poly if den is None else self._coerce_poly(den)
        return Frac(self, num, den)

    def _coerce_poly(self, p):
        if isinstance(p, Frac):
            if not p.den.is_one():
                raise TypeError("expected a polynomial")
            return p.num
        if isinstance(p, (int, Fraction)):
            return self.const(p).num
        return p

    def poly_at_origin(self, p):
        return p[self._origin]

    def coeff_inverse(self, c):
        if self.field.is_rational:
            return 1 / flint.fmpq(c)
        return pow(int(c), -1, self.field.p)


class Frac:
    """Element of the fraction field of k[x1..xd], kept in lowest terms.

    Normalization: den has constant term 1 when that term is nonzero,
    otherwise den has leading coefficient 1.
    """

    __slots__ = ("ring", "num", "den")

    def __init__(self, ring: LocalRing, num, den):
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        self.ring = ring
        self.num, self.den = _canonical(ring, num, den)

    @classmethod
    def _mk(cls, ring, num, den):
        obj = object.__new__(cls)
        obj.ring = ring
        obj.num = num
        obj.den = den
        return obj

    def _result_cls(self, other):
        if type(self) is LocalScalar and type(other) is LocalScalar:
            return LocalScalar
        return Frac

    def _coerce(self, other):
        if isinstance(other, Frac):
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.const(other)
        return NotImplemented

    def _build(self, cls, num, den):
        if den.is_one() or num.is_zero():
            if num.is_zero():
                den = self.ring._one_poly
            return cls._mk(self.ring, num, den)
        n, d = _canonical(self.ring, num, den)
        return cls._mk(self.ring, n, d)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        cls = self._result_cls(other)
        if self.den == other.den:
            return self._build(cls, self.num + other.num, self.den)
        return self._build(cls, self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return type(self)._mk(self.ring, -self.num, self.den)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        cls = self._result_cls(other)
        if self.num.is_zero() or other.num.is_zero():
            return cls._mk(self.ring, self.ring._zero_poly, self.ring._one_poly)
        return self._build(cls, self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.num.is_zero():
            raise ZeroDivisionError("division by zero")
        q = Frac(self.ring, self.num * other.den, self.den * other.num)
        return q

    def __pow__(self, e: int):
        if e < 0:
            return (self.ring.one / self) ** (-e)
        out = self.ring.one if type(self) is LocalScalar else Frac._mk(
            self.ring, self.ring._one_poly, self.ring._one_poly)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        # canonical form makes representational equality semantic
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((str(self.num), str(self.den)))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_one(self) -> bool:
        return self.num.is_one() and self.den.is_one()

    def in_local(self) -> bool:
        return self.ring.poly_at_origin(self.den) != 0

    def to_local(self) -> "LocalScalar | None":
        """Return the same element as a LocalScalar, or None if it is not in L."""
        if not self.in_local():
            return None
        return LocalScalar._mk(self.ring, self.num, self.den)

    def is_polynomial(self) -> bool:
        return self.den.is_one()

    def valuation(self) -> int:
        """Order of vanishing at the origin (lowest total degree of num minus that of den)."""
        if self.num.is_zero():
            raise ValueError("valuation of zero")
        return _low_degree(self.num) - _low_degree(self.den)

    def __str__(self):
        if self.den.is_one():
            return str(self.num)
        return f"({self.num})/({self.den})"

    def __repr__(self):
        return f"{type(self).__name__}({self})"


class LocalScalar(Frac):
    """Element num/den of L_d; den does not vanish at the origin."""

    __slots__ = ()

    def __init__(self, ring, num, den):
        super().__init__(ring, num, den)
        if ring.poly_at_origin(self.den) == 0:
            raise ValueError(f"{self} is not an element of the local ring")

    def at_origin(self):
        """Residue in the base field (den is normalized to den(0) = 1)."""
        return self.ring.poly_at_origin(self.num)

    def is_unit(self) -> bool:
        return self.ring.poly_at_origin(self.num) != 0

    def inverse(self) -> "LocalScalar":
        if not self.is_unit():
            raise NotInvertible(f"{self} is not a unit")
        return LocalScalar._mk(self.ring, *_canonical(self.ring, self.den, self.num))

    def exact_div(self, other: "LocalScalar") -> "LocalScalar | None":
        """self/other if that quotient lies in L, else None."""
        if other.is_zero():
            raise ZeroDivisionError("division by zero")
        return (self / other).to_local()

    def quotient_map(self, killed: Iterable[str]) -> "LocalScalar":
        killed = [v for v in killed]
        if not killed:
            return self
        sub = {v: 0 for v in killed}
        num = self.num.subs(sub)
        den = self.den.subs(sub)
        return LocalScalar(self.ring, num, den)


def _low_degree(p) -> int:
    return min(sum(m) for m in p.monoms())


def _canonical(ring, num, den):
    if num.is_zero():
        return ring._zero_poly, ring._one_poly
    if not den.is_constant():
        g = num.gcd(den)
        if not g.is_one():
            num = num / g
            den = den / g
    c0 = ring.poly_at_origin(den)
    lead = c0 if c0 != 0 else den.leading_coefficient()
    if lead != 1:
        inv = ring.coeff_inverse(lead)
        num = num * inv
        den = den * inv
    return num, den


def is_unit(a: LocalScalar) -> bool:
    return a.is_unit()


def quotient_map(a: LocalScalar, killed: Iterable[str]) -> LocalScalar:
    """Image of ``a`` in L/(killed variables), represented by substitution."""
    return a.quotient_map(killed)


class RegularContext:
    """A local ring together with an index set S and s -> f_s, each f_s a variable.

    ``indices`` is the ordered tuple S (positive integers).  Bit i of a
    subset mask corresponds to ``indices[i]``.
    """

    def __init__(self, ring: LocalRing, sequence: dict):
        if len(sequence) > 16:
            raise InvalidParams("at most 16 directions are supported")
        names = list(sequence.values())
        if len(set(names)) != len(names):
            raise InvalidParams("sequence assignment must be injective")
        for v in names:
            if v not in ring.variables:
                raise InvalidParams(f"unknown variable {v!r}")
        self.ring = ring
        self.indices = tuple(sorted(sequence))
        self.sequence = {s: sequence[s] for s in self.indices}
        self.size = len(self.indices)
        self.full = (1 << self.size) - 1

    @classmethod
    def standard(cls, variables, field: BaseField | None = None) -> "RegularContext":
        """Context with S = {1..d} and f_i = i-th variable."""
        ring = LocalRing(field or BaseField.rationals(), variables)
        return cls(ring, {i + 1: v for i, v in enumerate(ring.variables)})

    def __eq__(self, other):
        return (isinstance(other, RegularContext) and self.ring is other.ring
                and self.sequence == other.sequence)

    def __hash__(self):
        return hash((id(self.ring), tuple(self.sequence.items())))

    def __repr__(self):
        return f"RegularContext({self.ring!r}, {self.sequence})"

    def bit(self, s: int) -> int:
        return 1 << self.indices.index(s)

    def f(self, s: int) -> LocalScalar:
        return self.ring.var(self.sequence[s])

    def mask(self, subset: Iterable[int]) -> int:
        m = 0
        for s in subset:
            m |= self.bit(s)
        return m

    def members(self, mask: int) -> list[int]:
        return [s for i, s in enumerate(self.indices) if mask >> i & 1]

    def killed(self, mask: int) -> list[str]:
        """Variables f_t for t in the subset; quotienting by them gives L/f_T."""
        return [self.sequence[s] for s in self.members(mask)]
