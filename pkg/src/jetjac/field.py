"""Exact scalar arithmetic over the rationals and over prime fields GF(p).

Field elements are immutable values that carry their field; mixing values
from different fields raises MixedFields.  Rationals are stored as reduced
fractions, prime-field values as canonical residues in [0, p).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

Raw = Union[Fraction, int]


class FieldError(Exception):
    """Base class for scalar arithmetic errors."""


class MixedFields(FieldError):
    """Operands belong to different fields."""


class DivisionByZero(FieldError):
    """Division by the zero element of the field."""


_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin; exact for n < 3.3e24."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class FieldSpec:
    """The coefficient field: Q (characteristic 0) or GF(p) for a prime p."""

    characteristic: int = 0

    def __post_init__(self):
        p = self.characteristic
        if p != 0 and not is_prime(p):
            raise ValueError(f"characteristic must be 0 or a prime, got {p}")

    @classmethod
    def rationals(cls) -> "FieldSpec":
        return cls(0)

    @classmethod
    def prime_field(cls, p: int) -> "FieldSpec":
        return cls(p)

    @classmethod
    def parse(cls, text: str) -> "FieldSpec":
        """Parse a field selector: "Q", or "Fp:<prime>" such as "Fp:7"."""
        if text == "Q":
            return cls(0)
        if text.startswith("Fp:"):
            try:
                p = int(text[3:])
            except ValueError:
                raise ValueError(f"bad field selector {text!r}") from None
            return cls(p)
        raise ValueError(f"bad field selector {text!r} (use Q or Fp:<prime>)")

    @property
    def kind(self) -> str:
        return "rationals" if self.characteristic == 0 else "prime-field"

    def raw(self, x) -> Raw:
        """Coerce x (int, Fraction, str or FieldElement) to a canonical raw value."""
        if isinstance(x, FieldElement):
            if x.spec != self:
                raise MixedFields(f"{x.spec} value used where {self} expected")
            return x.value
        if isinstance(x, str):
            x = Fraction(x)
        p = self.characteristic
        if p == 0:
            return Fraction(x)
        if isinstance(x, Fraction):
            den = x.denominator % p
            if den == 0:
                raise DivisionByZero(f"denominator of {x} vanishes in GF({p})")
            return x.numerator * pow(den, -1, p) % p
        return x % p

    def element(self, x) -> "FieldElement":
        return FieldElement(self, self.raw(x))

    @property
    def zero(self) -> "FieldElement":
        return FieldElement(self, Fraction(0) if self.characteristic == 0 else 0)

    @property
    def one(self) -> "FieldElement":
        return FieldElement(self, Fraction(1) if self.characteristic == 0 else 1)

    def __str__(self) -> str:
        return "Q" if self.characteristic == 0 else f"Fp:{self.characteristic}"


QQ = FieldSpec.rationals()


class FieldElement:
    """Immutable scalar: a reduced fraction, or a residue in [0, p)."""

    __slots__ = ("spec", "value")

    def __init__(self, spec: FieldSpec, value):
        self.spec = spec
        p = spec.characteristic
        if p == 0:
            self.value = value if isinstance(value, Fraction) else Fraction(value)
        else:
            self.value = value % p

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.spec != self.spec:
                raise MixedFields(f"cannot combine {self.spec} with {other.spec}")
            return other.value
        if isinstance(other, (int, Fraction)):
            return self.spec.raw(other)
        return None

    def __add__(self, other):
        v = self._coerce(other)
        if v is None:
            return NotImplemented
        p = self.spec.characteristic
        return FieldElement(self.spec, (self.value + v) % p if p else self.value + v)

    __radd__ = __add__

    def __sub__(self, other):
        v = self._coerce(other)
        if v is None:
            return NotImplemented
        p = self.spec.characteristic
        return FieldElement(self.spec, (self.value - v) % p if p else self.value - v)

    def __rsub__(self, other):
        v = self._coerce(other)
        if v is None:
            return NotImplemented
        p = self.spec.characteristic
        return FieldElement(self.spec, (v - self.value) % p if p else v - self.value)

    def __mul__(self, other):
        v = self._coerce(other)
        if v is None:
            return NotImplemented
        p = self.spec.characteristic
        return FieldElement(self.spec, (self.value * v) % p if p else self.value * v)

    __rmul__ = __mul__

    def __truediv__(self, other):
        v = self._coerce(other)
        if v is None:
            return NotImplemented
        p = self.spec.characteristic
        if (v % p if p else v) == 0:
            raise DivisionByZero(f"division by zero in {self.spec}")
        if p:
            return FieldElement(self.spec, self.value * pow(v, -1, p) % p)
        return FieldElement(self.spec, self.value / v)

    def __rtruediv__(self, other):
        v = self._coerce(other)
        if v is None:
            return NotImplemented
        return FieldElement(self.spec, v) / self

    def __neg__(self):
        p = self.spec.characteristic
        return FieldElement(self.spec, -self.value % p if p else -self.value)

    def __pow__(self, e: int):
        p = self.spec.characteristic
        if e < 0 and self.is_zero:
            raise DivisionByZero("negative power of zero")
        if p:
            return FieldElement(self.spec, pow(self.value, e, p))
        return FieldElement(self.spec, self.value**e)

    def inverse(self) -> "FieldElement":
        return self.spec.one / self

    @property
    def is_zero(self) -> bool:
        return self.value == 0

    def __bool__(self) -> bool:
        return self.value != 0

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.spec == other.spec and self.value == other.value
        if isinstance(other, (int, Fraction)):
            return self.value == self.spec.raw(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.spec.characteristic, self.value))

    def __str__(self) -> str:
        return str(self.value)

    def __repr__(self) -> str:
        return f"FieldElement({self.spec}, {self.value})"


def binomial(n: int, k: int, spec: FieldSpec) -> FieldElement:
    """C(n, k) computed over the integers, then reduced into the field.

    Computing the integer binomial first keeps divided-power coefficients
    well defined in characteristic p, where factorials may vanish.
    """
    return spec.element(math.comb(n, k))
