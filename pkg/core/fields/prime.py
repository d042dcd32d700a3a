"""
Prime Field Arithmetic
Elements of F_p with the square root, cube root and quadratic character used by the encodings
"""

from dataclasses import dataclass
from typing import Iterator, Optional, Union

import sympy

from core.errors import FieldError

OPERATIONS = ("add", "sub", "mul", "div", "inv", "pow")


@dataclass(frozen=True)
class PrimeField:
    """The field F_p for an odd prime p.

    Not constant time: every operation is plain Python integer arithmetic.
    """
    p: int

    def __post_init__(self):
        if self.p < 3 or not sympy.isprime(self.p):
            raise FieldError(f"modulus {self.p} is not an odd prime", "field.unsupported_modulus")

    @property
    def order(self) -> int:
        return self.p

    @property
    def characteristic(self) -> int:
        return self.p

    @property
    def bit_length(self) -> int:
        return self.p.bit_length()

    @property
    def byte_width(self) -> int:
        return (self.p.bit_length() + 7) // 8

    def __call__(self, value: int) -> "FieldElement":
        return FieldElement(value % self.p, self)

    def zero(self) -> "FieldElement":
        return FieldElement(0, self)

    def one(self) -> "FieldElement":
        return FieldElement(1, self)

    def elements(self) -> Iterator["FieldElement"]:
        for v in range(self.p):
            yield FieldElement(v, self)

    def to_bytes(self, a: "FieldElement") -> bytes:
        return a.value.to_bytes(self.byte_width, "big")

    def from_bytes(self, data: bytes) -> "FieldElement":
        if len(data) != self.byte_width:
            raise FieldError(f"expected {self.byte_width} bytes, got {len(data)}", "field.bad_width")
        value = int.from_bytes(data, "big")
        if value >= self.p:
            raise FieldError(f"value {value} is not reduced mod {self.p}", "field.non_canonical")
        return FieldElement(value, self)

    def __repr__(self) -> str:
        return f"F_{self.p}"


@dataclass(frozen=True)
class FieldElement:
    """An element of F_p stored as its canonical representative in [0, p)."""
    value: int
    field: PrimeField

    @property
    def modulus(self) -> int:
        return self.field.p

    def is_zero(self) -> bool:
        return self.value == 0

    def _coerce(self, other) -> "FieldElement":
        if isinstance(other, int):
            return self.field(other)
        if isinstance(other, FieldElement):
            if other.field.p != self.field.p:
                raise FieldError(
                    f"modulus mismatch: {self.field.p} vs {other.field.p}", "field.modulus_mismatch")
            return other
        raise TypeError(f"cannot combine FieldElement with {type(other).__name__}")

    def __add__(self, other):
        o = self._coerce(other)
        return FieldElement((self.value + o.value) % self.modulus, self.field)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return FieldElement((self.value - o.value) % self.modulus, self.field)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        return FieldElement((self.value * o.value) % self.modulus, self.field)

    __rmul__ = __mul__

    def __neg__(self):
        return FieldElement((-self.value) % self.modulus, self.field)

    def inverse(self) -> "FieldElement":
        if self.value == 0:
            raise FieldError(f"inverse of zero in F_{self.modulus}", "field.zero_division")
        return FieldElement(pow(self.value, -1, self.modulus), self.field)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, exponent: int):
        if exponent < 0:
            return self.inverse() ** (-exponent)
        return FieldElement(pow(self.value, exponent, self.modulus), self.field)

    def __int__(self) -> int:
        return self.value

    def __repr__(self) -> str:
        return f"{self.value} (mod {self.modulus})"


def fp_arith(a: FieldElement, b: Optional[Union[FieldElement, int]], op: str) -> FieldElement:
    """Apply one of add, sub, mul, div, inv, pow to F_p elements.

    For ``inv`` the second operand is ignored; for ``pow`` it is the exponent
    (an int, or an element whose canonical value is used).
    """
    if op not in OPERATIONS:
        raise ValueError(f"unknown field operation {op!r}")
    if op == "inv":
        return a.inverse()
    if op == "pow":
        exponent = b.value if isinstance(b, FieldElement) else int(b)
        return a ** exponent
    if isinstance(b, FieldElement) and b.modulus != a.modulus:
        raise FieldError(f"modulus mismatch: {a.modulus} vs {b.modulus}", "field.modulus_mismatch")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    return a / b


def quad_char(a: FieldElement) -> int:
    """Quadratic character a^((q-1)/2) as -1, 0 or +1."""
    if a.value == 0:
        return 0
    return 1 if pow(a.value, (a.modulus - 1) // 2, a.modulus) == 1 else -1


def fp_sqrt(a: FieldElement) -> Optional[FieldElement]:
    """Square root a^((q+1)/4) for q = 3 mod 4, or None for a non-residue."""
    q = a.modulus
    if q % 4 != 3:
        raise FieldError(f"square root needs q = 3 mod 4, got q = {q}", "field.unsupported_modulus")
    root = a ** ((q + 1) // 4)
    if root * root != a:
        return None
    return root


def fp_cbrt(a: FieldElement) -> FieldElement:
    """The unique cube root a^((2q-1)/3) for q = 2 mod 3."""
    q = a.modulus
    if q % 3 != 2:
        raise FieldError(f"cube root needs q = 2 mod 3, got q = {q}", "field.unsupported_modulus")
    return a ** ((2 * q - 1) // 3)
