"""
Binary Field Arithmetic
Elements of F_{2^m} in polynomial basis over a fixed irreducible reduction polynomial
"""

from dataclasses import dataclass
from typing import Iterator

import sympy

from core.errors import FieldError


def _poly_is_irreducible_gf2(reduction: int) -> bool:
    z = sympy.Symbol("z")
    degree = reduction.bit_length() - 1
    coeffs = [(reduction >> i) & 1 for i in range(degree, -1, -1)]
    return sympy.Poly(coeffs, z, modulus=2).is_irreducible


def _clmul_reduce(a: int, b: int, reduction: int, m: int) -> int:
    result = 0
    while b:
        if b & 1:
            result ^= a
        b >>= 1
        a <<= 1
        if (a >> m) & 1:
            a ^= reduction
    return result


@dataclass(frozen=True)
class BinaryField:
    """F_{2^m} = GF(2)[z]/(f) where ``reduction`` encodes f bitwise (bit i = coefficient of z^i)."""
    reduction: int

    def __post_init__(self):
        if self.reduction < 0b111 or not _poly_is_irreducible_gf2(self.reduction):
            raise FieldError(
                f"reduction polynomial {self.reduction:#b} is not irreducible over GF(2)",
                "field.not_irreducible")

    @property
    def m(self) -> int:
        return self.reduction.bit_length() - 1

    @property
    def order(self) -> int:
        return 1 << self.m

    @property
    def characteristic(self) -> int:
        return 2

    @property
    def bit_length(self) -> int:
        return self.m

    @property
    def byte_width(self) -> int:
        return (self.m + 7) // 8

    def __call__(self, bits: int) -> "Gf2mElement":
        if bits < 0 or bits >> self.m:
            raise FieldError(f"{bits:#x} has degree >= {self.m}", "field.non_canonical")
        return Gf2mElement(bits, self)

    def zero(self) -> "Gf2mElement":
        return Gf2mElement(0, self)

    def one(self) -> "Gf2mElement":
        return Gf2mElement(1, self)

    def elements(self) -> Iterator["Gf2mElement"]:
        for bits in range(self.order):
            yield Gf2mElement(bits, self)

    def to_bytes(self, a: "Gf2mElement") -> bytes:
        return a.bits.to_bytes(self.byte_width, "big")

    def from_bytes(self, data: bytes) -> "Gf2mElement":
        if len(data) != self.byte_width:
            raise FieldError(f"expected {self.byte_width} bytes, got {len(data)}", "field.bad_width")
        return self(int.from_bytes(data, "big"))

    def __repr__(self) -> str:
        return f"F_2^{self.m}"


@dataclass(frozen=True)
class Gf2mElement:
    bits: int
    field: BinaryField

    @property
    def reduction(self) -> int:
        return self.field.reduction

    def is_zero(self) -> bool:
        return self.bits == 0

    def _coerce(self, other) -> "Gf2mElement":
        if isinstance(other, int):
            # integers act through the prime subfield GF(2)
            return Gf2mElement(other & 1, self.field)
        if isinstance(other, Gf2mElement):
            if other.field.reduction != self.field.reduction:
                raise FieldError("reduction polynomial mismatch", "field.modulus_mismatch")
            return other
        raise TypeError(f"cannot combine Gf2mElement with {type(other).__name__}")

    def __add__(self, other):
        return Gf2mElement(self.bits ^ self._coerce(other).bits, self.field)

    __radd__ = __add__
    __sub__ = __add__
    __rsub__ = __add__

    def __neg__(self):
        return self

    def __mul__(self, other):
        o = self._coerce(other)
        return Gf2mElement(_clmul_reduce(self.bits, o.bits, self.reduction, self.field.m), self.field)

    __rmul__ = __mul__

    def inverse(self) -> "Gf2mElement":
        if self.bits == 0:
            raise FieldError(f"inverse of zero in {self.field}", "field.zero_division")
        # a^(2^m - 2)
        return self ** (self.field.order - 2)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, exponent: int):
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result, base = self.field.one(), self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def trace(self) -> int:
        """Absolute trace to GF(2), as 0 or 1."""
        acc, term = self, self
        for _ in range(self.field.m - 1):
            term = term * term
            acc = acc + term
        return acc.bits

    def __repr__(self) -> str:
        return f"{self.bits:#x} in {self.field}"


def gf2m_arith(a: Gf2mElement, b: Gf2mElement, op: str) -> Gf2mElement:
    """Apply add, mul, inv or div in F_{2^m}; sub is the same as add."""
    if op in ("add", "sub"):
        return a + b
    if op == "mul":
        return a * b
    if op == "inv":
        return a.inverse()
    if op == "div":
        return a / b
    raise ValueError(f"unknown binary field operation {op!r}")
