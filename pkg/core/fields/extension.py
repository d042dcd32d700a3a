"""
Extension Field Arithmetic
Elements of F_{p^n} as coordinate vectors over the polynomial basis {1, a, ..., a^(n-1)}
"""

import itertools
from dataclasses import dataclass
from typing import Iterator, Sequence, Tuple

import sympy

from core.errors import FieldError
from core.fields.prime import FieldElement, PrimeField


@dataclass(frozen=True)
class ExtensionField:
    """F_p[a]/(f) with f monic irreducible of degree n.

    ``poly`` lists the coefficients of f from the constant term up, so
    a^2 + 2 over F_5 is ``(2, 0, 1)``.
    """
    p: int
    poly: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "poly", tuple(c % self.p for c in self.poly))
        object.__setattr__(self, "_base", PrimeField(self.p))
        if len(self.poly) < 3 or self.poly[-1] != 1:
            raise FieldError("defining polynomial must be monic of degree >= 2", "field.not_irreducible")
        z = sympy.Symbol("z")
        if not sympy.Poly(list(reversed(self.poly)), z, modulus=self.p).is_irreducible:
            raise FieldError(f"defining polynomial {self.poly} is reducible mod {self.p}",
                             "field.not_irreducible")

    @property
    def n(self) -> int:
        return len(self.poly) - 1

    @property
    def base(self) -> PrimeField:
        return self._base

    @property
    def order(self) -> int:
        return self.p ** self.n

    @property
    def characteristic(self) -> int:
        return self.p

    @property
    def bit_length(self) -> int:
        return self.order.bit_length()

    @property
    def byte_width(self) -> int:
        return self.n * self._base.byte_width

    def __call__(self, coords) -> "ExtFieldElement":
        if isinstance(coords, int):
            coords = (coords,)
        coords = [int(c) % self.p for c in coords]
        if len(coords) > self.n:
            raise FieldError(f"{len(coords)} coordinates for degree {self.n}", "field.basis_mismatch")
        return ExtFieldElement(tuple(coords + [0] * (self.n - len(coords))), self)

    def zero(self) -> "ExtFieldElement":
        return ExtFieldElement((0,) * self.n, self)

    def one(self) -> "ExtFieldElement":
        return ExtFieldElement((1,) + (0,) * (self.n - 1), self)

    def generator(self) -> "ExtFieldElement":
        """The basis element a (class of z)."""
        return self((0, 1))

    def elements(self) -> Iterator["ExtFieldElement"]:
        for high_first in itertools.product(range(self.p), repeat=self.n):
            yield ExtFieldElement(tuple(reversed(high_first)), self)

    def to_bytes(self, a: "ExtFieldElement") -> bytes:
        return b"".join(self._base.to_bytes(c) for c in a.coords())

    def from_bytes(self, data: bytes) -> "ExtFieldElement":
        w = self._base.byte_width
        if len(data) != self.byte_width:
            raise FieldError(f"expected {self.byte_width} bytes, got {len(data)}", "field.bad_width")
        coords = [self._base.from_bytes(data[i * w:(i + 1) * w]).value for i in range(self.n)]
        return ExtFieldElement(tuple(coords), self)

    def __repr__(self) -> str:
        return f"F_{self.p}^{self.n}"


@dataclass(frozen=True)
class ExtFieldElement:
    coeffs: Tuple[int, ...]
    field: ExtensionField

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def coords(self) -> Tuple[FieldElement, ...]:
        """(x_1, ..., x_n) in basis order."""
        base = self.field.base
        return tuple(FieldElement(c, base) for c in self.coeffs)

    def _coerce(self, other) -> "ExtFieldElement":
        if isinstance(other, int):
            return self.field(other)
        if isinstance(other, FieldElement) and other.modulus == self.field.p:
            return self.field(other.value)
        if isinstance(other, ExtFieldElement):
            if other.field != self.field:
                raise FieldError(f"basis mismatch: {self.field} {self.field.poly} vs "
                                 f"{other.field} {other.field.poly}", "field.basis_mismatch")
            return other
        raise TypeError(f"cannot combine ExtFieldElement with {type(other).__name__}")

    def __add__(self, other):
        o = self._coerce(other)
        p = self.field.p
        return ExtFieldElement(tuple((a + b) % p for a, b in zip(self.coeffs, o.coeffs)), self.field)

    __radd__ = __add__

    def __neg__(self):
        p = self.field.p
        return ExtFieldElement(tuple((-a) % p for a in self.coeffs), self.field)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        p, n, f = self.field.p, self.field.n, self.field.poly
        prod = [0] * (2 * n - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(o.coeffs):
                    prod[i + j] += a * b
        # reduce with a^n = -(f_0 + ... + f_{n-1} a^(n-1))
        for k in range(2 * n - 2, n - 1, -1):
            c = prod[k] % p
            if c:
                for i in range(n):
                    prod[k - n + i] -= c * f[i]
            prod[k] = 0
        return ExtFieldElement(tuple(c % p for c in prod[:n]), self.field)

    __rmul__ = __mul__

    def inverse(self) -> "ExtFieldElement":
        if self.is_zero():
            raise FieldError(f"inverse of zero in {self.field}", "field.zero_division")
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

    def __repr__(self) -> str:
        return f"{self.coeffs} in {self.field}"


def fpn_ops(a: ExtFieldElement, b: ExtFieldElement, op: str) -> ExtFieldElement:
    """Apply add, sub, mul, div or inv in F_{p^n}."""
    if op != "inv" and a.field != b.field:
        raise FieldError("basis mismatch between operands", "field.basis_mismatch")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    if op == "inv":
        return a.inverse()
    raise ValueError(f"unknown extension field operation {op!r}")


def fpn_coords(a: ExtFieldElement) -> Sequence[FieldElement]:
    return a.coords()
