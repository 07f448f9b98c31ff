"""Arithmetic in GF(q), q = l**m, in a polynomial basis.

Elements are encoded as integers ``v = sum(c_i * l**i)`` where ``c_i`` is the
coefficient of ``x**i``.  For ``l == 2`` this is the usual bit-vector layout,
so addition is XOR.  Scalar arithmetic is exposed through :class:`FieldElement`;
bulk arithmetic on integer arrays goes through the ``FieldCtx.*_arr`` methods,
which use exp/log tables built on first use.
"""
from __future__ import annotations

import cmath
from dataclasses import dataclass
from functools import cached_property

import numpy as np

MAX_FIELD_SIZE = 2**20

# Primitive polynomials over GF(2), as exponents of the nonzero terms.
PRIMITIVE_POLYS_GF2 = {
    1: (1, 0),
    2: (2, 1, 0),
    3: (3, 1, 0),
    4: (4, 1, 0),
    5: (5, 2, 0),
    6: (6, 1, 0),
    7: (7, 1, 0),
    8: (8, 4, 3, 2, 0),
    9: (9, 4, 0),
    10: (10, 3, 0),
    11: (11, 2, 0),
    12: (12, 6, 4, 1, 0),
    13: (13, 4, 3, 1, 0),
    14: (14, 10, 6, 1, 0),
    15: (15, 1, 0),
    16: (16, 12, 3, 1, 0),
    17: (17, 3, 0),
    18: (18, 7, 0),
    19: (19, 5, 2, 1, 0),
    20: (20, 3, 0),
}


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# -- polynomials over GF(l), coefficient lists low -> high -------------------

def _poly_trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a, b, l):
    """Remainder of a modulo b over GF(l); b must be nonzero."""
    a = _poly_trim(a)
    b = _poly_trim(b)
    inv_lead = pow(b[-1], l - 2, l)
    while len(a) >= len(b):
        coef = a[-1] * inv_lead % l
        shift = len(a) - len(b)
        for i, c in enumerate(b):
            a[shift + i] = (a[shift + i] - coef * c) % l
        a = _poly_trim(a)
    return a


def is_irreducible(poly, l: int) -> bool:
    """Trial division by every monic polynomial of degree <= deg/2."""
    poly = _poly_trim(poly)
    deg = len(poly) - 1
    if deg < 1:
        return False
    if deg == 1:
        return True
    for d in range(1, deg // 2 + 1):
        for tail in range(l**d):
            divisor = [(tail // l**i) % l for i in range(d)] + [1]
            if not _poly_mod(poly, divisor, l):
                return False
    return True


def _int_to_digits(v: int, l: int, m: int) -> list[int]:
    return [(v // l**i) % l for i in range(m)]


def _digits_to_int(digits, l: int) -> int:
    v = 0
    for c in reversed(digits):
        v = v * l + c
    return v


class FieldCtx:
    """The field GF(l**m) with a fixed monic irreducible modulus.

    ``modulus`` is a coefficient list (low degree first) of length ``m + 1``.
    When omitted, a pinned primitive polynomial is used for ``l == 2`` and the
    lexicographically first primitive polynomial otherwise, so that the
    element ``x`` generates the multiplicative group.
    """

    def __init__(self, l: int, m: int = 1, modulus=None):
        if not is_prime(l):
            raise ValueError(f"characteristic must be prime, got {l}")
        if m < 1:
            raise ValueError(f"extension degree must be >= 1, got {m}")
        if l**m > MAX_FIELD_SIZE:
            raise ValueError(f"field size {l}**{m} exceeds {MAX_FIELD_SIZE}")
        self.l = l
        self.m = m
        self.q = l**m
        if modulus is None:
            modulus = self._default_modulus()
        modulus = tuple(int(c) % l for c in modulus)
        if len(modulus) != m + 1 or modulus[-1] != 1:
            raise ValueError("modulus must be monic of degree m")
        if not is_irreducible(modulus, l):
            raise ValueError(f"modulus {modulus} is reducible over GF({l})")
        self.modulus_poly = modulus

    def _default_modulus(self):
        l, m = self.l, self.m
        if l == 2 and m in PRIMITIVE_POLYS_GF2:
            coeffs = [0] * (m + 1)
            for e in PRIMITIVE_POLYS_GF2[m]:
                coeffs[e] = 1
            return coeffs
        for tail in range(l**m):
            cand = _int_to_digits(tail, l, m) + [1]
            if cand[0] == 0 or not is_irreducible(cand, l):
                continue
            probe = FieldCtx.__new__(FieldCtx)
            probe.l, probe.m, probe.q, probe.modulus_poly = l, m, l**m, tuple(cand)
            if probe._order(probe._x_value()) == l**m - 1:
                return cand
        raise AssertionError("no primitive polynomial found")  # unreachable for prime l

    def __eq__(self, other):
        return isinstance(other, FieldCtx) and (self.l, self.modulus_poly) == (
            other.l,
            other.modulus_poly,
        )

    def __hash__(self):
        return hash((self.l, self.modulus_poly))

    def __repr__(self):
        return f"FieldCtx(l={self.l}, m={self.m}, modulus={list(self.modulus_poly)})"

    def __getstate__(self):
        # drop cached tables; they are rebuilt on demand
        return {k: self.__dict__[k] for k in ("l", "m", "q", "modulus_poly")}

    # -- scalar arithmetic on integer codes ----------------------------------

    def _x_value(self) -> int:
        # the class of x; for m == 1 this reduces to a constant
        if self.m > 1:
            return self.l
        return (-self.modulus_poly[0]) % self.l

    def add(self, a: int, b: int) -> int:
        if self.l == 2:
            return a ^ b
        if self.m == 1:
            return (a + b) % self.l
        da, db = _int_to_digits(a, self.l, self.m), _int_to_digits(b, self.l, self.m)
        return _digits_to_int([(x + y) % self.l for x, y in zip(da, db)], self.l)

    def neg(self, a: int) -> int:
        if self.l == 2:
            return a
        if self.m == 1:
            return (-a) % self.l
        return _digits_to_int([(-x) % self.l for x in _int_to_digits(a, self.l, self.m)], self.l)

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        l, m = self.l, self.m
        if m == 1:
            return a * b % l
        if l == 2:
            prod = 0
            while b:
                if b & 1:
                    prod ^= a
                b >>= 1
                a <<= 1
            mod = _digits_to_int(self.modulus_poly, 2)
            for shift in range(prod.bit_length() - m - 1, -1, -1):
                if prod >> (shift + m) & 1:
                    prod ^= mod << shift
            return prod
        da, db = _int_to_digits(a, l, m), _int_to_digits(b, l, m)
        prod = [0] * (2 * m - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] = (prod[i + j] + x * y) % l
        rem = _poly_mod(prod, self.modulus_poly, l)
        return _digits_to_int(rem + [0] * (m - len(rem)), l)

    def power(self, a: int, e: int) -> int:
        if e < 0:
            a, e = self.inv(a), -e
        result = 1
        while e:
            if e & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            e >>= 1
        return result

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in GF(%d)" % self.q)
        return self.power(a, self.q - 2)

    def _order(self, a: int) -> int:
        n = self.q - 1
        order = n
        for f in _prime_factors(n):
            while order % f == 0 and self.power(a, order // f) == 1:
                order //= f
        return order

    def trace(self, a: int) -> int:
        """Absolute trace to GF(l), returned as an integer in [0, l)."""
        total, y = 0, a
        for _ in range(self.m):
            total = self.add(total, y)
            y = self.power(y, self.l)
        if total >= self.l:
            raise AssertionError("trace left the prime subfield; modulus is not irreducible")
        return total

    # -- tables and array arithmetic ------------------------------------------

    @cached_property
    def primitive_element(self) -> int:
        x = self._x_value()
        if self.q == 2:
            return 1
        if self._order(x) == self.q - 1:
            return x
        for g in range(2, self.q):
            if self._order(g) == self.q - 1:
                return g
        raise AssertionError("multiplicative group has no generator")  # unreachable

    @cached_property
    def _tables(self):
        q = self.q
        exp = np.zeros(2 * (q - 1), dtype=np.int64)
        log = np.full(q, -1, dtype=np.int64)
        g = self.primitive_element
        v = 1
        for i in range(q - 1):
            exp[i] = v
            log[v] = i
            v = self.mul(v, g)
        exp[q - 1 :] = exp[: q - 1]
        return exp, log

    @property
    def exp_table(self) -> np.ndarray:
        return self._tables[0]

    @property
    def log_table(self) -> np.ndarray:
        return self._tables[1]

    def _digits_arr(self, a):
        a = np.asarray(a, dtype=np.int64)
        return [(a // self.l**i) % self.l for i in range(self.m)]

    def _from_digits_arr(self, digits):
        out = np.zeros_like(digits[0])
        for i, d in enumerate(digits):
            out += d * self.l**i
        return out

    def add_arr(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.l == 2:
            return a ^ b
        if self.m == 1:
            return (a + b) % self.l
        return self._from_digits_arr(
            [(x + y) % self.l for x, y in zip(self._digits_arr(a), self._digits_arr(b))]
        )

    def neg_arr(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if self.l == 2:
            return a.copy()
        if self.m == 1:
            return (-a) % self.l
        return self._from_digits_arr([(-x) % self.l for x in self._digits_arr(a)])

    def sub_arr(self, a, b) -> np.ndarray:
        return self.add_arr(a, self.neg_arr(b))

    def mul_arr(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.m == 1:
            return a * b % self.l
        exp, log = self._tables
        a, b = np.broadcast_arrays(a, b)
        out = exp[(log[a] + log[b]) % (self.q - 1)]
        return np.where((a == 0) | (b == 0), 0, out)

    def inv_arr(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise ZeroDivisionError("inverse of zero in GF(%d)" % self.q)
        exp, log = self._tables
        return exp[(-log[a]) % (self.q - 1)]

    @cached_property
    def trace_table(self) -> np.ndarray:
        elems = np.arange(self.q, dtype=np.int64)
        total = np.zeros(self.q, dtype=np.int64)
        y = elems
        for _ in range(self.m):
            total = self.add_arr(total, y)
            z = np.ones_like(y)
            for _ in range(self.l):
                z = self.mul_arr(z, y)
            y = z
        if total.max(initial=0) >= self.l:
            raise AssertionError("trace left the prime subfield")
        return total

    @cached_property
    def roots_of_unity(self) -> np.ndarray:
        if self.l == 2:
            return np.array([1.0, -1.0])
        return np.array([cmath.exp(2j * cmath.pi * k / self.l) for k in range(self.l)])

    def character_arr(self, a) -> np.ndarray:
        """psi applied elementwise: float +-1 for l == 2, complex otherwise."""
        return self.roots_of_unity[self.trace_table[np.asarray(a, dtype=np.int64)]]

    def to_prime_digits(self, a) -> np.ndarray:
        """Expand field codes into their m base-l coordinates (last axis)."""
        return np.stack(self._digits_arr(a), axis=-1)

    def element(self, value) -> "FieldElement":
        if isinstance(value, (list, tuple)):
            if len(value) != self.m:
                raise ValueError(f"expected {self.m} coefficients")
            value = _digits_to_int([int(c) % self.l for c in value], self.l)
        value = int(value)
        if not 0 <= value < self.q:
            raise ValueError(f"{value} is not an element code of GF({self.q})")
        return FieldElement(self, value)

    def elements(self):
        return [FieldElement(self, v) for v in range(self.q)]

    def zero(self):
        return FieldElement(self, 0)

    def one(self):
        return FieldElement(self, 1)


@dataclass(frozen=True)
class FieldElement:
    ctx: FieldCtx
    value: int

    @property
    def coeffs(self) -> tuple[int, ...]:
        return tuple(_int_to_digits(self.value, self.ctx.l, self.ctx.m))

    def _check(self, other) -> "FieldElement":
        if isinstance(other, int):
            return FieldElement(self.ctx, other % self.ctx.l)
        if not isinstance(other, FieldElement):
            return NotImplemented
        if other.ctx != self.ctx:
            raise ValueError("operands belong to different fields")
        return other

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return FieldElement(self.ctx, self.ctx.add(self.value, other.value))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return FieldElement(self.ctx, self.ctx.sub(self.value, other.value))

    def __rsub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return other - self

    def __neg__(self):
        return FieldElement(self.ctx, self.ctx.neg(self.value))

    def __mul__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return FieldElement(self.ctx, self.ctx.mul(self.value, other.value))

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        return FieldElement(self.ctx, self.ctx.inv(self.value))

    def __truediv__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __pow__(self, e: int):
        return FieldElement(self.ctx, self.ctx.power(self.value, e))

    def __bool__(self):
        return self.value != 0

    def trace(self) -> int:
        return self.ctx.trace(self.value)

    def __repr__(self):
        return f"GF({self.ctx.q})<{self.value}>"


def field_arith(a: FieldElement, b: FieldElement, op: str) -> FieldElement:
    """Apply ``op`` in {'add', 'sub', 'mul', 'inv'}; 'inv' ignores ``b``."""
    if op == "inv":
        return a.inverse()
    if a.ctx != b.ctx:
        raise ValueError("operands belong to different fields")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown field operation {op!r}")


def trace(x: FieldElement) -> int:
    return x.ctx.trace(x.value)


def additive_character(x: FieldElement) -> complex:
    """psi(x) = exp(2*pi*i*tr(x)/l)."""
    return complex(x.ctx.roots_of_unity[x.ctx.trace(x.value)])
