"""Exact integer arithmetic and the truncated rings Z/p^k."""

from __future__ import annotations

import math
from dataclasses import dataclass

MAX_PRIME = 97


class DivisibilityError(ArithmeticError):
    """Raised when an exact division by a power of p is not possible."""


class StructureError(ValueError):
    """Raised when operands live in different rings."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    f = 2
    while f * f <= n:
        if n % f == 0:
            return False
        f += 1
    return True


def check_prime(p: int) -> int:
    if not isinstance(p, int) or p > MAX_PRIME or not is_prime(p):
        raise ValueError(f"p must be a prime <= {MAX_PRIME}, got {p!r}")
    return p


def binomial(n: int, k: int) -> int:
    """Exact binomial coefficient; zero when k > n."""
    if n < 0 or k < 0:
        raise ValueError("binomial needs non-negative arguments")
    return math.comb(n, k)


def valuation(n: int, p: int) -> int:
    """p-adic valuation of a nonzero integer."""
    if n == 0:
        raise ValueError("valuation of zero is infinite")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def factorial_valuation(n: int, p: int) -> int:
    """v_p(n!) by Legendre's formula."""
    v, q = 0, p
    while q <= n:
        v += n // q
        q *= p
    return v


@dataclass(frozen=True, slots=True)
class ModInt:
    """An element of Z/p^k; ``value`` is always the canonical representative."""

    p: int
    k: int
    value: int

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("truncation exponent k must be >= 1")
        check_prime(self.p)
        object.__setattr__(self, "value", self.value % self.p**self.k)

    @property
    def modulus(self) -> int:
        return self.p**self.k

    def _coerce(self, other) -> ModInt:
        if isinstance(other, ModInt):
            if (other.p, other.k) != (self.p, self.k):
                raise StructureError(
                    f"mismatched rings Z/{self.p}^{self.k} and Z/{other.p}^{other.k}"
                )
            return other
        if isinstance(other, int):
            return ModInt(self.p, self.k, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return ModInt(self.p, self.k, self.value + other.value)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return ModInt(self.p, self.k, self.value - other.value)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return ModInt(self.p, self.k, self.value * other.value)

    __rmul__ = __mul__

    def __neg__(self):
        return ModInt(self.p, self.k, -self.value)

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative exponent")
        return ModInt(self.p, self.k, pow(self.value, e, self.modulus))

    def __eq__(self, other):
        if isinstance(other, ModInt):
            return (self.p, self.k, self.value) == (other.p, other.k, other.value)
        if isinstance(other, int):
            return self.value == other % self.modulus
        return NotImplemented

    def __hash__(self):
        return hash((self.p, self.k, self.value))

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return f"ModInt({self.value} mod {self.p}^{self.k})"

    def __str__(self):
        return str(self.value)


def mod_add(a: ModInt, b: ModInt) -> ModInt:
    return a + b


def mod_mul(a: ModInt, b: ModInt) -> ModInt:
    return a * b


def mod_neg(a: ModInt) -> ModInt:
    return -a


def pdiv(a: ModInt, j: int) -> ModInt:
    """Exact division by p^j, landing in Z/p^(k-j).

    The result b satisfies p^j * b ≡ a (mod p^k) for every integer lift of b.
    """
    if j < 0 or j > a.k:
        raise ValueError(f"cannot divide by p^{j} in Z/{a.p}^{a.k}")
    if a.value % a.p**j:
        raise DivisibilityError(f"{a.p}^{j} does not divide {a.value}")
    if j == a.k:
        # Z/p^0 is the zero ring; keep callers honest
        raise ValueError("pdiv to the zero ring is not representable")
    return ModInt(a.p, a.k - j, a.value // a.p**j)


def reduce(a: ModInt, k: int) -> ModInt:
    if not 1 <= k <= a.k:
        raise ValueError(f"cannot reduce Z/{a.p}^{a.k} to Z/{a.p}^{k}")
    return ModInt(a.p, k, a.value)


class IntegerRing:
    """The ring Z with Python ints as elements."""

    characteristic = 0
    modulus = None

    def normalize(self, n: int) -> int:
        return n

    def from_int(self, n: int) -> int:
        return int(n)

    def zero(self) -> int:
        return 0

    def one(self) -> int:
        return 1

    element = from_int

    def __eq__(self, other):
        return isinstance(other, IntegerRing)

    def __hash__(self):
        return hash("ZZ")

    def __repr__(self):
        return "ZZ"


ZZ = IntegerRing()


class ModRing:
    """Z/p^k as a coefficient ring.

    Polynomial and Weyl containers keep canonical ints internally and call
    ``normalize``; ``from_int`` produces standalone ``ModInt`` elements.
    """

    def __init__(self, p: int, k: int = 1):
        check_prime(p)
        if k < 1:
            raise ValueError("k must be >= 1")
        self.p = p
        self.k = k
        self.modulus = p**k
        self.characteristic = p**k

    def normalize(self, n: int) -> int:
        return n % self.modulus

    def from_int(self, n: int) -> ModInt:
        return ModInt(self.p, self.k, n)

    element = from_int

    def zero(self) -> ModInt:
        return ModInt(self.p, self.k, 0)

    def one(self) -> ModInt:
        return ModInt(self.p, self.k, 1)

    @property
    def is_field(self) -> bool:
        return self.k == 1

    def __eq__(self, other):
        return isinstance(other, ModRing) and (self.p, self.k) == (other.p, other.k)

    def __hash__(self):
        return hash((self.p, self.k))

    def __repr__(self):
        if self.k == 1:
            return f"GF({self.p})"
        return f"Z/{self.p}^{self.k}"


def GF(p: int) -> ModRing:
    return ModRing(p, 1)
