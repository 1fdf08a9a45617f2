"""Weyl algebra of differential operators on affine d-space over Z/p^(level+1).

Elements are kept in normal order, every ``x`` left of every ``d``, as a pair
of arrays: exponent rows ``(a_1..a_d, b_1..b_d)`` sorted lexicographically and
canonical coefficients in ``[0, p^(level+1))``.
"""

from __future__ import annotations

from functools import cached_property

import numpy as np

from . import _kernels
from ._grammar import ParseError, format_terms, parse_terms
from .poly import _compositions
from .ring import DivisibilityError, ModInt, StructureError, check_prime

_MAX_MODULUS = 1 << 31


def _names(d: int) -> tuple[str, ...]:
    return tuple(f"x{i}" for i in range(1, d + 1)) + tuple(f"d{i}" for i in range(1, d + 1))


class WeylElement:
    """Normal-ordered element sum c_(a,b) x^a d^b of the Weyl algebra A_level."""

    __slots__ = ("p", "level", "d", "exps", "coeffs", "__dict__")

    def __init__(self, p: int, level: int, d: int, exps=None, coeffs=None, *, _canonical=False):
        check_prime(p)
        if level < 0 or d < 1:
            raise ValueError("need level >= 0 and d >= 1")
        if p ** (level + 1) >= _MAX_MODULUS:
            raise ValueError("modulus too large for the int64 kernels")
        self.p, self.level, self.d = p, level, d
        if exps is None:
            exps = np.zeros((0, 2 * d), dtype=np.int64)
            coeffs = np.zeros(0, dtype=np.int64)
        exps = np.asarray(exps, dtype=np.int64).reshape(-1, 2 * d)
        coeffs = np.asarray(coeffs, dtype=np.int64).reshape(-1)
        if not _canonical:
            if (exps < 0).any():
                raise ValueError("negative exponent")
            exps, coeffs = _kernels.canonicalize(exps, coeffs, self.modulus)
        exps.setflags(write=False)
        coeffs.setflags(write=False)
        self.exps, self.coeffs = exps, coeffs

    # construction -----------------------------------------------------------

    @property
    def modulus(self) -> int:
        return self.p ** (self.level + 1)

    @classmethod
    def from_terms(cls, p: int, level: int, d: int, terms: dict) -> WeylElement:
        """Build from ``{(a_1..a_d, b_1..b_d): int}``."""
        if not terms:
            return cls(p, level, d)
        keys = list(terms)
        return cls(p, level, d, np.array(keys, dtype=np.int64), np.array([int(terms[k]) % p ** (level + 1) for k in keys]))

    @classmethod
    def constant(cls, p: int, level: int, d: int, c: int = 1) -> WeylElement:
        return cls.from_terms(p, level, d, {(0,) * (2 * d): c})

    @classmethod
    def x(cls, p: int, level: int, d: int, i: int, power: int = 1) -> WeylElement:
        e = [0] * (2 * d)
        e[i] = power
        return cls.from_terms(p, level, d, {tuple(e): 1})

    @classmethod
    def dx(cls, p: int, level: int, d: int, i: int, power: int = 1) -> WeylElement:
        e = [0] * (2 * d)
        e[d + i] = power
        return cls.from_terms(p, level, d, {tuple(e): 1})

    def like(self, exps, coeffs, canonical=False) -> WeylElement:
        return WeylElement(self.p, self.level, self.d, exps, coeffs, _canonical=canonical)

    def zero(self) -> WeylElement:
        return WeylElement(self.p, self.level, self.d)

    def one(self) -> WeylElement:
        return WeylElement.constant(self.p, self.level, self.d)

    # inspection -------------------------------------------------------------

    @property
    def params(self) -> tuple[int, int, int]:
        return (self.p, self.level, self.d)

    @cached_property
    def terms(self) -> dict:
        k = self.level + 1
        return {tuple(int(v) for v in e): ModInt(self.p, k, int(c)) for e, c in zip(self.exps, self.coeffs)}

    def coefficient(self, exps) -> int:
        hit = np.all(self.exps == np.asarray(exps, dtype=np.int64), axis=1)
        return int(self.coeffs[hit][0]) if hit.any() else 0

    def __len__(self):
        return self.coeffs.shape[0]

    def is_zero(self) -> bool:
        return self.coeffs.shape[0] == 0

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if not isinstance(other, WeylElement):
            return NotImplemented
        return (
            self.params == other.params
            and self.exps.shape == other.exps.shape
            and bool(np.array_equal(self.exps, other.exps))
            and bool(np.array_equal(self.coeffs, other.coeffs))
        )

    def __hash__(self):
        return hash((self.params, self.exps.tobytes(), self.coeffs.tobytes()))

    # arithmetic -------------------------------------------------------------

    def _check(self, other) -> WeylElement:
        if isinstance(other, int):
            return WeylElement.constant(self.p, self.level, self.d, other)
        if not isinstance(other, WeylElement):
            raise TypeError(f"cannot combine WeylElement with {type(other).__name__}")
        if other.params != self.params:
            raise StructureError(f"Weyl parameters differ: {self.params} vs {other.params}")
        return other

    def __add__(self, other):
        other = self._check(other)
        return self.like(np.concatenate([self.exps, other.exps]), np.concatenate([self.coeffs, other.coeffs]))

    __radd__ = __add__

    def __neg__(self):
        return self.like(self.exps, (-self.coeffs) % self.modulus, canonical=True)

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def scale(self, c: int) -> WeylElement:
        c %= self.modulus
        return self.like(self.exps, self.coeffs * c % self.modulus)

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        return weyl_mul(self, other)

    def __rmul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, e: int):
        return weyl_pow(self, e)

    def __str__(self):
        return format_weyl(self)

    def __repr__(self):
        return f"WeylElement(p={self.p}, level={self.level}, d={self.d}: {self})"


def weyl_mul(u: WeylElement, v: WeylElement, backend: str | None = None) -> WeylElement:
    v = u._check(v)
    exps, coeffs = _kernels.weyl_product(u.exps, u.coeffs, v.exps, v.coeffs, u.d, u.p, u.level + 1, backend)
    return u.like(exps, coeffs, canonical=True)


def commutator(u: WeylElement, v: WeylElement) -> WeylElement:
    return weyl_mul(u, v) - weyl_mul(v, u)


def weyl_pow(u: WeylElement, e: int) -> WeylElement:
    if e < 0:
        raise ValueError("negative exponent")
    result = u.one()
    base = u
    while e:
        if e & 1:
            result = weyl_mul(result, base)
        e >>= 1
        if e:
            base = weyl_mul(base, base)
    return result


def weyl_reduce(u: WeylElement, level: int) -> WeylElement:
    if not 0 <= level <= u.level:
        raise ValueError(f"cannot reduce level {u.level} to {level}")
    return WeylElement(u.p, level, u.d, u.exps, u.coeffs)


def weyl_lift(u: WeylElement, level: int) -> WeylElement:
    """Read the element at a higher level using canonical representatives."""
    if level < u.level:
        raise ValueError(f"cannot lift level {u.level} to {level}")
    return WeylElement(u.p, level, u.d, u.exps.copy(), u.coeffs.copy(), _canonical=True)


def weyl_pdiv(u: WeylElement, j: int) -> WeylElement:
    """Divide every coefficient by p^j; the level drops by j."""
    if j < 0 or j > u.level:
        raise ValueError(f"pdiv by p^{j} out of range at level {u.level}")
    q = u.p**j
    if (u.coeffs % q).any():
        raise DivisibilityError(f"coefficients not divisible by {u.p}^{j}")
    return WeylElement(u.p, u.level - j, u.d, u.exps, u.coeffs // q)


def derivative_x(u: WeylElement, i: int) -> WeylElement:
    """[d_i, u]: formal derivative in x_i."""
    a = u.exps[:, i]
    e = u.exps.copy()
    e[:, i] -= 1
    keep = a > 0
    return u.like(e[keep], u.coeffs[keep] * a[keep])


def derivative_d(u: WeylElement, i: int) -> WeylElement:
    """[u, x_i]: formal derivative in d_i."""
    b = u.exps[:, u.d + i]
    e = u.exps.copy()
    e[:, u.d + i] -= 1
    keep = b > 0
    return u.like(e[keep], u.coeffs[keep] * b[keep])


def is_central(u: WeylElement) -> bool:
    # [d_i, x^a d^b] = a_i x^(a-e_i) d^b and [x^a d^b, x_i] = b_i x^a d^(b-e_i)
    M = u.modulus
    return not bool((u.exps * u.coeffs[:, None] % M).any())


def total_degree(u: WeylElement) -> int:
    return int(u.exps.sum(axis=1).max()) if len(u) else -1


def monomials_up_to(d: int, D: int) -> list[tuple[int, ...]]:
    """Exponent rows (a, b) with |a| + |b| <= D, graded, lex-descending inside a degree."""
    out = []
    for deg in range(D + 1):
        out.extend(_compositions(deg, 2 * d))
    return out


# ---------------------------------------------------------------------------
# text grammar


def format_weyl(u: WeylElement) -> str:
    names = _names(u.d)
    order = sorted(range(len(u)), key=lambda t: (int(u.exps[t].sum()), tuple(u.exps[t])), reverse=True)
    rows = [(int(u.coeffs[t]), list(zip(names, (int(v) for v in u.exps[t])))) for t in order]
    return format_terms(rows)


def parse_weyl(text: str, p: int, level: int, d: int) -> WeylElement:
    """Parse ``c*x1^a*d1^b + ...``; factors multiply in the order written."""
    names = _names(d)
    index = {n: i for i, n in enumerate(names)}
    total = WeylElement(p, level, d)
    normal_terms = {}
    for c, factors in parse_terms(text, set(names)):
        slots = [index[n] for n, _ in factors]
        e = [0] * (2 * d)
        for (n, k) in factors:
            e[index[n]] += k
        if _no_d_before_x(slots, d):
            key = tuple(e)
            normal_terms[key] = normal_terms.get(key, 0) + c
            continue
        term = WeylElement.constant(p, level, d, c)
        for n, k in factors:
            i = index[n]
            gen = WeylElement.x(p, level, d, i, k) if i < d else WeylElement.dx(p, level, d, i - d, k)
            term = weyl_mul(term, gen)
        total = total + term
    return total + WeylElement.from_terms(p, level, d, normal_terms)


def _no_d_before_x(slots, d):
    seen_d = False
    for s in slots:
        if s >= d:
            seen_d = True
        elif seen_d:
            return False
    return True


__all__ = [
    "ParseError",
    "WeylElement",
    "commutator",
    "derivative_d",
    "derivative_x",
    "format_weyl",
    "is_central",
    "monomials_up_to",
    "parse_weyl",
    "total_degree",
    "weyl_lift",
    "weyl_mul",
    "weyl_pdiv",
    "weyl_pow",
    "weyl_reduce",
]
