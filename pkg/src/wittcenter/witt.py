"""Truncated p-typical Witt vectors over commutative rings.

Ring operations use the universal sum/product/negation polynomials, computed
once per (p, length) over Z by peeling the ghost equations with exact
division. Rings that are quotients of a p-torsion-free ring (Z/p^k and
polynomial rings over it) can instead be computed through the "lift" route:
lift to the torsion-free ring, add or multiply ghost components, invert the
ghost map by exact division, reduce back. Both routes agree; the tests hold
them to it. The lift route is the default wherever it applies because the
universal product polynomials grow quickly (p=5, length 4 takes seconds).
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from ._grammar import ParseError
from .poly import MultiPoly, PolyRing
from .ring import ZZ, IntegerRing, ModInt, ModRing, binomial, check_prime


class WittInvariantError(AssertionError):
    """An exact division that must succeed left a remainder."""


# ---------------------------------------------------------------------------
# psi polynomials

_XY = PolyRing(("x", "y"), ZZ)


@dataclass(frozen=True)
class PsiPolynomial:
    i: int
    p: int
    poly: MultiPoly

    def __call__(self, x, y, one=None, from_int=None):
        if one is None:
            return self.poly.evaluate((x, y), 1, int)
        return self.poly.evaluate((x, y), one, from_int)

    def __str__(self):
        return str(self.poly)


def _exact_div(f, q: int):
    if isinstance(f, int):
        if f % q:
            raise WittInvariantError(f"{q} does not divide {f}")
        return f // q
    out = {}
    for e, c in f.terms.items():
        if c % q:
            raise WittInvariantError(f"{q} does not divide coefficient {c}")
        out[e] = c // q
    return MultiPoly(f.ring, out)


@lru_cache(maxsize=None)
def psi(i: int, p: int) -> PsiPolynomial:
    """psi_1 = x + y; psi_i = ((x+y)^(p^(i-1)) - (x^p+y^p)^(p^(i-2))) / p^(i-1)."""
    check_prime(p)
    if i < 1:
        raise ValueError("psi index starts at 1")
    x, y = _XY.gens
    if i == 1:
        return PsiPolynomial(1, p, x + y)
    num = (x + y) ** (p ** (i - 1)) - (x**p + y**p) ** (p ** (i - 2))
    return PsiPolynomial(i, p, _exact_div(num, p ** (i - 1)))


def psi_recursion(i: int, p: int) -> MultiPoly:
    """Right-hand side of the recursion expressing psi_(i+1) through psi_i (i > 1)."""
    if i < 2:
        raise ValueError("the recursion is stated for i > 1")
    x, y = _XY.gens
    prev = psi(i, p).poly
    s = x**p + y**p
    total = _XY.zero()
    for j in range(1, p + 1):
        c = Fraction(binomial(p, j)) * Fraction(p) ** (j * (i - 1) - i)
        if c.denominator != 1:
            raise WittInvariantError(f"non-integral recursion coefficient {c}")
        total = total + prev**j * s ** ((p - j) * p ** (i - 2)) * int(c)
    return total


# ---------------------------------------------------------------------------
# rings of components


def _ring_of(x):
    if isinstance(x, bool):
        raise TypeError("bool is not a ring element")
    if isinstance(x, int):
        return ZZ
    if isinstance(x, ModInt):
        return ModRing(x.p, x.k)
    if isinstance(x, MultiPoly):
        return x.ring
    raise TypeError(f"unsupported Witt component type {type(x).__name__}")


def _is_torsion_free(ring) -> bool:
    if isinstance(ring, IntegerRing):
        return True
    return isinstance(ring, PolyRing) and isinstance(ring.base, IntegerRing)


def _lifter(ring):
    """(lift, reduce) maps to a torsion-free cover, or None."""
    if _is_torsion_free(ring):
        return (lambda a: a), (lambda a: a)
    if isinstance(ring, ModRing):
        return (lambda a: a.value), (lambda n: ModInt(ring.p, ring.k, n))
    if isinstance(ring, PolyRing) and isinstance(ring.base, ModRing):
        return (lambda f: f.lift()), (lambda g: g.change_ring(ring))
    return None


# ---------------------------------------------------------------------------
# Witt vectors


@dataclass(frozen=True, eq=False)
class WittVector:
    p: int
    components: tuple
    ring: object

    def __post_init__(self):
        if not self.components:
            raise ValueError("Witt vectors have length >= 1")

    @classmethod
    def of(cls, p: int, components, ring=None) -> WittVector:
        comps = tuple(components)
        if ring is None:
            ring = next((_ring_of(c) for c in comps if not isinstance(c, int)), ZZ)
        comps = tuple(ring.from_int(c) if isinstance(c, int) and ring is not ZZ else c for c in comps)
        for c in comps:
            if _ring_of(c) != ring:
                raise ValueError("all components must lie in one ring")
        return cls(check_prime(p), comps, ring)

    def __len__(self):
        return len(self.components)

    def __getitem__(self, i):
        return self.components[i]

    def __add__(self, other):
        return witt_add(self, other)

    def __sub__(self, other):
        return witt_add(self, witt_neg(other))

    def __neg__(self):
        return witt_neg(self)

    def __mul__(self, other):
        if isinstance(other, int):
            return witt_mul(self, witt_from_int(other, self.p, len(self), self.ring))
        return witt_mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        result = witt_from_int(1, self.p, len(self), self.ring)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        if not isinstance(other, WittVector):
            return NotImplemented
        return self.p == other.p and self.ring == other.ring and all(
            a == b for a, b in zip(self.components, other.components)
        ) and len(self) == len(other)

    def __hash__(self):
        return hash((self.p, self.components))

    def __str__(self):
        return format_witt(self)

    def __repr__(self):
        return f"WittVector(p={self.p}, {format_witt(self)})"

    def truncate(self, n: int) -> WittVector:
        return WittVector(self.p, self.components[:n], self.ring)

    def map(self, fn, ring) -> WittVector:
        """Apply a ring homomorphism componentwise (Witt vectors are functorial)."""
        return WittVector(self.p, tuple(fn(c) for c in self.components), ring)


def _check_pair(u: WittVector, v: WittVector):
    if u.p != v.p or len(u) != len(v):
        raise ValueError(f"mismatched Witt vectors: p={u.p},{v.p} length={len(u)},{len(v)}")
    if u.ring != v.ring:
        raise ValueError("Witt vectors over different rings")


@lru_cache(maxsize=None)
def _universal_ring(n: int) -> PolyRing:
    return PolyRing(tuple(f"a{i}" for i in range(1, n + 1)) + tuple(f"b{i}" for i in range(1, n + 1)), ZZ)


_CACHE_LOCK = threading.Lock()
_UNIVERSAL: dict = {}


def _ghost_components(comps, p: int):
    """Ghost components of a vector with torsion-free entries."""
    out = []
    for m in range(1, len(comps) + 1):
        total = comps[0] ** (p ** (m - 1))
        for i in range(1, m):
            total = total + comps[i] ** (p ** (m - 1 - i)) * p**i
        out.append(total)
    return out


def _ghost_inverse(ghosts, p: int):
    """Solve for Witt components given ghost components, dividing exactly."""
    comps = []
    for m, g in enumerate(ghosts, start=1):
        rest = g
        for i in range(m - 1):
            rest = rest - comps[i] ** (p ** (m - 1 - i)) * p**i
        comps.append(_exact_div(rest, p ** (m - 1)))
    return comps


def universal_polynomials(p: int, n: int) -> dict:
    """Universal ``{'add': [S_1..S_n], 'mul': [P_1..P_n], 'neg': [N_1..N_n]}`` over Z."""
    key = (p, n)
    cached = _UNIVERSAL.get(key)
    if cached is not None:
        return cached
    R = _universal_ring(n)
    a = [R.gen(i) for i in range(n)]
    b = [R.gen(n + i) for i in range(n)]
    ga, gb = _ghost_components(a, p), _ghost_components(b, p)
    table = {
        "add": _ghost_inverse([x + y for x, y in zip(ga, gb)], p),
        "mul": _ghost_inverse([x * y for x, y in zip(ga, gb)], p),
        "neg": _ghost_inverse([-x for x in ga], p),
    }
    with _CACHE_LOCK:
        return _UNIVERSAL.setdefault(key, table)


# universal S_i/P_i tables build in well under a second while p^(n-1) <= 27
UNIVERSAL_LIMIT = 27


def _default_route(ring, p: int, n: int) -> str:
    """Universal polynomials over F_p-algebras (p-th powers are Frobenius there),
    the ghost-lift route over torsion-free rings and for large tables."""
    if _lifter(ring) is None:
        return "universal"
    base = ring.base if isinstance(ring, PolyRing) else ring
    if isinstance(base, ModRing) and base.k == 1 and p ** (n - 1) <= UNIVERSAL_LIMIT:
        return "universal"
    return "lift"


def _apply(op: str, u: WittVector, v: WittVector | None, route: str | None):
    ring = u.ring
    p = u.p
    n = len(u)
    route = route or _default_route(ring, p, n)
    if route == "lift":
        lifter = _lifter(ring)
        if lifter is None:
            raise ValueError(f"ring {ring!r} has no torsion-free lift")
        lift, red = lifter
        gu = _ghost_components([lift(c) for c in u.components], p)
        if op == "add":
            gv = _ghost_components([lift(c) for c in v.components], p)
            g = [x + y for x, y in zip(gu, gv)]
        elif op == "mul":
            gv = _ghost_components([lift(c) for c in v.components], p)
            g = [x * y for x, y in zip(gu, gv)]
        else:
            g = [-x for x in gu]
        return WittVector(p, tuple(red(c) for c in _ghost_inverse(g, p)), ring)
    if route != "universal":
        raise ValueError(f"unknown route {route!r}")
    polys = universal_polynomials(p, n)[op]
    zero = ring.zero()
    values = list(u.components) + (list(v.components) if v is not None else [zero] * n)
    one = ring.one()
    out = tuple(f.evaluate(values, one, ring.from_int) for f in polys)
    return WittVector(p, out, ring)


def witt_add(u: WittVector, v: WittVector, route: str | None = None) -> WittVector:
    _check_pair(u, v)
    return _apply("add", u, v, route)


def witt_mul(u: WittVector, v: WittVector, route: str | None = None) -> WittVector:
    _check_pair(u, v)
    return _apply("mul", u, v, route)


def witt_neg(u: WittVector, route: str | None = None) -> WittVector:
    return _apply("neg", u, None, route)


def ghost(w: WittVector) -> list:
    if not _is_torsion_free(w.ring):
        raise ValueError("ghost map needs a p-torsion-free coefficient ring (Z or Z[vars])")
    return _ghost_components(list(w.components), w.p)


def teichmuller(z, length: int, p: int, ring=None) -> WittVector:
    ring = ring or _ring_of(z)
    return WittVector(check_prime(p), (z,) + tuple(ring.zero() for _ in range(length - 1)), ring)


def verschiebung(w: WittVector) -> WittVector:
    return WittVector(w.p, (w.ring.zero(),) + w.components, w.ring)


def witt_zero(p: int, length: int, ring) -> WittVector:
    return WittVector(p, tuple(ring.zero() for _ in range(length)), ring)


@lru_cache(maxsize=None)
def _integer_witt(n: int, p: int, length: int) -> tuple:
    return tuple(_ghost_inverse([n] * length, p))


def witt_from_int(n: int, p: int, length: int, ring) -> WittVector:
    """Image of the integer n under Z -> W_length(ring)."""
    return WittVector(p, tuple(ring.from_int(c) for c in _integer_witt(n, p, length)), ring)


def check_addition_identity(z1, z2, length: int, p: int, ring=None) -> bool:
    """Test [z1 + z2] == sum_i V^i psi_(i+1)([z1], [z2]) in W_length."""
    ring = ring or _ring_of(z1)
    lhs = teichmuller(z1 + z2, length, p, ring)
    rhs = witt_zero(p, length, ring)
    for i in range(length):
        n = length - i
        t1 = teichmuller(z1, n, p, ring)
        t2 = teichmuller(z2, n, p, ring)
        one = witt_from_int(1, p, n, ring)
        val = psi(i + 1, p).poly.evaluate((t1, t2), one, lambda c, n=n: witt_from_int(c, p, n, ring))
        for _ in range(i):
            val = verschiebung(val)
        rhs = rhs + val
    return lhs == rhs


# ---------------------------------------------------------------------------
# text grammar: [f1; f2; ...]


def _format_component(c) -> str:
    # components print compactly so that "; " and ", " stay the only visible separators
    if isinstance(c, ModInt):
        return str(c.value)
    return str(c).replace(" + ", "+")


def format_witt(w: WittVector) -> str:
    return "[" + "; ".join(_format_component(c) for c in w.components) + "]"


def format_ghost(values) -> str:
    return "(" + ", ".join(_format_component(v) for v in values) + ")"


def parse_witt(text: str, p: int, ring) -> WittVector:
    s = text.strip()
    if not (s.startswith("[") and s.endswith("]")):
        raise ParseError("Witt vectors are written [f1; f2; ...]", text, 0)
    body = s[1:-1]
    parts = body.split(";")
    comps = []
    offset = text.index("[") + 1
    for part in parts:
        if isinstance(ring, PolyRing):
            try:
                comps.append(ring.parse(part))
            except ParseError as exc:
                raise ParseError(str(exc).split(" at position")[0], text, offset + exc.pos) from None
        else:
            try:
                comps.append(ring.from_int(int(part.strip())))
            except ValueError:
                raise ParseError("expected an integer component", text, offset) from None
        offset += len(part) + 1
    return WittVector(check_prime(p), tuple(comps), ring)
