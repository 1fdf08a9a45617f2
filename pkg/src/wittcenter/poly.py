"""Sparse multivariate polynomials and differential calculus in characteristic p.

Polynomials store canonical integer coefficients keyed by exponent tuples; the
coefficient ring (``ZZ`` or ``ModRing(p, k)``) normalizes them. Forms and
vector fields are plain tuples of polynomials over one ambient ring.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from ._grammar import format_terms, parse_terms
from .ring import ZZ, ModRing, StructureError


class PolyRing:
    """Polynomial ring over ``base`` in the named variables (order matters)."""

    def __init__(self, names, base=ZZ):
        names = tuple(names)
        if len(set(names)) != len(names):
            raise ValueError("duplicate variable names")
        self.names = names
        self.nvars = len(names)
        self.base = base
        self._index = {n: i for i, n in enumerate(names)}

    def __eq__(self, other):
        return isinstance(other, PolyRing) and self.names == other.names and self.base == other.base

    def __hash__(self):
        return hash((self.names, self.base))

    def __repr__(self):
        return f"{self.base!r}[{', '.join(self.names)}]"

    @property
    def characteristic(self) -> int:
        return self.base.characteristic

    @property
    def prime(self) -> int | None:
        """The prime p when the base is the field F_p, else None."""
        if isinstance(self.base, ModRing) and self.base.k == 1:
            return self.base.p
        return None

    def index(self, name: str) -> int:
        return self._index[name]

    def zero(self) -> MultiPoly:
        return MultiPoly(self, {})

    def one(self) -> MultiPoly:
        return self.from_int(1)

    def from_int(self, n: int) -> MultiPoly:
        c = self.base.normalize(n)
        return MultiPoly(self, {(0,) * self.nvars: c} if c else {})

    def gen(self, name_or_index) -> MultiPoly:
        i = name_or_index if isinstance(name_or_index, int) else self._index[name_or_index]
        e = [0] * self.nvars
        e[i] = 1
        return MultiPoly(self, {tuple(e): self.base.normalize(1)})

    @property
    def gens(self) -> tuple[MultiPoly, ...]:
        return tuple(self.gen(i) for i in range(self.nvars))

    def monomial(self, exps, coeff: int = 1) -> MultiPoly:
        c = self.base.normalize(coeff)
        return MultiPoly(self, {tuple(exps): c} if c else {})

    def from_dict(self, terms: dict) -> MultiPoly:
        out = {}
        for e, c in terms.items():
            c = self.base.normalize(c)
            if c:
                out[tuple(e)] = c
        return MultiPoly(self, out)

    def change_base(self, base) -> PolyRing:
        return PolyRing(self.names, base)

    def parse(self, text: str) -> MultiPoly:
        terms = {}
        for c, factors in parse_terms(text, set(self.names)):
            e = [0] * self.nvars
            for name, k in factors:
                e[self._index[name]] += k
            key = tuple(e)
            terms[key] = terms.get(key, 0) + c
        return self.from_dict(terms)

    def monomials_up_to(self, D: int) -> list[tuple[int, ...]]:
        """Exponent vectors of total degree <= D, graded, lex-descending inside a degree."""
        out = []
        for deg in range(D + 1):
            out.extend(_compositions(deg, self.nvars))
        return out


def _compositions(total: int, parts: int):
    # lex-descending exponent vectors summing to total
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def graded_key(e):
    return (sum(e), e)


@dataclass(frozen=True, eq=False)
class MultiPoly:
    ring: PolyRing
    terms: dict

    def _check(self, other) -> MultiPoly:
        if isinstance(other, MultiPoly):
            if other.ring != self.ring:
                raise StructureError(f"mismatched rings {self.ring!r} and {other.ring!r}")
            return other
        if isinstance(other, int):
            return self.ring.from_int(other)
        return NotImplemented

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        base = self.ring.base
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = base.normalize(out.get(e, 0) + c)
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return MultiPoly(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        base = self.ring.base
        return MultiPoly(self.ring, {e: base.normalize(-c) for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        other = self._check(other)
        if other is NotImplemented:
            return other
        if len(self.terms) < len(other.terms):
            a, b = self.terms, other.terms
        else:
            a, b = other.terms, self.terms
        out: dict = {}
        for ea, ca in a.items():
            for eb, cb in b.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                out[e] = out.get(e, 0) + ca * cb
        return self.ring.from_dict(out)

    def __rmul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        return NotImplemented

    def scale(self, c: int) -> MultiPoly:
        return self.ring.from_dict({e: c * v for e, v in self.terms.items()})

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative exponent")
        p = self.ring.prime
        result = self.ring.one()
        base = self
        # over F_p, the p-th power is the Frobenius: exponents times p
        if p is not None:
            while n:
                n, r = divmod(n, p)
                if r:
                    result = result * _plain_pow(base, r)
                base = base.frobenius()
            return result
        return _plain_pow(self, n)

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ring.from_int(other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        return hash((self.ring, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def coefficient(self, exps) -> int:
        return self.terms.get(tuple(exps), 0)

    def sorted_terms(self):
        """Terms in graded order, highest degree first (the printing order)."""
        return sorted(self.terms.items(), key=lambda t: graded_key(t[0]), reverse=True)

    def derivative(self, i: int) -> MultiPoly:
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                f = list(e)
                f[i] -= 1
                out[tuple(f)] = c * e[i]
        return self.ring.from_dict(out)

    def frobenius(self) -> MultiPoly:
        """f -> f^p over F_p: exponents scale by p, coefficients stay fixed."""
        p = self.ring.prime
        if p is None:
            raise ValueError("Frobenius needs a coefficient field F_p")
        return MultiPoly(self.ring, {tuple(p * x for x in e): c for e, c in self.terms.items()})

    def change_ring(self, ring: PolyRing) -> MultiPoly:
        """Map coefficients into ``ring`` (same variables) through integer representatives."""
        if ring.names != self.ring.names:
            raise StructureError("variable lists differ")
        return ring.from_dict(self.terms)

    def lift(self) -> MultiPoly:
        """Integer lift using canonical representatives."""
        return MultiPoly(self.ring.change_base(ZZ), dict(self.terms))

    def evaluate(self, values, one, from_int):
        """Substitute ring elements for the variables.

        ``values`` supplies one element per variable; ``one`` and ``from_int``
        embed constants. Powers are cached per variable.
        """
        cache = [dict() for _ in range(self.ring.nvars)]

        def power(i, k):
            if k not in cache[i]:
                if k == 1:
                    cache[i][k] = values[i]
                else:
                    half = power(i, k // 2)
                    sq = half * half
                    cache[i][k] = sq * values[i] if k % 2 else sq
            return cache[i][k]

        total = None
        for e, c in self.sorted_terms():
            term = None
            for i, k in enumerate(e):
                if k:
                    term = power(i, k) if term is None else term * power(i, k)
            cval = from_int(c)
            term = cval if term is None else (term if c == 1 else term * cval)
            total = term if total is None else total + term
        return from_int(0) if total is None else total

    def __str__(self):
        rows = [(c, list(zip(self.ring.names, e))) for e, c in self.sorted_terms()]
        return format_terms(rows)

    def __repr__(self):
        return f"MultiPoly({self}, over {self.ring!r})"


def _plain_pow(f: MultiPoly, n: int) -> MultiPoly:
    result = f.ring.one()
    base = f
    while n:
        if n & 1:
            result = result * base
        n >>= 1
        if n:
            base = base * base
    return result


def poly_add(f: MultiPoly, g: MultiPoly) -> MultiPoly:
    return f + g


def poly_mul(f: MultiPoly, g: MultiPoly) -> MultiPoly:
    return f * g


def poly_scale(c: int, f: MultiPoly) -> MultiPoly:
    return f.scale(c)


# ---------------------------------------------------------------------------
# Vector fields and forms


def _same_ring(*objs):
    ring = objs[0].ring
    for o in objs[1:]:
        if o.ring != ring:
            raise StructureError("objects live over different polynomial rings")
    return ring


@dataclass(frozen=True)
class VectorField:
    """A derivation, recorded by its values on the variables."""

    ring: PolyRing
    components: tuple

    def __post_init__(self):
        if len(self.components) != self.ring.nvars:
            raise ValueError("one component per variable is required")

    def __add__(self, other):
        _same_ring(self, other)
        return VectorField(self.ring, tuple(a + b for a, b in zip(self.components, other.components)))

    def __sub__(self, other):
        _same_ring(self, other)
        return VectorField(self.ring, tuple(a - b for a, b in zip(self.components, other.components)))

    def __neg__(self):
        return VectorField(self.ring, tuple(-a for a in self.components))

    def scale(self, f: MultiPoly) -> VectorField:
        """The field f*theta."""
        return VectorField(self.ring, tuple(f * a for a in self.components))

    def __call__(self, f: MultiPoly) -> MultiPoly:
        return lie_derivative_fn(self, f)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components)

    def __str__(self):
        parts = [f"({c})*d/d{n}" for c, n in zip(self.components, self.ring.names) if c]
        return " + ".join(parts) if parts else "0"

    @classmethod
    def coordinate(cls, ring: PolyRing, i: int) -> VectorField:
        comps = [ring.zero()] * ring.nvars
        comps[i] = ring.one()
        return cls(ring, tuple(comps))

    @classmethod
    def zero(cls, ring: PolyRing) -> VectorField:
        return cls(ring, tuple(ring.zero() for _ in range(ring.nvars)))


@dataclass(frozen=True)
class OneForm:
    ring: PolyRing
    components: tuple

    def __post_init__(self):
        if len(self.components) != self.ring.nvars:
            raise ValueError("one component per variable is required")

    def __add__(self, other):
        _same_ring(self, other)
        return OneForm(self.ring, tuple(a + b for a, b in zip(self.components, other.components)))

    def __sub__(self, other):
        _same_ring(self, other)
        return OneForm(self.ring, tuple(a - b for a, b in zip(self.components, other.components)))

    def __neg__(self):
        return OneForm(self.ring, tuple(-a for a in self.components))

    def scale(self, f: MultiPoly) -> OneForm:
        return OneForm(self.ring, tuple(f * a for a in self.components))

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components)

    def degree(self) -> int:
        return max(c.degree() for c in self.components)

    def __str__(self):
        parts = [f"({c})*d{n}" for c, n in zip(self.components, self.ring.names) if c]
        return " + ".join(parts) if parts else "0"

    @classmethod
    def zero(cls, ring: PolyRing) -> OneForm:
        return cls(ring, tuple(ring.zero() for _ in range(ring.nvars)))


def _pairs(n: int):
    return list(itertools.combinations(range(n), 2))


@dataclass(frozen=True)
class TwoForm:
    """Coefficients of dv_i ^ dv_j for i < j, in ``itertools.combinations`` order."""

    ring: PolyRing
    components: tuple

    def __post_init__(self):
        if len(self.components) != len(_pairs(self.ring.nvars)):
            raise ValueError("one component per pair i < j is required")

    @cached_property
    def _lookup(self):
        return dict(zip(_pairs(self.ring.nvars), self.components))

    def coefficient(self, i: int, j: int) -> MultiPoly:
        """Coefficient of dv_i ^ dv_j with the antisymmetric extension."""
        if i == j:
            return self.ring.zero()
        if i < j:
            return self._lookup[(i, j)]
        return -self._lookup[(j, i)]

    def __add__(self, other):
        _same_ring(self, other)
        return TwoForm(self.ring, tuple(a + b for a, b in zip(self.components, other.components)))

    def __sub__(self, other):
        _same_ring(self, other)
        return TwoForm(self.ring, tuple(a - b for a, b in zip(self.components, other.components)))

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components)

    def __str__(self):
        names = self.ring.names
        parts = [
            f"({c})*d{names[i]}^d{names[j]}" for c, (i, j) in zip(self.components, _pairs(self.ring.nvars)) if c
        ]
        return " + ".join(parts) if parts else "0"

    @classmethod
    def from_pairs(cls, ring: PolyRing, entries: dict) -> TwoForm:
        """Build from ``{(i, j): coeff}`` allowing i > j (sign flips)."""
        comps = {pair: ring.zero() for pair in _pairs(ring.nvars)}
        for (i, j), c in entries.items():
            if i == j:
                continue
            if i < j:
                comps[(i, j)] = comps[(i, j)] + c
            else:
                comps[(j, i)] = comps[(j, i)] - c
        return cls(ring, tuple(comps[pair] for pair in _pairs(ring.nvars)))


def de_rham_d(f: MultiPoly) -> OneForm:
    return OneForm(f.ring, tuple(f.derivative(i) for i in range(f.ring.nvars)))


def d_one_form(alpha: OneForm) -> TwoForm:
    """Exterior derivative of a 1-form."""
    ring = alpha.ring
    comps = []
    for i, j in _pairs(ring.nvars):
        comps.append(alpha.components[j].derivative(i) - alpha.components[i].derivative(j))
    return TwoForm(ring, tuple(comps))


def contract1(theta: VectorField, alpha: OneForm) -> MultiPoly:
    ring = _same_ring(theta, alpha)
    total = ring.zero()
    for t, a in zip(theta.components, alpha.components):
        if t and a:
            total = total + t * a
    return total


def contract2(theta: VectorField, omega: TwoForm) -> OneForm:
    """i_theta(dv_i ^ dv_j) = theta(v_i) dv_j - theta(v_j) dv_i."""
    ring = _same_ring(theta, omega)
    comps = [ring.zero() for _ in range(ring.nvars)]
    for c, (i, j) in zip(omega.components, _pairs(ring.nvars)):
        if not c:
            continue
        ti, tj = theta.components[i], theta.components[j]
        if ti:
            comps[j] = comps[j] + c * ti
        if tj:
            comps[i] = comps[i] - c * tj
    return OneForm(ring, tuple(comps))


def lie_derivative_fn(theta: VectorField, f: MultiPoly) -> MultiPoly:
    ring = _same_ring(theta, f)
    total = ring.zero()
    for i, t in enumerate(theta.components):
        if t:
            df = f.derivative(i)
            if df:
                total = total + t * df
    return total


def lie_derivative_form(theta: VectorField, alpha: OneForm) -> OneForm:
    """Cartan: L_theta = i_theta d + d i_theta."""
    return contract2(theta, d_one_form(alpha)) + de_rham_d(contract1(theta, alpha))


def vf_bracket(t1: VectorField, t2: VectorField) -> VectorField:
    ring = _same_ring(t1, t2)
    return VectorField(ring, tuple(t1(b) - t2(a) for a, b in zip(t1.components, t2.components)))


def vf_p_power(theta: VectorField) -> VectorField:
    """The restricted p-th power: theta composed with itself p times.

    In characteristic p this composite is again a derivation, so it is
    determined by its values on the variables.
    """
    ring = theta.ring
    p = ring.prime
    if p is None:
        raise ValueError("restricted p-th power needs a coefficient field F_p")
    comps = []
    for v in ring.gens:
        f = v
        for _ in range(p):
            f = theta(f)
        comps.append(f)
    return VectorField(ring, tuple(comps))


def frobenius_image(f: MultiPoly) -> MultiPoly:
    return f.frobenius()


def cartier_inverse(alpha: OneForm) -> OneForm:
    """C^{-1}(f dv_j) = f^p v_j^(p-1) dv_j, applied to the coordinate decomposition."""
    ring = alpha.ring
    p = ring.prime
    if p is None:
        raise ValueError("Cartier operator needs a coefficient field F_p")
    comps = []
    for j, f in enumerate(alpha.components):
        e = [0] * ring.nvars
        e[j] = p - 1
        comps.append(f.frobenius() * ring.monomial(e))
    return OneForm(ring, tuple(comps))


def is_exact_mod_p(alpha: OneForm, degree_bound: int | None = None) -> tuple[bool, MultiPoly | None]:
    """Decide whether alpha = df for some f of degree <= degree_bound + 1.

    Solves the linear system over F_p; returns ``(True, f)`` with a primitive
    (no constant term) or ``(False, None)``.
    """
    from .linalg import solve

    ring = alpha.ring
    p = ring.prime
    if p is None:
        raise ValueError("exactness check needs a coefficient field F_p")
    if degree_bound is None:
        degree_bound = max(alpha.degree(), 0)
    if alpha.degree() > degree_bound:
        raise ValueError("form has terms above the degree bound")
    unknowns = [e for e in ring.monomials_up_to(degree_bound + 1) if sum(e)]
    targets = ring.monomials_up_to(degree_bound)
    tindex = {e: i for i, e in enumerate(targets)}
    n = ring.nvars
    rows = n * len(targets)
    A = np.zeros((rows, len(unknowns)), dtype=np.int64)
    for col, e in enumerate(unknowns):
        for j in range(n):
            if e[j] % p:
                f = list(e)
                f[j] -= 1
                A[j * len(targets) + tindex[tuple(f)], col] = e[j] % p
    b = np.zeros(rows, dtype=np.int64)
    for j, comp in enumerate(alpha.components):
        for e, c in comp.terms.items():
            b[j * len(targets) + tindex[e]] = c
    x = solve(A, b, p, 1)
    if x is None:
        return False, None
    f = ring.from_dict({e: int(c) for e, c in zip(unknowns, x) if c})
    if de_rham_d(f) != alpha:
        raise AssertionError("exactness witness failed verification")
    return True, f
