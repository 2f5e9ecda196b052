"""Sparse multivariate polynomials over the rationals.

A :class:`PolyRing` fixes an ordered tuple of variable names and a monomial
order; a :class:`Polynomial` is an immutable map from exponent tuples to
:class:`fractions.Fraction` coefficients.  Everything is exact.
"""

from __future__ import annotations

import math
from math import gcd
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Mapping, Sequence, Tuple, Union

Exp = Tuple[int, ...]
Coeff = Union[int, Fraction]

INFINITY = math.inf


class RingMismatch(ValueError):
    pass


@dataclass(frozen=True)
class MonomialOrder:
    """A monomial order: ``lex``, ``degrevlex`` or ``block``.

    ``block`` with ``block=k`` compares the first ``k`` variables by degrevlex
    and breaks ties by degrevlex on the remaining ones.  It eliminates the
    front block.
    """

    kind: str = "degrevlex"
    block: int = 0

    def __post_init__(self):
        if self.kind not in ("lex", "degrevlex", "block"):
            raise ValueError(f"unknown monomial order {self.kind!r}")

    def key(self, e: Exp):
        if self.kind == "lex":
            return e
        if self.kind == "degrevlex":
            return _grevlex_key(e)
        k = self.block
        return (_grevlex_key(e[:k]), _grevlex_key(e[k:]))

    def __str__(self):
        return f"block({self.block})" if self.kind == "block" else self.kind


def _grevlex_key(e: Exp):
    return (sum(e), tuple(-a for a in reversed(e)))


LEX = MonomialOrder("lex")
DEGREVLEX = MonomialOrder("degrevlex")


def block_order(k: int) -> MonomialOrder:
    return MonomialOrder("block", k)


class PolyRing:
    """Polynomial ring ``Q[names]`` with a monomial order."""

    def __init__(self, names: Iterable[str], order: MonomialOrder = DEGREVLEX):
        self.names: Tuple[str, ...] = tuple(names)
        if len(set(self.names)) != len(self.names):
            raise ValueError(f"duplicate variable names in {self.names}")
        self.order = order
        self.index = {n: i for i, n in enumerate(self.names)}
        self.nvars = len(self.names)
        self._zero_exp = (0,) * self.nvars

    def __eq__(self, other):
        return (
            isinstance(other, PolyRing)
            and self.names == other.names
            and self.order == other.order
        )

    def __hash__(self):
        return hash((self.names, self.order))

    def __repr__(self):
        return f"PolyRing({list(self.names)}, {self.order})"

    @property
    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    @property
    def one(self) -> "Polynomial":
        return self.const(1)

    def const(self, c: Coeff) -> "Polynomial":
        c = Fraction(c)
        return Polynomial(self, {self._zero_exp: c} if c else {})

    def var(self, name: str) -> "Polynomial":
        if name not in self.index:
            raise KeyError(f"unknown variable {name!r}")
        e = [0] * self.nvars
        e[self.index[name]] = 1
        return Polynomial(self, {tuple(e): Fraction(1)})

    def gens(self) -> Tuple["Polynomial", ...]:
        return tuple(self.var(n) for n in self.names)

    def monomial(self, exps: Mapping[str, int], coeff: Coeff = 1) -> "Polynomial":
        e = [0] * self.nvars
        for n, k in exps.items():
            e[self.index[n]] = k
        c = Fraction(coeff)
        return Polynomial(self, {tuple(e): c} if c else {})

    def with_order(self, order: MonomialOrder) -> "PolyRing":
        return PolyRing(self.names, order)

    def extended(self, front: Sequence[str] = (), back: Sequence[str] = (),
                 order: MonomialOrder | None = None) -> "PolyRing":
        return PolyRing(tuple(front) + self.names + tuple(back), order or self.order)

    def __call__(self, value) -> "Polynomial":
        if isinstance(value, Polynomial):
            return value.to_ring(self)
        if isinstance(value, str):
            return self.var(value)
        return self.const(value)


class Polynomial:
    """Immutable sparse polynomial; ``terms`` maps exponent tuples to nonzero
    Fractions."""

    __slots__ = ("ring", "terms", "_lead", "_hash")

    def __init__(self, ring: PolyRing, terms: Dict[Exp, Fraction]):
        self.ring = ring
        self.terms = terms
        self._lead = None
        self._hash = None

    # -- construction helpers -------------------------------------------------

    @classmethod
    def from_dict(cls, ring: PolyRing, terms: Mapping[Exp, Coeff]) -> "Polynomial":
        clean = {}
        for e, c in terms.items():
            if len(e) != ring.nvars:
                raise RingMismatch("exponent length does not match ring")
            if c:
                clean[tuple(e)] = Fraction(c)
        return cls(ring, clean)

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.ring.names != self.ring.names:
                raise RingMismatch(
                    f"variable tables differ: {self.ring.names} vs {other.ring.names}")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.const(other)
        return NotImplemented

    # -- arithmetic -----------------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        res = dict(self.terms)
        for e, c in other.terms.items():
            v = res.get(e, 0) + c
            if v:
                res[e] = v
            else:
                res.pop(e, None)
        return Polynomial(self.ring, res)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return self.ring.zero
            return Polynomial(self.ring, {e: c * other for e, c in self.terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if len(self.terms) > len(other.terms):
            a, b = other.terms, self.terms
        else:
            a, b = self.terms, other.terms
        if len(a) * len(b) > 32:
            return Polynomial(self.ring, _mul_scaled(a, b))
        res: Dict[Exp, Fraction] = {}
        get = res.get
        for e1, c1 in a.items():
            for e2, c2 in b.items():
                e = tuple([i + j for i, j in zip(e1, e2)])
                res[e] = get(e, 0) + c1 * c2
        return Polynomial(self.ring, {e: c for e, c in res.items() if c})

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (Fraction(1) / Fraction(other))
        return NotImplemented

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        result = self.ring.one
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def mul_term(self, e: Exp, c: Fraction) -> "Polynomial":
        return Polynomial(
            self.ring,
            {tuple([i + j for i, j in zip(e, f)]): c * d for f, d in self.terms.items()},
        )

    # -- comparison -----------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.const(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.ring.names == other.ring.names and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring.names, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_term(self) -> Fraction:
        return self.terms.get(self.ring._zero_exp, Fraction(0))

    # -- order-dependent accessors --------------------------------------------

    def sorted_terms(self, order: MonomialOrder | None = None):
        key = (order or self.ring.order).key
        return sorted(self.terms.items(), key=lambda t: key(t[0]), reverse=True)

    def leading_term(self) -> Tuple[Exp, Fraction]:
        if self._lead is None:
            if not self.terms:
                raise ValueError("zero polynomial has no leading term")
            key = self.ring.order.key
            e = max(self.terms, key=key)
            self._lead = (e, self.terms[e])
        return self._lead

    def leading_monomial(self) -> Exp:
        return self.leading_term()[0]

    def leading_coefficient(self) -> Fraction:
        return self.leading_term()[1]

    def monic(self) -> "Polynomial":
        if not self.terms:
            return self
        return self * (1 / self.leading_coefficient())

    def primitive(self) -> "Polynomial":
        """Scale to integer coefficients with content 1 and positive leading
        coefficient."""
        if not self.terms:
            return self
        den = 1
        for c in self.terms.values():
            den = den * c.denominator // math.gcd(den, c.denominator)
        num = 0
        for c in self.terms.values():
            num = math.gcd(num, (c * den).numerator)
        scale = Fraction(den, num)
        if self.leading_coefficient() < 0:
            scale = -scale
        return self * scale

    # -- structure ------------------------------------------------------------

    def variables(self) -> Tuple[str, ...]:
        used = [False] * self.ring.nvars
        for e in self.terms:
            for i, k in enumerate(e):
                if k:
                    used[i] = True
        return tuple(n for n, u in zip(self.ring.names, used) if u)

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def degree(self, name: str) -> int:
        i = self.ring.index[name]
        return max((e[i] for e in self.terms), default=-1)

    def degree_in(self, names: Iterable[str]) -> int:
        idx = [self.ring.index[n] for n in names]
        return max((sum(e[i] for i in idx) for e in self.terms), default=-1)

    def collect(self, names: Sequence[str]) -> Dict[Exp, "Polynomial"]:
        """Group by the exponents of ``names``; values keep those variables at
        exponent zero."""
        idx = [self.ring.index[n] for n in names]
        out: Dict[Exp, Dict[Exp, Fraction]] = {}
        for e, c in self.terms.items():
            key = tuple(e[i] for i in idx)
            rest = list(e)
            for i in idx:
                rest[i] = 0
            out.setdefault(key, {})[tuple(rest)] = c
        return {k: Polynomial(self.ring, v) for k, v in out.items()}

    def homogeneous_part(self, names: Sequence[str], degree: int) -> "Polynomial":
        idx = [self.ring.index[n] for n in names]
        return Polynomial(
            self.ring,
            {e: c for e, c in self.terms.items() if sum(e[i] for i in idx) == degree},
        )

    def part_of_degree_at_least(self, names: Sequence[str], degree: int) -> "Polynomial":
        idx = [self.ring.index[n] for n in names]
        return Polynomial(
            self.ring,
            {e: c for e, c in self.terms.items() if sum(e[i] for i in idx) >= degree},
        )

    # -- calculus and substitution --------------------------------------------

    def diff(self, name: str) -> "Polynomial":
        if name not in self.ring.index:
            raise KeyError(f"unknown variable {name!r}")
        i = self.ring.index[name]
        res = {}
        for e, c in self.terms.items():
            k = e[i]
            if k:
                f = list(e)
                f[i] = k - 1
                res[tuple(f)] = c * k
        return Polynomial(self.ring, res)

    def subs(self, mapping: Mapping[str, "Polynomial"],
             ring: PolyRing | None = None) -> "Polynomial":
        """Ring homomorphism sending each mapped variable to its image.

        Unmapped variables are sent to the variable of the same name in the
        target ring (``ring`` or the ring of the images).
        """
        for n in mapping:
            if n not in self.ring.index:
                raise KeyError(f"unknown variable {n!r}")
        if ring is None:
            rings = {p.ring for p in mapping.values() if isinstance(p, Polynomial)}
            ring = rings.pop() if len(rings) == 1 else self.ring
        images = []
        for n in self.ring.names:
            if n in mapping:
                img = mapping[n]
                images.append(img.to_ring(ring) if isinstance(img, Polynomial)
                              else ring.const(img))
            else:
                images.append(ring.var(n) if n in ring.index else None)
        cache: Dict[Tuple[int, int], Polynomial] = {}

        def power(i: int, k: int) -> Polynomial:
            if (i, k) not in cache:
                cache[(i, k)] = images[i] ** k
            return cache[(i, k)]

        acc: Dict[Exp, Fraction] = {}
        for e, c in self.terms.items():
            term = None
            for i, k in enumerate(e):
                if not k:
                    continue
                if images[i] is None:
                    raise RingMismatch(
                        f"variable {self.ring.names[i]!r} is neither mapped nor "
                        "present in the target ring")
                p = power(i, k)
                term = p if term is None else term * p
            if term is None:
                term = ring.one
            for f, d in term.terms.items():
                acc[f] = acc.get(f, 0) + c * d
        return Polynomial(ring, {e: c for e, c in acc.items() if c})

    def to_ring(self, ring: PolyRing) -> "Polynomial":
        """Re-embed in ``ring`` by variable name."""
        if ring is self.ring:
            return self
        if ring.names == self.ring.names:
            return Polynomial(ring, self.terms)
        pos = []
        for i, n in enumerate(self.ring.names):
            pos.append(ring.index.get(n))
        res = {}
        for e, c in self.terms.items():
            f = [0] * ring.nvars
            for i, k in enumerate(e):
                if k:
                    if pos[i] is None:
                        raise RingMismatch(
                            f"variable {self.ring.names[i]!r} missing from target ring")
                    f[pos[i]] = k
            res[tuple(f)] = c
        return Polynomial(ring, res)

    def evaluate(self, values: Mapping[str, Coeff]) -> Fraction:
        total = Fraction(0)
        vals = [Fraction(values[n]) if n in values else None for n in self.ring.names]
        for e, c in self.terms.items():
            t = c
            for i, k in enumerate(e):
                if k:
                    if vals[i] is None:
                        raise KeyError(f"no value for {self.ring.names[i]!r}")
                    t *= vals[i] ** k
            total += t
        return total

    # -- univariate helpers in the parameter ----------------------------------

    def x_order(self, x: str = "x"):
        """Least exponent of ``x``; :data:`INFINITY` for zero.

        Raises ``ValueError`` if any other variable occurs.
        """
        i = self.ring.index.get(x)
        for e in self.terms:
            if any(k for j, k in enumerate(e) if j != i):
                raise ValueError(f"x_order: {self} involves more than {x!r}")
        if not self.terms:
            return INFINITY
        return min(e[i] for e in self.terms) if i is not None else 0

    def min_exponent(self, name: str) -> int:
        """Largest ``k`` with ``name^k`` dividing every term (∞ for zero)."""
        if not self.terms:
            return INFINITY
        i = self.ring.index[name]
        return min(e[i] for e in self.terms)

    def shift(self, name: str, k: int) -> "Polynomial":
        """Multiply by ``name^k``; ``k < 0`` divides exactly or raises."""
        i = self.ring.index[name]
        res = {}
        for e, c in self.terms.items():
            f = list(e)
            f[i] += k
            if f[i] < 0:
                raise ArithmeticError(f"{self} is not divisible by {name}^{-k}")
            res[tuple(f)] = c
        return Polynomial(self.ring, res)

    def truncate(self, name: str, n: int) -> "Polynomial":
        """Drop every term whose ``name``-exponent is at least ``n``."""
        i = self.ring.index[name]
        return Polynomial(self.ring, {e: c for e, c in self.terms.items() if e[i] < n})

    # -- printing -------------------------------------------------------------

    def __str__(self):
        return to_string(self)

    def __repr__(self):
        return f"Polynomial({to_string(self)!r})"


def _integer_form(terms: Mapping[Exp, Fraction]):
    den = 1
    for c in terms.values():
        q = c.denominator
        if q != 1:
            den = den * q // gcd(den, q)
    return {e: c.numerator * (den // c.denominator) for e, c in terms.items()}, den


def _mul_scaled(a: Mapping[Exp, Fraction], b: Mapping[Exp, Fraction]) -> Dict[Exp, Fraction]:
    """Product over a common denominator so the inner loop runs on ints."""
    ia, da = _integer_form(a)
    ib, db = _integer_form(b)
    # pack exponent vectors into ints so that monomial products are additions
    n = len(next(iter(a)))
    top = max(max(e[i] for e in a) + max(e[i] for e in b) for i in range(n)) if n else 0
    w = top.bit_length() + 1
    shifts = [w * i for i in range(n)]

    def pack(e):
        return sum(k << s for k, s in zip(e, shifts))

    pa = [(pack(e), c) for e, c in ia.items()]
    pb = [(pack(e), c) for e, c in ib.items()]
    res: Dict[int, int] = {}
    get = res.get
    for k1, c1 in pa:
        for k2, c2 in pb:
            k = k1 + k2
            res[k] = get(k, 0) + c1 * c2
    den = da * db
    mask = (1 << w) - 1
    return {tuple((k >> s) & mask for s in shifts): Fraction(c, den)
            for k, c in res.items() if c}


def _format_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def to_string(p: Polynomial) -> str:
    """Canonical text: ``coef*var^e*...`` joined by `` + ``/`` - `` in
    descending order; ``0`` for zero."""
    if not p.terms:
        return "0"
    names = p.ring.names
    parts = []
    for idx, (e, c) in enumerate(p.sorted_terms()):
        mono = "*".join(
            n if k == 1 else f"{n}^{k}" for n, k in zip(names, e) if k
        )
        a = abs(c)
        if not mono:
            body = _format_coeff(a)
        elif a == 1:
            body = mono
        else:
            body = f"{_format_coeff(a)}*{mono}"
        if idx == 0:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append((" - " if c < 0 else " + ") + body)
    return "".join(parts)


def exact_divide(p: Polynomial, q: Polynomial) -> Polynomial:
    """Return ``p / q``, raising ``ArithmeticError`` if ``q`` does not divide
    ``p``."""
    if q.is_zero():
        raise ZeroDivisionError("division by zero polynomial")
    if len(q.terms) == 1:
        (qe, qc), = q.terms.items()
        res = {}
        for e, c in p.terms.items():
            f = tuple(a - b for a, b in zip(e, qe))
            if min(f, default=0) < 0:
                raise ArithmeticError(f"{q} does not divide {p}")
            res[f] = c / qc
        return Polynomial(p.ring, res)
    key = p.ring.order.key
    qe, qc = q.leading_term()
    rem = dict(p.terms)
    quot: Dict[Exp, Fraction] = {}
    while rem:
        e = max(rem, key=key)
        c = rem[e]
        f = tuple(a - b for a, b in zip(e, qe))
        if min(f, default=0) < 0:
            raise ArithmeticError(f"{q} does not divide {p}")
        m = c / qc
        quot[f] = m
        for g, d in q.terms.items():
            h = tuple(a + b for a, b in zip(f, g))
            v = rem.get(h, 0) - m * d
            if v:
                rem[h] = v
            else:
                rem.pop(h, None)
    return Polynomial(p.ring, quot)
