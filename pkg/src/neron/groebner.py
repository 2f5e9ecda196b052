"""Buchberger's algorithm with normal forms, membership, intersections and
colon ideals over ``Q[vars]``."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

from .polycore import (
    DEGREVLEX,
    Exp,
    MonomialOrder,
    Polynomial,
    PolyRing,
    block_order,
    exact_divide,
)


@dataclass(frozen=True)
class Ideal:
    generators: Tuple[Polynomial, ...]
    ring: PolyRing

    def __init__(self, generators: Sequence[Polynomial], ring: PolyRing | None = None):
        gens = tuple(g for g in generators if not g.is_zero())
        if ring is None:
            if not generators:
                raise ValueError("ring required for an empty generator list")
            ring = generators[0].ring
        gens = tuple(g.to_ring(ring) for g in gens)
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "ring", ring)

    def is_unit(self) -> bool:
        return any(g.is_constant() for g in self.generators)


@dataclass(frozen=True)
class GroebnerBasis:
    """Reduced Gröbner basis, sorted by increasing leading monomial."""

    basis: Tuple[Polynomial, ...]
    ring: PolyRing

    @property
    def order(self) -> MonomialOrder:
        return self.ring.order

    def __iter__(self):
        return iter(self.basis)

    def __len__(self):
        return len(self.basis)

    def contains(self, p: Polynomial) -> bool:
        return normal_form(p, self).is_zero()

    def is_unit(self) -> bool:
        return len(self.basis) == 1 and self.basis[0].is_constant()


def _divides(a: Exp, b: Exp) -> bool:
    return all(i <= j for i, j in zip(a, b))


def _lcm(a: Exp, b: Exp) -> Exp:
    return tuple(max(i, j) for i, j in zip(a, b))


def _reduce(terms: Dict[Exp, Fraction], basis: Sequence[Polynomial], key,
            full: bool = True) -> Dict[Exp, Fraction]:
    """Remainder of the division of ``terms`` by ``basis`` (monic basis)."""
    leads = [(g.leading_monomial(), g) for g in basis]
    p = dict(terms)
    rem: Dict[Exp, Fraction] = {}
    while p:
        e = max(p, key=key)
        c = p[e]
        for le, g in leads:
            if _divides(le, e):
                shift = tuple(i - j for i, j in zip(e, le))
                for ge, gc in g.terms.items():
                    h = tuple(i + j for i, j in zip(ge, shift))
                    v = p.get(h, 0) - c * gc
                    if v:
                        p[h] = v
                    else:
                        p.pop(h, None)
                break
        else:
            rem[e] = c
            del p[e]
            if not full:
                rem.update(p)
                break
    return rem


def normal_form(p: Polynomial, G: GroebnerBasis) -> Polynomial:
    """Fully reduced remainder of ``p`` modulo ``G``; zero iff ``p`` is in the
    ideal."""
    q = p.to_ring(G.ring)
    return Polynomial(G.ring, _reduce(q.terms, G.basis, G.ring.order.key))


def spoly(f: Polynomial, g: Polynomial) -> Polynomial:
    fe, fc = f.leading_term()
    ge, gc = g.leading_term()
    m = _lcm(fe, ge)
    a = tuple(i - j for i, j in zip(m, fe))
    b = tuple(i - j for i, j in zip(m, ge))
    return f.mul_term(a, 1 / fc) - g.mul_term(b, 1 / gc)


def buchberger(I: Ideal, order: MonomialOrder | None = None) -> GroebnerBasis:
    """Reduced Gröbner basis of ``I``.

    Pairs are processed by the normal strategy (least total degree of the lcm,
    ties by generator index) with Buchberger's product and chain criteria.
    """
    ring = I.ring.with_order(order or I.ring.order)
    key = ring.order.key
    G: List[Polynomial] = []
    pairs: set = set()

    def add(h: Polynomial):
        h = h.monic()
        G.append(h)
        k = len(G) - 1
        for i in range(k):
            pairs.add((i, k))

    for f in I.generators:
        f = f.to_ring(ring)
        r = Polynomial(ring, _reduce(f.terms, G, key))
        if not r.is_zero():
            add(r)

    while pairs:
        i, j = min(
            pairs,
            key=lambda ij: (
                sum(_lcm(G[ij[0]].leading_monomial(), G[ij[1]].leading_monomial())),
                ij[1],
                ij[0],
            ),
        )
        pairs.discard((i, j))
        if G[i] is None or G[j] is None:
            continue
        li, lj = G[i].leading_monomial(), G[j].leading_monomial()
        m = _lcm(li, lj)
        if all(a == 0 or b == 0 for a, b in zip(li, lj)):
            continue  # product criterion
        if _chain_criterion(i, j, m, G, pairs):
            continue
        s = spoly(G[i], G[j])
        r = Polynomial(ring, _reduce(s.terms, [g for g in G if g is not None], key))
        if not r.is_zero():
            add(r)
            if r.is_constant():
                break

    return GroebnerBasis(tuple(_reduced(G, ring)), ring)


def _chain_criterion(i, j, m, G, pairs) -> bool:
    for k, g in enumerate(G):
        if k in (i, j) or g is None:
            continue
        if _divides(g.leading_monomial(), m):
            pik = (min(i, k), max(i, k))
            pjk = (min(j, k), max(j, k))
            if pik not in pairs and pjk not in pairs:
                return True
    return False


def _reduced(G: Sequence[Polynomial | None], ring: PolyRing) -> List[Polynomial]:
    key = ring.order.key
    gs = [g for g in G if g is not None]
    if any(g.is_constant() for g in gs):
        return [ring.one]
    gs.sort(key=lambda g: key(g.leading_monomial()))
    minimal: List[Polynomial] = []
    for g in gs:
        le = g.leading_monomial()
        if not any(_divides(h.leading_monomial(), le) for h in minimal):
            minimal.append(g)
    out = []
    for idx, g in enumerate(minimal):
        others = minimal[:idx] + minimal[idx + 1:]
        out.append(Polynomial(ring, _reduce(g.terms, others, key)).monic())
    out.sort(key=lambda g: key(g.leading_monomial()))
    return out


def groebner(generators: Sequence[Polynomial], order: MonomialOrder | None = None,
             ring: PolyRing | None = None) -> GroebnerBasis:
    return buchberger(Ideal(generators, ring), order)


def ideal_member(p: Polynomial, I: Ideal | GroebnerBasis) -> bool:
    G = I if isinstance(I, GroebnerBasis) else buchberger(I)
    return normal_form(p, G).is_zero()


def _fresh_name(names: Sequence[str], stem: str = "_t") -> str:
    name = stem
    while name in names:
        name += "_"
    return name


def ideal_intersect(I: Ideal, J: Ideal) -> Ideal:
    """Generators of ``I ∩ J``: eliminate a tag ``t`` from ``tI + (1-t)J``."""
    if I.ring.names != J.ring.names:
        raise ValueError("ideals live in different rings")
    ring = I.ring
    tag = _fresh_name(ring.names)
    big = ring.extended(front=[tag], order=block_order(1))
    t = big.var(tag)
    gens = [t * f.to_ring(big) for f in I.generators]
    gens += [(1 - t) * g.to_ring(big) for g in J.generators]
    G = buchberger(Ideal(gens, big))
    kept = [g for g in G if g.degree(tag) <= 0]
    return Ideal([g.to_ring(ring) for g in kept], ring)


def quotient_by_element(I: Ideal, g: Polynomial) -> Ideal:
    """``I : g`` as ``(1/g)(I ∩ (g))``."""
    if g.is_zero():
        raise ZeroDivisionError("quotient by zero")
    inter = ideal_intersect(I, Ideal([g], I.ring))
    return Ideal([exact_divide(h, g.to_ring(I.ring)) for h in inter.generators], I.ring)


def ideal_quotient(I: Ideal, J: Ideal) -> Ideal:
    """Colon ideal ``I : J``; generators are the reduced degrevlex basis."""
    if not J.generators:
        raise ValueError("colon by the zero ideal")
    ring = I.ring
    GI = buchberger(I, DEGREVLEX)
    result: Ideal | None = None
    for g in J.generators:
        if normal_form(g, GI).is_zero():
            continue
        q = quotient_by_element(I, g)
        result = q if result is None else ideal_intersect(result, q)
    if result is None:
        return Ideal([ring.one], ring)
    G = buchberger(result, DEGREVLEX)
    return Ideal([p.to_ring(ring) for p in G], ring)
