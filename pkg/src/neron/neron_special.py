"""Néron desingularization over an Artinian base ``A = k[T]/(a)``.

The morphism ``v(Y_i) = sum_alpha y_{i alpha} T^alpha`` is flattened into a
problem over ``k[x]_(x)`` in the coefficient series, solved there by
:mod:`neron.neron_dim1`, and the answer is tensored back with ``A``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .errors import BoundTooSmall, NotArtinian, NotWellChosen, RelationViolated
from .groebner import GroebnerBasis, Ideal, buchberger, normal_form
from .neron_dim1 import (
    DesingProblem,
    Hints,
    SimplifiedLocalization,
    SmoothPresentation,
    build_desingularization,
    lift_point,
    simplify_localization,
)
from .polycore import DEGREVLEX, Exp, Polynomial, PolyRing
from .series import AtLeast, TruncatedSeries, evaluate_on_series, series_order

Alpha = Tuple[int, ...]


@dataclass(frozen=True)
class ArtinianBase:
    t_vars: Tuple[str, ...]
    relations_a: Tuple[Polynomial, ...]
    gb: GroebnerBasis
    nil_index: int
    basis: Tuple[Alpha, ...]

    @property
    def ring(self) -> PolyRing:
        return self.gb.ring

    def monomial(self, alpha: Alpha) -> Polynomial:
        return self.ring.monomial(dict(zip(self.t_vars, alpha)))

    def reduce_monomial(self, beta: Alpha) -> Dict[Alpha, object]:
        """Coordinates of ``T^beta`` in the standard-monomial basis."""
        nf = normal_form(self.monomial(beta), self.gb)
        return {tuple(e): c for e, c in nf.terms.items()}


def _alpha_str(alpha: Alpha, t_vars: Sequence[str]) -> str:
    parts = []
    for v, k in zip(t_vars, alpha):
        if k == 1:
            parts.append(v)
        elif k:
            parts.append(f"{v}^{k}")
    return "*".join(parts) or "1"


def artinian_basis(t_vars: Sequence[str], relations: Sequence[Polynomial]) -> ArtinianBase:
    ring = PolyRing(tuple(t_vars), DEGREVLEX)
    gens = [p.to_ring(ring) for p in relations]
    gb = buchberger(Ideal(gens, ring))
    if gb.is_unit():
        raise NotArtinian("the ideal a is the unit ideal")
    m = len(t_vars)
    leads = [g.leading_monomial() for g in gb]
    bounds = []
    for i in range(m):
        pure = [e[i] for e in leads if all(k == 0 for j, k in enumerate(e) if j != i)]
        if not pure:
            raise NotArtinian(
                f"{t_vars[i]} is not nilpotent modulo a: the standard monomials are infinite")
        bounds.append(min(pure))
    basis = []
    for alpha in product(*(range(b) for b in bounds)):
        if not any(all(a >= l for a, l in zip(alpha, le)) for le in leads):
            basis.append(tuple(alpha))
    key = ring.order.key
    basis.sort(key=key)
    s = 1
    while not all(normal_form(ring.var(t) ** s, gb).is_zero() for t in t_vars):
        s += 1
        if s > len(basis) + 1:
            raise NotArtinian("no nilpotency index found")
    return ArtinianBase(tuple(t_vars), tuple(gens), gb, s, tuple(basis))


@dataclass(frozen=True)
class CoeffName:
    """``y_{i alpha} = x^shift * name``."""

    name: str
    unknown: str
    alpha: Alpha
    shift: int = 0


@dataclass(frozen=True)
class SpecialProblem:
    base: ArtinianBase
    unknowns: Tuple[str, ...]
    ideal_gens: Tuple[Polynomial, ...]
    table: Tuple[Tuple[Tuple[str, Alpha], TruncatedSeries], ...]
    precision: int
    names: Tuple[CoeffName, ...] = ()
    presentation_J: Optional[Tuple[Polynomial, ...]] = None
    hints: Hints = Hints()
    d_mode: str = "normalized"
    x: str = "x"

    @classmethod
    def create(cls, base: ArtinianBase, unknowns: Sequence[str],
               ideal_gens: Sequence[Polynomial],
               table: Mapping[Tuple[str, Alpha], TruncatedSeries], precision: int,
               names: Sequence[CoeffName] = (),
               presentation_J: Optional[Sequence[Polynomial]] = None,
               hints: Hints = Hints(), d_mode: str = "normalized",
               x: str = "x") -> "SpecialProblem":
        ring = PolyRing(base.t_vars + tuple(unknowns))
        gens = tuple(g.to_ring(ring) for g in ideal_gens)
        if not gens:
            raise ValueError("empty ideal")
        for (u, alpha), ser in table.items():
            if u not in unknowns:
                raise ValueError(f"table entry for unknown {u!r}")
            if tuple(alpha) not in base.basis:
                raise ValueError(
                    f"{_alpha_str(alpha, base.t_vars)} is not a standard monomial of A")
            if ser.precision != precision:
                raise ValueError("all table series must carry precision N")
        entries = tuple(sorted(((k[0], tuple(k[1])), v) for k, v in table.items()))
        named = _complete_names(base, unknowns, dict(entries), names)
        pj = None if presentation_J is None else tuple(presentation_J)
        return cls(base, tuple(unknowns), gens, entries, precision, named, pj,
                   hints, d_mode, x)

    @property
    def ring(self) -> PolyRing:
        return self.ideal_gens[0].ring

    @property
    def table_map(self) -> Dict[Tuple[str, Alpha], TruncatedSeries]:
        return dict(self.table)

    def name_of(self, unknown: str, alpha: Alpha) -> CoeffName:
        for n in self.names:
            if n.unknown == unknown and n.alpha == alpha:
                return n
        raise KeyError((unknown, alpha))

    def coefficient_series(self, n: CoeffName) -> TruncatedSeries:
        """Series of the coefficient variable, known modulo ``x^(N - shift)``."""
        y = self.table_map.get((n.unknown, n.alpha))
        if y is None:
            y = TruncatedSeries.constant(0, self.precision)
        if n.shift == 0:
            return y
        try:
            return y.divide_by_x_power(n.shift)
        except ArithmeticError:
            raise RelationViolated(f"{n.unknown} coefficient is not divisible by x^{n.shift}")


def default_name(unknown: str, alpha: Alpha) -> str:
    return f"{unknown}_" + "_".join(str(a) for a in alpha)


def _complete_names(base: ArtinianBase, unknowns, table, names) -> Tuple[CoeffName, ...]:
    given = {(n.unknown, tuple(n.alpha)): CoeffName(n.name, n.unknown, tuple(n.alpha), n.shift)
             for n in names}
    out = []
    for u in unknowns:
        for alpha in base.basis:
            key = (u, alpha)
            if key in given:
                out.append(given[key])
            elif key in table:
                out.append(CoeffName(default_name(u, alpha), u, alpha, 0))
    seen = [n.name for n in out]
    if len(set(seen)) != len(seen):
        raise ValueError("coefficient variable names are not distinct")
    # names may reuse an unknown's name (they live in another ring) but not T or x
    clash = set(seen) & (set(base.t_vars) | {"x"})
    if clash:
        raise ValueError(f"coefficient names clash with base variables: {sorted(clash)}")
    return tuple(out)


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExpandedRelation:
    generator: int
    alpha: Alpha
    content: int
    relation: Polynomial


def _coefficient_ring(p: SpecialProblem) -> PolyRing:
    return PolyRing((p.x,) + tuple(n.name for n in p.names))


def _expansion(p: SpecialProblem, ring: PolyRing) -> Dict[str, Polynomial]:
    """``Y_i -> sum_alpha T^alpha x^k Z`` inside ``ring``."""
    x = ring.var(p.x)
    out = {}
    for u in p.unknowns:
        acc = ring.zero
        for n in p.names:
            if n.unknown == u:
                acc = acc + p.base.monomial(n.alpha).to_ring(ring) * x ** n.shift * ring.var(n.name)
        out[u] = acc
    return out


def _reduce_in_basis(poly: Polynomial, base: ArtinianBase, coeff_ring: PolyRing,
                     cache: Dict) -> Dict[Alpha, Polynomial]:
    """Split ``poly`` in ``k[x, Z][T]`` by basis monomial after reducing mod a."""
    out: Dict[Alpha, Polynomial] = {}
    for beta, part in poly.collect(base.t_vars).items():
        if beta not in cache:
            cache[beta] = base.reduce_monomial(beta)
        part = part.to_ring(coeff_ring)
        for alpha, c in cache[beta].items():
            out[alpha] = out.get(alpha, coeff_ring.zero) + part * c
    return {a: q for a, q in out.items() if not q.is_zero()}


def inner_precision(p: SpecialProblem, names: Optional[Sequence[CoeffName]] = None) -> int:
    names = p.names if names is None else names
    return p.precision - max((n.shift for n in names), default=0)


def expand_relations(p: SpecialProblem) -> List[ExpandedRelation]:
    """Coefficientwise expansion ``J_0`` of the ideal, x-content stripped.

    Each relation is checked against the coefficient series and
    :class:`RelationViolated` is raised when one fails to vanish.
    """
    cring = _coefficient_ring(p)
    big = PolyRing(p.base.t_vars + cring.names)
    sub = _expansion(p, big)
    cache: Dict = {}
    values = {n.name: p.coefficient_series(n) for n in p.names}
    prec = inner_precision(p)
    out = []
    for gi, g in enumerate(p.ideal_gens):
        expanded = g.subs(sub, ring=big)
        for alpha, coeff in sorted(_reduce_in_basis(expanded, p.base, cring, cache).items(),
                                   key=lambda kv: p.base.ring.order.key(kv[0])):
            m = coeff.min_exponent(p.x)
            rel = coeff.shift(p.x, -m)
            val = evaluate_on_series(rel, values, prec, p.x)
            o = series_order(val)
            if not isinstance(o, AtLeast) and o < prec - m:
                raise RelationViolated(
                    f"coefficient of {_alpha_str(alpha, p.base.t_vars)} in generator "
                    f"{gi + 1} does not vanish on the table (order {o})")
            out.append(ExpandedRelation(gi, alpha, m, rel))
    return out


def check_factorization(p: SpecialProblem) -> List[object]:
    """x-orders of the basis coefficients of ``g_j(sum T^alpha y_{i alpha})``."""
    ring = PolyRing((p.x,) + p.base.t_vars)
    cring = PolyRing((p.x,))
    yhat = {}
    for u in p.unknowns:
        acc = ring.zero
        for (v, alpha), ser in p.table:
            if v == u:
                acc = acc + ser.to_polynomial(ring, p.x) * p.base.monomial(alpha).to_ring(ring)
        yhat[u] = acc
    orders = []
    cache: Dict = {}
    for g in p.ideal_gens:
        val = g.subs(yhat, ring=ring)
        parts = _reduce_in_basis(val, p.base, cring, cache)
        for alpha in p.base.basis:
            q = parts.get(alpha, cring.zero).truncate(p.x, p.precision)
            orders.append(AtLeast(p.precision) if q.is_zero() else q.x_order(p.x))
    return orders


@dataclass(frozen=True)
class FlatProblem:
    problem: DesingProblem
    source: str
    names: Tuple[CoeffName, ...]


def flatten(p: SpecialProblem) -> FlatProblem:
    """The dim-1 problem over ``k[x]_(x)`` in the coefficient variables."""
    if p.presentation_J is not None:
        gens = [q for q in p.presentation_J]
        used = set()
        for q in gens:
            used.update(v for v in q.variables() if v != p.x)
        declared = {n.name for n in p.names}
        if not used <= declared:
            raise ValueError(f"presentation_J uses unknown names {sorted(used - declared)}")
        names = tuple(n for n in p.names if n.name in used)
        source = "user"
    else:
        gens = [e.relation for e in expand_relations(p)]
        gens = [g for g in gens if not g.is_zero()]
        names = p.names
        source = "J0"
    prec = inner_precision(p, names)
    X = PolyRing((p.x,))
    point = {}
    for n in names:
        ser = p.coefficient_series(n).truncate(prec)
        point[n.name] = ser.to_polynomial(X, p.x)
    unknowns = [n.name for n in names]
    hints = p.hints
    flat = DesingProblem.create(unknowns, gens, point, prec, hints, p.d_mode, p.x)
    values = {n.name: p.coefficient_series(n).truncate(prec) for n in names}
    for i, g in enumerate(flat.ideal_gens):
        o = series_order(evaluate_on_series(g, values, prec, p.x))
        if not isinstance(o, AtLeast):
            raise RelationViolated(
                f"presentation relation {i + 1} does not vanish on the table mod x^{prec}")
    return FlatProblem(flat, source, names)


@dataclass(frozen=True)
class SpecialPresentation:
    kind: str
    base: ArtinianBase
    ring: PolyRing
    relations: Tuple[Polynomial, ...]
    inverted: Tuple[Polynomial, ...]
    eta: Polynomial
    pi: Tuple[Tuple[str, Polynomial], ...]
    inner: SmoothPresentation
    flat: FlatProblem
    simplified: Optional[SimplifiedLocalization] = None
    orders: Tuple[object, ...] = field(default=())

    @property
    def inner_relations(self) -> Tuple[Polynomial, ...]:
        return self.relations[len(self.base.relations_a):]

    @property
    def pi_map(self) -> Dict[str, Polynomial]:
        return dict(self.pi)


def descend_tensor(inner: SmoothPresentation, special: SpecialProblem,
                   flat: FlatProblem) -> SpecialPresentation:
    """``C = A (x)_k C~`` with ``pi(Y_i) = sum T^alpha x^k (image of Z)``."""
    base = special.base
    # the inner data are polynomials in x, so no denominator needs clearing
    inner_vars = tuple(v for v in inner.ring.names if v != special.x)
    ring = PolyRing((special.x,) + base.t_vars + inner_vars)
    eta = ring.one
    rels = tuple(a.to_ring(ring) for a in base.relations_a)
    rels += tuple(r.to_ring(ring) * eta for r in inner.relations)
    inverted = tuple(q.to_ring(ring) * eta for q in inner.inverted)
    sub = {u: q.to_ring(ring) for u, q in inner.substitution}
    x = ring.var(special.x)
    flat_names = {n.name for n in flat.names}
    pi = []
    for u in special.unknowns:
        acc = ring.zero
        for n in special.names:
            if n.unknown != u:
                continue
            tpow = base.monomial(n.alpha).to_ring(ring)
            if n.name in flat_names:
                img = sub[n.name]
            else:
                img = special.coefficient_series(n).to_polynomial(ring, special.x)
            acc = acc + tpow * x ** n.shift * img
        pi.append((u, acc))
    simplified = None
    if inner.kind == "localization":
        simplified = simplify_localization(
            [r.to_ring(inner.ring) for r in inner.relations], inner.inverted[0],
            [v for v in inner.ring.names if v != special.x])
    return SpecialPresentation(
        kind=inner.kind, base=base, ring=ring, relations=rels, inverted=inverted, eta=eta,
        pi=tuple(pi), inner=inner, flat=flat, simplified=simplified)


def pi_residual_orders(sp: SpecialPresentation, special: SpecialProblem) -> List[object]:
    """x-orders of ``g_j(pi(Y))`` at the lifted point, coefficientwise mod a."""
    inner = sp.inner
    prob = inner.problem
    N = prob.precision
    x = special.x
    if inner.kind == "full":
        t_star = dict(lift_point(inner).t_star)
        point = {t: s.to_polynomial(sp.ring, x) for t, s in t_star.items()}
    else:
        point = {u: q.to_ring(sp.ring) for u, q in prob.point}
    yhat = {u: q.subs(point, ring=sp.ring) for u, q in sp.pi}
    cache: Dict = {}
    cring = PolyRing((x,))
    orders = []
    for g in special.ideal_gens:
        val = g.subs(yhat, ring=sp.ring)
        for alpha, q in _reduce_in_basis(val, special.base, cring, cache).items():
            q = q.truncate(x, N)
            orders.append(AtLeast(N) if q.is_zero() else q.x_order(x))
    return orders


def special_desingularization(p: SpecialProblem) -> SpecialPresentation:
    expand_relations(p)
    flat = flatten(p)
    reserved = p.base.t_vars + tuple(n.name for n in p.names) + p.unknowns
    try:
        inner = build_desingularization(flat.problem, reserved=reserved)
    except NotWellChosen as exc:
        raise BoundTooSmall(c=exc.c, precision=exc.precision) from exc
    return descend_tensor(inner, p, flat)
