"""Néron desingularization over ``A = k[x]_(x)`` with ``A' = k[[x]]``.

Given ``B = A[Y]/I`` and an approximation ``y'`` of a morphism ``B -> A'``
modulo ``x^N`` this module picks a system ``f`` in ``I``, a colon witness ``L``
and a minor ``M`` (:func:`select_system`), and then builds the standard smooth
algebra ``C = (A[T]/(g))_{s s'}`` together with the images ``b`` of the
unknowns (:func:`build_desingularization`).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .errors import ApproxTooCoarse, NoSystemError, NotWellChosen
from .groebner import Ideal, buchberger, ideal_member, ideal_quotient, normal_form
from .polycore import Polynomial, PolyRing, exact_divide
from .polymatrix import PolyMatrix, adjugate, border, determinant, jacobian
from .series import (
    AtLeast,
    TruncatedSeries,
    evaluate_on_series,
    series_inverse,
    valuation,
)

log = logging.getLogger(__name__)

D_MODES = ("normalized", "exact")


@dataclass(frozen=True)
class Hints:
    """Restrictions on the search.  Indices are 0-based; ``minor_cols`` is an
    ordered tuple of unknown indices and fixes the column order of ``H``."""

    f_indices: Optional[Tuple[int, ...]] = None
    L: Optional[Polynomial] = None
    minor_cols: Optional[Tuple[int, ...]] = None


@dataclass(frozen=True)
class DesingProblem:
    ring: PolyRing
    precision: int
    unknowns: Tuple[str, ...]
    ideal_gens: Tuple[Polynomial, ...]
    point: Tuple[Tuple[str, Polynomial], ...]
    hints: Hints = Hints()
    d_mode: str = "normalized"
    x: str = "x"

    def __post_init__(self):
        if self.precision < 1:
            raise ValueError("precision must be positive")
        if not self.ideal_gens or any(g.is_zero() for g in self.ideal_gens):
            raise ValueError("ideal generators must be a nonempty list of nonzero polynomials")
        if self.d_mode not in D_MODES:
            raise ValueError(f"d_mode must be one of {D_MODES}")
        h = self.hints
        if h.f_indices is not None:
            if (not h.f_indices or len(set(h.f_indices)) != len(h.f_indices)
                    or not all(0 <= i < len(self.ideal_gens) for i in h.f_indices)):
                raise ValueError("hinted f must list distinct generators of the ideal")
        if h.minor_cols is not None:
            if (not h.minor_cols or len(set(h.minor_cols)) != len(h.minor_cols)
                    or not all(0 <= i < len(self.unknowns) for i in h.minor_cols)):
                raise ValueError("hinted minor columns must be distinct unknowns")
        pt = dict(self.point)
        if set(pt) != set(self.unknowns):
            raise ValueError("the point must assign every unknown")
        for name, p in pt.items():
            if any(v != self.x for v in p.variables()):
                raise ValueError(f"point component {name} is not a polynomial in {self.x}")
            if p.degree(self.x) >= self.precision:
                raise ValueError(f"point component {name} has degree >= N")

    @classmethod
    def create(cls, unknowns: Sequence[str], ideal_gens: Sequence[Polynomial],
               point: Mapping[str, Polynomial], precision: int, hints: Hints = Hints(),
               d_mode: str = "normalized", x: str = "x") -> "DesingProblem":
        ring = PolyRing((x,) + tuple(unknowns))
        gens = tuple(g.to_ring(ring) for g in ideal_gens)
        missing = [u for u in unknowns if u not in point]
        if missing:
            raise ValueError(f"the point must assign every unknown; missing {missing[0]}")
        pt = tuple((u, point[u].to_ring(ring)) for u in unknowns)
        if hints.L is not None:
            hints = Hints(hints.f_indices, hints.L.to_ring(ring), hints.minor_cols)
        return cls(ring, precision, tuple(unknowns), gens, pt, hints, d_mode, x)

    @property
    def point_map(self) -> Dict[str, Polynomial]:
        return dict(self.point)

    def at_point(self, p: Polynomial) -> Polynomial:
        """``p(y')`` as a polynomial in ``x``."""
        return p.subs(self.point_map, ring=self.ring)


@dataclass(frozen=True)
class SystemChoice:
    f_indices: Tuple[int, ...]
    permutation: Tuple[str, ...]
    L: Polynomial
    L_index: int
    minor_rows: Tuple[int, ...]
    minor_cols: Tuple[int, ...]
    M: Polynomial
    P: Polynomial
    c: int
    d: Polynomial
    e: Polynomial

    @property
    def r(self) -> int:
        return len(self.f_indices)


@dataclass(frozen=True)
class LInvariantReport:
    r: int
    table: Tuple[Tuple[Tuple[int, ...], object], ...]
    l: object


@dataclass(frozen=True)
class TaylorSplit:
    """``f_i(b) = x^{2c} g_i`` with ``g_i = a_i + lam_i T_i + Q_i``."""

    g: Tuple[Polynomial, ...]
    a: Tuple[Polynomial, ...]
    linear: Tuple[Polynomial, ...]
    Q: Tuple[Polynomial, ...]


@dataclass(frozen=True)
class SmoothPresentation:
    kind: str
    problem: DesingProblem
    choice: SystemChoice
    ring: PolyRing
    aux_vars: Tuple[str, ...]
    relations: Tuple[Polynomial, ...]
    inverted: Tuple[Polynomial, ...]
    substitution: Tuple[Tuple[str, Polynomial], ...]
    eta: Polynomial
    H: Optional[PolyMatrix] = None
    G: Optional[PolyMatrix] = None
    h: Tuple[Polynomial, ...] = ()
    split: Optional[TaylorSplit] = None

    @property
    def substitution_map(self) -> Dict[str, Polynomial]:
        return dict(self.substitution)

    @property
    def s(self) -> Polynomial:
        return self.inverted[0]

    @property
    def s_prime(self) -> Polynomial:
        return self.inverted[1]


# ---------------------------------------------------------------------------
# system selection


def working_order(unknowns: Sequence[str], minor_cols: Sequence[int]) -> Tuple[str, ...]:
    """Non-minor columns in their original order followed by the minor's
    columns in the given order."""
    rest = [u for i, u in enumerate(unknowns) if i not in minor_cols]
    return tuple(rest) + tuple(unknowns[i] for i in minor_cols)


def bordered_matrix(problem: DesingProblem, f_indices: Sequence[int],
                    permutation: Sequence[str]) -> PolyMatrix:
    f = [problem.ideal_gens[i] for i in f_indices]
    return border(jacobian(f, list(permutation), problem.ring))


def _colon_generators(problem: DesingProblem, f_indices, cache) -> List[Polynomial]:
    key = tuple(f_indices)
    if key not in cache:
        f = Ideal([problem.ideal_gens[i] for i in f_indices], problem.ring)
        q = ideal_quotient(f, Ideal(problem.ideal_gens, problem.ring))
        cache[key] = list(q.generators)
    return cache[key]


def _minor_orders(problem: DesingProblem, f_indices, col_sets):
    f = [problem.ideal_gens[i] for i in f_indices]
    J = jacobian(f, problem.unknowns, problem.ring)
    out = []
    for cols in col_sets:
        m = determinant(J.select_columns(cols))
        out.append((tuple(cols), m, valuation(problem.at_point(m), problem.precision, problem.x)))
    return out


def l_invariant(problem: DesingProblem, f_indices: Sequence[int],
                r: Optional[int] = None) -> LInvariantReport:
    """Orders at ``y'`` of all maximal minors of the Jacobian of ``f``."""
    r = len(f_indices) if r is None else r
    if r != len(f_indices):
        raise ValueError("r must equal the number of chosen generators")
    cols = list(combinations(range(len(problem.unknowns)), r))
    table = tuple((c, o) for c, _, o in _minor_orders(problem, f_indices, cols))
    finite = [o for _, o in table if not isinstance(o, AtLeast)]
    return LInvariantReport(r, table, min(finite) if finite else AtLeast(problem.precision))


def select_system(problem: DesingProblem) -> SystemChoice:
    """Deterministic search for ``(f, L, M)`` minimising ``c = ord(L M)(y')``.

    Ties are broken by ``(r, subset, deg P, #terms P, colon index, minor
    columns)``.  Candidates whose order is not below ``N`` are rejected.
    """
    N = problem.precision
    n, q = len(problem.unknowns), len(problem.ideal_gens)
    hints = problem.hints
    if hints.f_indices is not None:
        subsets = [tuple(hints.f_indices)]
    else:
        subsets = [s for r in range(1, min(n, q) + 1) for s in combinations(range(q), r)]
    cache: Dict = {}
    I = Ideal(problem.ideal_gens, problem.ring)
    best_key, best = None, None
    for subset in subsets:
        r = len(subset)
        if hints.minor_cols is not None:
            if len(hints.minor_cols) != r:
                if hints.f_indices is not None:
                    raise ValueError("hinted minor does not match the size of f")
                continue
            col_sets = [tuple(hints.minor_cols)]
        else:
            col_sets = list(combinations(range(n), r))
        minors = [m for m in _minor_orders(problem, subset, col_sets)
                  if not isinstance(m[2], AtLeast)]
        if not minors:
            continue
        lowest = min(o for _, _, o in minors)
        if best_key is not None and lowest > best_key[0]:
            continue
        if hints.L is not None:
            Lf = Ideal([problem.ideal_gens[i] for i in subset], problem.ring)
            GB = buchberger(Lf)
            if not all(normal_form(hints.L * g, GB).is_zero() for g in I.generators):
                if hints.f_indices is not None:
                    raise ValueError(f"hinted L = {hints.L} is not in ((f) : I)")
                continue
            Ls = [hints.L]
        else:
            Ls = _colon_generators(problem, subset, cache)
        for li, L in enumerate(Ls):
            oL = valuation(problem.at_point(L), N, problem.x)
            if isinstance(oL, AtLeast):
                continue
            for cols, minor, oM in minors:
                c = oL + oM
                if c >= N:
                    continue
                P = L * minor
                key = (c, r, subset, P.total_degree(), len(P.terms), li, cols)
                if best_key is None or key < best_key:
                    best_key, best = key, (subset, L, li, cols)
    if best is None:
        raise NoSystemError(
            "v(((f):I)Δ_f) ⊂ (x)^N at this precision: no system with order below N")
    subset, L, li, cols = best
    return _make_choice(problem, subset, L, li, cols)


def _make_choice(problem: DesingProblem, subset, L, li, cols) -> SystemChoice:
    perm = working_order(problem.unknowns, cols)
    H = bordered_matrix(problem, subset, perm)
    M = determinant(H)
    P = L * M
    Py = problem.at_point(P)
    c = Py.x_order(problem.x)
    x = problem.ring.var(problem.x)
    if problem.d_mode == "normalized":
        d = x ** c
        e = Py.shift(problem.x, -c)
    else:
        d = Py
        e = problem.ring.one
    return SystemChoice(
        f_indices=tuple(subset), permutation=perm, L=L, L_index=li,
        minor_rows=tuple(range(len(subset))), minor_cols=tuple(cols),
        M=M, P=P, c=int(c), d=d, e=e)


def choice_from_certificate(problem: DesingProblem, f_indices, L: Polynomial,
                            minor_cols) -> SystemChoice:
    """Rebuild a :class:`SystemChoice` from recorded ``(f, L, minor)`` data."""
    return _make_choice(problem, tuple(f_indices), L.to_ring(problem.ring), 0, tuple(minor_cols))


# ---------------------------------------------------------------------------
# construction


def aux_names(taken: Sequence[str], n: int, stem: str = "T") -> Tuple[str, ...]:
    while any(f"{stem}{i}" in taken for i in range(1, n + 1)):
        stem += "_"
    return tuple(f"{stem}{i}" for i in range(1, n + 1))


def taylor_split(f: Sequence[Polynomial], b: Mapping[str, Polynomial], c: int,
                 aux: Sequence[str], ring: PolyRing, x: str = "x") -> TaylorSplit:
    """Exact split of ``f_i(b)`` into ``x^{2c}(a_i + lam_i T_i + Q_i)``."""
    g, a, lin, Q = [], [], [], []
    r = len(f)
    for i, fi in enumerate(f):
        F = fi.subs(b, ring=ring)
        F0 = F.homogeneous_part(aux, 0)
        if F0.min_exponent(x) < 2 * c + 1:
            raise ApproxTooCoarse(
                f"f_{i + 1}(y') is not divisible by x^{2 * c + 1}: the approximation is too coarse")
        gi = F.shift(x, -2 * c)
        ai = gi.homogeneous_part(aux, 0)
        li = gi.homogeneous_part(aux, 1)
        lam = li.collect([aux[i]]).get(tuple([1]), ring.zero)
        lam = lam.homogeneous_part(aux, 0)
        if li != lam * ring.var(aux[i]):
            raise ArithmeticError("linear part of g is not diagonal; (∂f/∂Y)G ≠ (P Id | 0)")
        g.append(gi)
        a.append(ai)
        lin.append(lam)
        Q.append(gi.part_of_degree_at_least(aux, 2))
    assert len(g) == r
    return TaylorSplit(tuple(g), tuple(a), tuple(lin), tuple(Q))


def build_desingularization(problem: DesingProblem, choice: Optional[SystemChoice] = None,
                            reserved: Sequence[str] = ()) -> SmoothPresentation:
    """Build the smooth presentation for ``choice``.  ``reserved`` lists names the
    auxiliary variables must avoid besides those of the problem ring."""
    choice = choice or select_system(problem)
    N, c, x = problem.precision, choice.c, problem.x
    if 2 * c + 1 > N:
        raise NotWellChosen(c=c, precision=N)
    if c == 0:
        return SmoothPresentation(
            kind="localization", problem=problem, choice=choice, ring=problem.ring,
            aux_vars=(), relations=problem.ideal_gens, inverted=(choice.P,),
            substitution=tuple((u, problem.ring.var(u)) for u in problem.unknowns),
            eta=problem.ring.one)

    n, r = len(problem.unknowns), choice.r
    perm = choice.permutation
    aux = aux_names(tuple(problem.ring.names) + tuple(reserved), n)
    R = PolyRing((x,) + aux)
    big = PolyRing((x,) + problem.unknowns + aux)
    f = [problem.ideal_gens[i] for i in choice.f_indices]

    H = bordered_matrix(problem, choice.f_indices, perm)
    G = adjugate(H) * choice.L
    pt = {u: p.to_ring(R) for u, p in problem.point}
    Gy = G.map(lambda e: e.subs(pt, ring=R))
    d = choice.d.to_ring(R)
    Ts = [R.var(t) for t in aux]
    b: Dict[str, Polynomial] = {}
    for i, u in enumerate(perm):
        acc = R.zero
        for j in range(n):
            if Gy[i, j]:
                acc = acc + Gy[i, j] * Ts[j]
        b[u] = pt[u] + d * acc

    split = taylor_split(f, b, c, aux, R, x)
    g = split.g
    s = determinant(jacobian(g, aux[:r], R))
    s_prime = exact_divide(choice.P.subs(b, ring=R), d)
    w = exact_divide(d, R.var(x) ** c)
    h = tuple(big.var(u) - b[u].to_ring(big) for u in perm)
    log.debug("built presentation with c=%d, r=%d, n=%d", c, r, n)
    return SmoothPresentation(
        kind="full", problem=problem, choice=choice, ring=R, aux_vars=aux,
        relations=g, inverted=(s, s_prime),
        substitution=tuple((u, b[u]) for u in problem.unknowns),
        eta=w * w, H=H, G=G, h=h, split=split)


# ---------------------------------------------------------------------------
# lifting and verification


def _linear_coefficient(g: Polynomial, aux: Sequence[str], i: int) -> Polynomial:
    lin = g.homogeneous_part(aux, 1)
    return lin.collect([aux[i]]).get((1,), g.ring.zero).homogeneous_part(aux, 0)


@dataclass(frozen=True)
class LiftedPoint:
    t_star: Tuple[Tuple[str, TruncatedSeries], ...]
    y_star: Tuple[Tuple[str, TruncatedSeries], ...]
    residual_orders: Tuple[object, ...]
    iterations: int


def lift_point(pres: SmoothPresentation) -> LiftedPoint:
    """Solve ``g(T) = 0`` with ``T_{r+1..n} = 0`` by the x-adic fixed point
    ``T <- T - g(T)/lam``, then push the solution through ``b``.

    Residual orders are those of ``f_i(b(t*))`` computed exactly from the
    truncated ``t*``; they are at least ``N + 2c``.
    """
    if pres.kind != "full":
        raise ValueError("lift_point needs a full presentation")
    prob = pres.problem
    N, x, c = prob.precision, prob.x, pres.choice.c
    R, aux, r = pres.ring, pres.aux_vars, pres.choice.r
    zero = TruncatedSeries.constant(0, N)
    lam_inv = []
    for i in range(r):
        lam = _linear_coefficient(pres.relations[i], aux, i)
        lam_inv.append(series_inverse(TruncatedSeries.from_polynomial(lam, N, x)))
    T = {t: zero for t in aux}
    for it in range(N + 2):
        new = dict(T)
        for i in range(r):
            gi = evaluate_on_series(pres.relations[i], T, N, x)
            new[aux[i]] = T[aux[i]] - gi * lam_inv[i]
        if new == T:
            break
        T = new
    else:
        raise AssertionError("x-adic iteration did not converge")
    t_poly = {t: s.to_polynomial(R, x) for t, s in T.items()}
    f = [prob.ideal_gens[i] for i in pres.choice.f_indices]
    y_poly = {u: p.subs(t_poly, ring=R) for u, p in pres.substitution}
    residuals = []
    for fi in f:
        val = fi.subs(y_poly, ring=R)
        residuals.append(val.x_order(x))
    y_star = tuple((u, TruncatedSeries.from_polynomial(y_poly[u], N + c, x))
                   for u in prob.unknowns)
    return LiftedPoint(tuple(T.items()), y_star, tuple(residuals), it)


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ""


def verify_presentation(pres: SmoothPresentation, lift: bool = True) -> List[Check]:
    """Re-check the defining identities of a presentation from scratch."""
    prob, ch = pres.problem, pres.choice
    N, x = prob.precision, prob.x
    checks: List[Check] = []
    f = [prob.ideal_gens[i] for i in ch.f_indices]
    GB = buchberger(Ideal(f, prob.ring))
    member = all(normal_form(ch.L * g, GB).is_zero() for g in prob.ideal_gens)
    checks.append(Check("L·I ⊆ (f)", member))
    H = bordered_matrix(prob, ch.f_indices, ch.permutation)
    P = ch.L * determinant(H)
    checks.append(Check("P = L·det(H)", P == ch.P, str(P)))
    Py = prob.at_point(P)
    c = Py.x_order(x)
    checks.append(Check("ord P(y') = c", c == ch.c, f"ord={c}, c={ch.c}"))
    checks.append(Check("d·e = P(y')", ch.d * ch.e == Py))
    checks.append(Check("ord d = c", ch.d.x_order(x) == ch.c))
    if pres.kind == "localization":
        checks.append(Check("c = 0", ch.c == 0))
        checks.append(Check("relations = ideal", tuple(pres.relations) == tuple(prob.ideal_gens)))
        checks.append(Check("inverted = (P)", tuple(pres.inverted) == (P,)))
        return checks

    R, aux, r = pres.ring, pres.aux_vars, ch.r
    checks.append(Check("2c+1 <= N", 2 * ch.c + 1 <= N))
    b = pres.substitution_map
    d = ch.d.to_ring(R)
    eta = pres.eta.to_ring(R)
    ident = all(eta * fi.subs(b, ring=R) == d * d * gi for fi, gi in zip(f, pres.relations))
    checks.append(Check("η·f(b) = d²·g", ident and len(pres.relations) == r))
    shape = True
    for i, gi in enumerate(pres.relations):
        const = gi.homogeneous_part(aux, 0)
        lin = gi.homogeneous_part(aux, 1)
        lam = _linear_coefficient(gi, aux, i)
        if const.min_exponent(x) < 1 or lin != lam * R.var(aux[i]) or lam.constant_term() == 0:
            shape = False
    checks.append(Check("g_i ∈ a_i + λ_i·T_i + (T)², a ∈ xA, λ unit", shape))
    s, sp = pres.inverted
    s_expected = determinant(jacobian(list(pres.relations), aux[:r], R))
    checks.append(Check("s = det(∂g/∂T)_{[r]}", s == s_expected))
    s0 = s.homogeneous_part(aux, 0)
    sp0 = sp.homogeneous_part(aux, 0)
    checks.append(Check("s(0), s'(0) units", s0.constant_term() != 0 and sp0.constant_term() != 0))
    checks.append(Check("d·s' = P(b)", d * sp == P.subs(b, ring=R)))
    if lift:
        lp = lift_point(pres)
        ok = all(o >= N + 2 * ch.c for o in lp.residual_orders)
        checks.append(Check("lift residual ≥ N+2c", ok,
                            ", ".join(str(o) for o in lp.residual_orders)))
    return checks


# ---------------------------------------------------------------------------
# simplification of localizations


@dataclass(frozen=True)
class SimplifiedLocalization:
    variables: Tuple[str, ...]
    relations: Tuple[Polynomial, ...]
    inverted: Polynomial
    eliminated: Tuple[Tuple[str, Polynomial, Polynomial], ...] = field(default=())


def _unit_factors(inv: Polynomial) -> Tuple[str, ...]:
    if len(inv.terms) != 1:
        return ()
    return inv.variables()


def _drop_redundant(rels, inverted, max_power):
    ring = inverted.ring
    for idx in range(len(rels)):
        others = rels[:idx] + rels[idx + 1:]
        if not others:
            continue
        GB = buchberger(Ideal(others, ring))
        if any(normal_form(inverted ** k * rels[idx], GB).is_zero()
               for k in range(max_power + 1)):
            return others
    return None


def _eliminate_linear(rels, variables, units, inverted):
    ring = inverted.ring
    # later variables go first, so the leading coordinates survive
    for v in reversed(variables):
        if v in units or inverted.degree(v) > 0:
            continue
        for idx, q in enumerate(rels):
            if q.degree(v) != 1:
                continue
            parts = q.collect([v])
            coeff = parts.get((1,), ring.zero)
            rest = parts.get((0,), ring.zero)
            if len(coeff.terms) != 1 or not set(coeff.variables()) <= units:
                continue
            new = []
            for k, o in enumerate(rels):
                if k == idx:
                    continue
                dv = o.degree(v)
                if dv <= 0:
                    new.append(o)
                    continue
                # clear denominators: substitute v = -rest/coeff, times coeff^dv
                acc = ring.zero
                for (j,), part in o.collect([v]).items():
                    acc = acc + part * (-rest) ** j * coeff ** (dv - j)
                if not acc.is_zero():
                    new.append(acc.primitive())
            return new, v, (v, -rest, coeff)
    return None


def simplify_localization(relations: Sequence[Polynomial], inverted: Polynomial,
                          variables: Sequence[str], max_power: int = 6) -> SimplifiedLocalization:
    """Shrink ``(R/(rels))_inv`` to an isomorphic presentation.

    Eliminates variables occurring linearly with a coefficient that is a unit
    once ``inv`` is inverted, then drops relations ``q`` with ``inv^k q`` in
    the ideal of the others.  ``inverted`` in the result is the radical
    monomial when ``inv`` is a monomial.
    """
    rels = [p for p in relations if not p.is_zero()]
    units = set(_unit_factors(inverted))
    variables = list(variables)
    eliminated = []
    while True:
        step = _eliminate_linear(rels, variables, units, inverted)
        if step is not None:
            rels, v, record = step
            variables.remove(v)
            eliminated.append(record)
            continue
        shorter = _drop_redundant(rels, inverted, max_power)
        if shorter is None:
            break
        rels = shorter
    ring = inverted.ring
    inv = inverted
    if len(inverted.terms) == 1 and inverted.variables():
        inv = ring.one
        for v in inverted.variables():
            inv = inv * ring.var(v)
    return SimplifiedLocalization(tuple(variables), tuple(p.primitive() for p in rels),
                                  inv, tuple(eliminated))
