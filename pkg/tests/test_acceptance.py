"""Acceptance criteria 1-7.  Each test prints one PASS/FAIL line; the
lines are repeated in the terminal summary."""

import random

import pytest

from neron import corpus
from neron.cli_io import parse_polynomial, presentation_json
from neron.errors import NotWellChosen
from neron.groebner import Ideal, groebner, ideal_member, ideal_quotient, normal_form, spoly
from neron.groebner import GroebnerBasis
from neron.neron_dim1 import (
    DesingProblem,
    build_desingularization,
    lift_point,
    select_system,
    simplify_localization,
    verify_presentation,
)
from neron.neron_special import check_factorization, expand_relations, inner_precision
from neron.polycore import Polynomial, PolyRing
from neron.polymatrix import PolyMatrix, adjugate, all_minors, border, determinant, jacobian
from neron.series import AtLeast, TruncatedSeries, series_sqrt
from neron.cli import verify_result, verify_special_result
from neron.cli_io import special_json

from conftest import dim1, presentation, problem, report, special

CUSP_MINORS = ["6*Y1^2*Y4 + 12*Y1*Y2*Y3", "9*Y1^4", "6*Y1^2*Y2", "4*Y2^2", "0"]


def _matrix(rows, ring):
    return PolyMatrix.from_rows([[parse_polynomial(e, ring) for e in r] for r in rows], ring)


def test_criterion_1_example1():
    prob = dim1("example1")
    J = jacobian([prob.ideal_gens[0], prob.ideal_gens[1]], prob.unknowns, prob.ring)
    ours = [m for _, _, m in all_minors(J, 2)]
    printed = [parse_polynomial(m, prob.ring) for m in CUSP_MINORS]
    unmatched = [str(p) for p in printed if not any(p == m or p == -m for m in ours)]
    ch = select_system(prob)
    with pytest.raises(NotWellChosen) as exc:
        build_desingularization(prob, ch)
    first = ours[0]
    ok_order = ch.c == 5 and (ch.M == first or ch.M == -first) and exc.value.c == 5
    ok_bound = 2 * ch.c + 1 > prob.precision
    passed = not unmatched and ok_order and ok_bound
    detail = (f"c={ch.c}, M={ch.M}, not-well-chosen={ok_bound}; "
              f"printed minors not matching any true minor up to sign: {unmatched or 'none'}")
    report(1, passed, detail)
    assert passed, detail


def test_criterion_2_example2():
    pres = presentation("example2")
    inv = [str(p) for p in pres.inverted]
    # B_M keeps both relations; eliminating Y4 leaves (A[Y1,Y2,Y3]/(Y1^3 - Y2^2))_Y2
    s = simplify_localization(pres.relations, pres.inverted[0], pres.problem.unknowns)
    passed = (pres.choice.c == 0 and pres.kind == "localization" and inv == ["4*Y2^2"]
              and tuple(pres.relations) == pres.problem.ideal_gens
              and [str(g) for g in s.relations] == ["Y1^3 - Y2^2"] and str(s.inverted) == "Y2")
    report(2, passed, f"c={pres.choice.c}, {pres.kind} at {inv}; simplified "
                      f"{s.variables} / {[str(g) for g in s.relations]} inverting {s.inverted}")
    assert passed


def _u_primes(prob):
    """u1' = y1'/x^2, u2' = y2'/x^3 as polynomials in x."""
    pt = prob.point_map
    return pt["Y1"].shift("x", -2), pt["Y2"].shift("x", -3)


def test_criterion_3_example4():
    pres = presentation("example4")
    prob, ch = pres.problem, pres.choice
    big = pres.h[0].ring
    x, Y1, Y2, T1, T2 = (big.var(v) for v in ("x", "Y1", "Y2", "T1", "T2"))
    u1, u2 = (u.to_ring(big) for u in _u_primes(prob))
    h_printed = [Y1 - x ** 2 * u1 - 2 * x ** 6 * u2 * T2,
               Y2 - x ** 3 * u2 + x ** 3 * T1 - 3 * x ** 7 * u1 ** 2 * T2]
    ok_h = list(pres.h) == h_printed
    ok_H = pres.H == _matrix([["3*Y1^2", "-2*Y2"], ["1", "0"]], prob.ring)
    ok_G = pres.G == _matrix([["0", "2*Y2"], ["-1", "3*Y1^2"]], prob.ring)
    ok_e = ch.e == 2 * _u_primes(prob)[1]
    R = pres.ring
    b = pres.substitution_map
    d = ch.d.to_ring(R)
    ok_ident = ch.d == prob.ring.var("x") ** 3 and all(
        prob.ideal_gens[i].subs(b, ring=R) == d * d * g
        for i, g in zip(ch.f_indices, pres.relations))
    Q = pres.split.Q[0]
    aux = pres.aux_vars
    scaled = 2 * Q.homogeneous_part(aux, 2) + 6 * Q.homogeneous_part(aux, 3)
    xr, t1, t2 = R.var("x"), R.var("T1"), R.var("T2")
    u1r, u2r = (u.to_ring(R) for u in _u_primes(prob))
    Q_printed = (-2 * t1 ** 2 + 12 * xr ** 4 * u1r ** 2 * t1 * t2
               + (24 * xr ** 8 * u2r ** 2 * u1r - 18 * xr ** 8 * u1r ** 4) * t2 ** 2
               + 48 * xr ** 12 * u2r ** 3 * t2 ** 3)
    diff = scaled - Q_printed
    off = sorted({e[1:] for e in diff.terms}) if not diff.is_zero() else []
    # the x-power mismatch anticipated for the T2^2 term does not occur
    ok_Q = diff.is_zero() and ch.c == 3 and 2 * ch.c + 1 == prob.precision
    passed = ok_h and ok_H and ok_G and ok_e and ok_ident and ok_Q
    report(3, passed, f"h={ok_h}, H={ok_H}, G={ok_G}, e=2u2'={ok_e}, f(b)=d^2 g={ok_ident}, "
                      f"Q termwise={ok_Q} (differing T-monomials: {off or 'none'})")
    assert passed


def test_criterion_4_example5():
    pres = presentation("example5")
    prob, ch = pres.problem, pres.choice
    R = prob.ring
    Y2 = R.var("Y2")
    H_printed = _matrix([["3*Y1^2", "0", "0", "-2*Y2"],
                       ["6*Y1*Y3", "3*Y1^2", "-2*Y2", "-2*Y4"],
                       ["1", "0", "0", "0"],
                       ["0", "1", "0", "0"]], R)
    G_printed = _matrix([["0", "0", "-4*Y2^5", "0"],
                       ["0", "0", "0", "-4*Y2^5"],
                       ["-2*Y2^3*Y4", "2*Y2^4", "-12*Y1*Y2^4*Y3 + 6*Y1^2*Y2^3*Y4", "-6*Y1^2*Y2^4"],
                       ["2*Y2^4", "0", "-6*Y1^2*Y2^4", "0"]], R)
    ordP = prob.at_point(ch.P).x_order("x")
    passed = (ch.L == Y2 ** 3 and ch.M in (4 * Y2 ** 2, -4 * Y2 ** 2) and ordP == 15
              and ch.c == 15 and 2 * ch.c + 1 == 31 == prob.precision
              and pres.H == H_printed and pres.G == G_printed
              and pres.G == adjugate(pres.H) * Y2 ** 3)
    report(4, passed, f"L={ch.L}, M={ch.M}, ord P(y')={ordP}, c={ch.c}, "
                      f"H matches={pres.H == H_printed}, G matches={pres.G == G_printed}")
    assert passed


def test_criterion_5_example3():
    R = PolyRing(("Y1", "Y2", "Y3", "Y4"))
    Y1, Y2, Y3, Y4 = R.gens()
    g = [Y1 ** 3 - Y2 ** 2, 3 * Y1 ** 2 * Y3 - 2 * Y2 * Y4]
    a = [27 * Y2 * Y3 ** 3 - 8 * Y4 ** 3, 9 * Y1 * Y3 ** 2 - 4 * Y4 ** 2, 2 * Y1 * Y4 - 3 * Y2 * Y3]
    G = groebner(g)
    nf = [normal_form(Y2 ** 2 * a[1], G), normal_form(Y2 * a[2], G), normal_form(Y2 ** 3 * a[0], G)]
    Q = ideal_quotient(Ideal(g), Ideal(g + a))
    S = PolyRing(("U1", "U2", "V1", "V2"))
    U1, U2, V1, V2 = S.gens()
    h = [U1 ** 3 - U2 ** 2, 3 * U1 ** 2 * V1 - 2 * U2 * V2]
    b = [27 * U2 * V1 ** 3 - 8 * V2 ** 3, 9 * U1 * V1 ** 2 - 4 * V2 ** 2, 2 * U1 * V2 - 3 * U2 * V1]
    Qh = ideal_quotient(Ideal(h), Ideal(h + b))
    passed = (all(p.is_zero() for p in nf) and ideal_member(Y2 ** 3, Q)
              and ideal_member(U2 ** 3, Qh))
    report(5, passed, f"normal forms {[str(p) for p in nf]}, Y2^3 in quotient, U2^3 in quotient")
    assert passed


def test_criterion_6_special():
    sp1, res1 = special("buletin1")
    s = res1.simplified
    ok1 = (res1.kind == "localization" and set(s.variables) == {"U1", "U2", "V1"}
           and [str(r) for r in s.relations] == ["U1^3 - U2^2"] and str(s.inverted) == "U2"
           and [str(r) for r in res1.relations[:1]] == ["t^2"])
    sp2, res2 = special("buletin2")
    ref = presentation_json(presentation("example4"))
    inner = presentation_json(res2.inner)
    keys = ("relations", "inverted", "aux_vars", "H", "G", "h")
    ok2 = all(inner[k] == ref[k] for k in keys)
    # coefficientwise expansion: 1 -> x^6(u1^3 - u2^2), t -> x^4(3u1^2 v1 - 2u2 v2)
    exp = expand_relations(sp1)
    ok3 = ([(str(e.relation), e.content) for e in exp]
           == [("U1^3 - U2^2", 6), ("3*U1^2*V1 - 2*U2*V2", 4)]
           and all(o == AtLeast(sp1.precision) for o in check_factorization(sp1)))
    passed = ok1 and ok2 and ok3
    report(6, passed, f"buletin1 (A[U1,U2,V1]/(h1))_U2={ok1}, buletin2 inner = example4 "
                      f"bytewise={ok2}, expansion identity mod x^31={ok3}")
    assert passed


def _random_poly(rng, ring, terms=3, deg=2):
    d = {}
    for _ in range(terms):
        e = [0] * len(ring.names)
        for _ in range(rng.randint(0, deg)):
            e[rng.randrange(len(e))] += 1
        e = tuple(e)
        d[e] = d.get(e, 0) + rng.randint(-3, 3)
    return Polynomial.from_dict(ring, d)


def _bordered_ok(J, L, ring):
    r, n = J.rows, J.cols
    H = border(J)
    G = adjugate(H) * L
    P = L * determinant(H)
    Id = PolyMatrix.identity(n, ring) * P
    JG = J * G
    return (G * H == Id and H * G == Id
            and all(JG[i, j] == (P if i == j else ring.zero) for i in range(r) for j in range(n)))


def test_criterion_7a_bordered_identities():
    ok = []
    for name in ("example4", "example5"):
        pres = presentation(name)
        f = [pres.problem.ideal_gens[i] for i in pres.choice.f_indices]
        J = jacobian(f, list(pres.choice.permutation), pres.problem.ring)
        ok.append(_bordered_ok(J, pres.choice.L, pres.problem.ring))
    rng = random.Random(7)
    R = PolyRing(("x", "Y1", "Y2", "Y3"))
    for _ in range(50):
        r = rng.randint(1, 3)
        f = [_random_poly(rng, R) for _ in range(r)]
        cols = rng.sample(R.names[1:], 3)
        ok.append(_bordered_ok(jacobian(f, cols, R), _random_poly(rng, R), R))
    passed = all(ok)
    report("7a", passed, f"GH = HG = P Id and J G = (P Id | 0) on {len(ok)} instances")
    assert passed


def test_criterion_7b_adjugate():
    rng = random.Random(11)
    R = PolyRing(("a", "b"))
    ok = []
    for n in range(1, 5):
        for _ in range(5):
            m = PolyMatrix.from_rows([[_random_poly(rng, R) for _ in range(n)] for _ in range(n)], R)
            ok.append(m * adjugate(m) == PolyMatrix.identity(n, R) * determinant(m))
    passed = all(ok)
    report("7b", passed, f"m adj(m) = det(m) Id on {len(ok)} matrices up to 4x4")
    assert passed


def test_criterion_7c_groebner():
    rng = random.Random(5)
    R = PolyRing(("a", "b", "c"))
    ok = []
    for _ in range(20):
        gens = [p for p in (_random_poly(rng, R, 3, 3) for _ in range(rng.randint(1, 3)))
                if not p.is_zero()] or [R.var("a")]
        G = groebner(gens)
        p = _random_poly(rng, R, 4, 3)
        shuffled = list(G.basis)
        rng.shuffle(shuffled)
        ok.append(normal_form(p, GroebnerBasis(tuple(shuffled), G.ring)) == normal_form(p, G))
        ok.append(all(normal_form(spoly(f, h), G).is_zero()
                      for i, f in enumerate(G.basis) for h in G.basis[i + 1:]))
    mono = lambda e: R.monomial(dict(zip(R.names, e)))
    for _ in range(10):
        I = [tuple(rng.randint(0, 2) for _ in range(3)) for _ in range(rng.randint(1, 3))]
        J = [tuple(rng.randint(0, 2) for _ in range(3)) for _ in range(rng.randint(1, 2))]
        I = [e for e in I if any(e)] or [(1, 0, 0)]
        Q = groebner(ideal_quotient(Ideal([mono(e) for e in I]), Ideal([mono(e) for e in J])).generators)
        for e in [(i, j, k) for i in range(4) for j in range(4) for k in range(4)]:
            inside = all(any(all(g[t] <= e[t] + jj[t] for t in range(3)) for g in I) for jj in J)
            ok.append(Q.contains(mono(e)) == inside)
    passed = all(ok)
    report("7c", passed, f"confluence, S-pairs and monomial colon brute force ({len(ok)} checks)")
    assert passed


def test_criterion_7d_lift_residuals():
    out = []
    for name in ("example4", "example5"):
        pres = presentation(name)
        lp = lift_point(pres)
        bound = pres.problem.precision + 2 * pres.choice.c
        out.append((name, lp.residual_orders, all(o >= bound for o in lp.residual_orders)))
    passed = all(ok for _, _, ok in out)
    report("7d", passed, "; ".join(f"{n}: {list(map(str, r))}" for n, r, _ in out))
    assert passed


def test_criterion_7e_closed_loop():
    results = {}
    for name in corpus.names():
        pf = problem(name)
        if name in corpus.ARTINIAN:
            sp, res = special(name)
            checks = verify_special_result(pf, special_json(res, sp))
        else:
            try:
                pres = presentation(name)
            except NotWellChosen:
                results[name] = True
                continue
            checks = verify_result(dim1(name), presentation_json(pres))
        results[name] = all(c.passed for c in checks)
    passed = all(results.values())
    report("7e", passed, ", ".join(f"{k}={v}" for k, v in results.items()))
    assert passed
