import json

import pytest
from hypothesis import given, settings, strategies as st

from neron.errors import BoundTooSmall, NotArtinian, RelationViolated
from neron.neron_special import (
    CoeffName,
    SpecialProblem,
    artinian_basis,
    check_factorization,
    expand_relations,
    flatten,
    inner_precision,
    pi_residual_orders,
    special_desingularization,
)
from neron.polycore import PolyRing
from neron.series import AtLeast, TruncatedSeries

from neron import corpus
from neron.cli_io import parse_problem

from conftest import problem, special


def edited(name, **fields):
    obj = json.loads(corpus.text(name))
    for k, v in fields.items():
        if v is None:
            obj.pop(k, None)
        else:
            obj[k] = v
    return parse_problem(json.dumps(obj), name)

T = PolyRing(("t", "s"))
t, s = T.gens()


def test_artinian_basis():
    A = artinian_basis(("t",), [t.to_ring(PolyRing(("t",))) ** 2])
    assert A.basis == ((0,), (1,)) and A.nil_index == 2
    B = artinian_basis(("t", "s"), [t ** 2, s ** 2, t * s])
    assert set(B.basis) == {(0, 0), (1, 0), (0, 1)}
    C = artinian_basis(("t", "s"), [t ** 2 - s, s ** 2])
    assert len(C.basis) == 4 and C.nil_index == 4


def test_not_artinian():
    with pytest.raises(NotArtinian):
        artinian_basis(("t", "s"), [t ** 2])
    with pytest.raises(NotArtinian):
        artinian_basis(("t",), [PolyRing(("t",)).one])


def test_reduce_monomial():
    C = artinian_basis(("t", "s"), [t ** 2 - s, s ** 2])
    assert C.reduce_monomial((2, 0)) == {(0, 1): 1}
    assert C.reduce_monomial((4, 0)) == {}


def test_expansion_of_the_cusp():
    sp = problem("buletin1").to_special_problem()
    rels = expand_relations(sp)
    assert [(str(e.relation), e.content) for e in rels] == [
        ("U1^3 - U2^2", 6), ("3*U1^2*V1 - 2*U2*V2", 4)]
    assert inner_precision(sp) == 28
    assert all(o == AtLeast(31) for o in check_factorization(sp))


def test_flatten_sources():
    sp = problem("buletin1").to_special_problem()
    fl = flatten(sp)
    assert fl.source == "user" and len(fl.problem.ideal_gens) == 5
    j0 = flatten(edited("buletin1", presentation_J=None).to_special_problem())
    assert j0.source == "J0"
    assert [str(g) for g in j0.problem.ideal_gens] == ["U1^3 - U2^2", "3*U1^2*V1 - 2*U2*V2"]


def test_buletin1_presentation():
    sp, res = special("buletin1")
    assert res.kind == "localization" and res.eta.is_constant()
    s = res.simplified
    assert s.variables == ("U1", "V1", "U2")
    assert [str(r) for r in s.relations] == ["U1^3 - U2^2"]
    assert str(s.inverted) == "U2"
    assert all(o >= inner_precision(sp) for o in pi_residual_orders(res, sp))


def test_buletin2_presentation():
    sp, res = special("buletin2")
    assert res.kind == "full"
    assert [str(a) for a in res.relations[:1]] == ["t^2"]
    assert all(o >= sp.precision for o in pi_residual_orders(res, sp))


def test_bound_too_small():
    pf = edited("buletin2", precision=6)
    with pytest.raises(BoundTooSmall):
        special_desingularization(pf.to_special_problem())


def test_relation_violated():
    bad = edited("buletin2", presentation_J=["Y1^2 - Y2^3"])
    with pytest.raises(RelationViolated):
        special_desingularization(bad.to_special_problem())


N = 9
A1 = artinian_basis(("t",), [PolyRing(("t",)).var("t") ** 2])
R = PolyRing(("t", "Y"))


@settings(max_examples=30)
@given(st.lists(st.fractions(min_value=-3, max_value=3, max_denominator=2), min_size=N, max_size=N),
       st.lists(st.fractions(min_value=-3, max_value=3, max_denominator=2), min_size=N, max_size=N))
def test_factorization_of_squares(a, b):
    a = TruncatedSeries.from_coeffs(a, N)
    b = TruncatedSeries.from_coeffs(b, N)
    Y = R.var("Y")
    # (a + t b)^2 = a^2 + 2ab t, so Y^2 - q vanishes for q built coefficientwise
    sp = SpecialProblem.create(A1, ("Y",), [Y ** 2], {("Y", (0,)): a * 0, ("Y", (1,)): b}, N)
    assert all(o == AtLeast(N) for o in check_factorization(sp))
    for rel in expand_relations(sp):
        assert rel.relation.total_degree() <= 2
