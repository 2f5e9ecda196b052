"""
Minor orders and the choice of c
================================

Same cusp system in four unknowns, two different points.  At the first the
smallest minor order is 5, too large for N = 10.  At the second a minor is a
unit and the answer is a localization.
"""

from neron import corpus
from neron.errors import NotWellChosen
from neron.neron_dim1 import build_desingularization, l_invariant, select_system, simplify_localization

for name in ("example1", "example2"):
    problem = corpus.load(name).to_desing_problem()
    report = l_invariant(problem, (0, 1))
    print(name)
    for cols, order in report.table:
        print("   minor on", [problem.unknowns[i] for i in cols], "has order", order)
    print("   l =", report.l)
    try:
        pres = build_desingularization(problem, select_system(problem))
    except NotWellChosen as exc:
        print("   not well chosen: c =", exc.c, "and 2c+1 >", exc.precision)
        continue
    print("   localization at", pres.inverted[0])
    s = simplify_localization(pres.relations, pres.inverted[0], problem.unknowns)
    print("   ~", s.variables, [str(r) for r in s.relations], "inverting", s.inverted)

###############################################################################
# with hints the five-generator system reaches c = 15 at N = 31

big = corpus.load("example5").to_desing_problem()
ch = select_system(big)
print("example5: L =", ch.L, " M =", ch.M, " c =", ch.c)
