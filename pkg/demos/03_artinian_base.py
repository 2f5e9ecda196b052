"""
Over an Artinian base
=====================

A = Q[t]/(t^2).  A solution of Y1^3 = Y2^2 over A[[x]] splits into the
coefficients of 1 and t; the problem flattens to one over Q[x]_(x) in four
unknowns, and the result is tensored back with A.
"""

from neron import corpus
from neron.neron_special import check_factorization, expand_relations, special_desingularization

problem = corpus.load("buletin1").to_special_problem()
print("basis of A:", problem.base.basis)

for rel in expand_relations(problem):
    print("coefficient", rel.alpha, ": x^%d*(%s)" % (rel.content, rel.relation))
print("orders of g(y^) coefficients:", [str(o) for o in check_factorization(problem)])

result = special_desingularization(problem)
print(result.kind, "over", result.ring.names)
s = result.simplified
print("simplified:", s.variables, [str(r) for r in s.relations], "inverting", s.inverted)
for name, image in result.pi:
    print("pi(%s) =" % name, image)
