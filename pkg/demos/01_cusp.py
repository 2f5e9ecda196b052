"""
Desingularizing the cusp over Q[x]_(x)
======================================

The curve Y1^3 = Y2^2 is singular at the origin.  We take an approximate
solution y' = (x^2 u, x^3 sqrt(u^3)) with u = exp(x) mod x^7 and build a
smooth algebra through which it factors.
"""

from neron import corpus
from neron.neron_dim1 import build_desingularization, lift_point, select_system, verify_presentation

problem = corpus.load("example4").to_desing_problem()
for name, p in problem.point:
    print(name, "=", p)

# choose f, L and the minor; c is the x-order of P(y')
choice = select_system(problem)
print("M =", choice.M, " P =", choice.P, " c =", choice.c, " d =", choice.d)

pres = build_desingularization(problem, choice)
print("H =")
print(pres.H)
print("G = L*adj(H) =")
print(pres.G)

# Y -> y' + d G(y') T
for name, b in pres.substitution:
    print(name, "->", b)

print("relation g =", pres.relations[0])
print("s  =", pres.s)
print("s' =", pres.s_prime)

###############################################################################
# the new point: solve g = 0 x-adically, then map through b

lifted = lift_point(pres)
print("f(y*) has x-order", lifted.residual_orders, "(need >=", problem.precision + 2 * choice.c, ")")

for check in verify_presentation(pres):
    print("PASS" if check.passed else "FAIL", check.name)
