import sympy
from hypothesis import given, strategies as st

from neron.polycore import PolyRing
from neron.polymatrix import (
    PolyMatrix,
    adjugate,
    all_minors,
    border,
    det_bareiss,
    det_leibniz,
    determinant,
    jacobian,
)

from conftest import polynomials, presentation

R = PolyRing(("a", "b"))
R4 = PolyRing(("Y1", "Y2", "Y3", "Y4"))


@st.composite
def square(draw, max_n=4):
    n = draw(st.integers(1, max_n))
    entries = draw(st.lists(polynomials(R, 3, 2), min_size=n * n, max_size=n * n))
    return PolyMatrix.from_rows([entries[i * n:(i + 1) * n] for i in range(n)], R)


@given(square())
def test_adjugate_identity(m):
    n = m.rows
    D = determinant(m)
    assert m * adjugate(m) == PolyMatrix.identity(n, R) * D
    assert adjugate(m) * m == PolyMatrix.identity(n, R) * D


@given(square())
def test_determinant_algorithms_agree(m):
    assert det_bareiss(m) == det_leibniz(m) == determinant(m)


@given(square(), st.data())
def test_row_swap_negates(m, data):
    if m.rows < 2:
        return
    i, j = data.draw(st.sampled_from([(i, j) for i in range(m.rows) for j in range(i + 1, m.rows)]))
    rows = m.tolist()
    rows[i], rows[j] = rows[j], rows[i]
    assert determinant(PolyMatrix.from_rows(rows, R)) == -determinant(m)


@st.composite
def bordered(draw):
    n = draw(st.integers(1, 4))
    r = draw(st.integers(1, n))
    J = PolyMatrix.from_rows(
        [draw(st.lists(polynomials(R, 2, 2), min_size=n, max_size=n)) for _ in range(r)], R)
    L = draw(polynomials(R, 2, 2))
    return J, L


@given(bordered())
def test_border_products(data):
    J, L = data
    r, n = J.rows, J.cols
    H = border(J)
    G = adjugate(H) * L
    P = L * determinant(H)
    Id = PolyMatrix.identity(n, R) * P
    assert G * H == Id and H * G == Id
    JG = J * G
    for i in range(r):
        for j in range(n):
            assert JG[i, j] == (P if i == j else R.zero)
    # det(H) is a signed minor of the last r columns
    last = determinant(J.select_columns(range(n - r, n)))
    assert determinant(H) in (last, -last)


def test_sympy_oracle_on_the_printed_system():
    pres = presentation("example5")
    H, G = pres.H, pres.G
    syms = sympy.symbols("x Y1:5")
    env = dict(zip(("x", "Y1", "Y2", "Y3", "Y4"), syms))
    Hs = sympy.Matrix(H.rows, H.cols, lambda i, j: sympy.sympify(str(H[i, j]).replace("^", "**"), env))
    Gs = sympy.Matrix(G.rows, G.cols, lambda i, j: sympy.sympify(str(G[i, j]).replace("^", "**"), env))
    assert sympy.expand(Hs.adjugate() * env["Y2"] ** 3 - Gs) == sympy.zeros(4, 4)
    assert sympy.expand(Hs.det() - sympy.sympify(str(determinant(H)).replace("^", "**"), env)) == 0


def test_minor_table_and_jacobian():
    Y1, Y2, Y3, Y4 = R4.gens()
    f = [Y1 ** 3 - Y2 ** 2, 3 * Y1 ** 2 * Y3 - 2 * Y2 * Y4]
    J = jacobian(f, R4.names)
    assert str(J[1, 0]) == "6*Y1*Y3"
    minors = [str(m) for _, _, m in all_minors(J, 2)]
    assert minors == ["12*Y1*Y2*Y3 - 6*Y1^2*Y4", "9*Y1^4", "-6*Y1^2*Y2",
                      "-6*Y1^2*Y2", "4*Y2^2", "0"]
