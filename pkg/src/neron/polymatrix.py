"""Matrices of polynomials: Jacobians, determinants, minors, adjugates and the
bordered square matrix used by the desingularization."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations
from typing import List, Sequence, Tuple

from .polycore import Polynomial, PolyRing, exact_divide


@dataclass(frozen=True)
class PolyMatrix:
    rows: int
    cols: int
    entries: Tuple[Polynomial, ...]
    ring: PolyRing

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Polynomial]], ring: PolyRing | None = None):
        if ring is None:
            ring = rows[0][0].ring
        nrows = len(rows)
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged matrix")
        flat = tuple(ring(e) for r in rows for e in r)
        return cls(nrows, ncols, flat, ring)

    @classmethod
    def identity(cls, n: int, ring: PolyRing) -> "PolyMatrix":
        return cls.from_rows(
            [[ring.one if i == j else ring.zero for j in range(n)] for i in range(n)], ring)

    def __getitem__(self, ij) -> Polynomial:
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> List[Polynomial]:
        return list(self.entries[i * self.cols:(i + 1) * self.cols])

    def tolist(self) -> List[List[Polynomial]]:
        return [self.row(i) for i in range(self.rows)]

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "PolyMatrix":
        return PolyMatrix.from_rows([[self[i, j] for j in cols] for i in rows], self.ring)

    def select_columns(self, cols: Sequence[int]) -> "PolyMatrix":
        return self.submatrix(range(self.rows), cols)

    def map(self, fn) -> "PolyMatrix":
        out = tuple(fn(e) for e in self.entries)
        ring = out[0].ring if out else self.ring
        return PolyMatrix(self.rows, self.cols, out, ring)

    def __mul__(self, other):
        if isinstance(other, PolyMatrix):
            if self.cols != other.rows:
                raise ValueError("shape mismatch")
            rows = []
            for i in range(self.rows):
                row = []
                for j in range(other.cols):
                    acc = self.ring.zero
                    for k in range(self.cols):
                        a, b = self[i, k], other[k, j]
                        if a and b:
                            acc = acc + a * b
                    row.append(acc)
                rows.append(row)
            return PolyMatrix.from_rows(rows, self.ring)
        return self.map(lambda e: e * other)

    __rmul__ = __mul__

    def __eq__(self, other):
        return (isinstance(other, PolyMatrix) and self.rows == other.rows
                and self.cols == other.cols and self.entries == other.entries)

    def __hash__(self):
        return hash((self.rows, self.cols, self.entries))

    def transpose(self) -> "PolyMatrix":
        return PolyMatrix.from_rows(
            [[self[i, j] for i in range(self.rows)] for j in range(self.cols)], self.ring)

    def __str__(self):
        return "\n".join("[" + ", ".join(str(e) for e in r) + "]" for r in self.tolist())


def jacobian(f: Sequence[Polynomial], variables: Sequence[str],
             ring: PolyRing | None = None) -> PolyMatrix:
    if len(set(variables)) != len(variables):
        raise ValueError("variables must be distinct")
    ring = ring or f[0].ring
    return PolyMatrix.from_rows([[p.diff(v) for v in variables] for p in f], ring)


def _det_cofactor(m: PolyMatrix) -> Polynomial:
    n = m.rows
    if n == 0:
        return m.ring.one
    if n == 1:
        return m[0, 0]
    if n == 2:
        return m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    total = m.ring.zero
    for j in range(n):
        a = m[0, j]
        if a.is_zero():
            continue
        minor = m.submatrix(range(1, n), [k for k in range(n) if k != j])
        term = a * _det_cofactor(minor)
        total = total + term if j % 2 == 0 else total - term
    return total


def det_leibniz(m: PolyMatrix) -> Polynomial:
    """Permutation expansion; an independent check on small matrices."""
    n = m.rows
    total = m.ring.zero
    for perm in permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = m.ring.one
        for i in range(n):
            term = term * m[i, perm[i]]
            if term.is_zero():
                break
        total = total + term if inv % 2 == 0 else total - term
    return total


def det_bareiss(m: PolyMatrix) -> Polynomial:
    """Fraction-free Gaussian elimination; every division is exact."""
    n = m.rows
    a = [list(r) for r in m.tolist()]
    prev = m.ring.one
    sign = 1
    for k in range(n - 1):
        if a[k][k].is_zero():
            for i in range(k + 1, n):
                if not a[i][k].is_zero():
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return m.ring.zero
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = a[i][j] * a[k][k] - a[i][k] * a[k][j]
                a[i][j] = exact_divide(num, prev)
        prev = a[k][k]
    d = a[n - 1][n - 1] if n else m.ring.one
    return d * sign


def determinant(m: PolyMatrix) -> Polynomial:
    if m.rows != m.cols:
        raise ValueError("determinant of a non-square matrix")
    if m.rows <= 3:
        return _det_cofactor(m)
    return det_bareiss(m)


def all_minors(m: PolyMatrix, r: int):
    """All ``r x r`` minors as ``(rows, cols, det)`` in lexicographic order."""
    if not 1 <= r <= min(m.rows, m.cols):
        raise ValueError(f"minor size {r} out of range for {m.rows}x{m.cols}")
    out = []
    for rs in combinations(range(m.rows), r):
        for cs in combinations(range(m.cols), r):
            out.append((rs, cs, determinant(m.submatrix(rs, cs))))
    return out


def adjugate(m: PolyMatrix) -> PolyMatrix:
    """Transposed cofactor matrix: ``m * adj(m) = det(m) * Id``."""
    n = m.rows
    if n != m.cols:
        raise ValueError("adjugate of a non-square matrix")
    if n == 1:
        return PolyMatrix.from_rows([[m.ring.one]], m.ring)
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            # entry (i, j) is the cofactor of (j, i)
            minor = m.submatrix([k for k in range(n) if k != j], [k for k in range(n) if k != i])
            c = determinant(minor)
            row.append(c if (i + j) % 2 == 0 else -c)
        rows.append(row)
    return PolyMatrix.from_rows(rows, m.ring)


def border(J: PolyMatrix) -> PolyMatrix:
    """Complete an ``r x n`` matrix to ``n x n`` with the rows ``(Id_{n-r} | 0)``.

    With the chosen minor's columns placed last, ``det`` of the result is
    ``(-1)^(r(n-r))`` times that minor.
    """
    r, n = J.rows, J.cols
    if r > n:
        raise ValueError("more rows than columns")
    ring = J.ring
    rows = J.tolist()
    for k in range(n - r):
        rows.append([ring.one if j == k else ring.zero for j in range(n)])
    return PolyMatrix.from_rows(rows, ring)
