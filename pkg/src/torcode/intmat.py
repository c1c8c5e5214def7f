"""Exact 2x2 integer matrices and Smith normal form.

Shared by the quadratic-form and conjugacy layers; everything here is plain
integer arithmetic on immutable values.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd


@dataclass(frozen=True)
class Mat2:
    """Integer 2x2 matrix [[a, b], [c, d]]."""

    a: int
    b: int
    c: int
    d: int

    @classmethod
    def identity(cls) -> "Mat2":
        return cls(1, 0, 0, 1)

    @classmethod
    def from_string(cls, text: str) -> "Mat2":
        """Parse the row-major form "a,b,c,d"."""
        parts = [s.strip() for s in text.split(",")]
        if len(parts) != 4:
            raise ValueError(f"expected four comma-separated integers, got {text!r}")
        return cls(*(int(s) for s in parts))

    @property
    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    @property
    def trace(self) -> int:
        return self.a + self.d

    def is_unimodular(self) -> bool:
        return self.det in (1, -1)

    def __mul__(self, other: "Mat2") -> "Mat2":
        if not isinstance(other, Mat2):
            return NotImplemented
        return Mat2(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def __neg__(self) -> "Mat2":
        return Mat2(-self.a, -self.b, -self.c, -self.d)

    def transpose(self) -> "Mat2":
        return Mat2(self.a, self.c, self.b, self.d)

    def adjugate(self) -> "Mat2":
        return Mat2(self.d, -self.b, -self.c, self.a)

    def inverse_unimodular(self) -> "Mat2":
        det = self.det
        if det not in (1, -1):
            raise ValueError(f"matrix {self} is not unimodular")
        adj = self.adjugate()
        return adj if det == 1 else -adj

    def __pow__(self, n: int) -> "Mat2":
        base = self if n >= 0 else self.inverse_unimodular()
        n = abs(n)
        out = Mat2.identity()
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def apply(self, x: int, y: int) -> tuple[int, int]:
        """Matrix times column vector (x, y)."""
        return (self.a * x + self.b * y, self.c * x + self.d * y)

    def row_apply(self, x: int, y: int) -> tuple[int, int]:
        """Row vector (x, y) times matrix."""
        return (x * self.a + y * self.c, x * self.b + y * self.d)

    def scale(self, k: int) -> "Mat2":
        return Mat2(k * self.a, k * self.b, k * self.c, k * self.d)

    def to_lists(self) -> list[list[int]]:
        return [[self.a, self.b], [self.c, self.d]]

    def __str__(self) -> str:
        return f"[[{self.a},{self.b}],[{self.c},{self.d}]]"


def smith_normal_form(m: Mat2) -> tuple[Mat2, Mat2, Mat2]:
    """Return (S, U, V) with U*m*V = S = diag(s1, s2), s1 | s2, s1, s2 >= 0.

    U and V are unimodular.
    """
    a, b, c, d = m.a, m.b, m.c, m.d
    u = Mat2.identity()
    v = Mat2.identity()

    def rows(mat, i, j, q):
        # row_i -= q * row_j
        A = [[mat[0][0], mat[0][1]], [mat[1][0], mat[1][1]]]
        A[i][0] -= q * A[j][0]
        A[i][1] -= q * A[j][1]
        return A

    A = [[a, b], [c, d]]
    U = [[1, 0], [0, 1]]
    V = [[1, 0], [0, 1]]

    def row_op(i, j, q):
        nonlocal A, U
        A = rows(A, i, j, q)
        U = rows(U, i, j, q)

    def col_op(i, j, q):
        # col_i -= q * col_j
        nonlocal A, V
        for r in range(2):
            A[r][i] -= q * A[r][j]
        for r in range(2):
            V[r][i] -= q * V[r][j]

    def swap_rows():
        nonlocal A, U
        A = [A[1], A[0]]
        U = [U[1], U[0]]

    def swap_cols():
        nonlocal A, V
        A = [[A[0][1], A[0][0]], [A[1][1], A[1][0]]]
        V = [[V[0][1], V[0][0]], [V[1][1], V[1][0]]]

    for _ in range(256):
        if A[0][0] == 0:
            if A[1][0] != 0:
                swap_rows()
            elif A[0][1] != 0:
                swap_cols()
            elif A[1][1] != 0:
                swap_rows()
                swap_cols()
            else:
                break
        # clear below and right of the pivot
        if A[1][0] % A[0][0] == 0:
            row_op(1, 0, A[1][0] // A[0][0])
        else:
            row_op(1, 0, A[1][0] // A[0][0])
            swap_rows()
            continue
        if A[0][1] % A[0][0] == 0:
            col_op(1, 0, A[0][1] // A[0][0])
        else:
            col_op(1, 0, A[0][1] // A[0][0])
            swap_cols()
            continue
        if A[1][0] == 0 and A[0][1] == 0:
            if A[1][1] % A[0][0] != 0:
                # fold row 1 into row 0 to fix divisibility, then restart
                row_op(0, 1, -1)
                continue
            break
    else:
        raise RuntimeError("Smith normal form did not converge")

    # normalize signs
    if A[0][0] < 0:
        A[0][0] = -A[0][0]
        U[0][0], U[0][1] = -U[0][0], -U[0][1]
    if A[1][1] < 0:
        A[1][1] = -A[1][1]
        U[1][0], U[1][1] = -U[1][0], -U[1][1]

    S = Mat2(A[0][0], A[0][1], A[1][0], A[1][1])
    Um = Mat2(U[0][0], U[0][1], U[1][0], U[1][1])
    Vm = Mat2(V[0][0], V[0][1], V[1][0], V[1][1])
    assert Um.is_unimodular() and Vm.is_unimodular()
    assert Um * m * Vm == S, (m, S, Um, Vm)
    assert S.b == 0 and S.c == 0
    assert S.a >= 0 and S.d >= 0
    assert S.a == 0 or S.d % max(S.a, 1) == 0 or S.d == 0
    return S, Um, Vm


def lattice_span_index(vectors: list[tuple[int, int]]) -> int:
    """Index of the sublattice of Z^2 generated by the vectors (0 = rank < 2)."""
    g = 0
    n = len(vectors)
    for i in range(n):
        for j in range(i + 1, n):
            (x1, y1), (x2, y2) = vectors[i], vectors[j]
            g = gcd(g, x1 * y2 - x2 * y1)
    return abs(g)
