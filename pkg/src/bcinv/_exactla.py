"""Exact Gaussian-elimination linear algebra over a prime field or the rationals.

Matrices are lists of lists of field scalars.  Pivoting is deterministic
(first nonzero entry in column order), so every factorization produced here
is reproducible.
"""

from __future__ import annotations

from fractions import Fraction


class GFp:
    """Scalar arithmetic of the prime field F_p on plain ints in [0, p)."""

    def __init__(self, p: int):
        self.p = p
        self.zero = 0
        self.one = 1 % p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("zero has no inverse in F_p")
        return pow(a, self.p - 2, self.p)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def is_zero(self, a):
        return a % self.p == 0


class QQ:
    """Scalar arithmetic of the rationals on fractions.Fraction."""

    zero = Fraction(0)
    one = Fraction(1)

    @staticmethod
    def add(a, b):
        return a + b

    @staticmethod
    def sub(a, b):
        return a - b

    @staticmethod
    def mul(a, b):
        return a * b

    @staticmethod
    def neg(a):
        return -a

    @staticmethod
    def inv(a):
        return 1 / Fraction(a)

    @staticmethod
    def div(a, b):
        return Fraction(a) / Fraction(b)

    @staticmethod
    def is_zero(a):
        return a == 0


def identity(field, n):
    return [[field.one if i == j else field.zero for j in range(n)] for i in range(n)]


def zeros(field, m, n):
    return [[field.zero for _ in range(n)] for _ in range(m)]


def matmul(field, A, B):
    m, inner, n = len(A), len(B), len(B[0]) if B else 0
    out = zeros(field, m, n)
    for i in range(m):
        Ai = A[i]
        for j in range(n):
            acc = field.zero
            for t in range(inner):
                acc = field.add(acc, field.mul(Ai[t], B[t][j]))
            out[i][j] = acc
    return out


def transpose(A):
    return [list(col) for col in zip(*A)] if A else []


def rref(field, M):
    """Reduced row echelon form.

    Returns (R, pivots, E) with E*M = R and E invertible.
    """
    m = len(M)
    n = len(M[0]) if m else 0
    R = [row[:] for row in M]
    E = identity(field, m)
    pivots = []
    row = 0
    for col in range(n):
        pivot = None
        for r in range(row, m):
            if not field.is_zero(R[r][col]):
                pivot = r
                break
        if pivot is None:
            continue
        R[row], R[pivot] = R[pivot], R[row]
        E[row], E[pivot] = E[pivot], E[row]
        scale = field.inv(R[row][col])
        R[row] = [field.mul(scale, v) for v in R[row]]
        E[row] = [field.mul(scale, v) for v in E[row]]
        for r in range(m):
            if r != row and not field.is_zero(R[r][col]):
                factor = R[r][col]
                R[r] = [field.sub(v, field.mul(factor, w)) for v, w in zip(R[r], R[row])]
                E[r] = [field.sub(v, field.mul(factor, w)) for v, w in zip(E[r], E[row])]
        pivots.append(col)
        row += 1
        if row == m:
            break
    return R, pivots, E


def rank(field, M):
    return len(rref(field, M)[1])


def null_space(field, M):
    """Basis of {x : M x = 0} as a list of column vectors."""
    m = len(M)
    n = len(M[0]) if m else 0
    R, pivots, _ = rref(field, M)
    free = [j for j in range(n) if j not in pivots]
    basis = []
    for j in free:
        vec = [field.zero] * n
        vec[j] = field.one
        for i, pc in enumerate(pivots):
            vec[pc] = field.neg(R[i][j])
        basis.append(vec)
    return basis


def solve(field, A, B):
    """Any exact solution X of A X = B, or None when inconsistent."""
    m = len(A)
    n = len(A[0]) if m else 0
    w = len(B[0]) if B else 0
    aug = [A[i][:] + B[i][:] for i in range(m)]
    R, pivots, _ = rref(field, aug)
    if any(pc >= n for pc in pivots):
        return None
    X = zeros(field, n, w)
    for i, pc in enumerate(pivots):
        for j in range(w):
            X[pc][j] = R[i][n + j]
    return X


def inverse(field, A):
    """Exact inverse of a square matrix, or None when singular."""
    n = len(A)
    R, pivots, E = rref(field, A)
    if len(pivots) != n:
        return None
    return E


def rank_factorization(field, A):
    """A = B*C with B full column rank and C full row rank (r = rank A)."""
    R, pivots, _ = rref(field, A)
    r = len(pivots)
    B = [[A[i][pc] for pc in pivots] for i in range(len(A))]
    C = [R[i][:] for i in range(r)]
    return B, C


def left_inverse(field, B):
    """L with L*B = I for a full-column-rank B."""
    r = len(B[0]) if B else 0
    R, pivots, E = rref(field, B)
    if len(pivots) != r:
        raise ValueError("matrix does not have full column rank")
    return [E[i][:] for i in range(r)]


def right_inverse(field, C):
    """R with C*R = I for a full-row-rank C."""
    return transpose(left_inverse(field, transpose(C)))
