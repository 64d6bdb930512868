from fractions import Fraction
from itertools import product

from hypothesis import strategies as st


def det(matrix):
    """Exact determinant by fraction Gaussian elimination (test oracle)."""
    m = [[Fraction(x) for x in row] for row in matrix]
    n = len(m)
    out = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            out = -out
        out *= m[col][col]
        for r in range(col + 1, n):
            f = m[r][col] / m[col][col]
            for c in range(col, n):
                m[r][c] -= f * m[col][c]
    return out


def chain_matrix(c):
    n = len(c)
    return [[c[i] if i == j else (-1 if abs(i - j) == 1 else 0) for j in range(n)] for i in range(n)]


def all_chains(max_len, max_entry, min_len=1):
    for r in range(min_len, max_len + 1):
        yield from product(range(2, max_entry + 1), repeat=r)


admissible = st.lists(st.integers(2, 9), min_size=1, max_size=7).map(tuple)
any_chain = st.lists(st.integers(-3, 9), min_size=1, max_size=6).map(tuple)


def pushforward_oracle(A, B, c2):
    """Straight-line blow-down of a resolution graph on a bare pairing table.

    Returns the final curve self-intersection and the multiplicities in
    blowup order.  Independent of the contraction engine.
    """
    self_int, pair = {}, {}

    def link(u, v, n=1):
        pair[frozenset((u, v))] = pair.get(frozenset((u, v)), 0) + n

    g = len(A)
    for i in range(g):
        junction = ("A", i + 1, 0) if i + 1 < g else "D0"
        for kind, ch in (("A", A[i]), ("B", B[i])):
            for j, x in enumerate(ch):
                self_int[(kind, i, j)] = -x
                if j:
                    link((kind, i, j - 1), (kind, i, j))
        link(("A", i, len(A[i]) - 1), junction)
        link(("B", i, 0), junction)
    self_int["D0"] = -1
    link("D0", "C")
    curve, mults = c2, []
    while self_int:
        ones = [v for v in self_int if self_int[v] == -1]
        assert len(ones) == 1, ones
        e = ones[0]
        nbrs = {u: n for k, n in pair.items() if e in k and n for u in k if u != e}
        m = nbrs.pop("C", 0)
        curve += m * m
        mults.append(m)
        del self_int[e]
        pair = {k: n for k, n in pair.items() if e not in k}
        items = list(nbrs.items())
        for u, n in items:
            self_int[u] += n * n
            link(u, "C", n * m)
        for x in range(len(items)):
            for y in range(x + 1, len(items)):
                link(items[x][0], items[y][0], items[x][1] * items[y][1])
    return curve, mults[::-1]
