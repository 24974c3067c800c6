"""Independent reference computations used by the tests.

Nothing here imports the package's linear algebra: plain Python lists and
brute force, slow but easy to trust at the sizes the tests use.
"""

from __future__ import annotations

import itertools


def rank_mod_p(rows, p: int) -> int:
    """Rank of an integer matrix over F_p by textbook elimination."""
    M = [[int(x) % p for x in r] for r in rows]
    if not M:
        return 0
    rank, ncols = 0, len(M[0])
    for c in range(ncols):
        piv = next((i for i in range(rank, len(M)) if M[i][c]), None)
        if piv is None:
            continue
        M[rank], M[piv] = M[piv], M[rank]
        inv = pow(M[rank][c], p - 2, p)
        M[rank] = [(x * inv) % p for x in M[rank]]
        for i in range(len(M)):
            if i != rank and M[i][c]:
                f = M[i][c]
                M[i] = [(a - f * b) % p for a, b in zip(M[i], M[rank])]
        rank += 1
    return rank


def matmul_mod_p(A, B, p: int):
    return [[sum(a * b for a, b in zip(row, col)) % p for col in zip(*B)] for row in A]


def is_invertible_mod_p(A, p: int) -> bool:
    return rank_mod_p(A, p) == len(A)


def commutant_dim(mats, p: int) -> int:
    """dim {Y : Y X = X Y for all X in mats} over F_p."""
    n = len(mats[0])
    rows = []
    for X in mats:
        # (Y X - X Y)[i][j] as a linear form in the entries Y[a][b]
        for i in range(n):
            for j in range(n):
                r = [0] * (n * n)
                for k in range(n):
                    r[i * n + k] += X[k][j]
                    r[k * n + j] -= X[i][k]
                rows.append(r)
    return n * n - rank_mod_p(rows, p)


def poly_mod_int(a: int, b: int) -> int:
    """Remainder of F_2 polynomials encoded as bit masks."""
    db = b.bit_length()
    while a and a.bit_length() >= db:
        a ^= b << (a.bit_length() - db)
    return a


def f2_irreducibles(deg: int) -> list[int]:
    """Monic irreducibles over F_2 of exact degree deg, as bit masks, by trial division."""
    out = []
    for f in range(1 << deg, 1 << (deg + 1)):
        if all(poly_mod_int(f, g) for d in range(1, deg // 2 + 1) for g in range(1 << d, 1 << (d + 1))):
            out.append(f)
    return out


def bits_to_coeffs(f: int) -> list[int]:
    return [(f >> i) & 1 for i in range(f.bit_length())]


def count_monic_irreducibles(q: int, deg: int) -> int:
    """Necklace formula (1/n) sum_{d | n} mu(d) q^(n/d)."""
    def mu(n):
        out, k = 1, 2
        while k * k <= n:
            if n % k == 0:
                n //= k
                if n % k == 0:
                    return 0
                out = -out
            k += 1
        return -out if n > 1 else out
    return sum(mu(d) * q ** (deg // d) for d in range(1, deg + 1) if deg % d == 0) // deg


def _prod(mul, p, a, b):
    d = len(mul)
    out = [0] * d
    for i, ai in enumerate(a):
        if not ai:
            continue
        for j, bj in enumerate(b):
            if bj:
                c = ai * bj
                for k in range(d):
                    out[k] = (out[k] + c * mul[i][j][k]) % p
    return out


def _span(vecs, p):
    rows = []
    for v in vecs:
        if any(v) and rank_mod_p(rows + [v], p) > len(rows):
            rows.append(v)
    return rows


def generates_nilpotent_ideal(mul, p: int, x) -> bool:
    """Is the two-sided ideal A x A nilpotent?"""
    d = len(mul)
    basis = [[int(i == j) for j in range(d)] for i in range(d)]
    I = _span([_prod(mul, p, _prod(mul, p, a, list(x)), b) for a in basis for b in basis], p)
    cur = I
    for _ in range(d + 1):
        if not cur:
            return True
        cur = _span([_prod(mul, p, u, v) for u in cur for v in I], p)
    return not cur


def brute_force_radical_dim(mul, p: int) -> int:
    """Dimension of the largest nilpotent ideal, by enumerating every element.

    x lies in the radical iff A x A is nilpotent, so the radical has p^dim
    elements.
    """
    d = len(mul)
    count = sum(1 for x in itertools.product(range(p), repeat=d) if generates_nilpotent_ideal(mul, p, x))
    k = 0
    while p ** k < count:
        k += 1
    assert p ** k == count, "nilpotent elements do not form a subspace"
    return k
