"""Finite fields F_{p^n} with table-driven, numpy-vectorised arithmetic.

Elements are plain integers 0..q-1.  The integer sum_j c_j p^j stands for
the polynomial sum_j c_j b^j in a fixed root b of the field's modulus, and
b is always a primitive element, so multiplication runs through log/exp
tables.  Constants 0..p-1 are the prime subfield in every field.
"""

from __future__ import annotations

import functools
from typing import Iterable, Sequence

import numpy as np
from sympy import factorint, isprime

FIELD_CAP = 1 << 16
_ADD_TABLE_CAP = 1024


class FieldError(ValueError):
    pass


# -- tiny dense polynomial helpers over F_p (coefficient lists, low to high) --

def _ptrim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmulmod(a: Sequence[int], b: Sequence[int], mod: Sequence[int], p: int) -> list[int]:
    prod = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % p
    n = len(mod) - 1
    for k in range(len(prod) - 1, n - 1, -1):
        c = prod[k]
        if c:
            for j in range(n + 1):
                prod[k - n + j] = (prod[k - n + j] - c * mod[j]) % p
    return _ptrim(prod[:n])


def _ppowmod(base: list[int], e: int, mod: Sequence[int], p: int) -> list[int]:
    result = [1]
    while e:
        if e & 1:
            result = _pmulmod(result, base, mod, p)
        base = _pmulmod(base, base, mod, p)
        e >>= 1
    return result


def _is_primitive(mod: Sequence[int], p: int) -> bool:
    n = len(mod) - 1
    order = p**n - 1
    if mod[0] == 0:
        return False
    x = [0, 1]
    if _ppowmod(x, order, mod, p) != [1]:
        return False
    return all(_ppowmod(x, order // ell, mod, p) != [1] for ell in factorint(order))


def primitive_modulus(p: int, n: int) -> tuple[int, ...]:
    """Lexicographically least monic primitive polynomial of degree n over F_p."""
    for code in range(p**n):
        low = [(code // p**j) % p for j in range(n)]
        mod = low + [1]
        if _is_primitive(mod, p):
            return tuple(mod)
    raise FieldError(f"no primitive polynomial of degree {n} over F_{p}")


def _primitive_root(p: int) -> int:
    if p == 2:
        return 1
    fac = list(factorint(p - 1))
    for g in range(2, p):
        if all(pow(g, (p - 1) // ell, p) != 1 for ell in fac):
            return g
    raise FieldError(f"no primitive root mod {p}")


class GF:
    """The field F_{p^n}; all operations accept ints or integer numpy arrays."""

    def __init__(self, p: int, n: int = 1, modulus: Sequence[int] | None = None):
        if not isprime(p):
            raise FieldError(f"characteristic {p} is not prime")
        if n < 1 or p**n > FIELD_CAP:
            raise FieldError(f"field size {p}^{n} outside cap {FIELD_CAP}")
        self.p, self.n, self.q = p, n, p**n
        q = self.q
        if n == 1:
            self.modulus = (0, 1)
        else:
            self.modulus = tuple(modulus) if modulus is not None else primitive_modulus(p, n)
            if len(self.modulus) != n + 1 or self.modulus[-1] != 1:
                raise FieldError("modulus must be monic of degree n")
            if not _is_primitive(list(self.modulus), p):
                raise FieldError("modulus must be a primitive polynomial")
        self._powers = p ** np.arange(n, dtype=np.int64)
        self.digits = np.array([[(a // p**j) % p for j in range(n)] for a in range(q)], dtype=np.int64)

        exp = np.zeros(2 * (q - 1) + 1, dtype=np.int64)
        log = np.full(q, -1, dtype=np.int64)
        if n == 1:
            g = _primitive_root(p)
            x = 1
            for k in range(q - 1):
                exp[k] = x
                x = x * g % p
        else:
            vec = [1] + [0] * (n - 1)
            mod = self.modulus
            for k in range(q - 1):
                exp[k] = sum(c * p**j for j, c in enumerate(vec))
                top = vec[-1]
                vec = [0] + vec[:-1]
                if top:
                    vec = [(vec[j] - top * mod[j]) % p for j in range(n)]
        exp[q - 1:2 * (q - 1)] = exp[:q - 1]
        exp[2 * (q - 1)] = exp[0]
        log[exp[:q - 1]] = np.arange(q - 1)
        self.exp, self.log = exp, log
        self.generator = int(exp[1]) if q > 2 else 1
        self._neg = self._encode((-self.digits) % p)
        self._add_table = None
        if n > 1 and q <= _ADD_TABLE_CAP:
            d = (self.digits[:, None, :] + self.digits[None, :, :]) % p
            self._add_table = d @ self._powers

    # -- identity --
    @property
    def key(self) -> tuple:
        return (self.p, self.n, self.modulus)

    def __eq__(self, other):
        return isinstance(other, GF) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return f"GF({self.p}^{self.n})" if self.n > 1 else f"GF({self.p})"

    @property
    def is_prime(self) -> bool:
        return self.n == 1

    @property
    def prime_field(self) -> "GF":
        return gf(self.p, 1)

    # -- encoding --
    def _encode(self, digits: np.ndarray) -> np.ndarray:
        return np.asarray(digits, dtype=np.int64) @ self._powers

    def from_digits(self, digits: Iterable[int]):
        d = np.asarray(list(digits), dtype=np.int64) % self.p
        return int(d @ self._powers[: len(d)])

    def to_digits(self, a) -> np.ndarray:
        return self.digits[np.asarray(a, dtype=np.int64)]

    # -- arithmetic --
    @staticmethod
    def _out(x):
        return int(x) if np.ndim(x) == 0 else x

    def add(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.n == 1:
            return self._out((a + b) % self.p)
        if self._add_table is not None:
            return self._out(self._add_table[a, b])
        return self._out(self._encode((self.digits[a] + self.digits[b]) % self.p))

    def neg(self, a):
        a = np.asarray(a, dtype=np.int64)
        if self.n == 1:
            return self._out((-a) % self.p)
        return self._out(self._neg[a])

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.n == 1:
            return self._out(a * b % self.p)
        la, lb = self.log[a], self.log[b]
        res = self.exp[np.where((la < 0) | (lb < 0), 0, la + lb)]
        return self._out(np.where((la < 0) | (lb < 0), 0, res))

    def inv(self, a):
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise ZeroDivisionError("inverse of zero in finite field")
        return self._out(self.exp[(self.q - 1 - self.log[a]) % (self.q - 1)])

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        a = int(a)
        if a == 0:
            if e < 0:
                raise ZeroDivisionError("negative power of zero")
            return 1 if e == 0 else 0
        return int(self.exp[(int(self.log[a]) * e) % (self.q - 1)])

    def frobenius(self, a, k: int = 1):
        """a -> a^(p^k), vectorised."""
        a = np.asarray(a, dtype=np.int64)
        e = pow(self.p, k % self.n, self.q - 1) if self.q > 2 else 1
        la = self.log[a]
        return self._out(np.where(la < 0, 0, self.exp[(la * e) % (self.q - 1)]))

    def frobenius_order(self) -> int:
        """Order of x -> x^p computed by iteration on the generator."""
        x = self.generator
        y, k = self.frobenius(x), 1
        while y != x:
            y, k = self.frobenius(y), k + 1
        return k

    def elements(self) -> range:
        return range(self.q)

    def mult_matrix(self, a: int) -> np.ndarray:
        """Matrix over F_p of d -> a*d in the polynomial basis."""
        basis = [self.from_digits([0] * j + [1]) for j in range(self.n)]
        cols = [self.to_digits(self.mul(a, b)) for b in basis]
        return np.array(cols, dtype=np.int64).T

    def subfield_generator(self, d: int) -> int:
        """Primitive element of the unique subfield of degree d."""
        if self.n % d:
            raise FieldError(f"F_{self.p}^{d} is not a subfield of {self}")
        if d == self.n:
            return self.generator
        return int(self.exp[(self.q - 1) // (self.p**d - 1)])

    def in_subfield(self, a: int, d: int) -> bool:
        return self.frobenius(a, d) == int(a)


@functools.lru_cache(maxsize=None)
def gf(p: int, n: int = 1) -> GF:
    """Cached standard field with the least primitive modulus."""
    return GF(p, n)


def _minpoly_over_prime(F: GF, beta: int) -> tuple[int, ...]:
    conj, x = [], beta
    while x not in conj:
        conj.append(x)
        x = F.frobenius(x)
    poly = [1]
    for c in conj:
        new = [0] * (len(poly) + 1)
        for i, a in enumerate(poly):
            new[i + 1] = F.add(new[i + 1], a)
            new[i] = F.sub(new[i], F.mul(a, c))
        poly = new
    if any(c >= F.p for c in poly):
        raise FieldError("minimal polynomial left the prime field")
    return tuple(int(c) for c in poly)


class FqTower:
    """Compatible family of fields F_{p^a}, a | top.

    Every level is defined by the minimal polynomial of a fixed power of the
    top field's primitive element, so embeddings compose on the nose.
    """

    def __init__(self, p: int, top: int):
        self.p, self.top = p, top
        self.top_field = gf(p, top)
        self._levels: dict[int, GF] = {}

    def degrees(self) -> list[int]:
        return [a for a in range(1, self.top + 1) if self.top % a == 0]

    def level(self, a: int) -> GF:
        if self.top % a:
            raise FieldError(f"{a} does not divide tower degree {self.top}")
        if a not in self._levels:
            if a == 1:
                self._levels[a] = gf(self.p, 1)
            elif a == self.top:
                self._levels[a] = self.top_field
            else:
                T = self.top_field
                beta = T.subfield_generator(a)
                self._levels[a] = GF(self.p, a, _minpoly_over_prime(T, beta))
        return self._levels[a]

    def embed(self, x, a: int, b: int):
        """Image of x in F_{p^a} under the tower embedding into F_{p^b}."""
        if b % a:
            raise FieldError(f"no embedding of degree {a} into degree {b}")
        x = np.asarray(x, dtype=np.int64)
        if a == 1 or a == b:
            return GF._out(x.copy())
        src, dst = self.level(a), self.level(b)
        step = (self.p**b - 1) // (self.p**a - 1)
        lx = src.log[x]
        res = np.where(lx < 0, 0, dst.exp[(lx * step) % (dst.q - 1)])
        return GF._out(res)


def expand_matrix(F: GF, M) -> np.ndarray:
    """Matrix over F_{p^n} as an (rows*n) x (cols*n) matrix over F_p."""
    M = np.asarray(M, dtype=np.int64)
    if F.n == 1:
        return M.copy()
    n = F.n
    mm = np.stack([F.mult_matrix(a) for a in range(F.q)]) if F.q <= 4096 else None
    r, c = M.shape
    out = np.zeros((r * n, c * n), dtype=np.int64)
    for i in range(r):
        for j in range(c):
            a = int(M[i, j])
            if a:
                out[i * n:(i + 1) * n, j * n:(j + 1) * n] = mm[a] if mm is not None else F.mult_matrix(a)
    return out
