"""Skew polynomial rings D[x; s] over finite fields and their finite-length modules.

D = F_{p^m} and s = Frobenius^t, so x*d = s(d)*x.  The order r of s makes
x^r central; the centre is F[x^r] with F the fixed field of s.  Modules are
stored over F_p in a basis where D acts blockwise (``d_action`` is the
matrix of the generator of D) and x acts by the semilinear ``x_action``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field as dc_field
from typing import Sequence

import numpy as np
from sympy import Poly, symbols

from .exactalg.fields import GF, gf
from .exactalg.linalg import (LinAlgError, eye, image_basis, inverse, is_invertible,
                              lin_comb, mat_pow, matmul, min_poly, nullspace, rank,
                              row_basis, rref, solve, zeros)
from .fdmod import (Inconclusive, MatrixModule, _complete_columns, decompose_mm,
                    end_data, endolength, hom_space, iso_test, residue_dim)

DEGREE_CAP = 64
ENUM_CAP = 4096


class SkewError(ValueError):
    pass


# -- the ring --

class SkewRing:
    """Gamma = D[x; s] with D = F_{p^m}, s = Frobenius^t."""

    def __init__(self, p: int, m: int = 1, twist_exp: int = 0):
        self.D = gf(p, m)
        self.p, self.m = p, m
        self.t = twist_exp % m
        g = math.gcd(m, self.t) if self.t else m
        self.fixed_degree = g
        self.r = m // g
        self.alpha = self.D.generator
        self.F_gen = self.D.subfield_generator(g)
        self._bounds: dict[tuple, "Bound"] = {}
        self._mult = {}
        self.S = np.stack([self.D.to_digits(self.s(self.D.from_digits([0] * j + [1]))) for j in range(m)]).T

    @property
    def commutative(self) -> bool:
        return self.t == 0

    @property
    def key(self) -> tuple:
        return (self.p, self.m, self.t)

    def __eq__(self, other):
        return isinstance(other, SkewRing) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        tw = "" if self.commutative else f"; Frob^{self.t}"
        return f"F_{self.p}^{self.m}[x{tw}]" if self.m > 1 else f"F_{self.p}[x]"

    def s(self, d, k: int = 1):
        return self.D.frobenius(d, (self.t * k) % self.m) if self.m > 1 else d

    def mult(self, d: int) -> np.ndarray:
        if d not in self._mult:
            self._mult[d] = self.D.mult_matrix(d)
        return self._mult[d]

    def poly(self, coeffs: Sequence[int]) -> "SkewPoly":
        return SkewPoly(self, tuple(int(c) for c in coeffs))

    @property
    def x(self) -> "SkewPoly":
        return self.poly([0, 1])

    def one(self) -> "SkewPoly":
        return self.poly([1])

    def field_json(self) -> dict:
        return {"p": self.p, "m": self.m, "twist_exp": self.t}

    def fixed_field_basis(self) -> list[int]:
        """F_p-basis of the fixed field F as elements of D."""
        D = self.D
        return [D.pow(self.F_gen, j) for j in range(self.fixed_degree)]

    def module_generators(self) -> int:
        """Rank of Gamma as a module over its centre (r^2)."""
        return self.r * self.r


@dataclass(frozen=True, eq=False)
class SkewPoly:
    ring: SkewRing
    coeffs: tuple[int, ...]

    def __post_init__(self):
        c = list(self.coeffs)
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(int(x) for x in c))
        if len(c) > DEGREE_CAP + 1:
            raise SkewError(f"degree {len(c) - 1} exceeds cap {DEGREE_CAP}")

    @property
    def deg(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lead(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_unit(self) -> bool:
        return self.deg == 0

    def __eq__(self, other):
        return isinstance(other, SkewPoly) and self.ring == other.ring and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.ring.key, self.coeffs))

    def __repr__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                mon = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
                coef = str(c) if (c != 1 or i == 0) else ""
                terms.append(f"{coef}{'*' if coef and mon else ''}{mon}")
        return " + ".join(reversed(terms))

    def __add__(self, other: "SkewPoly") -> "SkewPoly":
        D = self.ring.D
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [0] * (n - len(self.coeffs))
        b = list(other.coeffs) + [0] * (n - len(other.coeffs))
        return SkewPoly(self.ring, tuple(D.add(x, y) for x, y in zip(a, b)))

    def __neg__(self) -> "SkewPoly":
        return SkewPoly(self.ring, tuple(self.ring.D.neg(c) for c in self.coeffs))

    def __sub__(self, other: "SkewPoly") -> "SkewPoly":
        return self + (-other)

    def __mul__(self, other: "SkewPoly") -> "SkewPoly":
        R, D = self.ring, self.ring.D
        if not self.coeffs or not other.coeffs:
            return SkewPoly(R, ())
        out = [0] * (self.deg + other.deg + 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        out[i + j] = D.add(out[i + j], D.mul(a, R.s(b, i)))
        return SkewPoly(R, tuple(out))

    def scale_left(self, c: int) -> "SkewPoly":
        D = self.ring.D
        return SkewPoly(self.ring, tuple(D.mul(c, a) for a in self.coeffs))

    def monic(self) -> "SkewPoly":
        if not self.coeffs:
            raise SkewError("zero polynomial has no monic associate")
        return self.scale_left(self.ring.D.inv(self.lead))

    def divmod_right(self, g: "SkewPoly") -> tuple["SkewPoly", "SkewPoly"]:
        """(q, r) with self = q*g + r and deg r < deg g."""
        R, D = self.ring, self.ring.D
        if g.is_zero():
            raise ZeroDivisionError("division by zero skew polynomial")
        rem = list(self.coeffs)
        q = [0] * max(0, self.deg - g.deg + 1)
        while len(rem) - 1 >= g.deg and rem:
            k = len(rem) - 1 - g.deg
            c = D.div(rem[-1], R.s(g.lead, k))
            q[k] = c
            term = SkewPoly(R, tuple([0] * k + [c])) * g
            rem = list((SkewPoly(R, tuple(rem)) - term).coeffs)
        return SkewPoly(R, tuple(q)), SkewPoly(R, tuple(rem))

    def divmod_left(self, g: "SkewPoly") -> tuple["SkewPoly", "SkewPoly"]:
        """(q, r) with self = g*q + r and deg r < deg g."""
        R, D = self.ring, self.ring.D
        if g.is_zero():
            raise ZeroDivisionError("division by zero skew polynomial")
        rem = list(self.coeffs)
        q = [0] * max(0, self.deg - g.deg + 1)
        while len(rem) - 1 >= g.deg and rem:
            k = len(rem) - 1 - g.deg
            c = R.s(D.div(rem[-1], g.lead), -g.deg) if R.m > 1 else D.div(rem[-1], g.lead)
            q[k] = c
            term = g * SkewPoly(R, tuple([0] * k + [c]))
            rem = list((SkewPoly(R, tuple(rem)) - term).coeffs)
        return SkewPoly(R, tuple(q)), SkewPoly(R, tuple(rem))

    def right_divides(self, f: "SkewPoly") -> bool:
        """True if f is in Gamma*self."""
        return f.divmod_right(self)[1].is_zero()

    def is_two_sided(self) -> bool:
        """Gamma*b = b*Gamma, checked on the generators x and alpha of Gamma."""
        R = self.ring
        return (self.right_divides(self * R.x)
                and self.right_divides(self * R.poly([R.alpha])))

    def is_central(self) -> bool:
        R = self.ring
        return all(self * g == g * self for g in (R.x, R.poly([R.alpha])))

    def power(self, n: int) -> "SkewPoly":
        out = self.ring.one()
        for _ in range(n):
            out = out * self
        return out

    def to_json(self) -> dict:
        D = self.ring.D
        return {**self.ring.field_json(), "coeffs": [D.to_digits(c).tolist() for c in self.coeffs]}

    @classmethod
    def from_json(cls, data: dict) -> "SkewPoly":
        R = SkewRing(int(data["p"]), int(data.get("m", 1)), int(data.get("twist_exp", 0)))
        D = R.D
        return R.poly([D.from_digits(c) if isinstance(c, list) else int(c) for c in data["coeffs"]])


# -- polynomials over a finite field (commutative), used for the centre --

def _ptrim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def fpoly_mul(F: GF, a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = F.add(out[i + j], F.mul(x, y))
    return _ptrim(out)


def fpoly_divmod(F: GF, a, b):
    a, b = _ptrim(a), _ptrim(b)
    q = [0] * max(0, len(a) - len(b) + 1)
    inv = F.inv(b[-1])
    while len(a) >= len(b) and a:
        k = len(a) - len(b)
        c = F.mul(a[-1], inv)
        q[k] = c
        for j, y in enumerate(b):
            a[k + j] = F.sub(a[k + j], F.mul(c, y))
        a = _ptrim(a)
    return _ptrim(q), a


def fpoly_gcd(F: GF, a, b):
    a, b = _ptrim(a), _ptrim(b)
    while b:
        a, b = b, fpoly_divmod(F, a, b)[1]
    if a:
        inv = F.inv(a[-1])
        a = [F.mul(inv, c) for c in a]
    return a


def fpoly_powmod(F: GF, base, e: int, mod):
    out = [1]
    base = fpoly_divmod(F, base, mod)[1]
    while e:
        if e & 1:
            out = fpoly_divmod(F, fpoly_mul(F, out, base), mod)[1]
        base = fpoly_divmod(F, fpoly_mul(F, base, base), mod)[1]
        e >>= 1
    return out


def fpoly_is_irreducible(F: GF, f) -> bool:
    """Rabin's test over F (f monic)."""
    f = _ptrim(f)
    k = len(f) - 1
    if k < 1:
        return False
    if k == 1:
        return True
    q = F.q
    y = [0, 1]

    def frob_pow(j):
        out = y
        for _ in range(j):
            out = fpoly_powmod(F, out, q, f)
        return out

    if _ptrim(fpoly_divmod(F, _psub(F, frob_pow(k), y), f)[1]):
        return False
    for ell in _prime_factors(k):
        h = _psub(F, frob_pow(k // ell), y)
        if len(fpoly_gcd(F, f, h)) != 1:
            return False
    return True


def _psub(F: GF, a, b):
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return _ptrim([F.sub(x, y) for x, y in zip(a, b)])


def _prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def monic_irreducibles(F: GF, k: int):
    """Monic irreducible polynomials of degree k over F, in lexicographic order."""
    if k == 1:
        for a in range(F.q):
            yield [F.neg(a), 1]
        return
    for code in range(F.q ** k):
        low = [(code // F.q ** j) % F.q for j in range(k)]
        if low[0] == 0:
            continue
        f = low + [1]
        if fpoly_is_irreducible(F, f):
            yield f


# -- modules --

@dataclass(frozen=True, eq=False)
class PidModule:
    """Finite-length left Gamma-module as F_p matrices (x_action, d_action)."""
    ring: SkewRing
    x_action: np.ndarray
    d_action: np.ndarray | None = None
    label: str = ""
    atom: "Atom | None" = None
    length: int | None = None
    _cache: dict = dc_field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        X = np.asarray(self.x_action, dtype=np.int64)
        if X.ndim != 2 or X.shape[0] != X.shape[1] or X.shape[0] % self.ring.m:
            raise SkewError(f"x_action of shape {X.shape} is not a D-space operator")
        A = self.d_action
        if A is None:
            A = _blockdiag_mult(self.ring, self.ring.alpha, X.shape[0] // self.ring.m)
        A = np.asarray(A, dtype=np.int64)
        X.setflags(write=False)
        A.setflags(write=False)
        object.__setattr__(self, "x_action", X)
        object.__setattr__(self, "d_action", A)

    @property
    def dim(self) -> int:
        """Dimension over the prime field."""
        return self.x_action.shape[0]

    @property
    def dim_D(self) -> int:
        return self.dim // self.ring.m

    def check(self) -> bool:
        """X (alpha v) = s(alpha) X v, and alpha acts with alpha's minimal polynomial."""
        R = self.ring
        F = R.D.prime_field
        X, A = self.x_action, self.d_action
        sA = self.act_scalar(R.s(R.alpha))
        if not np.array_equal(matmul(X, A, F), matmul(sA, X, F)):
            return False
        mu = min_poly(R.mult(R.alpha), F)
        from .exactalg.linalg import poly_eval_matrix
        return not np.any(poly_eval_matrix(mu, A, F))

    def act_scalar(self, d: int) -> np.ndarray:
        """Matrix of d in D, as a polynomial in the generator's action."""
        R = self.ring
        F = R.D.prime_field
        if d == 0:
            return zeros(self.dim, self.dim)
        k = int(R.D.log[d])
        return mat_pow(self.d_action, k, F)

    def act(self, f: SkewPoly) -> np.ndarray:
        """Left multiplication by f."""
        F = self.ring.D.prime_field
        out = zeros(self.dim, self.dim)
        for c in reversed(f.coeffs):
            out = matmul(self.x_action, out, F)
            if c:
                out = (out + self.act_scalar(c)) % F.p
        return out

    def matrix_module(self) -> MatrixModule:
        if "mm" not in self._cache:
            F = self.ring.D.prime_field
            self._cache["mm"] = MatrixModule(F, np.stack([self.x_action, self.d_action]),
                                             (0, self.dim), eye(self.dim), 1)
        return self._cache["mm"]

    def submodule(self, cols: np.ndarray) -> "PidModule":
        X = self.matrix_module().subquotient(cols)
        return PidModule(self.ring, X.gens[0], X.gens[1], self.label)

    def quotient(self, cols: np.ndarray) -> tuple["PidModule", np.ndarray]:
        """Quotient by an invariant subspace and the quotient map."""
        F = self.ring.D.prime_field
        cols = np.asarray(cols, dtype=np.int64).reshape(self.dim, -1)
        k = cols.shape[1]
        comp = _complete_columns(cols, F)
        P = np.concatenate([cols, comp], axis=1)
        Pi = inverse(P, F)
        mats = []
        for G in (self.x_action, self.d_action):
            B = matmul(matmul(Pi, G, F), P, F)
            if np.any(B[k:, :k]):
                raise SkewError("subspace is not invariant")
            mats.append(B[k:, k:])
        return PidModule(self.ring, mats[0], mats[1], self.label), Pi[k:]

    def to_json(self) -> dict:
        return {"dim": self.dim, "x_action": self.x_action.tolist(),
                "d_action": self.d_action.tolist(), "field": self.ring.field_json(),
                "label": self.label}

    @classmethod
    def from_json(cls, data: dict) -> "PidModule":
        f = data["field"]
        R = SkewRing(int(f["p"]), int(f.get("m", 1)), int(f.get("twist_exp", 0)))
        M = cls(R, np.array(data["x_action"], dtype=np.int64),
                np.array(data["d_action"], dtype=np.int64) if data.get("d_action") is not None else None,
                data.get("label", ""))
        if not M.check():
            raise SkewError("x_action is not compatible with the twist")
        return M


def _blockdiag_mult(R: SkewRing, d: int, k: int) -> np.ndarray:
    m = R.m
    out = zeros(k * m, k * m)
    B = R.mult(d)
    for i in range(k):
        out[i * m:(i + 1) * m, i * m:(i + 1) * m] = B
    return out


def direct_sum(*mods: PidModule) -> PidModule:
    from .exactalg.linalg import block_diag
    R = mods[0].ring
    return PidModule(R, block_diag(*[M.x_action for M in mods]), block_diag(*[M.d_action for M in mods]),
                     "+".join(M.label for M in mods if M.label))


def cyclic_module(f: SkewPoly) -> PidModule:
    """Gamma / Gamma f in the D-basis 1, x, ..., x^(d-1)."""
    R = f.ring
    f = f.monic()
    d, m = f.deg, R.m
    if d < 1:
        raise SkewError("Gamma/Gamma f needs deg f >= 1")
    F = R.D.prime_field
    X = zeros(d * m, d * m)
    for i in range(d - 1):
        X[(i + 1) * m:(i + 2) * m, i * m:(i + 1) * m] = R.S
    # x * (c x^(d-1)) = s(c) x^d = -sum_j s(c) f_j x^j
    for j, fj in enumerate(f.coeffs[:-1]):
        if fj:
            blk = matmul(R.mult(R.D.neg(fj)), R.S, F)
            X[j * m:(j + 1) * m, (d - 1) * m:d * m] = blk
    return PidModule(R, X, None, f"G/G({f!r})")


def _module_vector_to_poly(R: SkewRing, v: np.ndarray) -> SkewPoly:
    m = R.m
    return R.poly([R.D.from_digits(v[i * m:(i + 1) * m]) for i in range(len(v) // m)])


def _spin(M: PidModule, vecs: np.ndarray) -> np.ndarray:
    """Columns spanning the submodule generated by the given columns."""
    F = M.ring.D.prime_field
    gens = (M.x_action, M.d_action)
    B = row_basis(np.asarray(vecs, dtype=np.int64).T, F)
    while True:
        new = np.vstack([B] + [matmul(G, B.T, F).T for G in gens])
        B2 = row_basis(new, F)
        if B2.shape[0] == B.shape[0]:
            return B2.T
        B = B2


def _simple_submodule(M: PidModule, seed: int = 0) -> np.ndarray:
    """Columns spanning some simple submodule of M."""
    R = M.ring
    F = R.D.prime_field
    Y = mat_pow(M.x_action, R.r, F)
    mu = min_poly(Y, F)
    y = symbols("y")
    facs = Poly(list(reversed(mu)), y, modulus=F.p).factor_list()[1]
    facs = sorted(([int(c) % F.p for c in reversed(fac.all_coeffs())] for fac, _ in facs), key=lambda c: (len(c), c))
    q = facs[0]
    from .exactalg.linalg import poly_eval_matrix
    if q == [0, 1]:
        K = nullspace(M.x_action, F)  # rows
        v = K[0]
        return _spin(M, v[:, None])
    W = nullspace(poly_eval_matrix(q, Y, F), F).T
    C = _spin(M, W[:, :1])
    sub = M.submodule(C)
    parts = decompose_mm(sub.matrix_module(), seed)
    part = min(parts, key=lambda X: X.dim)
    return matmul(C, part.to_orig, F)


def _min_monic_in_subspace(R: SkewRing, cols: np.ndarray) -> SkewPoly:
    """Monic element of least degree in a D-subspace of Gamma/Gamma f (given by F_p columns)."""
    D, m = R.D, R.m
    vecs = cols.T
    n = vecs.shape[1] // m
    Dvecs = np.array([[D.from_digits(v[i * m:(i + 1) * m]) for i in range(n)] for v in vecs], dtype=np.int64)
    rev = Dvecs[:, ::-1]
    E, piv = rref(rev, D)
    row = E[len(piv) - 1][::-1]
    h = R.poly(row.tolist())
    return h.monic()


@dataclass(frozen=True, eq=False)
class Atom:
    poly: SkewPoly

    @property
    def ring(self) -> SkewRing:
        return self.poly.ring

    @property
    def deg(self) -> int:
        return self.poly.deg

    def __repr__(self):
        return f"Atom({self.poly!r})"

    def __eq__(self, other):
        return isinstance(other, Atom) and self.poly == other.poly

    def __hash__(self):
        return hash(self.poly)

    def bound(self) -> "Bound":
        return center_and_bound(self)

    @property
    def key(self) -> tuple:
        """Similarity-class key: the central polynomial z of the bound."""
        return self.bound().z_key


def is_atom(f: SkewPoly) -> bool:
    """Gamma/Gamma f is simple: Y = x^r acts semisimply-isotypically and End is local,
    or f is a degree-1 element of the x-class."""
    if f.deg < 1:
        return False
    R = f.ring
    M = cyclic_module(f)
    F = R.D.prime_field
    Y = mat_pow(M.x_action, R.r, F)
    mu = min_poly(Y, F)
    y = symbols("y")
    fl = Poly(list(reversed(mu)), y, modulus=F.p).factor_list()[1]
    if len(fl) != 1 or fl[0][1] != 1:
        return False
    if fl[0][0].degree() == 1 and int(fl[0][0].all_coeffs()[-1]) % F.p == 0:
        return f.deg == 1 and not np.any(M.x_action)
    return end_data(M).is_local


def atom_factor(f: SkewPoly, seed: int = 0) -> list[Atom]:
    """f = u * p_1 * ... * p_s with u a unit and monic atoms p_i (left to right)."""
    if f.is_zero() or f.is_unit():
        raise SkewError("atom_factor needs a non-zero non-unit")
    if f.deg > DEGREE_CAP:
        raise SkewError(f"degree {f.deg} exceeds cap {DEGREE_CAP}")
    R = f.ring
    g = f.monic()
    out: list[Atom] = []
    while g.deg >= 1:
        M = cyclic_module(g)
        S = _simple_submodule(M, seed)
        if S.shape[1] == M.dim:
            out.append(Atom(g))
            break
        h = _min_monic_in_subspace(R, S)
        left, rem = g.divmod_right(h)
        if not rem.is_zero():
            raise SkewError("internal: submodule generator does not right-divide")
        out.append(Atom(left.monic()))
        g = h
    return out


def multiply_atoms(atoms: Sequence[Atom]) -> SkewPoly:
    out = atoms[0].ring.one()
    for a in atoms:
        out = out * a.poly
    return out


@dataclass(frozen=True)
class Bound:
    """Centre/bound data of an atom p."""
    z: tuple[int, ...]         # central polynomial in y = x^r over F (coeffs in D)
    central: SkewPoly          # z(x^r)
    b: SkewPoly                # two-sided generator of the maximal ideal over p
    length: int                # l_Z(Z/I), I = Z z
    module_generators: int     # r^2

    @property
    def z_key(self) -> tuple:
        return self.z


def _central_minpoly(M: PidModule) -> list[int]:
    """Minimal polynomial over F of Y = X^r acting on M (coefficients in D)."""
    R = M.ring
    D = R.D
    F = D.prime_field
    Y = mat_pow(M.x_action, R.r, F)
    basis_F = R.fixed_field_basis()
    scal = [M.act_scalar(c) for c in basis_F]
    powers = [eye(M.dim)]
    for k in range(1, M.dim + 1):
        powers.append(matmul(powers[-1], Y, F))
        cols = np.stack([matmul(sc, P, F).reshape(-1) for P in powers[:-1] for sc in scal]).T
        sol = solve(cols, powers[-1].reshape(-1), F)
        if sol.consistent:
            lam = sol.particular.reshape(k, len(scal))
            z = []
            for i in range(k):
                c = 0
                for j, cj in enumerate(basis_F):
                    if lam[i, j]:
                        c = D.add(c, D.mul(int(lam[i, j]), cj))
                z.append(D.neg(c))
            return z + [1]
    raise SkewError("no central minimal polynomial found")


def center_and_bound(p: Atom) -> Bound:
    R = p.ring
    key = p.poly.coeffs
    if key in R._bounds:
        return R._bounds[key]
    M = cyclic_module(p.poly)
    z = _central_minpoly(M)
    coeffs = [0] * ((len(z) - 1) * R.r + 1)
    for i, c in enumerate(z):
        coeffs[i * R.r] = c
    central = R.poly(coeffs)
    if z == [0, 1]:
        b = R.x
    else:
        b = central
    if not central.is_central() or not b.is_two_sided():
        raise SkewError("bound is not two-sided")
    if not p.poly.right_divides(b):
        raise SkewError("atom does not right-divide its bound")
    out = Bound(tuple(z), central, b, 1, R.module_generators())
    R._bounds[key] = out
    return out


def similar(p: Atom, q: Atom) -> bool:
    """Gamma/Gamma p ~ Gamma/Gamma q."""
    if p.ring != q.ring:
        raise SkewError("atoms over different rings")
    if p.poly == q.poly:
        return True
    if p.key != q.key:
        return False
    return hom_space(cyclic_module(p.poly), cyclic_module(q.poly)).shape[0] > 0


def canonical_atom(p: Atom) -> Atom:
    """Lexicographically least monic atom of minimal degree similar to p."""
    R = p.ring
    if R.commutative:
        return p
    b = p.bound().b
    best_deg = p.deg
    for d in range(1, p.deg + 1):
        count = R.D.q ** d
        if count > ENUM_CAP:
            break
        for code in range(count):
            low = [(code // R.D.q ** j) % R.D.q for j in range(d)]
            cand = R.poly(low + [1])
            if cand.right_divides(b) and is_atom(cand):
                a = Atom(cand)
                if similar(a, p):
                    return a
        if d == best_deg:
            break
    return p


def list_atoms(R: SkewRing, max_deg: int, canonical: bool = True) -> list[Atom]:
    """Representatives of the similarity classes of atoms of degree <= max_deg."""
    out: list[Atom] = [Atom(R.x)]
    Ffix = gf(R.p, R.fixed_degree)
    embed = _fixed_field_embedding(R)
    for k in range(1, R.r * max_deg + 1):
        for z in monic_irreducibles(Ffix, k):
            if z == [0, 1]:
                continue
            zD = [embed[c] for c in z]
            coeffs = [0] * (k * R.r + 1)
            for i, c in enumerate(zD):
                coeffs[i * R.r] = c
            central = R.poly(coeffs)
            if R.commutative:
                a = Atom(central)
            else:
                a = atom_factor(central)[-1]
                if canonical:
                    a = canonical_atom(a)
            if a.deg <= max_deg:
                out.append(a)
    out.sort(key=lambda a: (a.deg, a.poly.coeffs[::-1]))
    return out


def _fixed_field_embedding(R: SkewRing) -> list[int]:
    """Map from the standard F_{p^g} to the fixed field inside D."""
    g = R.fixed_degree
    Ffix = gf(R.p, g)
    D = R.D
    if g == R.m:
        return list(range(D.q))
    if g == 1:
        return list(range(R.p))
    # send the generator of Ffix to a root of its modulus inside the fixed field of D
    mod = Ffix.modulus
    gamma = None
    for c in range(D.q):
        if D.frobenius(c, g) != c:
            continue
        acc, pw = 0, 1
        for a in mod:
            acc = D.add(acc, D.mul(a, pw))
            pw = D.mul(pw, c)
        if acc == 0:
            gamma = c
            break
    emb = [0] * Ffix.q
    for e in range(Ffix.q):
        if e == 0:
            continue
        emb[e] = D.pow(gamma, int(Ffix.log[e]))
    return emb


def indec_module(p: Atom, n: int, seed: int = 0) -> PidModule:
    """E_n^p: the indecomposable of length n with composition factors ~ Gamma/Gamma p."""
    if n < 1:
        raise SkewError("length must be positive")
    R = p.ring
    if n * p.deg * R.m > 256:
        raise SkewError(f"E_{n} of degree-{p.deg} atom exceeds the dimension cap")
    bd = p.bound()
    if R.commutative or bd.b == R.x:
        M = cyclic_module(bd.b.power(n) if bd.b == R.x else p.poly.power(n))
    else:
        big = cyclic_module(bd.b.power(n))
        parts = decompose_mm(big.matrix_module(), seed)
        part = parts[0]
        M = big.submodule(part.to_orig)
    if M.dim != n * p.deg * R.m:
        raise SkewError("internal: E_n has the wrong dimension")
    return PidModule(R, M.x_action, M.d_action, f"E_{n}[{p.poly!r}]", p, n)


def socle(M: PidModule) -> np.ndarray:
    """Columns spanning the socle (sum of simple submodules)."""
    R = M.ring
    F = R.D.prime_field
    Y = mat_pow(M.x_action, R.r, F)
    mu = min_poly(Y, F)
    y = symbols("y")
    facs = Poly(list(reversed(mu)), y, modulus=F.p).factor_list()[1]
    from .exactalg.linalg import poly_eval_matrix
    rad_poly = [1]
    for fac, _ in facs:
        c = [int(x) % F.p for x in reversed(fac.all_coeffs())]
        rad_poly = _pmul_p(rad_poly, c, F.p)
    if rad_poly == [0, 1]:
        return nullspace(M.x_action, F).T
    K = nullspace(poly_eval_matrix(rad_poly, Y, F), F).T
    # within the q(Y)-kernel the module is semisimple, except the x-part where X must vanish
    if facs and any(fac.degree() == 1 and int(fac.all_coeffs()[-1]) % F.p == 0 for fac, _ in facs):
        Kx = nullspace(M.x_action, F)
        other = [f for f, _ in facs if not (f.degree() == 1 and int(f.all_coeffs()[-1]) % F.p == 0)]
        rp = [1]
        for fac in other:
            rp = _pmul_p(rp, [int(x) % F.p for x in reversed(fac.all_coeffs())], F.p)
        Ko = nullspace(poly_eval_matrix(rp, Y, F), F) if len(rp) > 1 else zeros(0, M.dim)
        return row_basis(np.vstack([Kx, Ko]), F).T
    return K


def _pmul_p(a, b, p):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = (out[i + j] + x * y) % p
    return out


# -- almost split sequences --

@dataclass(frozen=True, eq=False)
class AlmostSplitSeq:
    left: PidModule
    middle: PidModule
    right: PidModule
    iota: np.ndarray
    pi: np.ndarray
    middle_parts: tuple[PidModule, ...]

    def is_exact(self) -> bool:
        F = self.left.ring.D.prime_field
        return (rank(self.iota, F) == self.left.dim
                and rank(self.pi, F) == self.right.dim
                and not np.any(matmul(self.pi, self.iota, F))
                and self.middle.dim == self.left.dim + self.right.dim)

    def maps_are_homs(self) -> bool:
        F = self.left.ring.D.prime_field
        ok = True
        for G in ("x_action", "d_action"):
            ok &= np.array_equal(matmul(self.iota, getattr(self.left, G), F),
                                 matmul(getattr(self.middle, G), self.iota, F))
            ok &= np.array_equal(matmul(self.pi, getattr(self.middle, G), F),
                                 matmul(getattr(self.right, G), self.pi, F))
        return bool(ok)

    def splits(self) -> bool:
        """Is there a section s with pi s = id?  Solved as a linear system over Hom(right, middle)."""
        F = self.left.ring.D.prime_field
        H = hom_space(self.right, self.middle)
        if H.shape[0] == 0:
            return False
        cols = np.stack([matmul(self.pi, h, F).reshape(-1) for h in H]).T
        return solve(cols, eye(self.right.dim).reshape(-1), F).consistent

    def lifts(self, M: PidModule, maps: np.ndarray) -> bool:
        """Every map in the span of ``maps`` (M -> right) factors through pi."""
        F = self.left.ring.D.prime_field
        if len(maps) == 0:
            return True
        H = hom_space(M, self.middle)
        img = np.stack([matmul(self.pi, h, F).reshape(-1) for h in H]) if len(H) else zeros(0, self.right.dim * M.dim)
        tgt = np.stack([f.reshape(-1) for f in maps])
        if img.shape[0] == 0:
            return not np.any(tgt)
        return rank(np.vstack([img, tgt]), F) == rank(img, F)

    def right_almost_split_against(self, M: PidModule) -> bool:
        """Non-retractions M -> right factor through pi (M indecomposable)."""
        F = self.left.ring.D.prime_field
        H = hom_space(M, self.right)
        if len(H) == 0:
            return True
        if iso_test(M, self.right):
            ed = end_data(self.right)
            # rad End(right) in module coordinates, transported to Hom(M, right) via an iso
            iso = next(h for h in _combos(H, F) if is_invertible(h, F))
            rad = [lin_comb(v, ed.basis, F, (self.right.dim, self.right.dim)) for v in ed.radical]
            maps = [matmul(r, iso, F) for r in rad]
            return self.lifts(M, np.array(maps) if maps else np.zeros((0,) + H.shape[1:], dtype=np.int64))
        return self.lifts(M, H)


def _combos(H: np.ndarray, F: GF, tries: int = 256, seed: int = 0):
    yield from H
    rng = np.random.default_rng(seed)
    for _ in range(tries):
        yield lin_comb(rng.integers(0, F.p, len(H)), H, F, H.shape[1:])


def _find_map(H: np.ndarray, F: GF, want_rank: int):
    for h in _combos(H, F):
        if rank(h, F) == want_rank:
            return h
    raise Inconclusive("no map of the requested rank found")


def ar_sequence(p: Atom, n: int, seed: int = 0) -> AlmostSplitSeq:
    """0 -> E_n -> E_{n+1} (+) E_{n-1} -> E_n -> 0."""
    R = p.ring
    F = R.D.prime_field
    En = indec_module(p, n, seed)
    Enp = indec_module(p, n + 1, seed)
    alpha = _find_map(hom_space(En, Enp), F, En.dim)
    if n == 1:
        mid = Enp
        parts = (Enp,)
        iota = alpha
    else:
        Enm = indec_module(p, n - 1, seed)
        beta = _find_map(hom_space(En, Enm), F, Enm.dim)
        mid = direct_sum(Enp, Enm)
        parts = (Enp, Enm)
        iota = np.vstack([alpha, beta])
    Q, qmap = mid.quotient(iota)
    iso = _find_map(hom_space(Q, En), F, En.dim)
    pi = matmul(iso, qmap, F)
    return AlmostSplitSeq(En, mid, En, iota, pi, parts)


# -- localisation --

def localization_survivors(b: SkewPoly, modules: Sequence[PidModule]) -> list[PidModule]:
    """Modules on which left multiplication by the two-sided element b is invertible."""
    if not b.is_two_sided():
        raise SkewError("b is not two-sided")
    if b.is_unit():
        raise SkewError("b is a unit; nothing is localised")
    F = b.ring.D.prime_field
    return [M for M in modules if is_invertible(M.act(b), F)]


def module_length(M: PidModule) -> int:
    """Composition length, from the dimensions of the socle series."""
    F = M.ring.D.prime_field
    total, cur = 0, M
    n = 0
    while cur.dim:
        S = socle(cur)
        if S.shape[1] == 0:
            raise SkewError("empty socle")
        n += _semisimple_length(cur.submodule(S))
        cur, _ = cur.quotient(S)
    return n


def _semisimple_length(M: PidModule) -> int:
    return len(decompose_mm(M.matrix_module()))
