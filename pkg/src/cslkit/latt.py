"""Exact full-rank lattices in Q^d.

A lattice is stored as a rational scale times an integer matrix in Hermite
normal form. Basis vectors are the rows; the HNF is upper triangular with a
positive diagonal, and every entry above a pivot lies in [0, pivot). The
content of the integer matrix is pulled into the scale, so two lattices are
equal exactly when (scale, H) agree.

Rotations act on column vectors, x -> R x.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import reduce
from itertools import product
from typing import Iterator, Sequence

from . import arith

Matrix = Sequence[Sequence]


class LatticeError(ValueError):
    pass


class NotSublattice(LatticeError):
    pass


class NotCoincidence(LatticeError):
    pass


# ---------------------------------------------------------------------------
# small exact matrix helpers

def _lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


def frac_matrix(M: Matrix) -> list[list[Fraction]]:
    return [[Fraction(x) for x in row] for row in M]


def mat_mul(A: Matrix, B: Matrix) -> list[list]:
    Bt = list(zip(*B))
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def mat_vec(A: Matrix, v: Sequence) -> list:
    return [sum(a * b for a, b in zip(row, v)) for row in A]


def transpose(A: Matrix) -> list[list]:
    return [list(r) for r in zip(*A)]


def identity(d: int) -> list[list[int]]:
    return [[int(i == j) for j in range(d)] for i in range(d)]


def det(M: Matrix) -> Fraction:
    A = frac_matrix(M)
    n = len(A)
    out = Fraction(1)
    for j in range(n):
        piv = next((i for i in range(j, n) if A[i][j] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != j:
            A[j], A[piv] = A[piv], A[j]
            out = -out
        out *= A[j][j]
        for i in range(j + 1, n):
            if A[i][j]:
                f = A[i][j] / A[j][j]
                A[i] = [x - f * y for x, y in zip(A[i], A[j])]
    return out


def inverse(M: Matrix) -> list[list[Fraction]]:
    n = len(M)
    A = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(frac_matrix(M))]
    for j in range(n):
        piv = next((i for i in range(j, n) if A[i][j] != 0), None)
        if piv is None:
            raise LatticeError("singular matrix")
        A[j], A[piv] = A[piv], A[j]
        pv = A[j][j]
        A[j] = [x / pv for x in A[j]]
        for i in range(n):
            if i != j and A[i][j]:
                f = A[i][j]
                A[i] = [x - f * y for x, y in zip(A[i], A[j])]
    return [row[n:] for row in A]


def is_orthogonal(R: Matrix) -> bool:
    d = len(R)
    return mat_mul(transpose(R), R) == identity(d)


class RotationMatrix:
    """Exact orthogonal matrix with rational entries."""

    def __init__(self, m: Matrix, check: bool = True):
        self.m = tuple(tuple(Fraction(x) for x in row) for row in m)
        self.d = len(self.m)
        if check and not is_orthogonal(self.m):
            raise LatticeError("matrix is not orthogonal")

    @property
    def det(self) -> int:
        return int(det(self.m))

    def inverse(self) -> "RotationMatrix":
        return RotationMatrix(transpose(self.m), check=False)

    def __matmul__(self, other: "RotationMatrix") -> "RotationMatrix":
        return RotationMatrix(mat_mul(self.m, other.m), check=False)

    def __eq__(self, other) -> bool:
        return isinstance(other, RotationMatrix) and self.m == other.m

    def __hash__(self) -> int:
        return hash(self.m)

    def __repr__(self) -> str:
        return f"RotationMatrix({[[str(x) for x in r] for r in self.m]})"


def _as_matrix(R) -> tuple:
    if isinstance(R, RotationMatrix):
        return R.m
    out = []
    for row in R:
        r = []
        for x in row:
            if isinstance(x, (int, Fraction)):
                r.append(Fraction(x))
            else:
                try:
                    r.append(Fraction(x))
                except (TypeError, ValueError):
                    raise NotCoincidence(f"irrational matrix entry {x!r}") from None
        out.append(tuple(r))
    return tuple(out)


# ---------------------------------------------------------------------------
# Hermite normal form

def hnf_int(rows: Sequence[Sequence[int]], d: int) -> list[list[int]]:
    """Row HNF of an integer generator matrix of rank d (upper triangular)."""
    A = [list(map(int, r)) for r in rows if any(r)]
    out = []
    for j in range(d):
        # gather rows with nonzero entry in column j
        while True:
            nz = [i for i, r in enumerate(A) if r[j] != 0]
            if not nz:
                raise LatticeError("generators do not span full rank")
            k = min(nz, key=lambda i: abs(A[i][j]))
            piv = A[k]
            done = True
            for i in nz:
                if i != k:
                    q = A[i][j] // piv[j]
                    A[i] = [x - q * y for x, y in zip(A[i], piv)]
                    if A[i][j]:
                        done = False
            if done:
                break
        piv = A.pop(k)
        if piv[j] < 0:
            piv = [-x for x in piv]
        A = [r for r in A if any(r)]
        out.append(piv)
    for j in range(d):
        pj = out[j][j]
        for i in range(j):
            q = out[i][j] // pj
            if q:
                out[i] = [x - q * y for x, y in zip(out[i], out[j])]
    return out


class Lattice:
    """Full-rank lattice scale * rowspan(H) with H in canonical HNF."""

    __slots__ = ("d", "scale", "H", "_hash")

    def __init__(self, scale: Fraction, H: Sequence[Sequence[int]], _canonical: bool = False):
        H = [list(map(int, r)) for r in H]
        scale = Fraction(scale)
        if not _canonical:
            H = hnf_int(H, len(H[0]))
        g = reduce(math.gcd, (x for r in H for x in r), 0)
        if g > 1:
            H = [[x // g for x in r] for r in H]
            scale *= g
        if scale <= 0:
            raise LatticeError("scale must be positive")
        self.d = len(H)
        self.scale = scale
        self.H = tuple(tuple(r) for r in H)
        self._hash = hash((self.scale, self.H))

    # canonical identity
    def key(self) -> tuple:
        return (self.scale, self.H)

    def __eq__(self, other) -> bool:
        return isinstance(other, Lattice) and self.scale == other.scale and self.H == other.H

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"Lattice(scale={self.scale}, H={[list(r) for r in self.H]})"

    @property
    def basis(self) -> list[list[Fraction]]:
        return [[self.scale * x for x in r] for r in self.H]

    @property
    def det(self) -> Fraction:
        out = self.scale ** self.d
        for i in range(self.d):
            out *= self.H[i][i]
        return out

    def to_json(self) -> dict:
        return {"d": self.d, "hnf": [list(r) for r in self.H], "scale": str(self.scale)}

    @classmethod
    def from_json(cls, obj: dict) -> "Lattice":
        return cls(Fraction(obj["scale"]), obj["hnf"])

    def scaled(self, c) -> "Lattice":
        return Lattice(self.scale * Fraction(c), self.H, _canonical=True)

    def coords(self, v: Sequence) -> list[Fraction] | None:
        """Coordinates of v in the basis (None if v is not in the Q-span...)."""
        w = [Fraction(x) / self.scale for x in v]
        c = []
        for j in range(self.d):
            cj = w[j] / self.H[j][j]
            c.append(cj)
            if cj:
                w = [x - cj * y for x, y in zip(w, self.H[j])]
        return c

    def contains(self, v: Sequence) -> bool:
        return all(x.denominator == 1 for x in self.coords(v))

    def contains_lattice(self, other: "Lattice") -> bool:
        return all(self.contains(b) for b in other.basis)

    def integer_rows(self) -> tuple[int, list[list[int]]]:
        """(D, M) with basis = M / D and M integral."""
        D = self.scale.denominator
        n = self.scale.numerator
        return D, [[n * x for x in r] for r in self.H]

    def __contains__(self, v) -> bool:
        return self.contains(v)


def hnf(gens: Sequence[Sequence], d: int | None = None) -> Lattice:
    """Canonical lattice generated by a list of rational vectors."""
    gens = [list(g) for g in gens]
    if not gens:
        raise LatticeError("no generators")
    if d is None:
        d = len(gens[0])
    D = 1
    for g in gens:
        for x in g:
            if isinstance(x, Fraction):
                D = _lcm(D, x.denominator)
            elif not isinstance(x, int):
                x = Fraction(x)
                D = _lcm(D, x.denominator)
    rows = [[int(Fraction(x) * D) for x in g] for g in gens]
    return Lattice(Fraction(1, D), hnf_int(rows, d), _canonical=True)


def standard(d: int) -> Lattice:
    return Lattice(Fraction(1), identity(d), _canonical=True)


def index(sub: Lattice, sup: Lattice) -> int:
    if not sup.contains_lattice(sub):
        raise NotSublattice("first lattice is not contained in the second")
    q = sub.det / sup.det
    if q.denominator != 1:
        raise NotSublattice("non-integral index")
    return int(q)


def lattice_sum(L1: Lattice, L2: Lattice) -> Lattice:
    return hnf(L1.basis + L2.basis)


def dual(L: Lattice) -> Lattice:
    # basis rows B = s H; dual basis rows = columns of B^{-1}
    Hinv = inverse(L.H)
    rows = transpose(Hinv)
    s = L.scale
    return hnf([[x / s for x in r] for r in rows])


def intersect(L1: Lattice, L2: Lattice) -> Lattice:
    return dual(lattice_sum(dual(L1), dual(L2)))


def intersect_all(lats: Sequence[Lattice]) -> Lattice:
    return dual(hnf([b for L in lats for b in dual(L).basis]))


def apply(R, L: Lattice) -> Lattice:
    """Image R L of a lattice under x -> R x."""
    M = _as_matrix(R)
    return hnf([mat_vec(M, b) for b in L.basis])


def commensurate(L1, L2) -> bool:
    """True iff B1^{-1} B2 is rational.

    Lattice objects are rational and therefore always commensurate; raw bases
    with symbolic entries (sympy expressions such as sqrt(2)) are checked
    exactly.
    """
    if isinstance(L1, Lattice) and isinstance(L2, Lattice):
        return L1.d == L2.d
    import sympy
    B1 = sympy.Matrix(L1.basis if isinstance(L1, Lattice) else L1)
    B2 = sympy.Matrix(L2.basis if isinstance(L2, Lattice) else L2)
    if B1.shape != B2.shape:
        return False
    # rows are basis vectors: B2 = X B1 with X rational
    X = (B2 * B1.inv()).applyfunc(sympy.nsimplify)
    return all(sympy.simplify(x).is_rational for x in X)


def enumerate_sublattices(d: int, m: int) -> Iterator[Lattice]:
    """All sublattices of Z^d of index m, each once, in lexicographic order."""
    if m < 1:
        raise ValueError("index must be positive")
    for diag in _ordered_factorizations(m, d):
        slots = [(i, j) for j in range(d) for i in range(j)]
        ranges = [range(diag[j]) for (i, j) in slots]
        for vals in product(*ranges):
            H = [[0] * d for _ in range(d)]
            for k in range(d):
                H[k][k] = diag[k]
            for (i, j), v in zip(slots, vals):
                H[i][j] = v
            yield Lattice(Fraction(1), H, _canonical=True)


def _ordered_factorizations(m: int, d: int) -> Iterator[tuple[int, ...]]:
    if d == 1:
        yield (m,)
        return
    for a in arith.divisors(m):
        for rest in _ordered_factorizations(m // a, d - 1):
            yield (a,) + rest


def den(L: Lattice, R) -> Fraction:
    """Smallest alpha > 0 with alpha R L contained in L."""
    M = _as_matrix(R)
    B = L.basis
    X = mat_mul(mat_mul(B, transpose(M)), inverse(B))
    D = 1
    for row in X:
        for x in row:
            D = _lcm(D, x.denominator)
    g = reduce(math.gcd, (int(x * D) for row in X for x in row), 0)
    return Fraction(D, g)


def csl(L: Lattice, R) -> tuple[Lattice, int]:
    """Coincidence site lattice L cap R L and its index."""
    RL = apply(R, L)
    C = intersect(L, RL)
    return C, index(C, L)


def csl_prime_split(cslL: Lattice, L: Lattice) -> list[Lattice]:
    """Split a CSL of index prod p_i^r_i into lattices of index p_i^r_i."""
    Sigma = index(cslL, L)
    if Sigma == 1:
        return [L]
    out = []
    for p, r in arith.factorize(Sigma):
        m = Sigma // p ** r
        out.append(intersect(cslL.scaled(Fraction(1, m)), L))
    return out


def reflection_matrix(v: Sequence[int]) -> list[list[Fraction]]:
    vv = sum(x * x for x in v)
    d = len(v)
    return [[Fraction(int(i == j)) - Fraction(2 * v[i] * v[j], vv) for j in range(d)] for i in range(d)]


def coincidence_reflection_index(v: Sequence[int], d: int | None = None) -> int:
    """Coincidence index of the reflection in the hyperplane orthogonal to v, in Z^d."""
    if d is not None and len(v) != d:
        raise ValueError("vector length does not match d")
    if reduce(math.gcd, v, 0) != 1:
        raise ValueError("v must be primitive")
    vv = sum(x * x for x in v)
    return vv if vv % 2 else vv // 2


def ssl_norm_condition(det_gamma: int, k: int, c: int) -> bool:
    """Hilbert-symbol condition for an SSL of index c^k in a 2k-dim lattice."""
    if k < 1 or c < 1:
        raise ValueError("k and c must be positive")
    b = (-1) ** k * det_gamma
    ps = {p for p, _ in arith.factorize(2 * c * abs(det_gamma))}
    return all(arith.hilbert_symbol(c, b, p) == 1 for p in sorted(ps)) and \
        arith.hilbert_symbol(c, b, "infinity") == 1


# ---------------------------------------------------------------------------
# two dimensions

def _q(u, v, G) -> Fraction:
    return sum(G[i][j] * u[i] * v[j] for i in range(2) for j in range(2))


def gauss_reduce(b1, b2, G=None):
    """Lagrange-Gauss reduction; returns (b1, b2) with |b1| <= |b2| <= |b1 +- b2|."""
    G = G or identity(2)
    b1 = [Fraction(x) for x in b1]
    b2 = [Fraction(x) for x in b2]
    while True:
        if _q(b1, b1, G) > _q(b2, b2, G):
            b1, b2 = b2, b1
        mu = _q(b1, b2, G) / _q(b1, b1, G)
        k = math.floor(mu + Fraction(1, 2))
        if k == 0:
            return b1, b2
        b2 = [y - k * x for x, y in zip(b1, b2)]
        if _q(b2, b2, G) >= _q(b1, b1, G):
            return b1, b2


def shortest_vectors_2d(L: Lattice, G=None) -> set[tuple[Fraction, ...]]:
    if L.d != 2:
        raise ValueError("two-dimensional lattices only")
    G = G or identity(2)
    b1, b2 = gauss_reduce(*L.basis, G=G)
    cands = [b1, b2, [x + y for x, y in zip(b1, b2)], [x - y for x, y in zip(b1, b2)]]
    m = _q(b1, b1, G)
    out = set()
    for c in cands:
        if _q(c, c, G) == m:
            out.add(tuple(c))
            out.add(tuple(-x for x in c))
    return out


def is_well_rounded_2d(L: Lattice, G=None) -> bool:
    G = G or identity(2)
    b1, b2 = gauss_reduce(*L.basis, G=G)
    return _q(b1, b1, G) == _q(b2, b2, G)
