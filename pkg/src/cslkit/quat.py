"""Hurwitz quaternions, their one-sided ideals and the Cayley parametrizations.

A Hurwitz quaternion q is stored by its doubled coordinates v = 2q, four
integers that are either all even (Lipschitz quaternions) or all odd.
Ideal lattices live in the same doubled coordinates.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from itertools import permutations, product
from typing import Iterable, Sequence

from . import arith, latt


def hprod(a: Sequence[int], b: Sequence[int]) -> tuple[int, int, int, int]:
    """Hamilton product of two coordinate 4-tuples."""
    a0, a1, a2, a3 = a
    b0, b1, b2, b3 = b
    return (a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
            a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
            a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
            a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0)


def hconj(a: Sequence) -> tuple:
    return (a[0], -a[1], -a[2], -a[3])


class HurQuat:
    __slots__ = ("v",)

    def __init__(self, v: Sequence[int]):
        v = tuple(int(x) for x in v)
        if len(v) != 4 or len({x & 1 for x in v}) != 1:
            raise ValueError(f"{v} is not a doubled Hurwitz coordinate vector")
        self.v = v

    @classmethod
    def from_coords(cls, *c) -> "HurQuat":
        if len(c) == 1:
            c = tuple(c[0])
        return cls(tuple(int(Fraction(x) * 2) for x in c))

    @classmethod
    def parse(cls, s: str) -> "HurQuat":
        """Parse "a,b,c,d" with integer or half-integer entries (e.g. 1/2)."""
        parts = [Fraction(x.strip()) for x in s.split(",")]
        if len(parts) != 4 or any((2 * x).denominator != 1 for x in parts):
            raise ValueError(f"cannot parse quaternion {s!r}")
        return cls.from_coords(parts)

    # arithmetic
    def __mul__(self, other):
        if isinstance(other, int):
            return HurQuat(tuple(other * x for x in self.v))
        r = hprod(self.v, other.v)
        return HurQuat(tuple(x // 2 for x in r))

    __rmul__ = lambda self, k: self * k if isinstance(k, int) else NotImplemented

    def __add__(self, other: "HurQuat") -> "HurQuat":
        return HurQuat(tuple(x + y for x, y in zip(self.v, other.v)))

    def __sub__(self, other: "HurQuat") -> "HurQuat":
        return HurQuat(tuple(x - y for x, y in zip(self.v, other.v)))

    def __neg__(self) -> "HurQuat":
        return HurQuat(tuple(-x for x in self.v))

    def conj(self) -> "HurQuat":
        return HurQuat(hconj(self.v))

    def norm(self) -> int:
        return sum(x * x for x in self.v) // 4

    def coords(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(x, 2) for x in self.v)

    def real(self) -> Fraction:
        return Fraction(self.v[0], 2)

    def imag(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(x, 2) for x in self.v[1:])

    def exact_div(self, k: int) -> "HurQuat":
        if any(x % k for x in self.v):
            raise ValueError("not divisible")
        return HurQuat(tuple(x // k for x in self.v))

    def is_lipschitz(self) -> bool:
        return self.v[0] % 2 == 0

    def __eq__(self, other) -> bool:
        return isinstance(other, HurQuat) and self.v == other.v

    def __lt__(self, other: "HurQuat") -> bool:
        return self.v < other.v

    def __hash__(self) -> int:
        return hash(self.v)

    def __bool__(self) -> bool:
        return any(self.v)

    def __repr__(self) -> str:
        return f"HurQuat({','.join(str(c) for c in self.coords())})"

    def __str__(self) -> str:
        return ",".join(str(c) for c in self.coords())


ONE = HurQuat((2, 0, 0, 0))
I = HurQuat((0, 2, 0, 0))
J_ = HurQuat((0, 0, 2, 0))
K = HurQuat((0, 0, 0, 2))
OMEGA = HurQuat((1, 1, 1, 1))
ONE_PLUS_I = HurQuat((2, 2, 0, 0))

J_BASIS = (ONE, I, J_, OMEGA)


def _units() -> tuple[HurQuat, ...]:
    out = []
    for k in range(4):
        for s in (2, -2):
            v = [0, 0, 0, 0]
            v[k] = s
            out.append(HurQuat(v))
    for signs in product((1, -1), repeat=4):
        out.append(HurQuat(signs))
    return tuple(sorted(out))


UNITS = _units()

J_LATTICE = latt.hnf([q.v for q in J_BASIS])
LIPSCHITZ_LATTICE = latt.hnf([(2, 0, 0, 0), (0, 2, 0, 0), (0, 0, 2, 0), (0, 0, 0, 2)])


def as_quat(x) -> HurQuat:
    if isinstance(x, HurQuat):
        return x
    if isinstance(x, str):
        return HurQuat.parse(x)
    return HurQuat.from_coords(x)


# ---------------------------------------------------------------------------
# content and parity

def content_J(q: HurQuat) -> int:
    if not q:
        raise ValueError("content of zero")
    g = math.gcd(*q.v)
    best = 1
    for n in arith.divisors(g):
        w = [x // n for x in q.v]
        if len({x & 1 for x in w}) == 1:
            best = n
    return best


def is_primitive(q: HurQuat) -> bool:
    return content_J(q) == 1


def is_odd(q: HurQuat) -> bool:
    return q.norm() % 2 == 1


def reduce_even(q: HurQuat) -> tuple[HurQuat, int]:
    """Write qJ = r (1+i)^l J with r odd; returns (r, l)."""
    if not q:
        raise ValueError("reduce_even of zero")
    r, l = q, 0
    while r.norm() % 2 == 0:
        w = hprod(r.v, (1, -1, 0, 0))
        r = HurQuat(tuple(x // 2 for x in w))
        l += 1
    return r, l


# ---------------------------------------------------------------------------
# ideals

def right_ideal(q: HurQuat) -> latt.Lattice:
    """qJ as a lattice in doubled coordinates."""
    return latt.hnf([(q * b).v for b in J_BASIS])


def left_ideal(q: HurQuat) -> latt.Lattice:
    return latt.hnf([(b * q).v for b in J_BASIS])


def ideal_norm(I_: latt.Lattice) -> int:
    """n with [J : I] = n^2, i.e. the norm of a generator."""
    idx = latt.index(I_, J_LATTICE)
    r = math.isqrt(idx)
    if r * r != idx:
        raise ValueError("index of a principal ideal must be a square")
    return r


@lru_cache(maxsize=None)
def quats_of_norm(n: int) -> tuple[HurQuat, ...]:
    """All Hurwitz quaternions of norm n, sorted by doubled coordinates."""
    target = 4 * n
    reps = set()
    a = 0
    while 4 * a * a <= target:
        b = a
        while a * a + 3 * b * b <= target:
            c = b
            while a * a + b * b + 2 * c * c <= target:
                rest = target - a * a - b * b - c * c
                d = math.isqrt(rest)
                if d >= c and d * d == rest and len({a & 1, b & 1, c & 1, d & 1}) == 1:
                    reps.add((a, b, c, d))
                c += 1
            b += 1
        a += 1
    out = set()
    for rep in reps:
        for perm in set(permutations(rep)):
            for signs in product((1, -1), repeat=4):
                out.add(tuple(s * x for s, x in zip(signs, perm)))
    return tuple(HurQuat(v) for v in sorted(out))


def _lll(B: list[list[int]], delta=Fraction(3, 4)) -> list[list[int]]:
    B = [list(b) for b in B]
    n = len(B)

    def dot(u, v):
        return sum(x * y for x, y in zip(u, v))

    def gso(B):
        Bs, mu = [], [[Fraction(0)] * n for _ in range(n)]
        for i in range(n):
            v = [Fraction(x) for x in B[i]]
            for j in range(i):
                mu[i][j] = dot(B[i], Bs[j]) / dot(Bs[j], Bs[j])
                v = [x - mu[i][j] * y for x, y in zip(v, Bs[j])]
            Bs.append(v)
        return Bs, mu

    Bs, mu = gso(B)
    k = 1
    while k < n:
        for j in range(k - 1, -1, -1):
            q = round(mu[k][j])
            if q:
                B[k] = [x - q * y for x, y in zip(B[k], B[j])]
                Bs, mu = gso(B)
        if dot(Bs[k], Bs[k]) >= (delta - mu[k][k - 1] ** 2) * dot(Bs[k - 1], Bs[k - 1]):
            k += 1
        else:
            B[k], B[k - 1] = B[k - 1], B[k]
            Bs, mu = gso(B)
            k = max(k - 1, 1)
    return B


def _generators_of(I_: latt.Lattice) -> list[HurQuat]:
    """Elements of minimal norm in a principal one-sided ideal."""
    n = ideal_norm(I_)
    D, M = I_.integer_rows()
    assert D == 1
    R = _lll(M)
    found = set()
    for c in product(range(-2, 3), repeat=4):
        v = [sum(ci * r[k] for ci, r in zip(c, R)) for k in range(4)]
        if sum(x * x for x in v) == 4 * n:
            found.add(tuple(v))
    if not found:
        found = {q.v for q in quats_of_norm(n) if I_.contains(q.v)}
    return [HurQuat(v) for v in found]


def _canonical_right(g: HurQuat) -> HurQuat:
    return min(g * u for u in UNITS)


def _canonical_left(g: HurQuat) -> HurQuat:
    return min(u * g for u in UNITS)


def canonical_right_associate(q: HurQuat) -> HurQuat:
    if not q:
        return q
    return _canonical_right(q)


def canonical_left_associate(q: HurQuat) -> HurQuat:
    if not q:
        return q
    return _canonical_left(q)


def _nonzero(qs: Iterable[HurQuat]) -> list[HurQuat]:
    out = [as_quat(q) for q in qs]
    out = [q for q in out if q]
    if not out:
        raise ValueError("all arguments are zero")
    return out


def gcld(a, b) -> HurQuat:
    """g with gJ = aJ + bJ, canonical among its right-unit associates."""
    qs = _nonzero((a, b))
    I_ = latt.hnf([(q * e).v for q in qs for e in J_BASIS])
    return _canonical_right(_generators_of(I_)[0])


def gcrd(a, b) -> HurQuat:
    """g with Jg = Ja + Jb, canonical among its left-unit associates."""
    qs = _nonzero((a, b))
    I_ = latt.hnf([(e * q).v for q in qs for e in J_BASIS])
    return _canonical_left(_generators_of(I_)[0])


def lcrm(a, b) -> HurQuat:
    """m with mJ = aJ cap bJ."""
    a, b = as_quat(a), as_quat(b)
    if not a or not b:
        return HurQuat((0, 0, 0, 0))
    I_ = latt.intersect(right_ideal(a), right_ideal(b))
    return _canonical_right(_generators_of(I_)[0])


def lclm(a, b) -> HurQuat:
    """m with Jm = Ja cap Jb."""
    a, b = as_quat(a), as_quat(b)
    if not a or not b:
        return HurQuat((0, 0, 0, 0))
    I_ = latt.intersect(left_ideal(a), left_ideal(b))
    return _canonical_left(_generators_of(I_)[0])


# ---------------------------------------------------------------------------
# rotations

def cayley3(q) -> latt.RotationMatrix:
    """Rotation x -> q x conj(q) / |q|^2 of the pure quaternions."""
    q = as_quat(q)
    if not q:
        raise ValueError("zero quaternion")
    n4 = sum(x * x for x in q.v)
    cols = []
    for k in range(1, 4):
        e = [0, 0, 0, 0]
        e[k] = 1
        w = hprod(hprod(q.v, e), hconj(q.v))
        cols.append([Fraction(w[i], n4) for i in range(1, 4)])
    return latt.RotationMatrix(latt.transpose(cols), check=False)


def cayley4(p, q) -> latt.RotationMatrix:
    """Rotation x -> p x conj(q) / |pq| of quaternion space."""
    p, q = as_quat(p), as_quat(q)
    if not p or not q:
        raise ValueError("zero quaternion")
    nn = p.norm() * q.norm()
    r = math.isqrt(nn)
    if r * r != nn:
        raise ValueError("pair is not admissible: |pq|^2 is not a square")
    cols = []
    for k in range(4):
        e = [0, 0, 0, 0]
        e[k] = 1
        w = hprod(hprod(p.v, e), hconj(q.v))
        cols.append([Fraction(x, 4 * r) for x in w])
    return latt.RotationMatrix(latt.transpose(cols), check=False)


def rotate_quat(R: latt.RotationMatrix, x: Sequence) -> list[Fraction]:
    return latt.mat_vec(R.m, x)


@lru_cache(maxsize=None)
def primitive_quats_of_norm(n: int) -> tuple[HurQuat, ...]:
    return tuple(q for q in quats_of_norm(n) if is_primitive(q))


def count_primitive_norm(n: int) -> int:
    return len(primitive_quats_of_norm(n))


@lru_cache(maxsize=None)
def right_class_reps(n: int, primitive: bool = True) -> tuple[HurQuat, ...]:
    """One canonical representative per class qJ^x of quaternions of norm n."""
    src = primitive_quats_of_norm(n) if primitive else quats_of_norm(n)
    return tuple(sorted({_canonical_right(q) for q in src}))


@lru_cache(maxsize=None)
def left_class_reps(n: int, primitive: bool = True) -> tuple[HurQuat, ...]:
    src = primitive_quats_of_norm(n) if primitive else quats_of_norm(n)
    return tuple(sorted({_canonical_left(q) for q in src}))
