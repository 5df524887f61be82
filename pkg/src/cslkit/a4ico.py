"""Golden integers, the icosian ring and the root lattice A4.

An icosian x is stored by its doubled coordinates 2x_k = a_k + b_k tau,
flattened to eight integers (a0, b0, a1, b1, a2, b2, a3, b3). In these
coordinates the icosian ring is a rank-8 integer lattice, and the A4 lattice
L = {x in I : x = twist(x)} is handled through its own 4-dim coordinates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, permutations, product
from typing import Iterable, Sequence

from . import arith, latt
from .hyper4 import g_nr

SQRT5 = math.sqrt(5.0)
TAU_F = (1 + SQRT5) / 2
TAUP_F = (1 - SQRT5) / 2


# ---------------------------------------------------------------------------
# Z[tau]

def _sign_surd(u: int, v: int) -> int:
    """Sign of u + v sqrt(5)."""
    if u >= 0 and v >= 0:
        return 0 if u == 0 and v == 0 else 1
    if u <= 0 and v <= 0:
        return -1
    d = u * u - 5 * v * v
    if u > 0:
        return 1 if d > 0 else -1
    return 1 if d < 0 else -1


class ZTau:
    """a + b tau with tau^2 = tau + 1."""

    __slots__ = ("a", "b")

    def __init__(self, a: int = 0, b: int = 0):
        self.a, self.b = int(a), int(b)

    @classmethod
    def of(cls, x) -> "ZTau":
        if isinstance(x, ZTau):
            return x
        if isinstance(x, tuple):
            return cls(*x)
        return cls(int(x), 0)

    @classmethod
    def parse(cls, s: str) -> "ZTau":
        """Parse tokens like "2", "1+t", "-1-2t", "3t"."""
        s = s.replace(" ", "").replace("tau", "t")
        if "t" not in s:
            return cls(int(s), 0)
        body = s[:-1] if s.endswith("t") else None
        if body is None:
            raise ValueError(f"cannot parse {s!r}")
        k = max(body.rfind("+"), body.rfind("-"))
        if k <= 0:
            a, bs = 0, body
        else:
            a, bs = int(body[:k]), body[k:]
        b = {"": 1, "+": 1, "-": -1}.get(bs)
        return cls(a, int(bs) if b is None else b)

    def __add__(self, o):
        o = ZTau.of(o)
        return ZTau(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __sub__(self, o):
        o = ZTau.of(o)
        return ZTau(self.a - o.a, self.b - o.b)

    def __rsub__(self, o):
        return ZTau.of(o) - self

    def __neg__(self):
        return ZTau(-self.a, -self.b)

    def __mul__(self, o):
        o = ZTau.of(o)
        a, b, c, d = self.a, self.b, o.a, o.b
        return ZTau(a * c + b * d, a * d + b * c + b * d)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = ZTau(1)
        for _ in range(k):
            out = out * self
        return out

    def conj(self) -> "ZTau":
        return ZTau(self.a + self.b, -self.b)

    def nr(self) -> int:
        return self.a * self.a + self.a * self.b - self.b * self.b

    def trace(self) -> int:
        return 2 * self.a + self.b

    def sign(self) -> int:
        return _sign_surd(2 * self.a + self.b, self.b)

    def __float__(self) -> float:
        return self.a + self.b * TAU_F

    def embed(self) -> tuple[float, float]:
        return self.a + self.b * TAU_F, self.a + self.b * TAUP_F

    def is_unit(self) -> bool:
        return abs(self.nr()) == 1

    def is_rational(self) -> bool:
        return self.b == 0

    def __eq__(self, o) -> bool:
        if isinstance(o, int):
            return self.b == 0 and self.a == o
        return isinstance(o, ZTau) and (self.a, self.b) == (o.a, o.b)

    def __hash__(self) -> int:
        return hash((self.a, self.b))

    def __bool__(self) -> bool:
        return bool(self.a or self.b)

    def __repr__(self) -> str:
        return f"ZTau({self.a}, {self.b})"

    def __str__(self) -> str:
        if not self.b:
            return str(self.a)
        t = "t" if self.b == 1 else "-t" if self.b == -1 else f"{self.b}t"
        if not self.a:
            return t
        return f"{self.a}{'+' if self.b > 0 else ''}{t}"

    def divmod(self, o: "ZTau") -> tuple["ZTau", "ZTau"]:
        o = ZTau.of(o)
        n = o.nr()
        if n == 0:
            raise ZeroDivisionError("division by zero in Z[tau]")
        num = self * o.conj()
        q = ZTau(_round_div(num.a, n), _round_div(num.b, n))
        return q, self - q * o

    def exact_div(self, o) -> "ZTau":
        q, r = self.divmod(ZTau.of(o))
        if r:
            raise ArithmeticError(f"{o} does not divide {self}")
        return q

    def divides(self, o) -> bool:
        return not ZTau.of(o).divmod(self)[1]


def _round_div(a: int, n: int) -> int:
    return (2 * a + n) // (2 * n) if n > 0 else (2 * -a - n) // (2 * -n)


TAU = ZTau(0, 1)
TAU4 = TAU ** 4
SQRT5_Z = ZTau(-1, 2)  # 2 tau - 1


def ztau_gcd(x, y) -> ZTau:
    x, y = ZTau.of(x), ZTau.of(y)
    if not x and not y:
        raise ValueError("gcd(0, 0)")
    while y:
        x, y = y, x.divmod(y)[1]
    return canonical_associate(x)


def ztau_lcm(x, y) -> ZTau:
    x, y = ZTau.of(x), ZTau.of(y)
    if not x or not y:
        return ZTau(0)
    return canonical_associate((x * y).exact_div(ztau_gcd(x, y)))


def canonical_associate(x) -> ZTau:
    """Totally positive associate beta with 1 <= beta / beta' < tau^4."""
    x = ZTau.of(x)
    if not x:
        return x
    if x.sign() < 0:
        x = -x
    if x.conj().sign() < 0:
        x = x * TAU
    # bring the ratio into range; a float guess first, then exact steps
    f, fp = x.embed()
    k = math.floor(math.log(f / fp) / math.log(TAU_F ** 4)) if fp > 0 and f > 0 else 0
    if k:
        x = x * _tau_pow(-2 * k)
    while (x - x.conj()).sign() < 0:
        x = x * TAU * TAU
    while (x - TAU4 * x.conj()).sign() >= 0:
        x = x * _tau_pow(-2)
    return x


def _tau_pow(k: int) -> ZTau:
    if k >= 0:
        return TAU ** k
    return (ZTau(-1, 1)) ** (-k)  # tau^{-1} = tau - 1


def is_totally_positive(x: ZTau) -> bool:
    return x.sign() > 0 and x.conj().sign() > 0


def ztau_sqrt(x) -> ZTau | None:
    """Square root in Z[tau], or None.

    A totally positive x gets its exact positive root when one exists; other
    x are first replaced by their canonical associate, so the root is then
    only determined up to a unit.
    """
    x = ZTau.of(x)
    if not x:
        return ZTau(0)
    if not is_totally_positive(x):
        x = canonical_associate(x)
    f, fp = x.embed()
    r, rp = math.sqrt(f), math.sqrt(fp)
    for s in (1, -1):
        b = round((r - s * rp) / SQRT5)
        a = round(r - b * TAU_F)
        for da, db in product((-1, 0, 1), repeat=2):
            y = ZTau(a + da, b + db)
            if y * y == x:
                return y if y.sign() > 0 else -y
    return None


def is_square_ztau(x) -> bool:
    return ztau_sqrt(x) is not None


@lru_cache(maxsize=None)
def primes_above(p: int) -> tuple[ZTau, ...]:
    """Canonical prime elements of Z[tau] dividing the rational prime p."""
    if p == 5:
        return (canonical_associate(SQRT5_Z),)
    if p % 5 in (2, 3):
        return (ZTau(p),)
    b = 1
    while True:
        for sgn in (1, -1):
            D = 5 * b * b + 4 * sgn * p
            if D >= 0:
                r = math.isqrt(D)
                if r * r == D and (r - b) % 2 == 0:
                    pi = canonical_associate(ZTau((r - b) // 2, b))
                    out = {pi, canonical_associate(pi.conj())}
                    return tuple(sorted(out, key=lambda z: (z.a, z.b)))
        b += 1


def ztau_factor(x) -> list[tuple[ZTau, int]]:
    x = ZTau.of(x)
    if not x:
        raise ValueError("factor of zero")
    out = []
    for p, _ in arith.factorize(abs(x.nr())):
        for pi in primes_above(p):
            e = 0
            while pi.divides(x):
                x = x.exact_div(pi)
                e += 1
            if e:
                out.append((pi, e))
    return out


# ---------------------------------------------------------------------------
# icosian quaternions

def _zt_mul(a, b, c, d):
    return a * c + b * d, a * d + b * c + b * d


def _qmul(X: Sequence[int], Y: Sequence[int]) -> tuple[int, ...]:
    """Product of two quaternions over Z[tau], flattened coordinates."""
    x = [(X[2 * k], X[2 * k + 1]) for k in range(4)]
    y = [(Y[2 * k], Y[2 * k + 1]) for k in range(4)]

    def m(i, j):
        return _zt_mul(*x[i], *y[j])

    def comb(terms):
        a = b = 0
        for s, (u, v) in terms:
            a += s * u
            b += s * v
        return a, b
    r0 = comb([(1, m(0, 0)), (-1, m(1, 1)), (-1, m(2, 2)), (-1, m(3, 3))])
    r1 = comb([(1, m(0, 1)), (1, m(1, 0)), (1, m(2, 3)), (-1, m(3, 2))])
    r2 = comb([(1, m(0, 2)), (-1, m(1, 3)), (1, m(2, 0)), (1, m(3, 1))])
    r3 = comb([(1, m(0, 3)), (1, m(1, 2)), (-1, m(2, 1)), (1, m(3, 0))])
    return r0 + r1 + r2 + r3


class IcoQuat:
    """A quaternion over Q(tau) in doubled flattened coordinates."""

    __slots__ = ("v",)

    def __init__(self, v: Sequence[int]):
        v = tuple(int(x) for x in v)
        if len(v) != 8:
            raise ValueError("need eight integers")
        self.v = v

    @classmethod
    def from_coords(cls, *c) -> "IcoQuat":
        """From four coordinates, each a ZTau, int, (a, b) pair or Fraction pair scaled by 1/2."""
        if len(c) == 1:
            c = tuple(c[0])
        out = []
        for x in c:
            if isinstance(x, tuple) and any(isinstance(t, Fraction) for t in x):
                a, b = (Fraction(t) * 2 for t in x)
                if a.denominator != 1 or b.denominator != 1:
                    raise ValueError("coordinates must lie in Z[tau]/2")
                out += [int(a), int(b)]
            else:
                z = ZTau.of(x)
                out += [2 * z.a, 2 * z.b]
        return cls(out)

    @classmethod
    def parse(cls, s: str) -> "IcoQuat":
        """Four "a+bt" tokens (comma or space separated), with optional "/2"."""
        toks = [t for t in s.replace(",", " ").split() if t]
        if len(toks) != 4:
            raise ValueError(f"need four coordinates, got {s!r}")
        out = []
        for t in toks:
            half = t.endswith("/2")
            z = ZTau.parse(t[:-2] if half else t.strip("()"))
            if half:
                out += [z.a, z.b]
            else:
                out += [2 * z.a, 2 * z.b]
        return cls(out)

    def coord(self, k: int) -> tuple[Fraction, Fraction]:
        return Fraction(self.v[2 * k], 2), Fraction(self.v[2 * k + 1], 2)

    def doubled(self, k: int) -> ZTau:
        return ZTau(self.v[2 * k], self.v[2 * k + 1])

    def __mul__(self, o):
        if isinstance(o, IcoQuat):
            w = _qmul(self.v, o.v)
            if any(x % 2 for x in w):
                raise ArithmeticError("product leaves Z[tau]/2 coordinates")
            return IcoQuat(tuple(x // 2 for x in w))
        z = ZTau.of(o)
        out = []
        for k in range(4):
            y = self.doubled(k) * z
            out += [y.a, y.b]
        return IcoQuat(out)

    def __rmul__(self, o):
        return self * o  # scalars are central

    def __add__(self, o: "IcoQuat") -> "IcoQuat":
        return IcoQuat(tuple(x + y for x, y in zip(self.v, o.v)))

    def __sub__(self, o: "IcoQuat") -> "IcoQuat":
        return IcoQuat(tuple(x - y for x, y in zip(self.v, o.v)))

    def __neg__(self) -> "IcoQuat":
        return IcoQuat(tuple(-x for x in self.v))

    def conj(self) -> "IcoQuat":
        v = self.v
        return IcoQuat(v[:2] + tuple(-x for x in v[2:]))

    def norm(self) -> ZTau:
        """|x|^2 in Z[tau] (exact; raises if not integral)."""
        s = ZTau(0)
        for k in range(4):
            d = self.doubled(k)
            s = s + d * d
        if s.a % 4 or s.b % 4:
            raise ArithmeticError("norm not in Z[tau]")
        return ZTau(s.a // 4, s.b // 4)

    def scalar_div(self, z) -> "IcoQuat":
        z = ZTau.of(z)
        out = []
        for k in range(4):
            y = self.doubled(k).exact_div(z)
            out += [y.a, y.b]
        return IcoQuat(out)

    def float_coords(self) -> tuple[float, ...]:
        return tuple(float(self.doubled(k)) / 2 for k in range(4))

    def __eq__(self, o) -> bool:
        return isinstance(o, IcoQuat) and self.v == o.v

    def __hash__(self) -> int:
        return hash(self.v)

    def __bool__(self) -> bool:
        return any(self.v)

    def __repr__(self) -> str:
        return f"IcoQuat({self})"

    def __str__(self) -> str:
        return ", ".join(f"({self.doubled(k)})/2" for k in range(4))


def twist(x: IcoQuat) -> IcoQuat:
    """(x0', x1', x3', x2')."""
    c = [x.doubled(k).conj() for k in range(4)]
    c[2], c[3] = c[3], c[2]
    return IcoQuat([t for z in c for t in (z.a, z.b)])


# ---------------------------------------------------------------------------
# the icosian ring

def _even_perms4():
    out = []
    for p in permutations(range(4)):
        inv = sum(1 for i in range(4) for j in range(i + 1, 4) if p[i] > p[j])
        if inv % 2 == 0:
            out.append(p)
    return out


def _units() -> tuple[IcoQuat, ...]:
    half_tp, half_t = ZTau(1, -1), ZTau(0, 1)  # doubled tau'/2 and tau/2
    found = set()
    for k in range(4):
        for s in (1, -1):
            w = [ZTau(0)] * 4
            w[k] = ZTau(2 * s)
            found.add(tuple(w))
    for signs in product((1, -1), repeat=4):
        found.add(tuple(ZTau(s) for s in signs))
    base = (ZTau(0), ZTau(1), half_tp, half_t)
    for signs in product((1, -1), repeat=3):
        vec = (base[0], base[1] * signs[0], base[2] * signs[1], base[3] * signs[2])
        for p in _even_perms4():
            found.add(tuple(vec[p[i]] for i in range(4)))
    out = [IcoQuat([t for z in w for t in (z.a, z.b)]) for w in found]
    return tuple(sorted(out, key=lambda q: q.v))


UNITS = _units()
ICO = latt.hnf([u.v for u in UNITS])

ONE = IcoQuat((2, 0, 0, 0, 0, 0, 0, 0))


@lru_cache(maxsize=None)
def ico_basis() -> tuple[IcoQuat, ...]:
    """Eight Z-generators of the icosian ring (rows of its HNF)."""
    return tuple(IcoQuat([int(c) for c in row]) for row in ICO.basis)


def ico_membership(x) -> bool:
    if not isinstance(x, IcoQuat):
        x = IcoQuat.from_coords(x)
    return ICO.contains(x.v)


def as_ico(x) -> IcoQuat:
    if isinstance(x, IcoQuat):
        return x
    if isinstance(x, str):
        return IcoQuat.parse(x)
    return IcoQuat.from_coords(x)


# ---------------------------------------------------------------------------
# the A4 lattice L and its coordinates

A4_BASIS = (
    IcoQuat((2, 0, 0, 0, 0, 0, 0, 0)),       # (1, 0, 0, 0)
    IcoQuat((-1, 0, 1, 0, 1, 0, 1, 0)),      # (-1, 1, 1, 1)/2
    IcoQuat((0, 0, -2, 0, 0, 0, 0, 0)),      # (0, -1, 0, 0)
    IcoQuat((0, 0, 1, 0, -1, 1, 0, -1)),     # (0, 1, tau - 1, -tau)/2
)
_BL = [list(b.v) for b in A4_BASIS]


def _pivot_inverse():
    for cols in combinations(range(8), 4):
        sub = [[row[c] for c in cols] for row in _BL]
        if latt.det(sub) != 0:
            return cols, latt.inverse(sub)
    raise AssertionError("A4 basis has rank below 4")


_PIV, _PIVINV = _pivot_inverse()


def l_coords(x) -> list[Fraction]:
    """Coordinates y with x = sum y_i b_i over the A4 basis; raises off its span."""
    v = x.v if isinstance(x, IcoQuat) else tuple(x)
    w = [v[c] for c in _PIV]
    y = [sum(Fraction(w[i]) * _PIVINV[i][j] for i in range(4)) for j in range(4)]
    back = [sum(y[i] * _BL[i][k] for i in range(4)) for k in range(8)]
    if any(b != c for b, c in zip(back, v)):
        raise ValueError("vector is not in the rational span of L")
    return y


def from_l_coords(y: Sequence) -> IcoQuat:
    v = [sum(Fraction(y[i]) * _BL[i][k] for i in range(4)) for k in range(8)]
    if any(c.denominator != 1 for c in v):
        raise ValueError("not a point of the doubled frame")
    return IcoQuat([int(c) for c in v])


L4 = latt.standard(4)  # L in its own coordinates


def module_meet_l(M: latt.Lattice) -> latt.Lattice:
    """M cap L in L-coordinates, for a full-rank Z-module M in the doubled frame."""
    BMinv = latt.inverse(M.basis)
    C = latt.mat_mul(_BL, BMinv)  # 4 x 8
    cols = [list(col) for col in latt.transpose(C)]
    gens = cols + [[1 if i == j else 0 for j in range(4)] for i in range(4)]
    return latt.dual(latt.hnf(gens))


def module_meet_span(M: latt.Lattice) -> latt.Lattice:
    """M cap span(L) in L-coordinates."""
    BMinv = latt.inverse(M.basis)
    C = latt.mat_mul(_BL, BMinv)
    return latt.dual(latt.hnf([list(col) for col in latt.transpose(C)]))


def gram_l() -> list[list[Fraction]]:
    """Gram matrix <b_i, b_j> of the A4 basis (rational)."""
    G = []
    for x in A4_BASIS:
        row = []
        for y in A4_BASIS:
            s = (x + y).norm() - x.norm() - y.norm()
            assert s.b == 0
            row.append(Fraction(s.a, 2))
        G.append(row)
    return G


# ---------------------------------------------------------------------------
# primitivity, ideals

def _doubled_gcd(q: IcoQuat) -> ZTau:
    g = ZTau(0)
    for k in range(4):
        d = q.doubled(k)
        if d:
            g = d if not g else ztau_gcd(g, d)
    return g


def ico_content(q) -> ZTau:
    """lcm of the alpha in Z[tau] with q in alpha I, as a canonical associate."""
    q = as_ico(q)
    if not q:
        raise ValueError("content of zero")
    c = ZTau(1)
    g = _doubled_gcd(q)
    for pi, _ in ztau_factor(g):
        while True:
            try:
                r = q.scalar_div(pi)
            except ArithmeticError:
                break
            if not ICO.contains(r.v):
                break
            q, c = r, c * pi
    return canonical_associate(c)


def primitive_part(q) -> IcoQuat:
    q = as_ico(q)
    c = ico_content(q)
    return q if c == ZTau(1) else q.scalar_div(c)


def is_ico_primitive(q) -> bool:
    return ico_content(q) == ZTau(1)


def right_ideal(q: IcoQuat) -> latt.Lattice:
    return latt.hnf([(q * b).v for b in ico_basis()])


def left_ideal(q: IcoQuat) -> latt.Lattice:
    return latt.hnf([(b * q).v for b in ico_basis()])


def _sum_right(q: IcoQuat, n: ZTau) -> latt.Lattice:
    """q I + n I."""
    gens = [(q * b).v for b in ico_basis()] + [(b * n).v for b in ico_basis()]
    return latt.hnf(gens)


def _sum_left(p: IcoQuat, n: ZTau) -> latt.Lattice:
    """I p + I n."""
    gens = [(b * p).v for b in ico_basis()] + [(b * n).v for b in ico_basis()]
    return latt.hnf(gens)


# ---------------------------------------------------------------------------
# A4: SSLs and CSLs

def _map_matrix(f) -> list[list[Fraction]]:
    """Matrix (acting on column coordinate vectors) of a map of span(L)."""
    cols = [l_coords(f(b)) for b in A4_BASIS]
    return latt.transpose(cols)


def ssl_a4(q) -> tuple[latt.Lattice, int]:
    """q L twist(q) in L-coordinates, with its index nr(|q|^4)."""
    q = as_ico(q)
    qt = twist(q)
    rows = [l_coords(q * b * qt) for b in A4_BASIS]
    S = latt.hnf(rows)
    n = q.norm().nr() ** 2
    idx = latt.index(S, L4)
    if idx != n:
        raise AssertionError(f"SSL index {idx} differs from nr(|q|^4) = {n}")
    return S, idx


def is_admissible_a4(q) -> bool:
    q = as_ico(q)
    if not q:
        raise ValueError("zero quaternion")
    return arith.is_square(q.norm().nr())


def rotation_a4(q) -> latt.RotationMatrix:
    """x -> q x twist(q) / |q twist(q)| in L-coordinates."""
    q = as_ico(q)
    n = q.norm().nr()
    r = math.isqrt(n)
    if r * r != n:
        raise ValueError("quaternion is not admissible")
    qt = twist(q)
    M = _map_matrix(lambda b: q * b * qt)
    return latt.RotationMatrix([[c / r for c in row] for row in M], check=False)


def _extension(q: IcoQuat) -> tuple[ZTau, ZTau]:
    """(alpha_q, lcm) with |alpha_q q|^2 = lcm(|q|^2, |twist q|^2) up to units."""
    a = q.norm()
    b = a.conj()
    g = ztau_gcd(a, b)
    alpha = ztau_sqrt(b.exact_div(g))
    if alpha is None:
        raise ValueError("quaternion is not admissible")
    return alpha, ztau_lcm(a, b)


def sigma_a4(q) -> int:
    q = as_ico(q)
    if not is_admissible_a4(q):
        raise ValueError("quaternion is not admissible")
    q = primitive_part(q)
    _, l = _extension(q)
    if not l.is_rational():
        raise AssertionError("lcm(|q|^2, |q~|^2) should be rational up to units")
    return l.a


@dataclass(frozen=True)
class A4Csl:
    q: IcoQuat
    lattice: latt.Lattice
    sigma: int


def csl_a4(q) -> A4Csl:
    """(q_a I + I twist(q_a)) cap L in L-coordinates.

    A non-primitive q is first divided by its content, which changes the
    rotation at most by a sign.
    """
    q = as_ico(q)
    if not is_admissible_a4(q):
        raise ValueError("quaternion is not admissible")
    q = primitive_part(q)
    alpha, _ = _extension(q)
    qa = q * alpha
    qat = twist(qa)
    M = latt.hnf([(qa * b).v for b in ico_basis()] + [(b * qat).v for b in ico_basis()])
    C = module_meet_l(M)
    s = sigma_a4(q)
    idx = latt.index(C, L4)
    if idx != s:
        raise AssertionError(f"CSL index {idx} differs from lcm value {s}")
    return A4Csl(q, C, s)


def csl_a4_equal(q1, q2) -> bool:
    q1, q2 = primitive_part(q1), primitive_part(q2)
    n1, n2 = canonical_associate(q1.norm()), canonical_associate(q2.norm())
    if n1 != n2:
        return False
    r = math.isqrt(q1.norm().nr())
    c = SQRT5_Z if ZTau(5).divides(n1) else ZTau(1)
    d1 = ZTau(r).exact_div(c)
    return _sum_right(q1, d1) == _sum_right(q2, d1)


# ---------------------------------------------------------------------------
# icosian CSMs

def rotation_ico(q, p) -> latt.RotationMatrix:
    """x -> q x p / |qp| on the doubled frame (8x8 rational matrix)."""
    q, p = as_ico(q), as_ico(p)
    r = _exact_root(q.norm() * p.norm())
    rc, rn = r.conj(), r.nr()
    cols = []
    for k in range(8):
        e = [0] * 8
        e[k] = 1
        # e is a doubled coordinate vector, so w is 4 times the doubled q e p
        w = _qmul(_qmul(q.v, e), p.v)
        img = []
        for j in range(4):
            z = ZTau(w[2 * j], w[2 * j + 1]) * rc
            img += [Fraction(z.a, 4 * rn), Fraction(z.b, 4 * rn)]
        cols.append(img)
    return latt.RotationMatrix(latt.transpose(cols), check=False)


def _exact_root(n: ZTau) -> ZTau:
    """Positive root r in Z[tau] with r^2 = n, for totally positive n."""
    r = ztau_sqrt(n)
    if r is None:
        raise ValueError("not a square")
    return r


def is_admissible_pair(q, p) -> bool:
    q, p = as_ico(q), as_ico(p)
    return ztau_sqrt(q.norm() * p.norm()) is not None


@dataclass(frozen=True)
class IcoPair:
    q: IcoQuat
    p: IcoQuat
    alpha_q: ZTau
    alpha_p: ZTau


def extend(q, p) -> IcoPair:
    q, p = as_ico(q), as_ico(p)
    if not (is_ico_primitive(q) and is_ico_primitive(p)):
        raise ValueError("q and p must be I-primitive")
    if not is_admissible_pair(q, p):
        raise ValueError("pair is not admissible")
    a, b = q.norm(), p.norm()
    g = ztau_gcd(a, b)
    aq, ap = ztau_sqrt(b.exact_div(g)), ztau_sqrt(a.exact_div(g))
    return IcoPair(q, p, aq, ap)


def csm_I(q, p) -> tuple[latt.Lattice, int]:
    """q_a I + I p_a in the doubled frame, with index nr(lcm(|q|^2, |p|^2))."""
    pr = extend(q, p)
    qa, pa = pr.q * pr.alpha_q, pr.p * pr.alpha_p
    M = latt.hnf([(qa * b).v for b in ico_basis()] + [(b * pa).v for b in ico_basis()])
    s = sigma_I(q, p)
    idx = latt.index(M, ICO)
    if idx != s:
        raise AssertionError(f"CSM index {idx} differs from nr(lcm) = {s}")
    return M, s


def sigma_I(q, p) -> int:
    q, p = as_ico(q), as_ico(p)
    return abs(ztau_lcm(q.norm(), p.norm()).nr())


def csm_equal(pair1, pair2) -> bool:
    (q1, p1), (q2, p2) = [(as_ico(a), as_ico(b)) for a, b in (pair1, pair2)]
    r1 = _exact_root(q1.norm() * p1.norm())
    r2 = _exact_root(q2.norm() * p2.norm())
    if canonical_associate(r1) != canonical_associate(r2):
        return False
    if ztau_lcm(q1.norm(), p1.norm()) != ztau_lcm(q2.norm(), p2.norm()):
        return False
    return (_sum_right(q1, r1) == _sum_right(q2, r1)
            and _sum_left(p1, r1) == _sum_left(p2, r1))


# ---------------------------------------------------------------------------
# counting functions

def _chi5(p: int) -> int:
    return 0 if p == 5 else 1 if p % 5 in (1, 4) else -1


def _b_a4(p: int, r: int) -> int:
    if r % 2:
        return 0
    r //= 2
    ch = _chi5(p)
    if ch == 0:
        return (5 ** (r + 1) - 1) // 4
    if ch == 1:
        return ((r + 1) * (p * p - 1) * p ** r - 2 * (p ** (r + 1) - 1)) // (p - 1) ** 2
    if r % 2:
        return 0
    return (p ** (r + 2) + p ** r - 2) // (p * p - 1)


def _b_a4_pr(p: int, r: int) -> int:
    if r % 2:
        return 0
    r //= 2
    ch = _chi5(p)
    if ch == 0:
        return 6 * 5 ** (r - 1)
    if ch == 1:
        v = (r + 1) * p ** r + 2 * r * p ** (r - 1)
        if r >= 2:
            v += (r - 1) * p ** (r - 2)
        return v
    if r % 2:
        return 0
    return p ** r + p ** (r - 2)


def _crot_a4(p: int, r: int) -> int:
    ch = _chi5(p)
    if ch == 0:
        return 6 * 5 ** (2 * r - 1)
    if ch == 1:
        return (p + 1) * p ** (r - 1) * (p ** (r + 1) + p ** (r - 1) - 2) // (p - 1)
    return p ** (2 * r) + p ** (2 * r - 2)


def _c_a4(p: int, r: int) -> int:
    ch = _chi5(p)
    if ch == 0:
        return 6 * 5 ** (2 * r - 2)
    if ch == -1:
        return p ** (2 * r) + p ** (2 * r - 2)
    if r % 2:
        inner = Fraction(p ** (2 * r + 1) + p ** (2 * r - 2) - 2 * p ** ((r - 1) // 2))
    else:
        inner = p ** (2 * r + 1) + p ** (2 * r - 2) - Fraction(2 * (p * p + 1), p + 1) * p ** ((r - 2) // 2)
    v = Fraction((p + 1) ** 2, p ** 3 - 1) * inner
    assert v.denominator == 1
    return int(v)


def _b_ico(p: int, r: int) -> int:
    if r % 2:
        return 0
    r //= 2
    ch = _chi5(p)
    if ch == 0:
        return g_nr(5, r)
    if ch == -1:
        return 0 if r % 2 else g_nr(p * p, r // 2)
    return sum(g_nr(p, l) * g_nr(p, r - l) for l in range(r + 1))


def _h(p: int, r: int) -> int:
    v = Fraction(2 * p ** (2 * r - 2) * (p + 1) ** 2)
    v -= Fraction(4 * (p ** (r - 1) - 1) * (3 * p * p + 1) * (p + 1), (p - 1) ** 3) * Fraction(p) ** (r - 2)
    v += Fraction((r - 1) * (p + 1) ** 2, (p - 1) ** 2) * Fraction(p) ** (r - 2) * (
        Fraction(p) ** (r - 2) * (p * p + 1) ** 2 + 4)
    assert v.denominator == 1
    return int(v)


def crot_ico_closed(p: int, r: int) -> int:
    """Prime-power closed form, with n = p^r also for inert p (even r only)."""
    ch = _chi5(p)
    if ch == 0:
        return 3 * 5 ** (r - 1) * (13 * 5 ** (r - 1) - 1)
    if ch == 1:
        return _h(p, r)
    if r % 2:
        return 0
    v = Fraction(p * p + 1, p * p - 1) * p ** (r - 2) * (p ** (r + 2) + p ** (r - 2) - 2)
    assert v.denominator == 1
    return int(v)


def _rule(parts):
    """Euler factor generator from per-class (num, den) descriptions."""
    def gen(p, rmax):
        num, den = parts[_chi5(p)]
        return arith.rational_factor(num, den, p, rmax)
    return gen


# polynomials in X = p^{-s}; terms (c, j, k) mean c p^j X^k
_ONE = (1, 0, 0)
CROT_I_RULE = arith.EulerFactorRule(_rule({
    0: ([[_ONE, (1, 0, 1)], [_ONE, (1, 1, 1)]], [[_ONE, (-1, 1, 1)], [_ONE, (-1, 2, 1)]]),
    1: ([[_ONE, (1, 0, 1)], [_ONE, (1, 1, 1)]] * 2, [[_ONE, (-1, 1, 1)], [_ONE, (-1, 2, 1)]] * 2),
    -1: ([[_ONE, (1, 0, 2)], [_ONE, (1, 2, 2)]], [[_ONE, (-1, 2, 2)], [_ONE, (-1, 4, 2)]]),
}), "ico.rot")
_SPLIT_CSL_NUM = [_ONE, (1, 0, 1), (2, 1, 1), (2, 0, 2), (1, 1, 2), (1, 1, 3)]
_INERT_CSL_NUM = [_ONE, (1, 0, 2), (2, 2, 2), (2, 0, 4), (1, 2, 4), (1, 2, 6)]
CSM_I_RULE = arith.EulerFactorRule(_rule({
    0: ([[_ONE, (11, 0, 1), (7, 0, 2), (1, 1, 3)]], [[_ONE, (-1, 2, 1)], [_ONE, (-1, 1, 2)]]),
    1: ([_SPLIT_CSL_NUM] * 2, [[_ONE, (-1, 2, 1)], [_ONE, (-1, 1, 2)]] * 2),
    -1: ([_INERT_CSL_NUM], [[_ONE, (-1, 4, 2)], [_ONE, (-1, 2, 4)]]),
}), "ico.csm")
CROT_A4_RULE = arith.EulerFactorRule(_rule({
    0: ([[_ONE, (1, 1, 1)]], [[_ONE, (-1, 2, 1)]]),
    1: ([[_ONE, (1, 0, 1)], [_ONE, (1, 1, 1)]], [[_ONE, (-1, 1, 1)], [_ONE, (-1, 2, 1)]]),
    -1: ([[_ONE, (1, 0, 1)]], [[_ONE, (-1, 2, 1)]]),
}), "a4.rot")
CSL_A4_RULE = arith.EulerFactorRule(_rule({
    0: ([[_ONE, (6, 0, 1), (-25, 0, 1)]], [[_ONE, (-1, 2, 1)]]),
    1: ([_SPLIT_CSL_NUM], [[_ONE, (-1, 2, 1)], [_ONE, (-1, 1, 2)]]),
    -1: ([[_ONE, (1, 0, 1)]], [[_ONE, (-1, 2, 1)]]),
}), "a4.csl")


FAMILIES = {
    "a4.rot": arith.MultFn("a4.rot", _crot_a4),
    "a4.csl": arith.MultFn("a4.csl", _c_a4),
    "a4.ssl": arith.MultFn("a4.ssl", _b_a4),
    "a4.ssl_pr": arith.MultFn("a4.ssl_pr", _b_a4_pr),
    "ico.ssm": arith.MultFn("ico.ssm", _b_ico),
    "ico.rot": arith.MultFn("ico.rot", lambda p, r: CROT_I_RULE.coeffs(p, r)[r]),
    "ico.csm": arith.MultFn("ico.csm", lambda p, r: CSM_I_RULE.coeffs(p, r)[r]),
}


def _family(name: str) -> arith.MultFn:
    key = name if "." in name else f"a4.{name}"
    try:
        return FAMILIES[key]
    except KeyError:
        raise ValueError(f"unknown family {name!r}") from None


def a4_counts(family: str, n: int) -> int:
    if n < 1:
        raise ValueError("n must be positive")
    return _family(family)(n)


def ico_counts(family: str, n: int) -> int:
    return a4_counts(family if "." in family else f"ico.{family}", n)


def ssl_counts_a4(m: int) -> int:
    return a4_counts("a4.ssl", m)


def ssl_counts_a4_pr(m: int) -> int:
    return a4_counts("a4.ssl_pr", m)


def family_coeffs(family: str, N: int) -> arith.SeriesCoeffs:
    return arith.mult_coeffs(_family(family), N)


# ---------------------------------------------------------------------------
# constants

def psi_a4(s: float = 3.0, prime_bound: int = 10 ** 5) -> float:
    """Ratio of the CSL and rotation series of A4 at s."""
    def local(p):
        x = float(p)
        if p == 5:
            return 1 - 24 * 5.0 ** -s / (1 + 5.0 ** (1 - s))
        return 1 - 2 * (x * x - 1) * x ** (-2 * s) / (
            (1 + x ** -s) * (1 + x ** (1 - s)) * (1 - x ** (1 - 2 * s)))
    return arith.euler_product_value(local, prime_bound, skip=lambda p: _chi5(p) == -1)


def psi_ico(s: float = 3.0, prime_bound: int = 10 ** 5) -> float:
    def local(p):
        x = float(p)
        ch = _chi5(p)
        if ch == 0:
            return 1 - 48 * 5.0 ** (-2 * s) / (
                (1 + 5.0 ** -s) * (1 + 5.0 ** (1 - s)) * (1 - 5.0 ** (1 - 2 * s)))
        if ch == 1:
            return (1 - 2 * (x * x - 1) * x ** (-2 * s) / (
                (1 + x ** -s) * (1 + x ** (1 - s)) * (1 - x ** (1 - 2 * s)))) ** 2
        return 1 - 2 * (x ** 4 - 1) * x ** (-4 * s) / (
            (1 + x ** (-2 * s)) * (1 + x ** (2 - 2 * s)) * (1 - x ** (2 - 4 * s)))
    return arith.euler_product_value(local, prime_bound)


def rho_rot_a4() -> float:
    """Residue of the A4 rotation series at s = 3."""
    return 450 * SQRT5 / math.pi ** 6 * arith.zeta(3)


# ---------------------------------------------------------------------------
# scaling factors of the icosian module

def scales_into(alpha: Fraction | ZTau | tuple, M: latt.Lattice = ICO) -> bool:
    """Whether alpha M is contained in M, for alpha in Q(tau) given as (a, b) rationals."""
    if isinstance(alpha, ZTau):
        a, b = Fraction(alpha.a), Fraction(alpha.b)
    elif isinstance(alpha, tuple):
        a, b = Fraction(alpha[0]), Fraction(alpha[1])
    else:
        a, b = Fraction(alpha), Fraction(0)
    for row in M.basis:
        img = []
        for k in range(4):
            u, v = row[2 * k], row[2 * k + 1]
            # (a + b t)(u + v t) = au + bv + (av + bu + bv) t
            img += [a * u + b * v, a * v + b * u + b * v]
        if not M.contains(img):
            return False
    return True


def module_scal_checks(samples: Iterable = ()) -> dict:
    """Checks on Scal_I(1): Z[tau] scales I into itself, and scaling factors are algebraic integers."""
    report = {"one": scales_into(ZTau(1)), "tau": scales_into(TAU), "half": scales_into(Fraction(1, 2))}
    extra = list(samples) or [(Fraction(a, d), Fraction(b, d)) for a in range(-3, 4)
                              for b in range(-3, 4) for d in (1, 2, 3)]
    ok = True
    for a, b in extra:
        if scales_into((a, b)):
            # minimal polynomial x^2 - tr x + nr of a + b tau must be integral
            tr = 2 * a + b
            nr = a * a + a * b - b * b
            ok &= tr.denominator == 1 and nr.denominator == 1
    report["algebraic_integers"] = ok
    report["sampled"] = len(extra)
    return report


# ---------------------------------------------------------------------------
# short vector enumeration for the oracles

def trace_gram() -> list[list[int]]:
    """Gram matrix of 2 tr(<x, y>) on the Z-basis of I (integral)."""
    B = ico_basis()
    G = []
    for x in B:
        row = []
        for y in B:
            s = (x + y).norm() - x.norm() - y.norm()  # 2 <x, y>
            row.append(s.trace())
        G.append(row)
    return G


def icosians_up_to(trace_bound: int) -> list[IcoQuat]:
    """All nonzero x in I with tr(|x|^2) <= trace_bound (Fincke-Pohst)."""
    G = trace_gram()  # x^T G x = 2 tr |x|^2
    n = len(G)
    # Cholesky-like decomposition q_ii, q_ij (floats)
    A = [[float(G[i][j]) for j in range(n)] for i in range(n)]
    Q = [[0.0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            Q[i][j] = A[i][j]
    for i in range(n):
        for j in range(i + 1, n):
            Q[j][i] = Q[i][j]
            Q[i][j] = Q[i][j] / Q[i][i]
        for k in range(i + 1, n):
            for l in range(k, n):
                Q[k][l] -= Q[k][i] * Q[i][l]
    C = 2 * trace_bound + 1e-9
    B = ico_basis()
    out = []
    x = [0] * n

    def rec(i, rem):
        c = -sum(Q[i][j] * x[j] for j in range(i + 1, n))
        r = math.sqrt(max(rem, 0) / Q[i][i])
        for xi in range(math.ceil(c - r - 1e-9), math.floor(c + r + 1e-9) + 1):
            x[i] = xi
            t = rem - Q[i][i] * (xi - c) ** 2
            if t < -1e-9:
                continue
            if i == 0:
                if any(x):
                    out.append(tuple(x))
            else:
                rec(i - 1, t)
        x[i] = 0

    rec(n - 1, C)
    res = []
    for c in out:
        v = [sum(ci * b.v[k] for ci, b in zip(c, B)) for k in range(8)]
        q = IcoQuat(v)
        if q.norm().trace() <= trace_bound:
            res.append(q)
    return res


@lru_cache(maxsize=None)
def a4_oracle(max_sigma: int = 5, trace_bound: int = 10) -> dict:
    """{Sigma: (distinct rotations, distinct CSLs)} by brute force.

    Rotations R(q) and R(tau q) = -R(q) are taken over admissible icosians
    of bounded trace norm and deduplicated as matrices; Sigma and the CSL
    come from the generic lattice intersection.
    """
    rots = set()
    for q in icosians_up_to(trace_bound):
        if is_admissible_a4(q):
            rots.add(rotation_a4(q))
            rots.add(rotation_a4(q * TAU))
    out = {}
    for R in rots:
        C, s = latt.csl(L4, R)
        if s <= max_sigma:
            out.setdefault(s, [set(), set()])
            out[s][0].add(R)
            out[s][1].add(C)
    return {s: (len(v[0]), len(v[1])) for s, v in sorted(out.items())}


def _prim_ssl_set(m: int) -> set:
    if not arith.is_square(m):
        return set()
    k = arith.isqrt(m)
    bound = math.isqrt(9 * k) + 1
    return {ssl_a4(q)[0] for q in icosians_up_to(bound)
            if q.norm().nr() == k and is_ico_primitive(q)}


def a4_ssl_oracle(m: int, primitive: bool = False) -> int:
    """Distinct SSLs of L of index m by brute force.

    Primitive ones are q L twist(q) for I-primitive q; a totally positive
    |q|^2 of norm k has an associate of trace at most 3 sqrt(k), so that
    trace window reaches every lattice. All SSLs add the multiples c S
    with c^4 dividing m.
    """
    if primitive:
        return len(_prim_ssl_set(m))
    out = set()
    c = 1
    while c ** 4 <= m:
        if m % c ** 4 == 0:
            for S in _prim_ssl_set(m // c ** 4):
                out.add(latt.hnf([[c * x for x in row] for row in S.basis]))
        c += 1
    return len(out)
