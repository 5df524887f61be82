"""Planar families: the square lattice hierarchy, quadratic orders, cyclotomic modules."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from . import arith, latt


# ---------------------------------------------------------------------------
# quadratic integers a + b w with w^2 = t w - n

class QuadInt:
    t = 0
    n = 1

    __slots__ = ("a", "b")

    def __init__(self, a: int = 0, b: int = 0):
        self.a, self.b = int(a), int(b)

    def _new(self, a, b):
        return type(self)(a, b)

    def __add__(self, o):
        o = self._coerce(o)
        return self._new(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __sub__(self, o):
        o = self._coerce(o)
        return self._new(self.a - o.a, self.b - o.b)

    def __neg__(self):
        return self._new(-self.a, -self.b)

    def __mul__(self, o):
        o = self._coerce(o)
        a, b, c, d = self.a, self.b, o.a, o.b
        return self._new(a * c - self.n * b * d, a * d + b * c + self.t * b * d)

    __rmul__ = __mul__

    def _coerce(self, o):
        if isinstance(o, QuadInt):
            if type(o) is not type(self):
                raise TypeError("mixed quadratic rings")
            return o
        return self._new(int(o), 0)

    def conj(self):
        return self._new(self.a + self.t * self.b, -self.b)

    def norm(self) -> int:
        return self.a * self.a + self.t * self.a * self.b + self.n * self.b * self.b

    def divmod(self, o):
        o = self._coerce(o)
        N = o.norm()
        if N == 0:
            raise ZeroDivisionError("division by zero")
        num = self * o.conj()
        q = self._new(_round(num.a, N), _round(num.b, N))
        return q, self - q * o

    def divides(self, o) -> bool:
        return not self._coerce(o).divmod(self)[1]

    def mult_matrix(self) -> list[list[int]]:
        """Matrix of z -> self * z on coordinates (a, b), acting on columns."""
        return [[self.a, -self.n * self.b], [self.b, self.a + self.t * self.b]]

    def vec(self) -> tuple[int, int]:
        return (self.a, self.b)

    def __eq__(self, o) -> bool:
        return type(o) is type(self) and (self.a, self.b) == (o.a, o.b)

    def __hash__(self) -> int:
        return hash((type(self).__name__, self.a, self.b))

    def __bool__(self) -> bool:
        return bool(self.a or self.b)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.a}, {self.b})"


def _round(a: int, n: int) -> int:
    return (2 * a + n) // (2 * n)


class GaussInt(QuadInt):
    """a + b i."""
    t, n = 0, 1


class EisInt(QuadInt):
    """a + b w with w = (1 + i sqrt 3)/2, so w^2 = w - 1."""
    t, n = 1, 1


def quad_gcd(x: QuadInt, y: QuadInt) -> QuadInt:
    while y:
        x, y = y, x.divmod(y)[1]
    return x


_PARENTS = {"square": GaussInt, "hex": EisInt}


def _gram(t: int, n: int) -> list[list[Fraction]]:
    return [[Fraction(1), Fraction(t, 2)], [Fraction(t, 2), Fraction(n)]]


def _rot(u: QuadInt) -> list[list[Fraction]]:
    """Rotation by u / conj(u) = u^2 / N(u), in ring coordinates."""
    N = u.norm()
    M = (u * u).mult_matrix()
    return [[Fraction(x, N) for x in row] for row in M]


# ---------------------------------------------------------------------------
# classification of sublattices of Z^2 and of the hexagonal lattice

@dataclass(frozen=True)
class PlanarClass:
    well_rounded: bool
    ssl: bool
    primitive_ssl: bool
    csl: bool

    def as_tuple(self) -> tuple[bool, bool, bool, bool]:
        return (self.well_rounded, self.ssl, self.primitive_ssl, self.csl)


def classify_sublattice(H: latt.Lattice, parent: str = "square") -> PlanarClass:
    """Geometric flags of a sublattice H of Z[i] or Z[w] (ring coordinates)."""
    ring = _PARENTS.get(parent)
    if ring is None:
        raise ValueError(f"unknown parent {parent!r}")
    P = latt.standard(2)
    if not P.contains_lattice(H):
        raise latt.NotSublattice("H is not contained in the parent lattice")
    G = _gram(ring.t, ring.n)
    wr = latt.is_well_rounded_2d(H, G)
    gen = ring(0, 1).mult_matrix()  # generator of the rotation symmetry
    ssl = latt.apply(latt.RotationMatrix(gen, check=False), H) == H
    idx = latt.index(H, P)
    prim = ssl and not any(all(x % p == 0 for row in H.basis for x in row)
                           for p, _ in arith.factorize(idx))
    csl = False
    if prim:
        z = next(iter(latt.shortest_vectors_2d(H, G)))
        u = ring(int(z[0]), int(z[1]))
        R = latt.RotationMatrix(_rot(u), check=False)
        csl = latt.csl(P, R)[0] == H
    return PlanarClass(wr, ssl, prim, csl)


def table1_bruteforce(m: int, parent: str = "square") -> tuple[int, int, int, int, int]:
    """(all, wr, ssl, ssl_pr, csl) by enumeration and geometric classification."""
    out = [0, 0, 0, 0, 0]
    for H in latt.enumerate_sublattices(2, m):
        c = classify_sublattice(H, parent)
        out[0] += 1
        for k, flag in enumerate(c.as_tuple()):
            out[k + 1] += flag
    return tuple(out)


def table1_counts(m: int) -> tuple[int, int, int, int, int]:
    """(all, wr, ssl, ssl_pr, csl) from the closed-form series."""
    if m < 1:
        raise ValueError("m must be positive")
    return (arith.sigma1(m), wellrounded_coeffs(m)[m],
            *(square_family_coeffs(f, m)[m] for f in ("ssl", "ssl_pr", "csl")))


# ---------------------------------------------------------------------------
# square lattice series

def _chi4(p: int) -> int:
    return arith.kronecker(-4, p)


def _sq_rule(family: str):
    def gen(p, rmax):
        ch = _chi4(p)
        if family == "ssl":
            den = [[(1, 0, 0), (-1, 0, 1)], [(1, 0, 0), (-ch, 0, 1)]]
            return arith.rational_factor([], den, p, rmax)
        if family == "ssl_pr":
            if ch == 0:
                return arith.rational_factor([[(1, 0, 0), (1, 0, 1)]], [], p, rmax)
            if ch == -1:
                return [1] + [0] * rmax
            return arith.rational_factor([[(1, 0, 0), (1, 0, 1)]], [[(1, 0, 0), (-1, 0, 1)]], p, rmax)
        if ch != 1:
            return [1] + [0] * rmax
        if family == "csl":
            return arith.rational_factor([[(1, 0, 0), (1, 0, 1)]], [[(1, 0, 0), (-1, 0, 1)]], p, rmax)
        if family == "mcsl":
            return [r + 1 for r in range(rmax + 1)]
        raise ValueError(f"unknown square family {family!r}")
    return gen


SQUARE_FAMILIES = ("ssl", "ssl_pr", "csl", "mcsl")


def square_family_coeffs(family: str, N: int) -> arith.SeriesCoeffs:
    if family not in SQUARE_FAMILIES:
        raise ValueError(f"unknown square family {family!r}")
    return arith.euler_expand(arith.EulerFactorRule(_sq_rule(family), f"sq.{family}"), N)


def _phi0(N: int) -> list[int]:
    a = [0] * (N + 1)
    p = 1
    while 2 * p * (p + 1) <= N:
        q = p + 1
        while q * q < 3 * p * p and 2 * p * q <= N:
            a[2 * p * q] += 2
            q += 1
        p += 1
    return a


def _phi1(N: int) -> list[int]:
    a = [0] * (N + 1)
    k = 1
    while (2 * k + 1) * (2 * k + 3) <= N:
        u = 2 * k + 1
        l = k + 1
        while (2 * l + 1) ** 2 < 3 * u * u and u * (2 * l + 1) <= N:
            n = u * (2 * l + 1)
            j, sgn = 0, 1
            while n * 2 ** j <= N:
                a[n * 2 ** j] += 2 * sgn
                j += 1
                sgn = -sgn
            l += 1
        k += 1
    return a


def wellrounded_coeffs(N: int) -> arith.SeriesCoeffs:
    """Well-rounded sublattice counts of Z^2.

    Square sublattices (all of them, primitive or not) plus the primitive
    square series convolved with phi0 + phi1, which accounts for the
    non-square well-rounded ones.
    """
    if N < 1:
        raise ValueError("N must be positive")
    f0, f1 = _phi0(N), _phi1(N)
    extra = arith.SeriesCoeffs([0] + [f0[n] + f1[n] for n in range(1, N + 1)], N)
    return square_family_coeffs("ssl", N) + arith.dirichlet_convolve(square_family_coeffs("ssl_pr", N), extra)


def wellrounded_coeffs_as_printed(N: int) -> arith.SeriesCoeffs:
    """The product form with the primitive square series as the leading factor.

    Kept for comparison: it drops the non-primitive square sublattices.
    """
    f0, f1 = _phi0(N), _phi1(N)
    extra = [0] + [f0[n] + f1[n] for n in range(1, N + 1)]
    extra[1] += 1
    return arith.dirichlet_convolve(square_family_coeffs("ssl_pr", N), arith.SeriesCoeffs(extra, N))


# ---------------------------------------------------------------------------
# class number one orders

CLASSNUM1 = (-3, -4, -7, -8, -11, -19, -43, -67, -163)


def classnum1_ssl_coeffs(d_K: int, N: int, primitive: bool = False) -> arith.SeriesCoeffs:
    if d_K not in CLASSNUM1:
        raise ValueError(f"d_K = {d_K} is not one of the nine class number one discriminants")

    def gen(p, rmax):
        ch = arith.kronecker(d_K, p)
        num = [[(1, 0, 0), (-1, 0, 2)]] if primitive else []
        den = [[(1, 0, 0), (-1, 0, 1)], [(1, 0, 0), (-ch, 0, 1)]]
        return arith.rational_factor(num, den, p, rmax)
    return arith.euler_expand(arith.EulerFactorRule(gen, f"cn1.{d_K}"), N)


def _maximal_order_form(d_K: int) -> tuple[int, int]:
    """(t, n) with O_K = Z[w], w^2 = t w - n."""
    if d_K % 4 == 0:
        return 0, -d_K // 4
    return 1, (1 - d_K) // 4


# orders given by w^2 = t w - n
NONMAX_ORDERS = {
    "Zi√3": (0, 3),
    "Z2i": (0, 4),
    "Z(1+3i√3)/2": (1, 7),
    "Zi√7": (0, 7),
    "Zi√6": (0, 6),
    "Z3i": (0, 9),
    "Z5i": (0, 25),
}
_ALIASES = {"Zisqrt3": "Zi√3", "Zisqrt7": "Zi√7", "Zisqrt6": "Zi√6",
            "Z(1+3isqrt3)/2": "Z(1+3i√3)/2"}


def _order_key(order: str) -> str:
    key = _ALIASES.get(order, order)
    if key not in NONMAX_ORDERS:
        raise ValueError(f"unknown order {order!r}")
    return key


def _split_factor(test):
    """Factors (1+X)/(1-X) at primes where test(p) holds, times given special factors."""
    def make(special):
        def gen(p, rmax):
            if p in special:
                c = [0] * (rmax + 1)
                for r, v in special[p].items():
                    if r <= rmax:
                        c[r] = v
                c[0] = 1
                base = c
            else:
                base = [1] + [0] * rmax
            if test(p):
                f = arith.rational_factor([[(1, 0, 0), (1, 0, 1)]], [[(1, 0, 0), (-1, 0, 1)]], p, rmax)
                base = arith.ps_mul(base, f, rmax)
            return base
        return gen
    return make


def _order_prime_rule(key: str):
    if key == "Zi√3":
        return _split_factor(lambda p: p % 3 == 1)({2: {2: 2}, 3: {1: 1}})
    if key == "Z2i":
        return _split_factor(lambda p: p % 4 == 1)({2: {2: 1, 3: 2}})
    if key == "Z(1+3i√3)/2":
        return _split_factor(lambda p: p % 3 == 1)({3: {2: 2, 3: 3}})
    if key == "Zi√7":
        # (1 - 2/2^s + 2/4^s) sits on top of the split factor at 2
        return _split_factor(lambda p: p % 7 in (1, 2, 4))({2: {1: -2, 2: 2}, 7: {1: 1}})
    raise KeyError(key)


def _b_isqrt6(m: int) -> int:
    fac = dict(arith.factorize(m))
    if any(p % 24 in (1, 7, 13, 17, 19, 23) for p in fac):
        return 0
    if fac.get(2, 0) > 1 or fac.get(3, 0) > 1:
        return 0
    total = sum(fac.values())
    if total % 2:
        return 0
    return 2 ** sum(1 for p in fac if p > 3)


def nonmax_order_ssl_coeffs(order: str, N: int) -> arith.SeriesCoeffs:
    """Primitive SSL counts of the listed non-maximal imaginary quadratic orders."""
    key = _order_key(order)
    if key in ("Zi√3", "Z2i", "Z(1+3i√3)/2", "Zi√7"):
        return arith.euler_expand(arith.EulerFactorRule(_order_prime_rule(key), key), N)
    if key == "Zi√6":
        split = _split_factor(lambda p: p % 24 in (1, 7))({})
        A = arith.euler_expand(arith.EulerFactorRule(split, "i6.split"), N)
        B = arith.SeriesCoeffs.from_function(_b_isqrt6, N)
        return arith.dirichlet_convolve(A, B)
    f = 3 if key == "Z3i" else 5
    ff = f * f
    apr = square_family_coeffs("ssl_pr", N)
    out = [0] * (N + 1)
    for m in range(1, N + 1):
        a = apr[m]
        if not a:
            continue
        res = m % f
        full = (res in (1,)) if f == 3 else (res in (1, f - 1))
        if full:
            out[m] += a
            if ff * m <= N:
                out[ff * m] += a
        elif ff * m <= N and (f == 5 or res == 2):
            out[ff * m] += 2 * a
    return arith.SeriesCoeffs(out, N)


def order_ssl_bruteforce(order: str, N: int, primitive: bool = True) -> arith.SeriesCoeffs:
    """Distinct sublattices alpha O, alpha in O, counted by index (direct enumeration)."""
    key = _order_key(order) if order in NONMAX_ORDERS or order in _ALIASES else None
    if key is not None:
        t, n = NONMAX_ORDERS[key]
    else:
        t, n = _maximal_order_form(int(order))
    seen: dict[int, set] = {}
    # x^2 + t x y + n y^2 <= N  =>  |y| <= 2 sqrt(N / (4n - t^2))
    ymax = math.isqrt(4 * N // (4 * n - t * t)) + 1
    for y in range(-ymax, ymax + 1):
        xr = math.isqrt(N + t * t * y * y) + abs(t * y) + 1
        for x in range(-xr, xr + 1):
            m = x * x + t * x * y + n * y * y
            if m == 0 or m > N:
                continue
            if primitive and math.gcd(x, y) != 1:
                continue
            H = latt.hnf([(x, y), (-n * y, x + t * y)])
            seen.setdefault(m, set()).add(H)
    out = [0] * (N + 1)
    for m, s in seen.items():
        out[m] = len(s)
    return arith.SeriesCoeffs(out, N)


# ---------------------------------------------------------------------------
# cyclotomic integers

PID_CYCLO = (3, 4, 5, 7, 8, 9, 11, 12, 13, 15, 16, 17, 19, 20, 21, 24,
             25, 27, 28, 32, 33, 35, 36, 40, 44, 45, 48, 60, 84)


@dataclass(frozen=True)
class CycParams:
    n: int
    p: int
    ell: int
    m: int
    complex_splitting: bool


def _check_n(n: int) -> None:
    if n not in PID_CYCLO:
        raise ValueError(f"n = {n} is not in the list of cyclotomic PIDs")


def _pfree(n: int, p: int) -> int:
    while n % p == 0:
        n //= p
    return n


def cyc_params(n: int, p: int) -> tuple[int, int]:
    """(l_p, m_p): residue degree and number of primes above p in Z[xi_n]."""
    c = cyc_info(n, p)
    return c.ell, c.m


def cyc_info(n: int, p: int) -> CycParams:
    _check_n(n)
    if not arith.is_prime(p):
        raise ValueError(f"{p} is not prime")
    r = _pfree(n, p)
    ell = 1 if r == 1 else arith.multiplicative_order(p % r, r)
    m = arith.euler_phi(r) // ell
    # complex conjugation lies in the decomposition group iff -1 is a power of p mod r
    # (for ramified p the p-part of the group already contains -1)
    in_dec = r <= 2 or any(pow(p, k, r) == r - 1 for k in range(ell))
    return CycParams(n, p, ell, m, not in_dec)


def is_complex_splitting(n: int, p: int) -> bool:
    return cyc_info(n, p).complex_splitting


def _cyc_rule(n: int, kind: str):
    def gen(p, rmax):
        c = cyc_info(n, p)
        one = (1, 0, 0)
        if kind == "ssm":
            return arith.rational_factor([], [[one, (-1, 0, c.ell)]] * c.m, p, rmax)
        if not c.complex_splitting:
            return [1] + [0] * rmax
        if kind == "csm":
            k = c.m // 2
            return arith.rational_factor([[one, (1, 0, c.ell)]] * k, [[one, (-1, 0, c.ell)]] * k, p, rmax)
        if kind == "mcsm":
            return arith.rational_factor([], [[one, (-1, 0, c.ell)]] * c.m, p, rmax)
        raise ValueError(f"unknown kind {kind!r}")
    return gen


def cyc_coeffs(n: int, kind: str, N: int) -> arith.SeriesCoeffs:
    _check_n(n)
    if kind not in ("ssm", "csm", "mcsm"):
        raise ValueError(f"unknown kind {kind!r}")
    return arith.euler_expand(arith.EulerFactorRule(_cyc_rule(n, kind), f"cyc{n}.{kind}"), N)


def cyc_csm_value(n: int, s: float, prime_bound: int = 10 ** 5) -> float:
    """Truncated Euler product of the CSM series at real s > 1."""
    _check_n(n)

    def local(p):
        c = cyc_info(n, p)
        x = float(p) ** (-c.ell * s)
        return ((1 + x) / (1 - x)) ** (c.m / 2)
    return arith.euler_product_value(local, prime_bound, skip=lambda p: not is_complex_splitting(n, p))


def mcsm_ratio_constant(n: int, depth: int = 6, prime_bound: int = 10 ** 5) -> float:
    """prod_{l=1}^{depth+1} Psi(2^l)^(2^-l), the MCSM to CSM growth ratio."""
    if depth < 0:
        raise ValueError("depth must be non-negative")
    out = 1.0
    for l in range(1, depth + 2):
        out *= cyc_csm_value(n, 2.0 ** l, prime_bound) ** (2.0 ** -l)
    return out


# ---------------------------------------------------------------------------
# multiple CSLs of the square lattice by direct intersection

def square_mcsl_bruteforce(N: int) -> arith.SeriesCoeffs:
    """Distinct intersections of CSLs of Z^2 with index <= N.

    CSLs of index <= N are enumerated as primitive odd-norm ideals; their
    pairwise intersections are then closed under further intersection.
    """
    csls = []
    for m in range(1, N + 1):
        for H in latt.enumerate_sublattices(2, m):
            if classify_sublattice(H).csl:
                csls.append(H)
    found = set(csls)
    frontier = list(csls)
    while frontier:
        new = []
        for A in frontier:
            for B in csls:
                C = latt.intersect(A, B)
                if latt.index(C, latt.standard(2)) <= N and C not in found:
                    found.add(C)
                    new.append(C)
        frontier = new
    out = [0] * (N + 1)
    for C in found:
        out[latt.index(C, latt.standard(2))] += 1
    return arith.SeriesCoeffs(out, N)
