"""Similar and coincidence sublattices of D4* (the Hurwitz ring J) and Z^4.

Lattices are given in the doubled quaternion coordinates of quat, so J is
quat.J_LATTICE and Z^4 is quat.LIPSCHITZ_LATTICE. A rotation is written
R(p, q): x -> p x conj(q) / |pq|.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from . import arith, latt, quat
from .quat import HurQuat, J_BASIS, J_LATTICE, LIPSCHITZ_LATTICE, ONE_PLUS_I

D4 = latt.hnf([(ONE_PLUS_I * b).v for b in J_BASIS])
Z4 = LIPSCHITZ_LATTICE


class NotAdmissible(ValueError):
    pass


@dataclass(frozen=True)
class AdmissiblePair:
    """A primitive admissible pair together with its odd reduction.

    p, q are the pair as given; (po, qo) is the odd pair obtained by
    stripping a common right factor 1 + i when both are even. The extension
    scalars make |alpha_p po|^2 = |alpha_q qo|^2.
    """

    p: HurQuat
    q: HurQuat
    po: HurQuat
    qo: HurQuat
    alpha_p: int
    alpha_q: int

    @property
    def odd(self) -> bool:
        return self.p.norm() % 2 == 1

    @property
    def extended(self) -> tuple[HurQuat, HurQuat]:
        return self.po * self.alpha_p, self.qo * self.alpha_q

    def rotation(self) -> latt.RotationMatrix:
        return quat.cayley4(self.p, self.q)


def make_admissible(p, q) -> AdmissiblePair:
    p, q = quat.as_quat(p), quat.as_quat(q)
    if not p or not q:
        raise NotAdmissible("zero quaternion")
    if not (quat.is_primitive(p) and quat.is_primitive(q)):
        raise NotAdmissible("p and q must be primitive")
    a, b = p.norm(), q.norm()
    if not arith.is_square(a * b):
        raise NotAdmissible(f"|pq|^2 = {a * b} is not a square")
    po, qo = p, q
    if a % 2 == 0:
        # both norms are even here; remove the common factor 1 + i
        po, _ = _strip_one_plus_i(p)
        qo, _ = _strip_one_plus_i(q)
    a, b = po.norm(), qo.norm()
    g = math.gcd(a, b)
    return AdmissiblePair(p, q, po, qo, math.isqrt(b // g), math.isqrt(a // g))


def _strip_one_plus_i(q: HurQuat) -> tuple[HurQuat, int]:
    # q (1+i)^{-1} = q (1-i)/2; one step suffices for primitive q
    w = quat.hprod(q.v, (1, -1, 0, 0))
    return HurQuat(tuple(x // 2 for x in w)), 1


def _pair(obj) -> AdmissiblePair:
    if isinstance(obj, AdmissiblePair):
        return obj
    p, q = obj
    return make_admissible(p, q)


# ---------------------------------------------------------------------------
# D4*

def sigma_d4star(pair) -> int:
    pr = _pair(pair)
    a, b = pr.po.norm(), pr.qo.norm()
    s = a * b // math.gcd(a, b)
    x, _ = pr.extended
    assert x.norm() == s
    return s


def den_d4star(pair) -> int:
    pr = _pair(pair)
    return math.isqrt(pr.po.norm() * pr.qo.norm())


@dataclass(frozen=True)
class Hyper4Csl:
    pair: AdmissiblePair
    lattice: latt.Lattice
    sigma: int
    kind: str  # "d4star" or "z4"


def _sum_of_ideals(x: HurQuat, y: HurQuat) -> latt.Lattice:
    """x J + J conj(y)."""
    yb = y.conj()
    return latt.hnf([(x * e).v for e in J_BASIS] + [(e * yb).v for e in J_BASIS])


def csl_d4star(pair) -> Hyper4Csl:
    """J cap R J = x J + J conj(y) for the odd extended pair (x, y)."""
    pr = _pair(pair)
    x, y = pr.extended
    L = _sum_of_ideals(x, y)
    s = sigma_d4star(pr)
    assert latt.index(L, J_LATTICE) == s
    return Hyper4Csl(pr, L, s, "d4star")


def csl_d4_equal(pair1, pair2) -> bool:
    """Whether two pairs give the same CSL of J, from norms and gclds."""
    a, b = _pair(pair1), _pair(pair2)
    p1, q1, p2, q2 = a.po, a.qo, b.po, b.qo
    if p1.norm() != p2.norm() or q1.norm() != q2.norm():
        return False
    n = HurQuat((2 * math.isqrt(p1.norm() * q1.norm()), 0, 0, 0))
    return _gcld(p1, n) == _gcld(p2, n) and _gcld(q1, n) == _gcld(q2, n)


_GCLD: dict = {}


def _gcld(a: HurQuat, b: HurQuat) -> HurQuat:
    key = (a, b)
    g = _GCLD.get(key)
    if g is None:
        g = _GCLD[key] = quat.gcld(a, b)
    return g


# ---------------------------------------------------------------------------
# Z^4

def _ip4(p: HurQuat, q: HurQuat) -> int:
    """4 <p, q> in doubled coordinates."""
    return sum(x * y for x, y in zip(p.v, q.v))


def den_z4(pair) -> int:
    pr = _pair(pair)
    pq = math.isqrt(pr.p.norm() * pr.q.norm())
    t = _ip4(pr.p, pr.q)
    if pr.odd:
        return pq if t % 4 == 0 else 2 * pq
    # even pair: <p,q> is an integer; test its parity
    return pq // 2 if t % 8 == 0 else pq


def sigma_z4(pair) -> int:
    pr = _pair(pair)
    s, d = sigma_d4star(pr), den_z4(pr)
    return s * d // math.gcd(s, d)


def csl_z4(pair) -> Hyper4Csl:
    """Z^4 cap R Z^4 through the D4 / D4* case split.

    Odd index: Z^4 cap (J cap R J). Even index: D4 cap R D4, which has
    index 2 Sigma_{D4*} in Z^4.
    """
    pr = _pair(pair)
    s = sigma_z4(pr)
    if s % 2 == 1:
        L = latt.intersect(Z4, csl_d4star(pr).lattice)
    else:
        # D4 cap R D4 = (1+i)(J cap R(p', q) J) with p' = (1+i)^{-1} p (1+i)
        ps = _conj_by_one_plus_i(pr.po)
        inner = csl_d4star(make_admissible(ps, pr.qo)).lattice
        L = latt.hnf([(ONE_PLUS_I * HurQuat(_int_row(row))).v for row in inner.basis])
    assert latt.index(L, Z4) == s
    return Hyper4Csl(pr, L, s, "z4")


def _int_row(row) -> tuple[int, ...]:
    if any(Fraction(c).denominator != 1 for c in row):
        raise ValueError("expected an integral vector in doubled coordinates")
    return tuple(int(c) for c in row)


def _conj_by_one_plus_i(p: HurQuat) -> HurQuat:
    w = quat.hprod(quat.hprod((1, -1, 0, 0), p.v), (1, 1, 0, 0))
    return HurQuat(tuple(x // 2 for x in w))


# ---------------------------------------------------------------------------
# SSLs

def ssl_d4(p, q) -> latt.Lattice:
    """The similar sublattice p J conj(q) of J."""
    p, q = quat.as_quat(p), quat.as_quat(q)
    if not p or not q:
        raise ValueError("zero quaternion")
    qb = q.conj()
    return latt.hnf([(p * e * qb).v for e in J_BASIS])


def g_nr(n: int, r: int) -> int:
    """(r+1) n^r + 2 (1 - (r+1) n^r + r n^{r+1}) / (n-1)^2."""
    num = 1 - (r + 1) * n ** r + r * n ** (r + 1)
    q, rem = divmod(2 * num, (n - 1) ** 2)
    assert rem == 0
    return (r + 1) * n ** r + q


# ---------------------------------------------------------------------------
# counting functions

def _d4_rot(p: int, r: int) -> int:
    if p == 2:
        return 0
    return (p + 1) * p ** (r - 1) * (p ** (r + 1) + p ** (r - 1) - 2) // (p - 1)


def _d4_csl(p: int, r: int) -> int:
    if p == 2:
        return 0
    if r % 2:
        inner = Fraction(p ** (2 * r + 1) + p ** (2 * r - 2) - 2 * p ** ((r - 1) // 2))
    else:
        inner = p ** (2 * r + 1) + p ** (2 * r - 2) - Fraction(2 * (p * p + 1), p + 1) * p ** ((r - 2) // 2)
    v = Fraction((p + 1) ** 2, p ** 3 - 1) * inner
    assert v.denominator == 1
    return int(v)


def _z4_rot(p: int, r: int) -> int:
    if p == 2:
        return 2 if r == 1 else 0
    return _d4_rot(p, r)


def _z4_csl(p: int, r: int) -> int:
    if p == 2:
        return 1 if r == 1 else 0
    return _d4_csl(p, r)


def _b_j(p: int, r: int) -> int:
    if r % 2:
        return 0
    if p == 2:
        return 1
    return g_nr(p, r // 2)


def _b_z4(p: int, r: int) -> int:
    v = _b_j(p, r)
    return 3 * v if p == 2 else v


def _prim_rule(f):
    def rule(p, r):
        prev = 1 if r == 4 else (f(p, r - 4) if r > 4 else 0)
        return f(p, r) - prev
    return rule


FAMILIES = {
    "d4_rot": arith.MultFn("hyper4.d4_rot", _d4_rot),
    "d4_csl": arith.MultFn("hyper4.d4_csl", _d4_csl),
    "z4_rot": arith.MultFn("hyper4.z4_rot", _z4_rot),
    "z4_csl": arith.MultFn("hyper4.z4_csl", _z4_csl),
    "d4_ssl": arith.MultFn("hyper4.d4_ssl", _b_j),
    "z4_ssl": arith.MultFn("hyper4.z4_ssl", _b_z4),
    "d4_ssl_pr": arith.MultFn("hyper4.d4_ssl_pr", _prim_rule(_b_j)),
    "z4_ssl_pr": arith.MultFn("hyper4.z4_ssl_pr", _prim_rule(_b_z4)),
}


def _family(name: str) -> arith.MultFn:
    try:
        return FAMILIES[name]
    except KeyError:
        raise ValueError(f"unknown hyper4 family {name!r}") from None


def hyper4_counts(family: str, n: int) -> int:
    if n < 1:
        raise ValueError("n must be positive")
    return _family(family)(n)


def hyper4_coeffs(family: str, N: int) -> arith.SeriesCoeffs:
    return arith.mult_coeffs(_family(family), N)


def _odd_only(num, den):
    def gen(p, rmax):
        if p == 2:
            return [1] + [0] * rmax
        return arith.rational_factor(num, den, p, rmax)
    return gen


# Euler factors in X = p^{-s}, for cross-checking the closed forms
D4_ROT_RULE = arith.EulerFactorRule(_odd_only(
    [[(1, 0, 0), (1, 0, 1)], [(1, 0, 0), (1, 1, 1)]],
    [[(1, 0, 0), (-1, 1, 1)], [(1, 0, 0), (-1, 2, 1)]]), "hyper4.d4_rot")
D4_CSL_RULE = arith.EulerFactorRule(_odd_only(
    [[(1, 0, 0), (1, 0, 1), (2, 1, 1), (2, 0, 2), (1, 1, 2), (1, 1, 3)]],
    [[(1, 0, 0), (-1, 2, 1)], [(1, 0, 0), (-1, 1, 2)]]), "hyper4.d4_csl")


def gamma_d4_constant(prime_bound: int = 10 ** 5) -> float:
    """Ratio of the CSL and rotation series of D4* at s = 3."""
    if prime_bound < 3:
        return 1.0

    def local(p):
        x = float(p)
        return 1 - 2 * (x * x - 1) * x ** -6 / ((1 + x ** -2) * (1 + x ** -3) * (1 - x ** -5))
    return arith.euler_product_value(local, prime_bound, skip=lambda p: p == 2)


# residues at the rightmost poles, for the summatory asymptotics
def d4_rot_asymptotic_constant() -> float:
    return 210 / math.pi ** 6 * arith.zeta(3)


def z4_rot_asymptotic_constant() -> float:
    return 525 / (2 * math.pi ** 6) * arith.zeta(3)


# ---------------------------------------------------------------------------
# brute-force oracles

def d4_oracle(n: int) -> tuple[int, int]:
    """(distinct images R J, distinct CSLs J cap R J) over odd pairs with Sigma = n.

    Sigma is taken from latt.csl, not from the lcm formula.
    """
    if n % 2 == 0:
        return 0, 0
    imgs, csls = set(), set()
    for a in arith.divisors(n):
        for b in arith.divisors(n):
            if a * b // math.gcd(a, b) != n or not arith.is_square(a * b):
                continue
            for p in quat.right_class_reps(a):
                for q in quat.right_class_reps(b):
                    R = quat.cayley4(p, q)
                    L, s = latt.csl(J_LATTICE, R)
                    if s != n:
                        continue
                    imgs.add(latt.apply(R, J_LATTICE))
                    csls.add(L)
    return len(imgs), len(csls)


def d4_ssl_oracle(m: int, primitive: bool = False) -> int:
    """Distinct p J conj(q) of index m = (|p|^2 |q|^2)^2, p odd."""
    k = math.isqrt(m)
    if k * k != m:
        return 0
    S = set()
    for a in arith.divisors(k):
        b = k // a
        if a % 2 == 0:
            continue
        for p in quat.right_class_reps(a):
            for q in quat.right_class_reps(b, primitive=primitive):
                S.add(ssl_d4(p, q))
    return len(S)
