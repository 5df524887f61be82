"""CSLs and multiple CSLs of the cubic lattices.

The ambient frame is the bcc lattice Z^3 + (u + Z^3), u = (1/2,1/2,1/2),
which is the lattice of imaginary parts of Hurwitz quaternions. The pc and
fcc cases are obtained by intersecting with Z^3 and with the dual of bcc.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import arith, latt, quat
from .quat import HurQuat

H = Fraction(1, 2)
BCC = latt.hnf([(1, 0, 0), (0, 1, 0), (0, 0, 1), (H, H, H)])
PC = latt.standard(3)
FCC = latt.dual(BCC)
CUBIC = {"pc": PC, "bcc": BCC, "fcc": FCC}


def cubic_lattice(kind: str) -> latt.Lattice:
    try:
        return CUBIC[kind]
    except KeyError:
        raise ValueError(f"unknown cubic type {kind!r}") from None


def _im(q: HurQuat) -> tuple[Fraction, ...]:
    return q.imag()


def im_lattice(gens) -> latt.Lattice:
    """Lattice of imaginary parts of a list of quaternions."""
    return latt.hnf([_im(g) for g in gens if g])


def _odd_primitive(q) -> HurQuat:
    q = quat.as_quat(q)
    c = quat.content_J(q)
    if c != 1:
        raise ValueError("quaternion must be primitive")
    if q.norm() % 2 == 0:
        q, _ = quat.reduce_even(q)
    return q


def sigma_cubic(q) -> int:
    """Coincidence index |q|^2 / 2^l of R(q) for primitive q."""
    q = quat.as_quat(q)
    if not q:
        raise ValueError("zero quaternion")
    if not quat.is_primitive(q):
        raise ValueError("quaternion must be primitive")
    n = q.norm()
    while n % 2 == 0:
        n //= 2
    return n


@dataclass(frozen=True)
class CubicCsl:
    q: HurQuat
    kind: str
    lattice: latt.Lattice
    sigma: int


def csl_cubic(q, kind: str = "bcc") -> CubicCsl:
    """CSL of R(q) for one of the cubic lattices, as Im(qJ) cap Gamma."""
    q = _odd_primitive(q)
    L = im_lattice([q * b for b in quat.J_BASIS])
    G = cubic_lattice(kind)
    if kind != "bcc":
        L = latt.intersect(L, G)
    return CubicCsl(quat.canonical_right_associate(q), kind, L, latt.index(L, G))


def _c_bcc(p: int, r: int) -> int:
    if p == 2:
        return 0
    return (p + 1) * p ** (r - 1)


C_BCC = arith.MultFn("cubic.csl", _c_bcc)


def count_cubic_csl(n: int) -> int:
    return arith.mult_eval(C_BCC, n)


def _odd_rule(num, den):
    def gen(p, rmax):
        if p == 2:
            return [1] + [0] * rmax
        return arith.rational_factor(num, den, p, rmax)
    return gen


# (1 + X) / (1 - p X)
CSL_RULE = arith.EulerFactorRule(_odd_rule([[(1, 0, 0), (1, 0, 1)]], [[(1, 0, 0), (-1, 1, 1)]]), "cubic.csl")


def cubic_csl_coeffs(N: int) -> arith.SeriesCoeffs:
    return arith.euler_expand(CSL_RULE, N)


# ---------------------------------------------------------------------------
# double and triple CSLs

def mcsl2(q1, q2, kind: str = "bcc") -> tuple[latt.Lattice, int]:
    """Gamma(R(q1)) cap Gamma(R(q2)) as Im(qJ + q1 J conj(q2)), q = lcrm."""
    q1, q2 = _odd_primitive(q1), _odd_primitive(q2)
    m = quat.lcrm(q1, q2)
    gens = [m * b for b in quat.J_BASIS] + [q1 * b * q2.conj() for b in quat.J_BASIS]
    L = im_lattice(gens)
    G = cubic_lattice(kind)
    if kind != "bcc":
        L = latt.intersect(L, G)
    return L, latt.index(L, G)


def sigma_mcsl2_gcld(q1, q2) -> int:
    """|q1|^2 |q2|^2 / |gcld(q1,q2)|^2."""
    q1, q2 = _odd_primitive(q1), _odd_primitive(q2)
    return q1.norm() * q2.norm() // quat.gcld(q1, q2).norm()


def sigma_mcsl2_lcrm(q1, q2) -> int:
    """|lcrm(q1,q2)|^2, the other form of the same index."""
    q1, q2 = _odd_primitive(q1), _odd_primitive(q2)
    return quat.lcrm(q1, q2).norm()


def _prime_part(q: HurQuat, p: int) -> HurQuat:
    n = q.norm()
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    if e == 0:
        return quat.ONE
    return quat.gcld(q, quat.ONE * p ** e)


def _vp(n: int, p: int) -> int:
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e


def mcsl3(q1, q2, q3, kind: str = "bcc") -> tuple[latt.Lattice, int]:
    """Triple CSL Gamma(R(q1)) cap Gamma(R(q2)) cap Gamma(R(q3))."""
    qs = [_odd_primitive(q) for q in (q1, q2, q3)]
    primes = sorted({p for q in qs for p, _ in arith.factorize(q.norm())})
    G = cubic_lattice(kind)
    if len(primes) <= 1:
        L = _mcsl3_prime_power(*qs)
    else:
        L = latt.intersect_all([_mcsl3_prime_power(*[_prime_part(q, p) for q in qs]) for p in primes])
    if kind != "bcc":
        L = latt.intersect(L, G)
    return L, latt.index(L, G)


def _mcsl3_prime_power(q1: HurQuat, q2: HurQuat, q3: HurQuat) -> latt.Lattice:
    # normalize: |q1|^2 maximal, then |m12|^2 >= |m13|^2
    qs = sorted([q1, q2, q3], key=lambda q: -q.norm())
    a = qs[0]
    b, c = qs[1], qs[2]
    if quat.lcrm(a, b).norm() < quat.lcrm(a, c).norm():
        b, c = c, b
    m12 = quat.lcrm(a, b)
    g13 = quat.gcld(a, c).norm()
    g23 = quat.gcld(b, c).norm()
    n = max(Fraction(1), Fraction(c.norm(), g13 * g23))
    if n.denominator != 1:
        raise ArithmeticError("non-integral scaling factor")
    n = int(n)
    gens = [m12 * e for e in quat.J_BASIS] + [(a * e * b.conj()) * n for e in quat.J_BASIS]
    return im_lattice(gens)


def _c2_closed(p: int, r: int) -> int:
    """Number of distinct double CSLs of index p^r (odd p), exact via rationals."""
    if p == 2:
        return 0
    P = Fraction(p)
    t = (Fraction(r + 1, 2) * (p + 1) * P ** (r - 1)
         + (Fraction(r, 2) - 1) * P ** (r - 2)
         - (Fraction(r, 2) - r // 2) * P ** (r - 4)
         + (P ** (r - 1) - P ** (r - 2 * (r // 3) - 1)) / (p * p - 1)
         + (P ** (4 * (r // 3) - r + 2) - P ** (4 * (r // 2) - r - 2)) / (2 * (p * p - 1)))
    if t.denominator != 1:
        raise ArithmeticError(f"non-integral count at {p}^{r}")
    return int(t)


C2 = arith.MultFn("cubic.mcsl2", _c2_closed)


def _c3(p: int, r: int) -> int:
    if p == 2:
        return 0
    return sum(_c2_closed(p, r - 3 * k) if r - 3 * k > 0 else 1 for k in range(r // 3 + 1))


C3 = arith.MultFn("cubic.mcsl3", _c3)


def count_mcsl2(n: int) -> int:
    return arith.mult_eval(C2, n)


def count_mcsl3(n: int) -> int:
    return arith.mult_eval(C3, n)


def _psi2_gen(p: int, rmax: int) -> list:
    """Euler factor of the double-CSL series in X = p^{-s}, from its closed form."""
    if p == 2:
        return [1] + [0] * rmax
    n = rmax
    one_pX = [1, -p]                       # 1 - p X
    onepX3 = [1, 0, 0, -p]                 # 1 - p X^3
    base = arith.ps_mul(arith.ps_mul([1, 1], [1, 0, 0, 1], n),
                        arith.ps_mul(arith.ps_inv(one_pX, n), arith.ps_inv(onepX3, n), n), n)
    # C(p, s) = 1 + X^2 (p^2+p) / (2 (1+X)(1-pX)) - X^4 (p+1) / ((1+X)(1-pX)(1+X^3))
    d1 = arith.ps_inv(arith.ps_mul([1, 1], one_pX, n), n)
    t1 = [Fraction(x * (p * p + p), 2) for x in arith.ps_mul([0, 0, 1], d1, n)]
    d2 = arith.ps_mul(d1, arith.ps_inv([1, 0, 0, 1], n), n)
    t2 = [x * (p + 1) for x in arith.ps_mul([0, 0, 0, 0, 1], d2, n)]
    C = [Fraction(int(k == 0)) + (t1[k] if k < len(t1) else 0) - (t2[k] if k < len(t2) else 0)
         for k in range(n + 1)]
    out = arith.ps_mul(base, C, n)
    res = []
    for x in out:
        x = Fraction(x)
        if x.denominator != 1:
            raise ArithmeticError("non-integral Euler coefficient")
        res.append(int(x))
    return res


PSI2_RULE = arith.EulerFactorRule(_psi2_gen, "cubic.mcsl2")


def mcsl2_coeffs(N: int, from_rule: bool = False) -> arith.SeriesCoeffs:
    if from_rule:
        return arith.euler_expand(PSI2_RULE, N)
    return arith.mult_coeffs(C2, N)


def mcsl3_coeffs(N: int) -> arith.SeriesCoeffs:
    return arith.mult_coeffs(C3, N)


def triple_junction(q1, q2) -> dict:
    """Indices of a triple junction given by R1 = R(q1), R2 = R(q2)."""
    q1, q2 = _odd_primitive(q1), _odd_primitive(q2)
    q12 = quat.gcld(q1, q2)
    w = q1.conj() * q2
    q3 = _div_real(w, q12.norm())
    q3 = _odd_primitive(q3)
    s1, s2, s3 = sigma_cubic(q1), sigma_cubic(q2), sigma_cubic(q3)
    s12 = q12.norm()
    s13 = quat.gcld(q1.conj(), q3).norm()
    s23 = quat.gcld(q2.conj(), q3.conj()).norm()
    _, sd = mcsl2(q1, q2)
    rec = {"q3": q3, "sigma1": s1, "sigma2": s2, "sigma3": s3, "sigma12": s12,
           "sigma13": s13, "sigma23": s23, "sigma_double": sd}
    if s3 * s12 * s12 != s1 * s2:
        raise ArithmeticError("sigma3 identity failed")
    if sd != s12 * s13 * s23 or sd * sd != s1 * s2 * s3:
        raise ArithmeticError("double index identity failed")
    return rec


def _div_real(q: HurQuat, k: int) -> HurQuat:
    """q / k, which must again be a Hurwitz quaternion."""
    if any(x % k for x in q.v):
        raise ValueError("not divisible")
    w = tuple(x // k for x in q.v)
    return HurQuat(w)


def mcsl2_equal(q1, q2, q3, q4) -> bool:
    """Equality test for two double CSLs with norms powers of one odd prime."""
    qs = [_odd_primitive(q) for q in (q1, q2, q3, q4)]
    primes = {p for q in qs for p, _ in arith.factorize(q.norm())}
    if len(primes) > 1:
        raise ValueError("all norms must be powers of one prime")
    if not primes:
        return True
    p = primes.pop()
    al = lambda q: _vp(q.norm(), p)
    ag = lambda a, b: _vp(quat.gcld(a, b).norm(), p)
    for A, B in ((0, 1), (1, 0)):
        for C, D in ((2, 3), (3, 2)):
            for first in (0, 1):
                if first == 0:
                    a, b, c, d = qs[A], qs[B], qs[C], qs[D]
                else:
                    a, b, c, d = qs[C], qs[D], qs[A], qs[B]
                a1, a2, a3, a4 = al(a), al(b), al(c), al(d)
                if not (a1 >= a2 >= a4 and a3 >= a4):
                    continue
                a13, a23, a14 = ag(a, c), ag(b, c), ag(a, d)
                if a1 == a2 and a13 < a23:
                    continue
                if a3 == a4 and a13 < a14:
                    continue
                a12, a34, a24 = ag(a, b), ag(c, d), ag(b, d)
                m = min(a4 - a34, a34)
                return (a1 == a3 and a2 - a12 == a4 - a34
                        and a1 - a13 <= m and a4 - a24 <= m)
    raise ArithmeticError("no admissible ordering found")


# ---------------------------------------------------------------------------
# numerical constants

def rho2(prime_bound: int = 10 ** 5) -> float:
    """Residue of the double-CSL series at s = 2, as a truncated Euler product.

    Each local factor is multiplied by (1 - 1/p), cancelling the pole of
    zeta(s - 1); p = 2 has trivial local factor and contributes 1/2.
    """
    local = lambda p: (1 - 1 / p) * _local_sum(p)
    return 0.5 * arith.euler_product_value(local, prime_bound, skip=lambda p: p == 2)


def rho3(prime_bound: int = 10 ** 5) -> float:
    """Residue for intersections of up to three CSLs.

    The local factor at odd p is psi2(p, 2) / (1 - p^{-6}), the extra factor
    counting the scaled copies p^k Gamma(R1, R2).
    """
    local = lambda p: (1 - 1 / p) * _local_sum(p) / (1 - p ** -6.0)
    return 0.5 * arith.euler_product_value(local, prime_bound, skip=lambda p: p == 2)


def _local_sum(p: int, s: float = 2.0) -> float:
    """sum_r c2(p^r) p^{-rs} via the closed local factor."""
    x = p ** (-s)
    base = (1 + x) * (1 + x ** 3) / ((1 - p * x) * (1 - p * x ** 3))
    C = 1 + x * x * (p * p + p) / (2 * (1 + x) * (1 - p * x)) - x ** 4 * (p + 1) / (
        (1 + x) * (1 - p * x) * (1 + x ** 3))
    return base * C


def local_sum_from_counts(p: int, s: int = 2, rmax: int = 80) -> float:
    """The same local factor summed directly from the prime-power counts."""
    return float(sum(Fraction(_c2_closed(p, r) if r else 1, p ** (r * s)) for r in range(rmax + 1)))


# ---------------------------------------------------------------------------
# brute-force oracles

def csl_set(n: int) -> set:
    """Distinct BCC CSLs Gamma cap R(q)Gamma over primitive q with |q|^2 = n."""
    out = set()
    for q in quat.primitive_quats_of_norm(n):
        L, s = latt.csl(BCC, quat.cayley3(q))
        if s == n:
            out.add(L)
    return out


def cubic_oracle(n: int) -> int:
    """Number of distinct CSLs of index n, found by quaternion dedupe."""
    if n % 2 == 0:
        return 0
    return len(csl_set(n))


def mcsl_oracle(n: int, triples: bool = False) -> int:
    """Distinct MCSLs of index n built from CSLs of index dividing n.

    Intersections of two CSLs (and of three, if asked) are collected and
    only those of index n are counted; a single CSL of index n counts too.
    """
    base = set()
    for d in arith.divisors(n):
        base |= csl_set(d)
    base = sorted(base, key=lambda L: L.key())
    found = {L for L in base if latt.index(L, BCC) == n}
    pairs = set()
    for i, A in enumerate(base):
        for B in base[i:]:
            C = latt.intersect(A, B)
            k = latt.index(C, BCC)
            if n % k == 0:
                pairs.add(C)
                if k == n:
                    found.add(C)
    if triples:
        pairs = sorted(pairs, key=lambda L: L.key())
        for A in pairs:
            for B in base:
                C = latt.intersect(A, B)
                if latt.index(C, BCC) == n:
                    found.add(C)
    return len(found)
