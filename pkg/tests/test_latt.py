import math
import random
from fractions import Fraction

import pytest
import sympy

from cslkit import arith, cubic, latt, quat
from cslkit.latt import RotationMatrix


def rot2(a, b):
    """z/conj(z) for z = a + bi as a rational rotation."""
    n = a * a + b * b
    return RotationMatrix([[Fraction(a * a - b * b, n), Fraction(-2 * a * b, n)],
                           [Fraction(2 * a * b, n), Fraction(a * a - b * b, n)]])


Z2 = latt.standard(2)


def test_hnf_examples():
    assert latt.hnf([(1, 0), (0, 1)]) == Z2
    L = latt.hnf([(2, 1), (1, 2)])
    assert L.basis[0][0] == 1 and list(L.basis[1]) == [0, 3]
    assert L.det == 3
    assert latt.hnf([(2, 1), (1, 2), (3, 3)]) == L
    assert latt.hnf([(1, 0), (0, 1), (5, 7)]) == Z2
    with pytest.raises(ValueError):
        latt.hnf([(1, 2), (2, 4)])


def test_hnf_canonical_under_basis_change():
    rng = random.Random(5)
    for _ in range(100):
        B = [[rng.randint(-6, 6) for _ in range(3)] for _ in range(3)]
        if latt.det(B) == 0:
            continue
        U = [[1, rng.randint(-3, 3), 0], [0, 1, rng.randint(-3, 3)], [0, 0, 1]]
        assert latt.hnf(latt.mat_mul(U, B)) == latt.hnf(B)


def test_index():
    assert latt.index(latt.hnf([(2, 0), (0, 2)]), Z2) == 4
    C, s = latt.csl(Z2, rot2(2, 1))
    assert latt.index(C, Z2) == 5 == s
    with pytest.raises(latt.NotSublattice):
        latt.index(Z2, latt.hnf([(2, 0), (0, 2)]))


def test_sum_intersect_dual():
    assert latt.intersect(Z2, Z2) == Z2
    assert latt.intersect(cubic.PC, cubic.BCC) == cubic.PC
    assert latt.index(cubic.PC, cubic.BCC) == 2
    assert latt.dual(cubic.BCC) == cubic.FCC
    rng = random.Random(6)
    for _ in range(50):
        B = [[Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(3)] for _ in range(3)]
        if latt.det(B) == 0:
            continue
        L = latt.hnf(B)
        assert latt.dual(latt.dual(L)) == L
        assert latt.lattice_sum(L, L) == L


def test_commensurate():
    R = rot2(2, 1)
    assert latt.commensurate(Z2, latt.apply(R, Z2))
    s2 = sympy.sqrt(2)
    assert not latt.commensurate([[1, 0], [0, 1]], [[s2, 0], [0, s2]])
    assert not latt.commensurate([[1, 0], [0, 1]], [[1, 0], [0, sympy.GoldenRatio]])
    assert latt.commensurate([[1, 0], [0, 1]], [[3, 0], [0, 3]])


def test_enumerate_sublattices():
    assert len(list(latt.enumerate_sublattices(2, 2))) == 3
    assert list(latt.enumerate_sublattices(2, 1)) == [Z2]
    assert len(list(latt.enumerate_sublattices(3, 2))) == 7
    for m in range(1, 201):
        lats = list(latt.enumerate_sublattices(2, m))
        assert len(lats) == arith.sigma1(m)
    assert len(set(latt.enumerate_sublattices(3, 12))) == len(list(latt.enumerate_sublattices(3, 12)))


def test_den():
    assert latt.den(Z2, RotationMatrix([[1, 0], [0, 1]])) == 1
    assert latt.den(latt.standard(3), quat.cayley3(quat.HurQuat.parse("1,1,1,0"))) == 3
    assert latt.den(Z2, rot2(1, 2)) == 5


def test_csl_examples():
    assert latt.csl(Z2, rot2(2, 1))[1] == 5
    assert latt.csl(latt.standard(3), quat.cayley3(quat.HurQuat.parse("1,1,1,0")))[1] == 3
    R4 = RotationMatrix([[0, -1], [1, 0]])
    assert latt.csl(Z2, R4) == (Z2, 1)


def test_csl_prime_split():
    q = quat.HurQuat.parse("3,1,1,2")   # norm 15
    C, s = latt.csl(cubic.BCC, quat.cayley3(q))
    assert s == 15
    parts = latt.csl_prime_split(C, cubic.BCC)
    assert sorted(latt.index(P, cubic.BCC) for P in parts) == [3, 5]
    assert latt.intersect_all(parts) == C
    q5 = quat.HurQuat.parse("1,2,0,0")
    C5, _ = latt.csl(cubic.BCC, quat.cayley3(q5))
    assert latt.csl_prime_split(C5, cubic.BCC) == [C5]
    assert latt.csl_prime_split(cubic.BCC, cubic.BCC) == [cubic.BCC]


def test_reflection_index():
    assert latt.coincidence_reflection_index((1, 1, 1), 3) == 3
    assert latt.coincidence_reflection_index((1, 1, 0, 0), 4) == 1
    assert latt.coincidence_reflection_index((1, 2, 3, 4, 5), 5) == 55
    with pytest.raises(ValueError):
        latt.coincidence_reflection_index((2, 2, 0))
    for v in [(1, 1, 1), (1, 1, 0, 0), (1, 2, 3, 4, 5), (1, 3, 0), (2, 3, 1, 1)]:
        R = RotationMatrix(latt.reflection_matrix(v))
        assert latt.csl(latt.standard(len(v)), R)[1] == latt.coincidence_reflection_index(v)


def test_ssl_norm_condition():
    assert latt.ssl_norm_condition(5, 2, 4)
    assert not latt.ssl_norm_condition(5, 2, 2)
    assert not latt.ssl_norm_condition(1, 3, 3)
    assert latt.ssl_norm_condition(1, 3, 9)


def test_well_rounded_2d():
    assert latt.is_well_rounded_2d(Z2)
    assert not latt.is_well_rounded_2d(latt.hnf([(1, 0), (0, 2)]))
    assert latt.is_well_rounded_2d(latt.hnf([(1, 2), (0, 5)]))
    assert len(latt.shortest_vectors_2d(Z2)) == 4


def _quat_rotations(n, rng):
    out = []
    while len(out) < n:
        q = quat.HurQuat(tuple(2 * rng.randint(-4, 4) for _ in range(4)))
        if q and quat.is_primitive(q):
            out.append(q)
    return out


def test_sigma_inverse_and_den_bounds():
    rng = random.Random(7)
    Z3 = latt.standard(3)
    for q in _quat_rotations(100, rng):
        R = quat.cayley3(q)
        s = latt.csl(Z3, R)[1]
        assert s == latt.csl(Z3, R.inverse())[1]
        d1 = latt.den(Z3, R)
        d2 = latt.den(Z3, R.inverse())
        assert d1.denominator == 1
        d1 = int(d1)
        assert s % d1 == 0 and d1 ** 3 % s == 0
        l = math.lcm(d1, int(d2))
        assert (l ** 3) % (s * s) == 0 and s % l == 0


def test_sigma_equals_den_2d():
    for a in range(0, 8):
        for b in range(1, 8):
            R = rot2(a, b)
            assert latt.csl(Z2, R)[1] == latt.den(Z2, R)


def test_dual_den():
    rng = random.Random(8)
    for q in _quat_rotations(30, rng):
        R = quat.cayley3(q)
        B = [[Fraction(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(3)] for _ in range(3)]
        if latt.det(B) == 0:
            continue
        L = latt.hnf(B)
        assert latt.den(latt.dual(L), R) == latt.den(L, R.inverse())


def test_sigma_multiplicative_coprime():
    rng = random.Random(9)
    Z3 = latt.standard(3)
    qs = _quat_rotations(60, rng)
    for q1, q2 in zip(qs[::2], qs[1::2]):
        R1, R2 = quat.cayley3(q1), quat.cayley3(q2)
        s1, s2 = latt.csl(Z3, R1)[1], latt.csl(Z3, R2)[1]
        s12 = latt.csl(Z3, R1 @ R2)[1]
        assert (s1 * s2) % s12 == 0
        if math.gcd(s1, s2) == 1:
            assert s12 == s1 * s2


def test_sigma12_sum_identity():
    rng = random.Random(10)
    Z3 = latt.standard(3)
    qs = _quat_rotations(40, rng)
    for q1, q2 in zip(qs[::2], qs[1::2]):
        C1, s1 = latt.csl(Z3, quat.cayley3(q1))
        C2, s2 = latt.csl(Z3, quat.cayley3(q2))
        s12 = latt.index(latt.intersect(C1, C2), Z3)
        splus = latt.index(latt.lattice_sum(C1, C2), Z3)
        assert s12 * splus == s1 * s2


def test_sublattice_divisibility_hex():
    # Z[i sqrt3] inside the Eisenstein integers, index 2; rotation by omega
    hexL = latt.standard(2)           # basis 1, omega
    sub = latt.hnf([(1, 0), (-1, 2)])  # 1, i sqrt3 = 2 omega - 1
    R = [[0, -1], [1, 1]]              # multiplication by omega
    assert latt.csl(hexL, R)[1] == 1
    C = latt.intersect(sub, latt.apply(R, sub))
    assert latt.index(C, sub) == 2


def test_supermultiplicativity_square():
    from cslkit import planar
    c = planar.square_family_coeffs("csl", 2500)
    for m in range(1, 51):
        for n in range(1, 51):
            if math.gcd(m, n) == 1:
                assert c[m * n] >= c[m] * c[n]
