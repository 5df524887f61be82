import math
import random
from itertools import product

import pytest

from cslkit import arith
from cslkit.arith import SeriesCoeffs


def test_factorize_examples():
    assert arith.factorize(1) == []
    assert arith.factorize(60) == [(2, 2), (3, 1), (5, 1)]
    assert arith.factorize(9699690) == [(p, 1) for p in (2, 3, 5, 7, 11, 13, 17, 19)]


def test_factorize_against_trial_division():
    rng = random.Random(1)
    for _ in range(200):
        n = rng.randrange(1, 10 ** 6)
        m, out, p = n, [], 2
        while p * p <= m:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            if e:
                out.append((p, e))
            p += 1
        if m > 1:
            out.append((m, 1))
        assert arith.factorize(n) == out


def test_sigma1():
    assert arith.sigma1(1) == 1
    assert arith.sigma1(6) == 12
    assert arith.sigma1(60) == 168


def test_mult_eval():
    sig = arith.MultFn("sigma1", lambda p, r: (p ** (r + 1) - 1) // (p - 1))
    assert arith.mult_eval(sig, 15) == 24
    from cslkit import cubic
    assert arith.mult_eval(cubic.C_BCC, 15) == 24
    delta = arith.MultFn("delta", lambda p, r: 0)
    assert arith.mult_eval(delta, 7) == 0
    assert arith.mult_eval(delta, 1) == 1


def test_convolution_examples():
    N = 30
    zeta = SeriesCoeffs.from_function(lambda n: 1, N)
    zeta1 = zeta.shift(1)
    assert arith.dirichlet_convolve(zeta, zeta1)[6] == 12
    chi = SeriesCoeffs.from_function(lambda n: arith.kronecker(-4, n), N)
    assert arith.dirichlet_convolve(chi, zeta)[25] == 3
    a = SeriesCoeffs.from_function(lambda n: n * n - 3, N)
    assert arith.dirichlet_convolve(SeriesCoeffs.delta(N), a) == a


def test_convolution_mismatched_N():
    with pytest.raises(ValueError):
        arith.dirichlet_convolve(SeriesCoeffs.delta(3), SeriesCoeffs.delta(4))


def test_convolution_assoc_comm():
    rng = random.Random(2)
    N = 200
    a, b, c = (SeriesCoeffs.from_function(lambda n: rng.randint(-5, 5), N) for _ in range(3))
    conv = arith.dirichlet_convolve
    assert conv(a, b) == conv(b, a)
    assert conv(conv(a, b), c) == conv(a, conv(b, c))


def _rule(gen):
    return arith.EulerFactorRule(gen)


def test_euler_expand_examples():
    # (1 + X)/(1 - X) over p = 1 mod 4
    def csl(p, rmax):
        if p % 4 != 1:
            return [1] + [0] * rmax
        return [1] + [2] * rmax
    a = arith.euler_expand(_rule(csl), 30)
    assert a[5] == 2 and a[25] == 2
    # zeta(2s)
    a = arith.euler_expand(_rule(lambda p, rmax: [1 if r % 2 == 0 else 0 for r in range(rmax + 1)]), 10)
    assert [n for n in range(1, 11) if a[n]] == [1, 4, 9]
    # r + 1 over p = 1 mod 4
    a = arith.euler_expand(_rule(lambda p, rmax: [r + 1 if p % 4 == 1 else int(r == 0)
                                                  for r in range(rmax + 1)]), 30)
    assert a[25] == 3


def test_zeta_k_equals_convolution():
    N = 10 ** 4
    def zk(p, rmax):
        ch = arith.kronecker(-4, p)
        den = [[(1, 0, 0), (-1, 0, 1)], [(1, 0, 0), (-ch, 0, 1)]]
        return arith.rational_factor([], den, p, rmax)
    a = arith.euler_expand(_rule(zk), N)
    zeta = SeriesCoeffs.from_function(lambda n: 1, N)
    chi = SeriesCoeffs.from_function(lambda n: arith.kronecker(-4, n), N)
    assert a == arith.dirichlet_convolve(zeta, chi)


def test_euler_expand_prime_filter():
    a = arith.euler_expand(_rule(lambda p, rmax: [1] * (rmax + 1)), 50, primes=lambda p: p != 2)
    assert a[2] == 0 and a[4] == 0 and a[15] == 1


def test_summatory():
    s = SeriesCoeffs.from_function(arith.sigma1, 20)
    assert arith.summatory(s, 3) == 8
    assert arith.summatory(s, 10) == 87
    assert arith.summatory(s, 0) == 0
    with pytest.raises(ValueError):
        arith.summatory(s, 21)


def test_asymptote_check():
    N = 10 ** 5
    s = SeriesCoeffs.from_function(arith.sigma1, N)
    assert arith.asymptote_check(s, (math.pi ** 2 / 12, 2, 0), N) < 0.02
    assert arith.asymptote_check(s, {"C": math.pi ** 2 / 12, "alpha": 2}, N) < 0.02
    with pytest.raises(ValueError):
        arith.asymptote_check(s, (0, 1, 0), 10)
    with pytest.raises(ValueError):
        arith.asymptote_check(s, (1, 1, 0), N + 1)


def test_kronecker():
    assert arith.kronecker(-4, 3) == -1
    assert arith.kronecker(-4, 2) == 0
    assert arith.kronecker(5, 7) == -1
    assert arith.kronecker(5, 11) == 1
    for d in (-4, -3, -7, -8, 5, 12):
        for m in range(1, 60):
            for n in range(1, 60):
                assert arith.kronecker(d, m * n) == arith.kronecker(d, m) * arith.kronecker(d, n)


def _hilbert_brute(a, b, p, k=4):
    # primitive solutions of z^2 = a x^2 + b y^2 modulo p^k
    M = p ** k
    for x, y, z in product(range(p ** 2), repeat=3):
        if x % p == y % p == z % p == 0:
            continue
        if (a * x * x + b * y * y - z * z) % M == 0:
            return 1
    return -1


def test_hilbert_examples():
    assert arith.hilbert_symbol(1, 7, 3) == 1
    assert arith.hilbert_symbol(-1, -1, 2) == -1
    assert arith.hilbert_symbol(-1, -1, "infinity") == -1
    assert arith.hilbert_symbol(2, 5, 5) == -1
    with pytest.raises(ValueError):
        arith.hilbert_symbol(2, 3, 4)


def test_hilbert_against_solvability():
    # p odd: solutions modulo p^2 with entries below p^2 decide solvability
    # for a, b of valuation at most one
    for p in (3, 5, 7):
        for a in (1, 2, 3, -1, 5, 7, 10, -3):
            for b in (1, 2, 3, -1, 5, 7, 10, -3):
                assert arith.hilbert_symbol(a, b, p) == _hilbert_brute(a, b, p, 3), (a, b, p)


def test_hilbert_symmetric_bimultiplicative():
    vals = (-7, -3, -2, -1, 2, 3, 5, 6, 10, 15)
    for p in (2, 3, 5, 7, "infinity"):
        for a in vals:
            for b in vals:
                h = arith.hilbert_symbol(a, b, p)
                assert h == arith.hilbert_symbol(b, a, p)
                for c in vals:
                    assert arith.hilbert_symbol(a * c, b, p) == h * arith.hilbert_symbol(c, b, p)


def test_squares():
    assert arith.is_square(49) and not arith.is_square(50) and arith.is_square(0)
    assert arith.isqrt(50) == 7
    with pytest.raises(ValueError):
        arith.isqrt(-1)


def test_multiplicativity_of_registered_rules():
    from cslkit import registry
    rng = random.Random(3)
    mults = [f for f in registry.REGISTRY.values() if isinstance(f.rule, arith.MultFn)]
    assert len(mults) >= 10
    for f in mults:
        for _ in range(60):
            m, n = rng.randint(1, 1000), rng.randint(1, 1000)
            if math.gcd(m, n) == 1:
                assert f.rule(m * n) == f.rule(m) * f.rule(n), f.name
        assert f.rule(1) == 1
