"""Integer arithmetic, multiplicative functions and Dirichlet series coefficients.

Coefficient vectors are plain Python lists of ints (index 0 unused), so every
count stays exact no matter how large it gets.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import numpy as np
from sympy import factorint
from sympy import isprime as _isprime


# ---------------------------------------------------------------------------
# primes and factorizations

def factorize(n: int) -> list[tuple[int, int]]:
    """Return the prime factorization of n >= 1 as sorted (p, e) pairs."""
    if n < 1:
        raise ValueError("factorize needs n >= 1")
    if n == 1:
        return []
    return sorted((int(p), int(e)) for p, e in factorint(n).items())


def is_prime(n: int) -> bool:
    return n >= 2 and bool(_isprime(n))


def primes_up_to(n: int) -> list[int]:
    if n < 2:
        return []
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, math.isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p::p] = False
    return [int(p) for p in np.nonzero(sieve)[0]]


def spf_table(n: int) -> list[int]:
    """Smallest prime factor for 0..n (spf[0] = spf[1] = 0)."""
    spf = np.zeros(n + 1, dtype=np.int64)
    for p in range(2, n + 1):
        if spf[p] == 0:
            spf[p::p][spf[p::p] == 0] = p
            if p * p > n:
                # remaining zeros are primes
                rest = np.nonzero(spf[p + 1:] == 0)[0] + p + 1
                spf[rest] = rest
                break
    return spf.tolist()


def divisors(n: int) -> list[int]:
    ds = [1]
    for p, e in factorize(n):
        ds = [d * p ** k for d in ds for k in range(e + 1)]
    return sorted(ds)


def sigma1(m: int) -> int:
    """Sum of the divisors of m."""
    out = 1
    for p, e in factorize(m):
        out *= (p ** (e + 1) - 1) // (p - 1)
    return out


def is_square(n: int) -> bool:
    if n < 0:
        return False
    r = math.isqrt(n)
    return r * r == n


def isqrt(n: int) -> int:
    if n < 0:
        raise ValueError("isqrt of a negative number")
    return math.isqrt(n)


def multiplicative_order(a: int, n: int) -> int:
    """Smallest k >= 1 with a^k = 1 mod n (gcd(a, n) must be 1)."""
    if n == 1:
        return 1
    if math.gcd(a, n) != 1:
        raise ValueError("a must be a unit mod n")
    k, x = 1, a % n
    while x != 1:
        x = x * a % n
        k += 1
    return k


def euler_phi(n: int) -> int:
    out = n
    for p, _ in factorize(n):
        out = out // p * (p - 1)
    return out


# ---------------------------------------------------------------------------
# characters and Hilbert symbols

def _legendre(a: int, p: int) -> int:
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def kronecker(d: int, n: int) -> int:
    """Character chi_d(n) of a quadratic discriminant d, extended multiplicatively.

    chi_d(p) = 0 for p | d, the Legendre symbol for odd p, and at p = 2 the
    value depends on d mod 8 (+1 for d = +-1, -1 for d = +-3).
    """
    if n < 1:
        raise ValueError("kronecker needs n >= 1")
    out = 1
    for p, e in factorize(n):
        if d % p == 0:
            return 0
        if p == 2:
            v = 1 if d % 8 in (1, 7) else -1
        else:
            v = _legendre(d, p)
        out *= v ** e
    return out


def hilbert_symbol(a: int, b: int, p) -> int:
    """Hilbert symbol (a, b)_p for a prime p or p = "infinity"."""
    if a == 0 or b == 0:
        raise ValueError("hilbert symbol needs nonzero arguments")
    if p in ("infinity", "inf", math.inf):
        return -1 if (a < 0 and b < 0) else 1
    if not is_prime(p):
        raise ValueError(f"{p} is not a prime")
    al, u = 0, a
    while u % p == 0:
        u //= p
        al += 1
    be, v = 0, b
    while v % p == 0:
        v //= p
        be += 1
    if p == 2:
        eps = lambda t: ((t - 1) // 2) % 2
        omg = lambda t: ((t * t - 1) // 8) % 2
        e = eps(u) * eps(v) + al * omg(v) + be * omg(u)
        return -1 if e % 2 else 1
    s = (-1) ** (al * be * ((p - 1) // 2))
    return s * _legendre(u, p) ** be * _legendre(v, p) ** al


# ---------------------------------------------------------------------------
# multiplicative functions

@dataclass
class MultFn:
    """A multiplicative function given by its values at prime powers."""

    name: str
    rule: Callable[[int, int], int]
    _cache: dict = field(default_factory=dict, repr=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def at_prime_power(self, p: int, r: int) -> int:
        if r == 0:
            return 1
        key = (p, r)
        with self._lock:
            if key in self._cache:
                return self._cache[key]
        val = self.rule(p, r)
        with self._lock:
            self._cache[key] = val
        return val

    def __call__(self, n: int) -> int:
        return mult_eval(self, n)


def mult_eval(f: MultFn, n: int) -> int:
    out = 1
    for p, e in factorize(n):
        out *= f.at_prime_power(p, e)
        if out == 0:
            return 0
    return out


# ---------------------------------------------------------------------------
# coefficient vectors

class SeriesCoeffs:
    """Coefficients a(1..N) of a Dirichlet series sum a(n) n^{-s}."""

    def __init__(self, a: Sequence, N: int | None = None):
        a = list(a)
        if N is None:
            N = len(a) - 1
        if len(a) != N + 1:
            raise ValueError("coefficient list must have length N + 1")
        a[0] = 0
        self.N = N
        self.a = a

    @classmethod
    def from_function(cls, f: Callable[[int], int], N: int) -> "SeriesCoeffs":
        return cls([0] + [f(n) for n in range(1, N + 1)], N)

    @classmethod
    def delta(cls, N: int) -> "SeriesCoeffs":
        a = [0] * (N + 1)
        a[1] = 1
        return cls(a, N)

    def __getitem__(self, n: int):
        if not 1 <= n <= self.N:
            raise IndexError(n)
        return self.a[n]

    def __len__(self) -> int:
        return self.N

    def __eq__(self, other) -> bool:
        return isinstance(other, SeriesCoeffs) and self.N == other.N and self.a == other.a

    def __repr__(self) -> str:
        head = ", ".join(str(x) for x in self.a[1:min(self.N, 12) + 1])
        return f"SeriesCoeffs(N={self.N}, [{head}{', ...' if self.N > 12 else ''}])"

    def values(self) -> list:
        return self.a[1:]

    def nonzero(self) -> list[tuple[int, object]]:
        return [(n, x) for n, x in enumerate(self.a) if x and n]

    def truncate(self, N: int) -> "SeriesCoeffs":
        return SeriesCoeffs(self.a[:N + 1], N)

    def __add__(self, other: "SeriesCoeffs") -> "SeriesCoeffs":
        _same_n(self, other)
        return SeriesCoeffs([x + y for x, y in zip(self.a, other.a)], self.N)

    def __sub__(self, other: "SeriesCoeffs") -> "SeriesCoeffs":
        _same_n(self, other)
        return SeriesCoeffs([x - y for x, y in zip(self.a, other.a)], self.N)

    def scale(self, c) -> "SeriesCoeffs":
        return SeriesCoeffs([c * x for x in self.a], self.N)

    def shift(self, k: int) -> "SeriesCoeffs":
        """Coefficients of F(s - k), i.e. a(n) n^k."""
        return SeriesCoeffs([x * n ** k for n, x in enumerate(self.a)], self.N)


def _same_n(a: SeriesCoeffs, b: SeriesCoeffs) -> None:
    if a.N != b.N:
        raise ValueError(f"mismatched truncation bounds {a.N} and {b.N}")


def dirichlet_convolve(a: SeriesCoeffs, b: SeriesCoeffs) -> SeriesCoeffs:
    """Coefficients of the product of two Dirichlet series, up to the common N."""
    _same_n(a, b)
    N = a.N
    c = [0] * (N + 1)
    bb = b.a
    for d in range(1, N + 1):
        x = a.a[d]
        if not x:
            continue
        for m in range(1, N // d + 1):
            y = bb[m]
            if y:
                c[d * m] += x * y
    return SeriesCoeffs(c, N)


def summatory(a: SeriesCoeffs, x: int):
    if x > a.N:
        raise ValueError(f"x = {x} exceeds truncation bound {a.N}")
    if x <= 0:
        return 0
    return sum(a.a[1:x + 1])


def asymptote_check(a: SeriesCoeffs, model, x: int) -> float:
    """Relative error of the summatory function against C x^alpha log(x)^logpow.

    model may be a dict with keys C, alpha, logpow or a (C, alpha, logpow) tuple.
    """
    if isinstance(model, dict):
        C, alpha, logpow = model["C"], model["alpha"], model.get("logpow", 0)
    else:
        C, alpha, logpow = model
    if C <= 0:
        raise ValueError("model constant must be positive")
    A = summatory(a, x)
    main = float(C) * float(x) ** alpha * math.log(x) ** logpow
    return abs(float(A) / main - 1.0)


# ---------------------------------------------------------------------------
# power series in X = p^{-s} and Euler factors

def ps_mul(a: Sequence[int], b: Sequence[int], n: int) -> list[int]:
    out = [0] * (n + 1)
    for i, x in enumerate(a[:n + 1]):
        if x:
            for j, y in enumerate(b[:n + 1 - i]):
                out[i + j] += x * y
    return out


def ps_inv(a: Sequence[int], n: int) -> list:
    """Inverse power series; a[0] must be 1 for an integral result."""
    a = list(a[:n + 1]) + [0] * max(0, n + 1 - len(a))
    if a[0] == 0:
        raise ZeroDivisionError("constant term is zero")
    inv0 = Fraction(1, a[0]) if a[0] not in (1, -1) else a[0]
    out = [0] * (n + 1)
    out[0] = inv0
    for k in range(1, n + 1):
        s = sum(a[j] * out[k - j] for j in range(1, k + 1) if a[j])
        out[k] = -s * inv0
    return out


def ps_pow(a: Sequence[int], e, n: int) -> list:
    """a^e for integer e, or e a half-integer when a[0] = 1 (binomial series)."""
    if isinstance(e, int) and e >= 0:
        out = [1] + [0] * n
        for _ in range(e):
            out = ps_mul(out, a, n)
        return out
    if isinstance(e, int):
        return ps_pow(ps_inv(a, n), -e, n)
    # general exponent via the recurrence for f = a^e: a f' = e a' f
    e = Fraction(e)
    a = list(a[:n + 1]) + [0] * max(0, n + 1 - len(a))
    if a[0] != 1:
        raise ValueError("fractional powers need constant term 1")
    f = [Fraction(0)] * (n + 1)
    f[0] = Fraction(1)
    for k in range(1, n + 1):
        s = Fraction(0)
        for j in range(1, k + 1):
            if a[j]:
                s += a[j] * (e * j - (k - j)) * f[k - j]
        f[k] = s / k
    return [int(x) if x.denominator == 1 else x for x in f]


def rational_factor(num: Iterable[tuple[int, int, int]], den: Iterable[tuple[int, int, int]],
                    p: int, rmax: int) -> list:
    """Expand prod(num)/prod(den) in X = p^{-s}.

    Each of num and den is a list of polynomial factors; a factor is a list of
    terms (c, j, k) meaning c p^j X^k.
    """
    out = [1] + [0] * rmax
    for fac in num:
        out = ps_mul(out, _poly(fac, p, rmax), rmax)
    for fac in den:
        out = ps_mul(out, ps_inv(_poly(fac, p, rmax), rmax), rmax)
    return out


def _poly(terms, p: int, rmax: int) -> list[int]:
    poly = [0] * (rmax + 1)
    for c, j, k in terms:
        if k <= rmax:
            poly[k] += c * p ** j
    return poly


class EulerFactorRule:
    """Per-prime coefficients of p^{-rs} in an Euler factor.

    gen(p, rmax) returns the list of coefficients for r = 0..rmax, with the
    r = 0 entry equal to 1. Rules are cached per prime.
    """

    def __init__(self, gen: Callable[[int, int], Sequence], name: str = ""):
        self.gen = gen
        self.name = name
        self._cache: dict[int, list] = {}
        self._lock = threading.Lock()

    @classmethod
    def from_prime_powers(cls, f: Callable[[int, int], int], name: str = "") -> "EulerFactorRule":
        return cls(lambda p, rmax: [1] + [f(p, r) for r in range(1, rmax + 1)], name)

    def coeffs(self, p: int, rmax: int) -> list:
        with self._lock:
            c = self._cache.get(p)
        if c is None or len(c) < rmax + 1:
            c = list(self.gen(p, rmax))
            if c[0] != 1:
                raise ValueError(f"Euler factor at {p} must start with 1")
            with self._lock:
                self._cache[p] = c
        return c

    def __call__(self, p: int, r: int):
        c = self.coeffs(p, r)
        return c[r]


def euler_expand(rule: EulerFactorRule, N: int, primes: Callable[[int], bool] | None = None,
                 spf: list[int] | None = None) -> SeriesCoeffs:
    """Coefficients of the product over primes of the Euler factors, up to N."""
    if N < 1:
        raise ValueError("N must be positive")
    if spf is None:
        spf = _spf_cached(N)
    a = [0] * (N + 1)
    a[1] = 1
    table: dict[int, list] = {}
    for n in range(2, N + 1):
        p = spf[n]
        m, e = n // p, 1
        while m % p == 0:
            m //= p
            e += 1
        c = table.get(p)
        if c is None:
            if primes is not None and not primes(p):
                c = [1] + [0] * 64
            else:
                rmax = 1
                while p ** (rmax + 1) <= N:
                    rmax += 1
                c = rule.coeffs(p, rmax)
            table[p] = c
        am = a[m]
        if am:
            a[n] = am * c[e]
    return SeriesCoeffs(a, N)


_SPF_CACHE: dict[int, list[int]] = {}
_SPF_LOCK = threading.Lock()


def _spf_cached(N: int) -> list[int]:
    with _SPF_LOCK:
        for k, v in _SPF_CACHE.items():
            if k >= N:
                return v
    spf = spf_table(max(N, 1000))
    with _SPF_LOCK:
        _SPF_CACHE.clear()
        _SPF_CACHE[len(spf) - 1] = spf
    return spf


def mult_coeffs(f: MultFn, N: int) -> SeriesCoeffs:
    """Dense coefficient vector of a multiplicative function."""
    return euler_expand(EulerFactorRule.from_prime_powers(f.at_prime_power, f.name), N)


# ---------------------------------------------------------------------------
# numerical Euler products

def euler_product_value(local: Callable[[int], float], bound: int,
                        skip: Callable[[int], bool] | None = None) -> float:
    """prod over primes p <= bound of local(p), via a sum of logarithms."""
    logs = []
    for p in primes_up_to(bound):
        if skip is not None and skip(p):
            continue
        logs.append(math.log(local(p)))
    return math.exp(math.fsum(logs))


def zeta(s: float) -> float:
    import mpmath
    return float(mpmath.zeta(s))
