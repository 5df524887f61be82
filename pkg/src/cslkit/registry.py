"""Family registry: one name per counting problem.

Each entry binds the exact coefficient series, a fast single value, the
multiplicative rule when there is one, and a brute-force oracle where a
practical one exists.
"""

from __future__ import annotations

import fnmatch
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional

from . import a4ico, arith, cubic, hyper4, latt, planar


@dataclass(frozen=True)
class Family:
    name: str
    coeffs: Callable[[int], arith.SeriesCoeffs]
    rule: Optional[object] = None  # MultFn or EulerFactorRule
    oracle: Optional[Callable[[int], int]] = None
    oracle_max: int = 0
    note: str = ""

    def value(self, n: int) -> int:
        if n < 1:
            raise ValueError("n must be positive")
        if isinstance(self.rule, arith.MultFn):
            return self.rule(n)
        return self.coeffs(n)[n]

    def series(self, N: int) -> list[int]:
        if N < 1:
            raise ValueError("N must be positive")
        c = self.coeffs(N)
        return [c[n] for n in range(1, N + 1)]


class UnknownFamily(KeyError):
    pass


# cached brute force helpers, shared between families

@lru_cache(maxsize=None)
def _table1_brute(m: int, parent: str) -> tuple:
    return planar.table1_bruteforce(m, parent)


@lru_cache(maxsize=None)
def _sq_mcsl_brute(N: int) -> arith.SeriesCoeffs:
    return planar.square_mcsl_bruteforce(N)


@lru_cache(maxsize=None)
def _order_brute(order: str, N: int, primitive: bool) -> arith.SeriesCoeffs:
    return planar.order_ssl_bruteforce(order, N, primitive)


def _series_oracle(fn, N_cap: int):
    # oracles that produce a whole series at once; evaluate once at the cap
    return lambda n: fn(N_cap)[n]


def _mult(f: arith.MultFn):
    return lambda N: arith.mult_coeffs(f, N)


def _a4_oracle_entry(k: int, n: int) -> int:
    data = a4ico.a4_oracle()
    if n not in data:
        return 0
    v = data[n][k]
    return v // 120 if k == 0 else v


def _sigma1_coeffs(N: int) -> arith.SeriesCoeffs:
    return arith.SeriesCoeffs.from_function(arith.sigma1, N)


def _build() -> dict[str, Family]:
    reg: dict[str, Family] = {}

    def add(f: Family) -> None:
        reg[f.name] = f

    # square lattice
    add(Family("sq.all", _sigma1_coeffs,
               oracle=lambda n: sum(1 for _ in latt.enumerate_sublattices(2, n)),
               oracle_max=200, note="all sublattices of Z^2"))
    add(Family("sq.wr", planar.wellrounded_coeffs,
               oracle=lambda n: _table1_brute(n, "square")[1], oracle_max=240,
               note="well-rounded sublattices of Z^2"))
    for k, fam in ((2, "ssl"), (3, "ssl_pr"), (4, "csl")):
        add(Family(f"sq.{fam}", (lambda N, fam=fam: planar.square_family_coeffs(fam, N)),
                   oracle=(lambda n, k=k: _table1_brute(n, "square")[k]), oracle_max=240))
    add(Family("sq.mcsl", lambda N: planar.square_family_coeffs("mcsl", N),
               oracle=_series_oracle(_sq_mcsl_brute, 100), oracle_max=100))

    # hexagonal lattice
    for k, fam, fn in ((2, "ssl", lambda N: planar.classnum1_ssl_coeffs(-3, N)),
                       (3, "ssl_pr", lambda N: planar.classnum1_ssl_coeffs(-3, N, True)),
                       (4, "csl", lambda N: planar.cyc_coeffs(3, "csm", N))):
        add(Family(f"hex.{fam}", fn,
                   oracle=(lambda n, k=k: _table1_brute(n, "hex")[k]), oracle_max=120))

    # imaginary quadratic fields of class number one
    for d in planar.CLASSNUM1:
        for prim, fam in ((False, "ssl"), (True, "ssl_pr")):
            add(Family(f"cn1.{d}.{fam}",
                       (lambda N, d=d, prim=prim: planar.classnum1_ssl_coeffs(d, N, prim)),
                       oracle=_series_oracle(
                           lambda N, d=d, prim=prim: _order_brute(str(d), N, prim), 200),
                       oracle_max=200))

    # non-maximal orders, registered under ASCII names
    ascii_of = {v: k for k, v in planar._ALIASES.items()}
    for order in planar.NONMAX_ORDERS:
        name = ascii_of.get(order, order)
        add(Family(f"nmo.{name}.ssl_pr",
                   (lambda N, o=order: planar.nonmax_order_ssl_coeffs(o, N)),
                   oracle=_series_oracle(lambda N, o=order: _order_brute(o, N, True), 200),
                   oracle_max=200))

    # cyclotomic fields with class number one
    for n in planar.PID_CYCLO:
        for kind in ("ssm", "csm", "mcsm"):
            oracle, cap = None, 0
            if n == 4 and kind in ("csm", "mcsm"):
                oracle, cap = reg[f"sq.{kind[:-1]}l"].oracle, 100
            add(Family(f"cyc{n}.{kind}", (lambda N, n=n, kind=kind: planar.cyc_coeffs(n, kind, N)),
                       oracle=oracle, oracle_max=cap))

    # cubic lattices
    add(Family("cubic.csl", cubic.cubic_csl_coeffs, rule=cubic.C_BCC,
               oracle=cubic.cubic_oracle, oracle_max=49))
    add(Family("cubic.mcsl2", cubic.mcsl2_coeffs, rule=cubic.C2,
               oracle=cubic.mcsl_oracle, oracle_max=27))
    add(Family("cubic.mcsl3", cubic.mcsl3_coeffs, rule=cubic.C3,
               oracle=lambda n: cubic.mcsl_oracle(n, triples=True), oracle_max=27))

    # four dimensions: D4*, Z4 and the Hurwitz order
    for key, f in hyper4.FAMILIES.items():
        name = key.replace("_", ".", 1)
        oracle, cap = None, 0
        if key == "d4_rot":
            oracle, cap = (lambda n: hyper4.d4_oracle(n)[0]), 9
        elif key == "d4_csl":
            oracle, cap = (lambda n: hyper4.d4_oracle(n)[1]), 9
        elif key in ("d4_ssl", "d4_ssl_pr"):
            prim = key.endswith("_pr")
            oracle, cap = (lambda n, prim=prim: hyper4.d4_ssl_oracle(n, prim)), 81
        add(Family(name, _mult(f), rule=f, oracle=oracle, oracle_max=cap))

    # A4 and the icosian ring
    for key, f in a4ico.FAMILIES.items():
        oracle, cap = None, 0
        if key == "a4.rot":
            oracle, cap = (lambda n: _a4_oracle_entry(0, n)), 5
        elif key == "a4.csl":
            oracle, cap = (lambda n: _a4_oracle_entry(1, n)), 5
        elif key in ("a4.ssl", "a4.ssl_pr"):
            prim = key.endswith("_pr")
            oracle, cap = (lambda n, prim=prim: a4ico.a4_ssl_oracle(n, prim)), 81
        add(Family(key, _mult(f), rule=f, oracle=oracle, oracle_max=cap))
    return reg


REGISTRY: dict[str, Family] = _build()


def get(name: str) -> Family:
    try:
        return REGISTRY[name]
    except KeyError:
        raise UnknownFamily(name) from None


def match(pattern: str) -> list[Family]:
    """Families whose names match a shell-style pattern, sorted by name."""
    names = sorted(n for n in REGISTRY if fnmatch.fnmatchcase(n, pattern))
    if not names:
        raise UnknownFamily(pattern)
    return [REGISTRY[n] for n in names]


def names() -> list[str]:
    return sorted(REGISTRY)
