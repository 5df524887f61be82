"""Command-line interface: ``cslkit <command> ...``.

Commands print JSON (or CSV where asked) to stdout. Exit status is 0 on
success, 1 when a verification or asymptote check fails and 2 on bad input
such as an unknown family.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from pathlib import Path

from . import __version__, arith, latt, registry

TABLE1_ROWS = ("sublattices", "well-rounded", "square", "primitive square", "coincidence")


class UsageError(Exception):
    pass


def _dump(obj) -> str:
    return json.dumps(obj, ensure_ascii=False, sort_keys=False)


def _family(name: str) -> registry.Family:
    try:
        return registry.get(name)
    except registry.UnknownFamily:
        raise UsageError(f"unknown family {name!r}; try 'cslkit list'") from None


# ---------------------------------------------------------------------------
# count, series, list

def cmd_count(args) -> int:
    f = _family(args.family)
    if args.n < 1:
        raise UsageError("n must be positive")
    print(_dump({"family": f.name, "n": args.n, "value": f.value(args.n)}))
    return 0


def series_text(name: str, N: int, fmt: str = "json") -> str:
    f = _family(name)
    if N < 1:
        raise UsageError("N must be at least 1")
    vals = f.series(N)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "value"])
        for n, v in enumerate(vals, 1):
            w.writerow([n, v])
        return buf.getvalue()
    return _dump({"family": f.name, "N": N, "coeffs": vals}) + "\n"


def cmd_series(args) -> int:
    sys.stdout.write(series_text(args.family, args.N, args.format))
    return 0


def cmd_list(args) -> int:
    for name in registry.names():
        f = registry.REGISTRY[name]
        tag = f" (oracle <= {f.oracle_max})" if f.oracle else ""
        print(name + tag)
    return 0


# ---------------------------------------------------------------------------
# verify

def _threads() -> int:
    try:
        return max(1, int(os.environ.get("CSLKIT_THREADS", "1")))
    except ValueError:
        return 1


def verify_family(f: registry.Family, M: int) -> dict:
    """RunReport for one family: closed form against oracle for n <= M."""
    if f.oracle is None:
        raise UsageError(f"family {f.name!r} has no oracle")
    if M > f.oracle_max:
        raise UsageError(f"--max {M} exceeds the oracle range {f.oracle_max} of {f.name!r}")
    t0 = time.perf_counter()
    formula = f.series(M)

    def one(n):
        return n, f.oracle(n)

    with ThreadPoolExecutor(max_workers=_threads()) as ex:
        got = dict(ex.map(one, range(1, M + 1)))
    mism = [{"n": n, "formula": formula[n - 1], "oracle": got[n]}
            for n in range(1, M + 1) if formula[n - 1] != got[n]]
    return {"family": f.name, "range": [1, M], "mismatches": mism,
            "runtime": round(time.perf_counter() - t0, 3)}


def cmd_verify(args) -> int:
    pattern = args.family
    wild = any(c in pattern for c in "*?[")
    try:
        fams = registry.match(pattern)
    except registry.UnknownFamily:
        raise UsageError(f"no family matches {pattern!r}") from None
    if wild:
        fams = [f for f in fams if f.oracle is not None]
    reports = [verify_family(f, min(args.max, f.oracle_max) if wild and args.clip else args.max)
               for f in fams]
    print(_dump(reports if wild else reports[0]))
    return 0 if all(not r["mismatches"] for r in reports) else 1


# ---------------------------------------------------------------------------
# Table 1

def table1_rows(M: int, source: str = "formula") -> dict[str, list[int]]:
    from . import planar

    if M < 1:
        raise UsageError("--max must be positive")
    rows = {k: [] for k in TABLE1_ROWS}
    if source == "formula":
        cols = [arith.SeriesCoeffs.from_function(arith.sigma1, M),
                planar.wellrounded_coeffs(M),
                *(planar.square_family_coeffs(f, M) for f in ("ssl", "ssl_pr", "csl"))]
        for k, c in zip(TABLE1_ROWS, cols):
            rows[k] = [c[m] for m in range(1, M + 1)]
    else:
        for m in range(1, M + 1):
            for k, v in zip(TABLE1_ROWS, planar.table1_bruteforce(m)):
                rows[k].append(v)
    return rows


def table1_csv(rows: dict[str, list[int]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    M = len(rows[TABLE1_ROWS[0]])
    w.writerow(["row"] + list(range(1, M + 1)))
    for k in TABLE1_ROWS:
        w.writerow([k] + rows[k])
    return buf.getvalue()


def cmd_table1(args) -> int:
    rows = table1_rows(args.max, "formula" if args.source != "brute" else "brute")
    status = 0
    out = {"max": args.max, "rows": rows}
    if args.source == "both":
        brute = table1_rows(args.max, "brute")
        diff = [{"row": k, "m": m + 1, "formula": rows[k][m], "brute": brute[k][m]}
                for k in TABLE1_ROWS for m in range(args.max) if rows[k][m] != brute[k][m]]
        out["source_mismatches"] = diff
        status = 1 if diff else 0
    if args.golden:
        gold = Path(args.golden).read_text()
        ok = gold == table1_csv(rows)
        out["golden_match"] = ok
        status = status or (0 if ok else 1)
    if args.format == "csv":
        sys.stdout.write(table1_csv(rows))
    else:
        print(_dump(out))
    return status


# ---------------------------------------------------------------------------
# CSL construction

def _parse_pair_ints(s: str) -> tuple[int, int]:
    try:
        a, b = (int(x) for x in s.split(","))
    except ValueError:
        raise UsageError(f"cannot parse {s!r} as 'a,b'") from None
    return a, b


def _lattice_json(L: latt.Lattice) -> list[list[str]]:
    return [[str(x) for x in row] for row in L.basis]


def build_csl(kind: str, z: str | None = None, q: str | None = None,
              pair: str | None = None) -> dict:
    from . import a4ico, cubic, hyper4, planar, quat

    if kind in ("square", "hex"):
        if z is None:
            raise UsageError("--z a,b is required for planar lattices")
        a, b = _parse_pair_ints(z)
        cls = planar.GaussInt if kind == "square" else planar.EisInt
        u = cls(a, b)
        if not u:
            raise UsageError("z must be nonzero")
        R = planar._rot(u)
        base = latt.standard(2)
        L, s = latt.csl(base, R)
        return {"lattice": kind, "z": [a, b], "sigma": s, "den": str(latt.den(base, R)),
                "basis": _lattice_json(L)}
    if kind in ("bcc", "pc", "fcc"):
        if q is None:
            raise UsageError("--q a,b,c,d is required for cubic lattices")
        try:
            c = cubic.csl_cubic(quat.HurQuat.parse(q), kind)
        except ValueError as e:
            raise UsageError(str(e)) from None
        return {"lattice": kind, "q": q, "sigma": c.sigma, "basis": _lattice_json(c.lattice)}
    if kind in ("d4", "z4"):
        if pair is None:
            raise UsageError("--pair 'p;q' is required for four-dimensional lattices")
        try:
            p_s, q_s = pair.split(";")
            pr = hyper4.make_admissible(quat.HurQuat.parse(p_s), quat.HurQuat.parse(q_s))
        except ValueError as e:
            raise UsageError(str(e)) from None
        c = hyper4.csl_d4star(pr) if kind == "d4" else hyper4.csl_z4(pr)
        return {"lattice": kind, "pair": pair, "sigma": c.sigma, "basis": _lattice_json(c.lattice)}
    if kind == "a4":
        if q is None:
            raise UsageError("--q with four 'a+bt' tokens is required for A4")
        try:
            c = a4ico.csl_a4(a4ico.IcoQuat.parse(q))
        except ValueError as e:
            raise UsageError(str(e)) from None
        return {"lattice": "a4", "q": q, "sigma": c.sigma, "basis": _lattice_json(c.lattice)}
    raise UsageError(f"unknown lattice {kind!r}")


def cmd_csl(args) -> int:
    print(_dump(build_csl(args.lattice, args.z, args.q, args.pair)))
    return 0


# ---------------------------------------------------------------------------
# overlap plot data

TAGS = ("Γ", "RΓ", "CSL")


def _rotation_from_args(z: str | None, rotation: str | None):
    from . import planar

    if rotation is not None:
        try:
            c, s = (Fraction(x) for x in rotation.split(","))
        except ValueError:
            raise UsageError(f"incommensurate or unparsable rotation {rotation!r}") from None
        if c * c + s * s != 1:
            raise UsageError("cos^2 + sin^2 != 1")
        return [[c, -s], [s, c]]
    if z is None:
        raise UsageError("give --z a,b or --rotation c,s")
    a, b = _parse_pair_ints(z)
    if a == 0 and b == 0:
        raise UsageError("z must be nonzero")
    return planar._rot(planar.GaussInt(a, b))


def overlap_points(R, radius: int) -> list[tuple[Fraction, Fraction, str]]:
    """Points of Z^2, R Z^2 and their intersection inside the disc of given radius."""
    if not latt.commensurate(latt.standard(2), latt.apply(R, latt.standard(2))):
        raise UsageError("rotation is not a coincidence rotation")
    r2 = radius * radius
    pts = [(x, y) for x in range(-radius, radius + 1) for y in range(-radius, radius + 1)
           if x * x + y * y <= r2]
    gam = {(Fraction(x), Fraction(y)) for x, y in pts}
    rg = {(R[0][0] * x + R[0][1] * y, R[1][0] * x + R[1][1] * y) for x, y in pts}
    both = gam & rg
    out = []
    for tag, S in zip(TAGS, (gam, rg, both)):
        out += [(x, y, tag) for x, y in sorted(S)]
    return out


def _fmt(x: Fraction, exact: bool) -> str:
    if exact:
        return str(x)
    return f"{float(x):.12g}"


def overlap_csv(points, exact: bool = False) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["x", "y", "tag"])
    for x, y, tag in points:
        w.writerow([_fmt(x, exact), _fmt(y, exact), tag])
    return buf.getvalue()


def overlap_figure(points, path: Path, title: str = "") -> None:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    style = {"Γ": dict(marker="o", s=14, c="tab:blue"),
             "RΓ": dict(marker="x", s=18, c="tab:red"),
             "CSL": dict(marker="s", s=60, facecolors="none", edgecolors="k")}
    fig, ax = plt.subplots(figsize=(5, 5))
    for tag in TAGS:
        xs = [float(x) for x, _, t in points if t == tag]
        ys = [float(y) for _, y, t in points if t == tag]
        ax.scatter(xs, ys, label=tag, **style[tag])
    ax.set_aspect("equal")
    ax.legend(loc="upper right", fontsize=8)
    if title:
        ax.set_title(title)
    fig.savefig(path, dpi=120, bbox_inches="tight")
    plt.close(fig)


def cmd_overlap_plot(args) -> int:
    if args.lattice != "square":
        raise UsageError("overlap plots are available for the square lattice only")
    if args.radius < 0:
        raise UsageError("radius must be non-negative")
    R = _rotation_from_args(args.z, args.rotation)
    pts = overlap_points(R, args.radius)
    text = overlap_csv(pts, args.exact)
    if args.out:
        out = Path(args.out)
        out.write_text(text, encoding="utf-8")
        if not args.no_png:
            overlap_figure(pts, out.with_suffix(".png"), f"z = {args.z}" if args.z else "")
    else:
        sys.stdout.write(text)
    return 0


# ---------------------------------------------------------------------------
# asymptotics

def _number(s: str) -> float:
    import sympy

    try:
        return float(sympy.sympify(s.replace("^", "**"), locals={"pi": sympy.pi}))
    except (sympy.SympifyError, TypeError, ValueError):
        raise UsageError(f"cannot parse number {s!r}") from None


def asym_report(name: str, x: int, C: float, alpha: float, logpow: float, tol: float) -> dict:
    f = _family(name)
    if x < 2:
        raise UsageError("x must be at least 2")
    a = f.coeffs(x)
    err = arith.asymptote_check(a, (C, alpha, logpow), x)
    return {"family": f.name, "x": x, "model": [C, alpha, logpow],
            "sum": arith.summatory(a, x),
            "predicted": C * x ** alpha * math.log(x) ** logpow,
            "rel_error": err, "tol": tol, "pass": err <= tol}


def cmd_asym(args) -> int:
    parts = args.model.split(",")
    if len(parts) not in (2, 3):
        raise UsageError("--model expects C,alpha[,logpow]")
    C, alpha = _number(parts[0]), _number(parts[1])
    logpow = _number(parts[2]) if len(parts) == 3 else 0.0
    rep = asym_report(args.family, int(_number(args.x)), C, alpha, logpow, args.tol)
    print(_dump(rep))
    return 0 if rep["pass"] else 1


# ---------------------------------------------------------------------------
# report: data files plus figures

REPORT_FAMILIES = ("sq.csl", "sq.wr", "hex.csl", "cubic.csl", "cubic.mcsl2", "d4.rot",
                   "d4.csl", "z4.csl", "a4.rot", "a4.csl", "ico.rot", "ico.csm", "cyc5.ssm")


def cmd_report(args) -> int:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    N = args.N
    heads = {name: registry.get(name).series(N) for name in REPORT_FAMILIES}
    (out / "series.json").write_text(_dump(heads) + "\n")

    rows = table1_rows(60)
    (out / "table1.csv").write_text(table1_csv(rows))
    fig, ax = plt.subplots(figsize=(9, 3.5))
    m = list(range(1, 61))
    for k, name in enumerate(TABLE1_ROWS[1:]):
        ax.bar([x + 0.2 * (k - 1.5) for x in m], rows[name], width=0.2, label=name)
    ax.set_xlabel("index m")
    ax.set_ylabel("count")
    ax.legend(fontsize=8)
    fig.savefig(out / "table1.png", dpi=120, bbox_inches="tight")
    plt.close(fig)

    # summatory functions of the square CSL and bcc CSL counts against their main terms
    X = args.x
    curves = {}
    for name, C, alpha in (("sq.csl", 1 / math.pi, 1), ("cubic.csl", 3 / math.pi ** 2, 2)):
        a = registry.get(name).coeffs(X)
        s, acc = [], 0
        for n in range(1, X + 1):
            acc += a[n]
            s.append(acc)
        curves[name] = (s, C, alpha)
    with open(out / "asymptotics.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["x"] + [f"{k} sum" for k in curves] + [f"{k} main" for k in curves])
        for n in range(1, X + 1, max(1, X // 200)):
            w.writerow([n] + [curves[k][0][n - 1] for k in curves]
                       + [f"{curves[k][1] * n ** curves[k][2]:.12g}" for k in curves])
    fig, axes = plt.subplots(1, 2, figsize=(9, 3.5))
    for ax, (k, (s, C, alpha)) in zip(axes, curves.items()):
        xs = range(1, X + 1)
        ax.plot(xs, s, label="sum")
        ax.plot(xs, [C * n ** alpha for n in xs], "--", label="main term")
        ax.set_title(k)
        ax.legend(fontsize=8)
    fig.savefig(out / "asymptotics.png", dpi=120, bbox_inches="tight")
    plt.close(fig)

    R = _rotation_from_args("2,1", None)
    pts = overlap_points(R, 5)
    (out / "overlap.csv").write_text(overlap_csv(pts), encoding="utf-8")
    overlap_figure(pts, out / "overlap.png", "z = 2+i")
    print(_dump({"out": str(out), "files": sorted(p.name for p in out.iterdir())}))
    return 0


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cslkit", description="Coincidence and similar sublattice counts.")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("count", help="one coefficient")
    p.add_argument("family")
    p.add_argument("n", type=int)
    p.set_defaults(fn=cmd_count)

    p = sub.add_parser("series", help="coefficients 1..N")
    p.add_argument("family")
    p.add_argument("N", type=int)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(fn=cmd_series)

    p = sub.add_parser("list", help="registered families")
    p.set_defaults(fn=cmd_list)

    p = sub.add_parser("verify", help="closed form against brute force")
    p.add_argument("family", help="name or shell pattern such as 'sq.*'")
    p.add_argument("--max", type=int, required=True)
    p.add_argument("--clip", action="store_true",
                   help="with a pattern, clip --max to each family's oracle range")
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("table1", help="square lattice counts for m <= max")
    p.add_argument("--max", type=int, default=60)
    p.add_argument("--source", choices=("formula", "brute", "both"), default="formula")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--golden", help="CSV file to compare against")
    p.set_defaults(fn=cmd_table1)

    p = sub.add_parser("csl", help="construct a CSL")
    p.add_argument("--lattice", required=True,
                   choices=("square", "hex", "bcc", "pc", "fcc", "d4", "z4", "a4"))
    p.add_argument("--z", help="planar: a,b for z = a + b w")
    p.add_argument("--q", help="cubic: a,b,c,d; a4: four 'a+bt' tokens")
    p.add_argument("--pair", help="d4/z4: 'p0,p1,p2,p3;q0,q1,q2,q3'")
    p.set_defaults(fn=cmd_csl)

    p = sub.add_parser("overlap-plot", help="point sets of a lattice and a rotated copy")
    p.add_argument("--lattice", default="square")
    p.add_argument("--z")
    p.add_argument("--rotation", help="rational cos,sin instead of --z")
    p.add_argument("--radius", type=int, default=5)
    p.add_argument("--out")
    p.add_argument("--exact", action="store_true", help="write rationals as p/q")
    p.add_argument("--no-png", action="store_true", help="skip the figure next to the CSV")
    p.set_defaults(fn=cmd_overlap_plot)

    p = sub.add_parser("asym", help="summatory function against C x^alpha log(x)^logpow")
    p.add_argument("family")
    p.add_argument("x")
    p.add_argument("--model", required=True, help="C,alpha[,logpow], e.g. 1/pi,1,0")
    p.add_argument("--tol", type=float, default=0.02)
    p.set_defaults(fn=cmd_asym)

    p = sub.add_parser("report", help="series, Table 1 and asymptotics as CSV/JSON plus figures")
    p.add_argument("--out", default="cslkit-report")
    p.add_argument("--N", type=int, default=60)
    p.add_argument("--x", type=int, default=2000)
    p.set_defaults(fn=cmd_report)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except UsageError as e:
        print(f"cslkit: error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
