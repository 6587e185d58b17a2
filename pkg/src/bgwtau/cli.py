"""Command line front end.

Subcommands: expand, free-energy, phi, schur, verify, cache.  All polynomial
output is canonical text; JSON mode wraps the same strings (exact rationals
are never converted to floats).  Exit codes: 0 success, 1 verification
failure, 2 usage error.

The expansion cache stores one content-addressed file per
(m, N, K, engine-version) with a header line, canonical-text body and a
trailing checksum; loads re-verify the checksum and the expansion
invariants before trusting a file, and silently recompute otherwise.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from pathlib import Path

from . import ENGINE_VERSION
from .algebra import TimePolynomial, canonical_text, parse_polynomial
from .cutjoin import (
    TauExpansion,
    check_expansion_invariants,
    free_energy,
    tau_expand,
)
from .rational import QQ, rat_str
from .schur import plucker_expansion, tau_from_schur
from .verify import run_suites
from .zcalculus import phi_coefficients, phi_series_gen


def parse_n(text: str):
    if text == "symbolic":
        return "symbolic"
    try:
        return QQ(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"bad N value {text!r}") from exc


def n_text(N) -> str:
    return N if N == "symbolic" else rat_str(QQ(N))


# ---------------------------------------------------------------------------
# expansion cache


def cache_dir(override: str | None = None) -> Path:
    if override:
        return Path(override)
    env = os.environ.get("BGWTAU_CACHE_DIR")
    if env:
        return Path(env)
    return Path.home() / ".cache" / "bgwtau"


def _cache_key(m: int, N, K: int) -> str:
    header = f"tau m={m} N={n_text(N)} K={K} engine={ENGINE_VERSION}"
    return header


def _cache_path(directory: Path, header: str) -> Path:
    return directory / (hashlib.sha256(header.encode()).hexdigest()[:24] + ".tau")


def cache_store(T: TauExpansion, directory: Path) -> Path:
    directory.mkdir(parents=True, exist_ok=True)
    header = _cache_key(T.m, T.N, T.order)
    body = "\n".join(canonical_text(c) for c in T.coeffs)
    digest = hashlib.sha256((header + "\n" + body).encode()).hexdigest()
    path = _cache_path(directory, header)
    tmp = path.with_suffix(".tmp")
    tmp.write_text(f"{header}\n{body}\nchecksum={digest}\n")
    tmp.rename(path)
    return path


def cache_load(m: int, N, K: int, directory: Path) -> TauExpansion | None:
    header = _cache_key(m, N, K)
    path = _cache_path(directory, header)
    if not path.exists():
        return None
    lines = path.read_text().splitlines()
    if len(lines) != K + 3 or lines[0] != header or not lines[-1].startswith("checksum="):
        return None
    digest = hashlib.sha256("\n".join(lines[:-1]).encode()).hexdigest()
    if lines[-1] != f"checksum={digest}":
        return None
    coeffs = [parse_polynomial(s) for s in lines[1:-1]]
    T = TauExpansion(m, N, coeffs, "cache")
    if not check_expansion_invariants(T).ok:
        return None
    return T


def _expansion(m: int, N, K: int, oracle: bool, use_cache: bool, cdir: Path) -> TauExpansion:
    if not oracle and m not in (1, 2):
        raise SystemExit2(
            f"recursion unavailable for m={m}; rerun with --oracle to use the"
            " determinant oracle"
        )
    if use_cache and not oracle:
        hit = cache_load(m, N, K, cdir)
        if hit is not None:
            return hit
    if oracle:
        T = tau_from_schur(plucker_expansion(m, N, m * K))
        rep = check_expansion_invariants(T)
        if not rep.ok:
            raise SystemExit1("oracle expansion failed invariant checks")
    else:
        T = tau_expand(m, N, K)
    if use_cache and not oracle:
        cache_store(T, cdir)
    return T


class SystemExit1(Exception):
    pass


class SystemExit2(Exception):
    pass


# ---------------------------------------------------------------------------
# subcommands


def _emit_expansion(T: TauExpansion, fmt: str, label: str) -> None:
    if fmt == "json":
        doc = {
            "m": T.m,
            "N": n_text(T.N),
            "K": T.order,
            "coeffs": [canonical_text(c) for c in T.coeffs],
        }
        print(json.dumps(doc, sort_keys=True))
    else:
        for k, c in enumerate(T.coeffs):
            print(f"{label}[{k}] = {canonical_text(c)}")


def cmd_expand(args) -> int:
    K = args.order if args.order is not None else args.degree // args.m
    T = _expansion(args.m, args.N, K, args.oracle, not args.no_cache, cache_dir(args.cache_dir))
    _emit_expansion(T, args.format, "tau")
    return 0


def cmd_free_energy(args) -> int:
    T = _expansion(args.m, args.N, args.order, args.oracle, not args.no_cache,
                   cache_dir(args.cache_dir))
    F = free_energy(T)
    if args.format == "json":
        doc = {
            "m": T.m,
            "N": n_text(T.N),
            "K": T.order,
            "free_energy": [canonical_text(f) for f in F],
        }
        print(json.dumps(doc, sort_keys=True))
    else:
        for k, f in enumerate(F, start=1):
            print(f"F[{k}] = {canonical_text(f)}")
    return 0


def cmd_phi(args) -> int:
    if args.j == "symbolic":
        coeffs = phi_coefficients(args.m, args.depth)
        rows = [(k, canonical_text(TimePolynomial.constant(c))) for k, c in enumerate(coeffs)]
        if args.format == "json":
            print(json.dumps({"m": args.m, "coeffs": {f"z^-{args.m * k}": s for k, s in rows}},
                             sort_keys=True))
        else:
            for k, s in rows:
                print(f"phi[m={args.m},k={k}] = {s}   # * h^{k} z^-{args.m * k}")
        return 0
    j = int(args.j)
    series = phi_series_gen(args.m, args.N, j, args.depth)
    items = sorted(series.coeffs.items(), reverse=True)
    if args.format == "json":
        print(json.dumps(
            {"m": args.m, "N": n_text(args.N), "j": j,
             "series": {f"z^{n}": canonical_text(TimePolynomial.constant(c)) for n, c in items},
             "floor": series.floor},
            sort_keys=True))
    else:
        for n, c in items:
            print(f"z^{n}: {canonical_text(TimePolynomial.constant(c))}")
        print(f"floor: z^{series.floor}")
    return 0


def cmd_schur(args) -> int:
    table = plucker_expansion(args.m, args.N, args.degree, args.points)
    rows = sorted(table.table.items(), key=lambda kv: (sum(kv[0]), kv[0]))
    if args.format == "json":
        doc = {
            "m": args.m, "N": n_text(args.N), "degree": args.degree,
            "coefficients": {
                "[" + ",".join(map(str, mu)) + "]":
                    canonical_text(TimePolynomial.constant(c)) for mu, c in rows
            },
        }
        print(json.dumps(doc, sort_keys=True))
    else:
        for mu, c in rows:
            key = "[" + ",".join(map(str, mu)) + "]"
            print(f"C{key} = {canonical_text(TimePolynomial.constant(c))}")
    return 0


def cmd_verify(args) -> int:
    names = [s.strip() for s in args.suite.split(",") if s.strip()]
    if not names:
        raise SystemExit2("empty suite selector")
    try:
        rep = run_suites(names, m=args.m, N=args.N, order=args.order, depth=args.depth)
    except ValueError as exc:
        raise SystemExit2(str(exc)) from exc
    for line in rep.lines():
        print(line)
    if args.format == "json":
        print(json.dumps(rep.summary(), sort_keys=True))
    return 0 if rep.ok else 1


def cmd_cache(args) -> int:
    cdir = cache_dir(args.cache_dir)
    if args.action == "dir":
        print(cdir)
    elif args.action == "list":
        if cdir.exists():
            for p in sorted(cdir.glob("*.tau")):
                print(f"{p.name}: {p.read_text().splitlines()[0]}")
    elif args.action == "clear":
        if cdir.exists():
            for p in cdir.glob("*.tau"):
                p.unlink()
        print("cache cleared")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="bgwtau",
        description="Exact topological expansions of higher BGW tau-functions",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, order=True):
        p.add_argument("--m", type=int, default=2, help="branching index m >= 1")
        p.add_argument("--N", type=parse_n, default=QQ(0),
                       help='deformation parameter: rational like 1/2, or "symbolic"')
        if order:
            p.add_argument("--order", type=int, default=None, help="expansion order K")
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.add_argument("--cache-dir", default=None)
        p.add_argument("--no-cache", action="store_true")

    p = sub.add_parser("expand", help="topological expansion tau_0..tau_K")
    common(p)
    p.add_argument("--degree", type=int, default=None, help="weighted-degree bound (with --oracle)")
    p.add_argument("--oracle", action="store_true", help="use the determinant oracle (any m)")
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("free-energy", help="log tau coefficients F^1..F^K")
    common(p)
    p.add_argument("--oracle", action="store_true")
    p.set_defaults(func=cmd_free_energy)

    p = sub.add_parser("phi", help="basis-vector series coefficients")
    common(p, order=False)
    p.add_argument("--j", default="symbolic", help='basis index (integer) or "symbolic"')
    p.add_argument("--depth", type=int, default=4)
    p.set_defaults(func=cmd_phi)

    p = sub.add_parser("schur", help="Schur-expansion coefficients C_mu")
    common(p, order=False)
    p.add_argument("--degree", type=int, default=6)
    p.add_argument("--points", type=int, default=None)
    p.set_defaults(func=cmd_schur)

    p = sub.add_parser("verify", help="run verification suites")
    common(p)
    p.add_argument("--suite", required=True,
                   help="comma list: checksums, golden-A/B/C/inline, constraints,"
                        " hirota, crosscheck, ks, invariants, all")
    p.add_argument("--depth", type=int, default=20)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("cache", help="expansion cache maintenance")
    p.add_argument("action", choices=("dir", "list", "clear"))
    p.add_argument("--cache-dir", default=None)
    p.set_defaults(func=cmd_cache)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if getattr(args, "order", None) is None and hasattr(args, "order"):
        args.order = (args.degree // args.m) if getattr(args, "degree", None) else 6
    try:
        return args.func(args)
    except SystemExit2 as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SystemExit1 as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
