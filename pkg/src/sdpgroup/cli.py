"""Command-line front end.

Usage::

    sdpgroup counts --p 3 --n 5 [--poly]
    sdpgroup sd --p 3 --n 3 --q 2 --method all
    sdpgroup audit --p 3 --n 2 --q 2
    sdpgroup trend --p 3 --nmin 2 --nmax 14
    sdpgroup selftest [--quick]

Exit codes: 0 success, 1 usage, 2 refusal (order cap or enumeration
budget), 3 invariant failure.  Exact values are always emitted as strings.
Results are cached as JSON under ``--cache-dir`` (or ``$SDPGROUP_CACHE_DIR``)
when one is given.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import sys
import tempfile
import time
from pathlib import Path

from . import __version__, cayley, pgrouplat, qcount
from .gfspace import is_prime
from .pgrouplat import BudgetExceeded, format_decimal, format_ratio

CACHE_ENV = "SDPGROUP_CACHE_DIR"

EXIT_OK, EXIT_USAGE, EXIT_REFUSED, EXIT_INVARIANT = 0, 1, 2, 3


class UsageError(Exception):
    pass


class Refusal(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------------------
# validation


def _prime(p: int, what: str = "p") -> None:
    if not is_prime(p):
        raise UsageError(f"--{what} must be prime, got {p}")


def _pgroup_args(p: int, n: int, q: int) -> None:
    _prime(p)
    if p == 2:
        raise UsageError("--p must be odd: the class P(n, 2) is elementary abelian only")
    if n < 2:
        raise UsageError(f"--n must be >= 2, got {n}")
    _prime(q, "q")
    if (p - 1) % q:
        raise UsageError(f"--q must divide p-1 = {p - 1}, got {q}")


# ---------------------------------------------------------------------------
# commands (each returns a JSON-able payload)


def cmd_counts(args) -> dict:
    _prime(args.p)
    if args.n < 1:
        raise UsageError(f"--n must be >= 1, got {args.n}")
    ks = range(args.n + 1) if args.k is None else [args.k]
    if args.k is not None and not 0 <= args.k <= args.n:
        raise UsageError(f"--k must lie in [0, {args.n}]")
    payload = {
        "p": args.p,
        "n": args.n,
        "rows": [{"k": k, "count": str(qcount.gaussian(args.n, args.p, k))} for k in ks],
        "total": str(qcount.total_subgroups(args.n, args.p)),
    }
    if args.poly:
        payload["poly"] = [str(c) for c in qcount.poly_f(args.n).coeffs]
    return payload


def _oracle_sd(p: int, n: int, q: int):
    order = p ** (n - 1) * q
    if order > cayley.MAX_ORDER:
        raise Refusal(f"oracle limited to group order <= {cayley.MAX_ORDER} (requested {order})")
    return cayley.sd_exact(cayley.build_pgroup(p, n, q))


def cmd_sd(args) -> dict:
    _pgroup_args(args.p, args.n, args.q)
    params = pgrouplat.make_params(args.p, args.n, args.q)
    methods = ["oracle", "fast", "csizes"] if args.method == "all" else [args.method]
    results, skipped = {}, {}
    for method in methods:
        try:
            if method == "oracle":
                value = _oracle_sd(args.p, args.n, args.q)
            elif method == "fast":
                value = pgrouplat.sd_fast(params)
            else:
                value = pgrouplat.sd_via_csizes(params)
        except (Refusal, BudgetExceeded) as exc:
            if args.method != "all":
                raise Refusal(str(exc)) from exc
            skipped[method] = str(exc)
            continue
        results[method] = value
    first = next(iter(results.values()))
    payload = {
        "params": {"p": params.p, "n": params.n, "q": params.q, "r": params.r},
        "method": args.method,
        "sd": format_ratio(first),
        "decimal": format_decimal(first),
        "results": {k: format_ratio(v) for k, v in results.items()},
    }
    if args.method == "all":
        payload["agreement"] = len(set(results.values())) == 1
        payload["skipped"] = skipped
    return payload


def cmd_audit(args) -> dict:
    _pgroup_args(args.p, args.n, args.q)
    try:
        return pgrouplat.audit(args.n, args.p, args.q).to_dict()
    except BudgetExceeded as exc:
        raise Refusal(str(exc)) from exc


def cmd_trend(args) -> dict:
    _pgroup_args(args.p, max(args.nmin, 2), 2)
    if args.nmin < 2 or args.nmax < args.nmin:
        raise UsageError(f"need 2 <= --nmin <= --nmax, got {args.nmin}..{args.nmax}")
    rows, warning = [], None
    start = time.perf_counter()
    for n in range(args.nmin, args.nmax + 1):
        if args.max_seconds is not None and time.perf_counter() - start > args.max_seconds:
            warning = f"time budget of {args.max_seconds}s exceeded; stopped before n={n}"
            break
        (row,) = pgrouplat.trend_table(args.p, n, n)
        rows.append(row.as_strings())
    return {"p": args.p, "rows": rows, "warning": warning}


# ---------------------------------------------------------------------------
# rendering


def _csv(rows: list[list[str]]) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def render(command: str, payload: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(payload, indent=2) + "\n"
    if command == "counts":
        if fmt == "csv":
            rows = [["k", "count"]] + [[str(r["k"]), r["count"]] for r in payload["rows"]]
            rows.append(["total", payload["total"]])
            if "poly" in payload:
                rows.append(["poly"] + payload["poly"])
            return _csv(rows)
        lines = [f"subgroups of Z_{payload['p']}^{payload['n']}"]
        lines += [f"  order p^{r['k']}: {r['count']}" for r in payload["rows"]]
        lines.append(f"  total: {payload['total']}")
        if "poly" in payload:
            f = qcount.CountPolynomial(tuple(int(c) for c in payload["poly"]))
            lines.append(f"  f_{payload['n']}(X) = {f}")
        return "\n".join(lines) + "\n"
    if command == "sd":
        if fmt == "csv":
            rows = [["method", "sd", "decimal"]]
            for method, value in payload["results"].items():
                num, den = map(int, value.split("/"))
                rows.append([method, value, format_decimal(pgrouplat.Fraction(num, den))])
            return _csv(rows)
        lines = [f"sd = {payload['sd']} ~ {payload['decimal']}"]
        if "agreement" in payload:
            lines += [f"  {m}: {v}" for m, v in payload["results"].items()]
            lines += [f"  {m}: skipped ({why})" for m, why in payload["skipped"].items()]
            lines.append(f"  agreement: {str(payload['agreement']).lower()}")
        return "\n".join(lines) + "\n"
    if command == "audit":
        if fmt == "csv":
            rows = [["k", "c_max", "c_bound", "ok"]]
            rows += [[str(b["k"]), b["c_max"], b["c_bound"], str(b["ok"]).lower()] for b in payload["per_k"]]
            return _csv(rows)
        lines = [
            f"sd = {payload['sd']}, bound = {payload['bound_rhs']}, "
            f"sd_le_bound = {str(payload['sd_le_bound']).lower()}"
        ]
        lines += [f"  k={b['k']}: max |C(K)| = {b['c_max']} <= {b['c_bound']}: {b['ok']}" for b in payload["per_k"]]
        lines.append(f"  sum over mixed K of |C(K)| = {payload['eq4_exact']} (majorant {payload['eq4_majorant']})")
        return "\n".join(lines) + "\n"
    if command == "trend":
        cols = ["n", "a_ratio", "a_ratio_decimal", "p_pow", "p_pow_decimal", "sd", "sd_decimal"]
        if fmt == "csv":
            rows = [cols] + [[r[c] for c in cols] for r in payload["rows"]]
            if payload["warning"]:
                rows.append(["warning", payload["warning"]])
            return _csv(rows)
        lines = [f"n={r['n']}: a_ratio={r['a_ratio_decimal']} p_pow={r['p_pow_decimal']} sd={r['sd_decimal']}" for r in payload["rows"]]
        if payload["warning"]:
            lines.append(f"warning: {payload['warning']}")
        return "\n".join(lines) + "\n"
    raise ValueError(command)


# ---------------------------------------------------------------------------
# cache


def cache_key(command: str, params: dict) -> str:
    blob = json.dumps({"command": command, "params": params, "version": __version__}, sort_keys=True)
    return hashlib.sha256(blob.encode()).hexdigest()[:32]


def cache_load(cache_dir: Path, command: str, params: dict) -> dict | None:
    path = cache_dir / f"{command}-{cache_key(command, params)}.json"
    try:
        doc = json.loads(path.read_text())
    except (OSError, ValueError):
        return None
    if doc.get("version") != __version__ or doc.get("params") != params:
        return None
    return doc["payload"]


def cache_store(cache_dir: Path, command: str, params: dict, payload: dict) -> None:
    cache_dir.mkdir(parents=True, exist_ok=True)
    path = cache_dir / f"{command}-{cache_key(command, params)}.json"
    doc = {"version": __version__, "command": command, "params": params, "payload": payload}
    fd, tmp = tempfile.mkstemp(dir=cache_dir, suffix=".tmp")
    with os.fdopen(fd, "w") as fh:
        json.dump(doc, fh)
    os.replace(tmp, path)


# ---------------------------------------------------------------------------
# entry point

COMMANDS = {"counts": cmd_counts, "sd": cmd_sd, "audit": cmd_audit, "trend": cmd_trend}
DEFAULT_FORMAT = {"counts": "text", "sd": "text", "audit": "json", "trend": "csv"}
CACHED_FIELDS = {
    "counts": ("p", "n", "k", "poly"),
    "sd": ("p", "n", "q", "method"),
    "audit": ("p", "n", "q"),
    "trend": ("p", "nmin", "nmax", "max_seconds"),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "csv", "text"])
    common.add_argument("--output", "-o", type=Path, help="write to file instead of stdout")
    common.add_argument("--cache-dir", type=Path, default=os.environ.get(CACHE_ENV) or None)

    parser = _Parser(prog="sdpgroup", description="Subgroup commutativity degrees of P-groups.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("counts", parents=[common], help="subgroup counts of Z_p^n")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int)
    p.add_argument("--poly", action="store_true", help="also emit the coefficients of f_n")

    for name, text in (("sd", "subgroup commutativity degree"), ("audit", "bound audit")):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("--p", type=int, required=True)
        p.add_argument("--n", type=int, required=True)
        p.add_argument("--q", type=int, required=True)
        if name == "sd":
            p.add_argument("--method", choices=["oracle", "fast", "csizes", "all"], default="fast")

    p = sub.add_parser("trend", parents=[common], help="table of sd and counting ratios over n")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--nmin", type=int, required=True)
    p.add_argument("--nmax", type=int, required=True)
    p.add_argument("--max-seconds", type=float)

    p = sub.add_parser("selftest", help="oracle-equivalence and invariant suites")
    p.add_argument("--quick", action="store_true")
    return parser


def _selftest(args) -> int:
    from .selftest import run_selftest

    results = run_selftest(quick=args.quick)
    width = max(len(r.name) for r in results)
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        print(f"{r.name:<{width}}  {status}  {r.seconds:7.2f}s  {r.detail}".rstrip())
    failed = [r.name for r in results if not r.passed]
    if failed:
        print("failed: " + ", ".join(failed))
        return EXIT_INVARIANT
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "selftest":
        return _selftest(args)
    params = {f: getattr(args, f) for f in CACHED_FIELDS[args.command]}
    try:
        payload = None
        if args.cache_dir:
            payload = cache_load(args.cache_dir, args.command, params)
        if payload is None:
            payload = COMMANDS[args.command](args)
            if args.cache_dir:
                cache_store(args.cache_dir, args.command, params, payload)
    except UsageError as exc:
        print(f"sdpgroup {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Refusal as exc:
        print(f"sdpgroup {args.command}: refused: {exc}", file=sys.stderr)
        return EXIT_REFUSED
    text = render(args.command, payload, args.format or DEFAULT_FORMAT[args.command])
    if args.output:
        args.output.write_text(text)
    else:
        sys.stdout.write(text)
    if args.command == "sd" and payload.get("agreement") is False:
        print("sdpgroup sd: methods disagree", file=sys.stderr)
        return EXIT_INVARIANT
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
