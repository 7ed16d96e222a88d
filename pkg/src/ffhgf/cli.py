"""Command-line front end.

Exit status: 0 when every requested check passes, 1 when a check whose
hypotheses hold fails, 2 for invalid parameters or an exceeded budget.
Options may also come from a key=value config file (``--config``); flags
given on the command line win.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from concurrent.futures import ThreadPoolExecutor

from .characters import CharacterError, parse_char
from .charsums import gauss_table, jacobi_direct, jacobi_via_gauss
from .cyclotomic import CycloNumber
from .finite_field import FieldError, factorize, make_field
from .hypergeometric import HgfParams, LauricellaParams, hgf, lauricella
from .identities import InstanceError, identity_ids, summarize, sweep
from .lseries import artin_l, default_order, detect_polynomial, dual_symmetry, weil_check
from .varieties import FAMILIES, ROUTES, VarietyError, VarietySpec, brute_count, chi_count

EXIT_OK, EXIT_FAIL, EXIT_INVALID = 0, 1, 2


class UsageError(ValueError):
    pass


# -- value helpers ------------------------------------------------------------------


def _field(args):
    if args.q is not None:
        fac = factorize(args.q) if args.q > 1 else {}
        if len(fac) != 1:
            raise UsageError(f"q = {args.q} is not a prime power")
        (p, f), = fac.items()
    elif args.p is not None:
        p, f = args.p, args.f or 1
    else:
        raise UsageError("give the field as --q or --p/--f")
    return make_field(p, f, bound=max(args.budget, p**f))


def _value_json(v: CycloNumber) -> dict:
    z = complex(v)
    out = v.to_json()
    out["complex"] = [round(z.real, 12), round(z.imag, 12)]
    return out


def _chars(field, specs):
    return [parse_char(field, s) for s in specs]


def _split_ints(text) -> list[int]:
    if isinstance(text, (list, tuple)):
        return [int(x) for x in text]
    return [int(x) for x in str(text).replace(",", " ").split()]


def _exponents(items) -> dict:
    out = {}
    for item in items or []:
        if "=" not in item:
            raise UsageError(f"exponent {item!r} is not name=value")
        name, value = item.split("=", 1)
        vals = _split_ints(value)
        out[name.strip()] = vals if ("," in value or len(vals) > 1) else vals[0]
    return out


def _spec(args, field) -> VarietySpec:
    exps = _exponents(args.exponents)
    if args.family.upper() in ("CD", "XD", "SD", "SA", "SB") and "b" in exps and not isinstance(exps["b"], list):
        exps["b"] = [exps["b"]]
    if args.family.upper() in ("SA", "SC") and "c" in exps and not isinstance(exps["c"], list):
        exps["c"] = [exps["c"]]
    if args.family.upper() == "SB" and "a" in exps and not isinstance(exps["a"], list):
        exps["a"] = [exps["a"]]
    return VarietySpec.make(args.family, field, args.d, _split_ints(args.lam or []), **exps)


def _emit(args, payload: dict, rows: list[dict] | None = None) -> None:
    if args.format == "csv" and rows is not None:
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=list(rows[0].keys()) if rows else ["empty"], lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
        sys.stdout.write(buf.getvalue())
    else:
        sys.stdout.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def _csv_value_row(r, m, route, v: CycloNumber) -> dict:
    z = complex(v)
    return {
        "r": r,
        "m": m,
        "route": route,
        "value_coeffs": " ".join(v.to_json()["coeffs"]),
        "complex_approx": f"{z.real:.12g}{z.imag:+.12g}j",
    }


def _map(args, fn, items):
    if args.workers > 1:
        with ThreadPoolExecutor(args.workers) as pool:
            return list(pool.map(fn, items))
    return [fn(x) for x in items]


# -- commands -------------------------------------------------------------------------


def cmd_gauss(args) -> int:
    F = _field(args)
    table = gauss_table(F, args.twist)
    ks = [parse_char(F, c).exponent for c in args.char] if args.char else list(range(F.q - 1))
    values = [(k, table.value(k)) for k in ks]
    payload = {"config": _echo(args, F), "gauss": [{"char": k, "value": _value_json(v)} for k, v in values]}
    rows = []
    for k, v in values:
        row = _csv_value_row("", "", "", v)
        rows.append({"char": k, "value_coeffs": row["value_coeffs"], "complex_approx": row["complex_approx"]})
    _emit(args, payload, rows)
    return EXIT_OK


def cmd_jacobi(args) -> int:
    F = _field(args)
    chars = _chars(F, args.chars)
    if len(chars) < 2:
        raise UsageError("a Jacobi sum needs at least two characters")
    direct = jacobi_direct(*chars)
    via = jacobi_via_gauss(*chars, twist=args.twist)
    ok = direct == via
    payload = {
        "config": _echo(args, F, chars=[c.exponent for c in chars]),
        "direct": _value_json(direct),
        "via_gauss": _value_json(via),
        "equal": ok,
    }
    rows = []
    for route, v in (("direct", direct), ("via_gauss", via)):
        row = _csv_value_row("", "", route, v)
        rows.append({"route": route, "value_coeffs": row["value_coeffs"], "complex_approx": row["complex_approx"]})
    _emit(args, payload, rows)
    return EXIT_OK if ok else EXIT_FAIL


_KIND_ALIASES = {"F1": "D", "F2": "A", "F3": "B", "F4": "C"}


def cmd_hgf(args) -> int:
    F = _field(args)
    lam = _split_ints(args.lam or [])
    kind = _KIND_ALIASES.get(args.kind.upper(), args.kind.upper())
    if kind == "NFN":
        params = HgfParams.make(F, args.a or [], args.b or [])
        if len(lam) != 1:
            raise UsageError("the one-variable function takes a single --lambda")
        value = hgf(params, lam[0], twist=args.twist)
        echo = {"a": list(params.a_list), "b": list(params.b_list)}
    else:
        if args.kind.upper().startswith("F") and len(lam) != 2:
            raise UsageError("Appell functions take exactly two lambda values")
        params = LauricellaParams.make(F, kind, args.a or [], args.b or [], args.c or [])
        value = lauricella(params, lam, twist=args.twist)
        echo = {"a": list(params.a), "b": list(params.b), "c": list(params.c)}
    payload = {"config": _echo(args, F, kind=kind, lam=lam, **echo), "value": _value_json(value)}
    row = _csv_value_row("", "", "", value)
    _emit(args, payload, [{"kind": kind, "value_coeffs": row["value_coeffs"], "complex_approx": row["complex_approx"]}])
    return EXIT_OK


def cmd_verify(args) -> int:
    F = _field(args)
    ids = args.id or identity_ids()
    unknown = [i for i in ids if i not in identity_ids()]
    if unknown:
        raise UsageError(f"unknown identity ids: {unknown}")
    cap = 10**12 if args.exhaustive else args.cap
    report = {}
    failed = False
    for ident in ids:
        verdicts = sweep(
            ident, F, size=args.size, cap=cap, seed=args.seed,
            hypotheses_only=args.hypotheses_only, limit=args.limit,
        )
        summary = summarize(verdicts)
        bad = [v.to_json() for v in verdicts if v.failed][: args.witnesses]
        report[ident] = {"summary": summary, "failures": bad}
        failed |= summary["failed"] > 0
    payload = {"config": _echo(args, F, ids=ids, cap=None if args.exhaustive else cap), "results": report}
    rows = [{"id": k, **v["summary"]} for k, v in report.items()]
    _emit(args, payload, rows)
    return EXIT_FAIL if failed else EXIT_OK


def cmd_sweep(args) -> int:
    args.exhaustive = False
    return cmd_verify(args)


def cmd_count(args) -> int:
    F = _field(args)
    spec = _spec(args, F)
    routes = list(ROUTES) if args.route == "all" else [args.route]
    rs = list(range(1, args.r + 1)) if args.all_r else [args.r]
    jobs = [(r, m, route) for r in rs for m in range(spec.d) for route in routes]

    def run(job):
        r, m, route = job
        kw = {"budget": args.budget}
        if route == "formula":
            kw["uncorrected"] = args.uncorrected
        return chi_count(spec, m, r, route, **kw).value

    values = dict(zip(jobs, _map(args, run, jobs)))
    table = []
    ok = True
    for r in rs:
        brute = brute_count(spec, r, budget=args.budget)
        for route in routes:
            total = CycloNumber.rational(0)
            for m in range(spec.d):
                total = total + values[(r, m, route)]
            ok &= total == brute
        for m in range(spec.d):
            vals = [values[(r, m, route)] for route in routes]
            agree = all(v == vals[0] for v in vals)
            ok &= agree
            table.append({
                "r": r,
                "m": m,
                "routes": {route: _value_json(v) for route, v in zip(routes, vals)},
                "agree": agree,
            })
    payload = {
        "config": _echo(args, F, variety=spec.describe(), routes=routes),
        "counts": table,
        "brute": {str(r): brute_count(spec, r, budget=args.budget) for r in rs},
        "ok": ok,
    }
    rows = [_csv_value_row(r, m, route, values[(r, m, route)]) for (r, m, route) in jobs]
    _emit(args, payload, rows)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_lpoly(args) -> int:
    F = _field(args)
    spec = _spec(args, F)
    R = args.R or default_order(spec)
    max_deg = args.max_deg if args.max_deg is not None else spec.n + 1
    series = artin_l(spec, args.m, R, args.route, budget=args.budget)
    poly = detect_polynomial(series, max_deg, {"family": spec.family, "m": args.m % spec.d})
    payload = {
        "config": _echo(args, F, variety=spec.describe(), R=R, max_deg=max_deg),
        "series": [_value_json(c) for c in series.coeffs],
        "polynomial": poly.to_json() if poly else None,
    }
    ok = poly is not None
    if poly is not None:
        report = weil_check(poly, F.q, args.weight, args.tol)
        payload["weil"] = report.to_json()
        payload["dual_symmetry_observed"] = dual_symmetry(poly, F.q, args.weight)
        ok = report.ok
    rows = [_csv_value_row(k, args.m % spec.d, args.route, c) for k, c in enumerate(series.coeffs)]
    _emit(args, payload, rows)
    return EXIT_OK if ok else EXIT_FAIL


def _echo(args, F, **extra) -> dict:
    out = {"command": args.command, "p": F.p, "f": F.f, "q": F.q, "twist": getattr(args, "twist", 1), "seed": args.seed}
    if getattr(args, "char", None) is not None:
        out["chars"] = [parse_char(F, c).exponent for c in args.char]
    out.update(extra)
    return out


# -- parser ---------------------------------------------------------------------------


def _common(sp) -> None:
    sp.add_argument("--q", type=int, help="field size (a prime power)")
    sp.add_argument("--p", type=int, help="characteristic, with --f")
    sp.add_argument("--f", type=int, help="degree over the prime field")
    sp.add_argument("--twist", type=int, default=1, help="additive character twist t in psi(x) = zeta_p^Tr(t x)")
    sp.add_argument("--format", choices=["json", "csv"], default="json")
    sp.add_argument("--budget", type=int, default=6_000_000, help="cap on enumerated points")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--config", help="key=value file; command-line flags override it")


def _variety(sp) -> None:
    sp.add_argument("--family", required=False, choices=FAMILIES, type=str.upper)
    sp.add_argument("--d", type=int)
    sp.add_argument("--exponents", nargs="+", metavar="NAME=V", help="e.g. a=1 b=1,1 c=1")
    sp.add_argument("--lambda", dest="lam", nargs="+", help="lambda values as field codes")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ffhgf", description="Character sums and hypergeometric functions over finite fields.")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("gauss", help="Gauss sums g(phi^k)")
    _common(sp)
    sp.add_argument("--char", nargs="+", help="characters as k or phi_d^m (default: all)")
    sp.set_defaults(func=cmd_gauss)

    sp = sub.add_parser("jacobi", help="Jacobi sum, by enumeration and through Gauss sums")
    _common(sp)
    sp.add_argument("--chars", nargs="+", required=False)
    sp.set_defaults(func=cmd_jacobi)

    sp = sub.add_parser("hgf", help="evaluate (n+1)F(n) or a Lauricella function")
    _common(sp)
    sp.add_argument(
        "--kind", default="NFN", type=str.upper, choices=["NFN", "A", "B", "C", "D", "F1", "F2", "F3", "F4"],
        help="nFn for (n+1)F(n), a Lauricella kind, or an Appell alias",
    )
    sp.add_argument("--a", nargs="+")
    sp.add_argument("--b", nargs="+")
    sp.add_argument("--c", nargs="+")
    sp.add_argument("--lambda", dest="lam", nargs="+")
    sp.set_defaults(func=cmd_hgf)

    for name, func, helptext in (("verify", cmd_verify, "check identities"), ("sweep", cmd_sweep, "sampled sweep of identities")):
        sp = sub.add_parser(name, help=helptext)
        _common(sp)
        sp.add_argument("--id", nargs="+", help="identity ids (default: all)")
        sp.add_argument("--size", type=int, help="n, d or variant flag, depending on the identity")
        sp.add_argument("--cap", type=int, default=2000, help="sample size above which instances are sampled")
        sp.add_argument("--witnesses", type=int, default=3, help="failing instances to print per identity")
        sp.add_argument("--limit", type=int, help="stop after this many instances, visited in seeded random order")
        sp.add_argument("--hypotheses-only", action="store_true", help="skip instances outside the hypotheses")
        if name == "verify":
            sp.add_argument("--exhaustive", action="store_true")
        sp.set_defaults(func=func)

    sp = sub.add_parser("count", help="chi-decomposed point counts")
    _common(sp)
    _variety(sp)
    sp.add_argument("--r", type=int, default=1)
    sp.add_argument("--all-r", action="store_true", help="every extension degree 1..r")
    sp.add_argument("--route", choices=[*ROUTES, "all"], default="all")
    sp.add_argument("--uncorrected", action="store_true", help="closed forms without the (-1)^n sign for SA/SB/SC")
    sp.set_defaults(func=cmd_count)

    sp = sub.add_parser("lpoly", help="Artin L-function, polynomial detection and Weil check")
    _common(sp)
    _variety(sp)
    sp.add_argument("--m", type=int, default=1)
    sp.add_argument("--R", type=int, help="truncation order (default 2(n+1)+2)")
    sp.add_argument("--max-deg", type=int)
    sp.add_argument("--route", choices=list(ROUTES), default="charsum")
    sp.add_argument("--weight", type=int, default=1)
    sp.add_argument("--tol", type=float, default=1e-9)
    sp.set_defaults(func=cmd_lpoly)
    return parser


def read_config(path: str) -> dict:
    out = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected key = value")
            key, value = line.split("=", 1)
            out[key.strip().replace("-", "_")] = value.strip()
    return out


def _apply_config(parser: argparse.ArgumentParser, args, argv) -> None:
    """Fill options absent from argv with values from the config file."""
    if not getattr(args, "config", None):
        return
    config = read_config(args.config)
    sub = parser._subparsers._group_actions[0].choices[args.command]
    given = {a.split("=", 1)[0] for a in argv if a.startswith("--")}
    actions = {a.dest: a for a in sub._actions}
    for key, raw in config.items():
        if key == "lambda":
            key = "lam"
        action = actions.get(key)
        if action is None:
            raise UsageError(f"config key {key!r} is not an option of {args.command}")
        if any(opt in given for opt in action.option_strings):
            continue
        if action.nargs == 0:
            value = raw.lower() in ("1", "true", "yes", "on")
        elif action.nargs in ("+", "*"):
            value = [action.type(v) if action.type else v for v in raw.split()]
        else:
            value = action.type(raw) if action.type else raw
        if action.choices is not None and value not in action.choices:
            raise UsageError(f"config value {raw!r} for {key!r} is not one of {list(action.choices)}")
        setattr(args, action.dest, value)


def _required(args) -> None:
    need = {"jacobi": ["chars"], "count": ["family", "d"], "lpoly": ["family", "d"]}
    missing = [k for k in need.get(args.command, []) if getattr(args, k, None) is None]
    if missing:
        raise UsageError(f"missing required options: {', '.join('--' + m for m in missing)}")


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_INVALID
    try:
        _apply_config(parser, args, argv)
        _required(args)
        return args.func(args)
    except (UsageError, VarietyError, FieldError, CharacterError, InstanceError, ValueError, KeyError, OSError) as exc:
        print(f"ffhgf: error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
