"""Command-line entry point.

Subcommands: chains, eval, recurrence, verify, mc, thermo.  Every subcommand
can emit a machine-readable JSON document (--json) validating against
schemas/output.json; errors print a one-line diagnostic naming the violated
constraint.  Exit codes: 0 success, 1 domain or validation error, 2 a
verification law failed.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .engine import Space, observables, z_space
from .errors import DomainError, PoleError
from .exponents import ExponentSpec
from .grand import verify_all, _LAWS
from .recurrence import f_table, q_to_1_limit, z_proj_fast, z_R_fast
from .sampler import DEFAULT_DEPTH, DEFAULT_SAMPLES, mc_estimate
from .scalars import BiRational
from . import chains as chains_mod

_EXIT_OK = 0
_EXIT_ERROR = 1
_EXIT_VERIFY_FAILED = 2


def _parse_number(text: str):
    """Rational 'p/q' (or integer) when possible, float otherwise."""
    try:
        return Fraction(text)
    except ValueError:
        return float(text)


def _parse_charges(text: str) -> tuple:
    return tuple(_parse_number(part) for part in text.split(","))


def _fmt_float(x: float) -> str:
    return f"{x:.17g}"


def _value_json(value):
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, BiRational):
        return value.to_json()
    c = complex(value)
    return [c.real, c.imag]


def _value_text(value) -> str:
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, BiRational):
        return json.dumps(value.to_json())
    c = complex(value)
    if c.imag == 0:
        return _fmt_float(c.real)
    return f"[{_fmt_float(c.real)}, {_fmt_float(c.imag)}]"


def _emit(doc, text: str, args) -> None:
    payload = json.dumps(doc, indent=2, sort_keys=True) if args.json else text
    if getattr(args, "out", None):
        Path(args.out).write_text(payload + "\n")
    else:
        print(payload)


def _build_spec(args) -> ExponentSpec:
    if getattr(args, "s_file", None):
        if getattr(args, "charges", None):
            raise ValueError("--charges and --s-file are mutually exclusive")
        doc = json.loads(Path(args.s_file).read_text())
        spec = ExponentSpec.from_json(doc)
    else:
        if not getattr(args, "charges", None):
            raise ValueError("either --charges/--beta or --s-file is required")
        if args.beta is None:
            raise ValueError("--charges requires --beta")
        spec = ExponentSpec.from_charges(_parse_charges(args.charges), _parse_number(args.beta))
    if args.n is not None and spec.order != args.n:
        raise ValueError(f"--n {args.n} disagrees with spec order {spec.order}")
    return spec


# -- subcommands ---------------------------------------------------------------


def _cmd_chains(args) -> int:
    if args.count_only:
        count = chains_mod.count_reduced_chains(args.n, max_order=args.max_order)
        _emit({"command": "chains", "n": args.n, "count": count}, str(count), args)
        return _EXIT_OK
    records = [c.to_json() for c in chains_mod.enumerate_reduced_chains(range(1, args.n + 1), max_order=args.max_order)]
    doc = {"command": "chains", "n": args.n, "count": len(records), "chains": records}
    text = "\n".join(json.dumps(r, sort_keys=True) for r in records)
    _emit(doc, text, args)
    return _EXIT_OK


def _cmd_eval(args) -> int:
    spec = _build_spec(args)
    q = _parse_number(args.q) if args.q is not None else None
    if args.mode != "symbolic" and q is None:
        raise ValueError("--q is required outside symbolic mode")
    value = z_space(
        Space.parse(args.space),
        spec,
        q if q is not None else Fraction(2),  # unused by the symbolic path
        mode=args.mode,
        method=args.method,
        precision=args.precision,
    )
    doc = {
        "command": "eval",
        "space": args.space,
        "n": spec.order,
        "mode": args.mode,
        "q": str(q) if q is not None else None,
        "value": _value_json(value),
    }
    _emit(doc, _value_text(value), args)
    return _EXIT_OK


def _cmd_recurrence(args) -> int:
    beta = _parse_number(args.beta)
    rows = []
    if args.limit_q1:
        table = f_table(args.n_max, 0.0, beta, precision=args.precision)
        for n in range(args.n_max + 1):
            z = q_to_1_limit(n, beta, args.space, precision=args.precision)
            rows.append({"n": n, "f": _value_json(table[n]), "z": _value_json(z)})
        q_val = 1.0
    else:
        q_val = float(_parse_number(args.q))
        import math

        table = f_table(args.n_max, math.log(q_val), beta, precision=args.precision)
        fast = z_R_fast if args.space == "R" else z_proj_fast
        for n in range(args.n_max + 1):
            z = fast(n, q_val, beta, precision=args.precision)
            rows.append({"n": n, "f": _value_json(table[n]), "z": _value_json(z)})
    doc = {
        "command": "recurrence",
        "n_max": args.n_max,
        "q": q_val,
        "beta": _value_json(beta) if isinstance(beta, Fraction) else [float(beta), 0.0],
        "space": args.space,
        "rows": rows,
    }
    if args.csv:
        lines = ["n,f_re,f_im,z_re,z_im"]
        for r in rows:
            f, z = r["f"], r["z"]
            lines.append(f"{r['n']},{f[0]!r},{f[1]!r},{z[0]!r},{z[1]!r}")
        text = "\n".join(lines)
    else:
        text = "\n".join(
            f"n={r['n']} F={_fmt_float(r['f'][0])} Z={_fmt_float(r['z'][0])}" for r in rows
        )
    _emit(doc, text, args)
    return _EXIT_OK


def _cmd_verify(args) -> int:
    beta = _parse_number(args.beta)
    q = _parse_number(args.q)
    if args.law == "all":
        reports = verify_all(q, beta, args.n_max, args.mode, extended=args.extended)
    else:
        reports = [
            _LAWS[args.law](q, beta, args.n_max, args.mode, extended=args.extended)
        ]
    ok = all(r.ok for r in reports)
    doc = {"command": "verify", "ok": ok, "laws": [r.to_json() for r in reports]}
    lines = []
    for rep in reports:
        for row in rep.rows:
            mark = "ok" if row.ok else "FAIL"
            lines.append(f"law={rep.law} N={row.n} left={row.left} right={row.right} {mark}")
        lines.append(f"law={rep.law} {'PASS' if rep.ok else 'FAIL'}")
    _emit(doc, "\n".join(lines), args)
    return _EXIT_OK if ok else _EXIT_VERIFY_FAILED


def _cmd_mc(args) -> int:
    spec = _build_spec(args)
    est = mc_estimate(
        args.space,
        spec,
        int(args.q),
        args.samples,
        depth=args.depth,
        seed=args.seed,
        workers=args.workers,
    )
    doc = {
        "command": "mc",
        "space": args.space,
        "n": spec.order,
        "q": int(args.q),
        "samples": est.samples,
        "depth": args.depth,
        "seed": args.seed,
        "estimate": est.to_json(),
    }
    text = (
        f"mean={_fmt_float(est.mean)} std_error={_fmt_float(est.std_error)} "
        f"samples={est.samples} collisions={est.collisions}"
    )
    if est.lower is not None:
        text += f"\nenclosure=[{_fmt_float(est.lower)}, {_fmt_float(est.upper)}]"
    if est.biased:
        text += "\nwarning: negative exponents; estimate is biased-unknown"
    _emit(doc, text, args)
    return _EXIT_OK


def _cmd_thermo(args) -> int:
    obs = observables(
        args.space,
        _parse_charges(args.charges),
        float(_parse_number(args.beta)),
        _parse_number(args.q),
        precision=args.precision,
    )
    doc = {
        "command": "thermo",
        "space": args.space,
        "free_energy": obs.free_energy,
        "mean_energy": obs.mean_energy,
        "fluctuation": obs.fluctuation,
    }
    text = (
        f"free_energy={_fmt_float(obs.free_energy)}\n"
        f"mean_energy={_fmt_float(obs.mean_energy)}\n"
        f"fluctuation={_fmt_float(obs.fluctuation)}"
    )
    _emit(doc, text, args)
    return _EXIT_OK


# -- parser ---------------------------------------------------------------------


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--json", action="store_true", help="emit a JSON document")
    p.add_argument("--out", help="write output to a file instead of stdout")


def _add_spec_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--n", type=int, default=None, help="particle count (checked against the spec)")
    p.add_argument("--charges", help="comma-separated charges, e.g. 1,2,3")
    p.add_argument("--beta", help="inverse temperature (rational or float)")
    p.add_argument("--s-file", help="JSON exponent spec file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ultragas",
        description="Partition functions of log-Coulomb gases on nonarchimedean balls "
        "and the projective line",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("chains", help="enumerate or count reduced splitting chains")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--count-only", action="store_true")
    p.add_argument("--max-order", type=int, default=chains_mod.MAX_ORDER_DEFAULT)
    _add_common(p)
    p.set_defaults(fn=_cmd_chains)

    p = sub.add_parser("eval", help="evaluate a partition function")
    p.add_argument("--space", required=True, help="R | P | ball:v | proj")
    _add_spec_args(p)
    p.add_argument("--q", help="residue parameter (rational in exact mode)")
    p.add_argument("--mode", choices=["exact", "symbolic", "float"], default="exact")
    p.add_argument("--method", choices=["auto", "chains", "grouped"], default="auto")
    p.add_argument("--precision", type=int, default=53)
    _add_common(p)
    p.set_defaults(fn=_cmd_eval)

    p = sub.add_parser("recurrence", help="sinh-recurrence table and fast values")
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--q")
    p.add_argument("--beta", required=True)
    p.add_argument("--space", choices=["R", "proj"], default="R")
    p.add_argument("--limit-q1", action="store_true", help="emit the q -> 1 limits")
    p.add_argument("--csv", action="store_true")
    p.add_argument("--precision", type=int, default=53)
    _add_common(p)
    p.set_defaults(fn=_cmd_recurrence)

    p = sub.add_parser("verify", help="check the grand-series factorization laws")
    p.add_argument("--law", choices=["q", "q1", "rp", "all"], required=True)
    p.add_argument("--q", required=True)
    p.add_argument("--beta", required=True)
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--mode", choices=["exact", "float"], default="exact")
    p.add_argument("--extended", action="store_true", help="allow beta outside (0, inf)")
    _add_common(p)
    p.set_defaults(fn=_cmd_verify)

    p = sub.add_parser("mc", help="Monte Carlo estimate from the digit model")
    p.add_argument("--space", required=True, help="R | P | proj")
    _add_spec_args(p)
    p.add_argument("--q", required=True, type=int)
    p.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    p.add_argument("--depth", type=int, default=DEFAULT_DEPTH)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=None, help="substream count (env ULTRAGAS_WORKERS)")
    _add_common(p)
    p.set_defaults(fn=_cmd_mc)

    p = sub.add_parser("thermo", help="free energy, mean energy, fluctuation")
    p.add_argument("--space", required=True)
    p.add_argument("--charges", required=True)
    p.add_argument("--beta", required=True)
    p.add_argument("--q", required=True)
    p.add_argument("--precision", type=int, default=53)
    _add_common(p)
    p.set_defaults(fn=_cmd_thermo)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on bad flags; 2 is reserved for verification failures
        return _EXIT_OK if exc.code in (0, None) else _EXIT_ERROR
    try:
        return args.fn(args)
    except (DomainError, PoleError, ValueError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
