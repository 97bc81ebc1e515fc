"""Command-line front end.

Exit status: 0 valid / true, 1 invalid / false, 2 usage or input error,
3 resource bound exceeded.  Results go to stdout, diagnostics to stderr.
With ``--json`` every command prints exactly one JSON object whose
``"command"`` field names the subcommand; the remaining fields are listed
in the README.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from . import corpus, encodings
from .circuits import INPUT, SuccinctCircuit, described_gates, evaluate, random_circuit
from .decide import DecideConfig, Decider
from .diophantine import find_solution, semilinear_of
from .errors import (
    BoundTooLarge,
    DnfSizeExceeded,
    PresburgerError,
    SizeExceeded,
    WidthCapExceeded,
)
from .formula import substitute
from .normalize import DEFAULT_DNF_CAP, system_of_conjunction
from .parsing import parse_circuit, parse_formula, print_circuit, print_formula
from .upset import upset_of

EXIT_TRUE, EXIT_FALSE, EXIT_USAGE, EXIT_RESOURCE = range(4)

RESOURCE_ERRORS = (BoundTooLarge, DnfSizeExceeded, SizeExceeded, WidthCapExceeded)


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None


def _assignment(items: Sequence[str]) -> dict[str, int]:
    out = {}
    for item in items:
        name, sep, value = item.partition("=")
        if not sep or not value.strip().isdigit():
            raise UsageError(f"--assign expects NAME=NATURAL, got {item!r}")
        out[name.strip()] = int(value)
    return out


def _emit(args, payload: dict, text: str) -> None:
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    else:
        print(text)


# ---------------------------------------------------------------------------
# Commands


def cmd_decide(args) -> int:
    phi = parse_formula(_read(args.file))
    a = _assignment(args.assign)
    unknown = set(a) - phi.free_vars
    if unknown:
        raise UsageError(f"--assign names variables that are not free: {sorted(unknown)}")
    if a:
        phi = substitute(phi, a)
    if phi.free_vars:
        raise UsageError(f"formula has free variables {sorted(phi.free_vars)}; use --assign")
    cfg = DecideConfig(weispfenning_c=args.c, bound_override=args.bound, dnf_cap=args.dnf_cap)
    verdict = Decider(phi, cfg).info()
    word = "valid" if verdict.valid else "invalid"
    text = f"{word}-upto-bound {verdict.bound}" if verdict.relative else word
    payload = {
        "command": "decide",
        "valid": verdict.valid,
        "blocks": verdict.blocks,
        "relative": verdict.relative,
        "bound": verdict.bound,
        "bound_bits": verdict.bound_bits,
        "result": text,
    }
    _emit(args, payload, text)
    return EXIT_TRUE if verdict.valid else EXIT_FALSE


def cmd_upset(args) -> int:
    phi = parse_formula(_read(args.file))
    u = upset_of(phi, args.var, args.dnf_cap)
    payload = {"command": "upset", "t": u.t, "p": u.p, "B": sorted(u.B), "R": sorted(u.R), "text": str(u)}
    _emit(args, payload, str(u))
    return EXIT_TRUE


def _system(args):
    phi = parse_formula(_read(args.file))
    return system_of_conjunction(phi)


def cmd_semilinear(args) -> int:
    names, S = _system(args)
    sl = semilinear_of(S)
    lines = ["vars: " + " ".join(names)]
    comps = []
    for ls in sl.components:
        periods = ", ".join("(" + ",".join(map(str, p)) + ")" for p in ls.periods)
        lines.append("L((" + ",".join(map(str, ls.base)) + "); {" + periods + "})")
        comps.append({"base": list(ls.base), "periods": [list(p) for p in ls.periods]})
    if not comps:
        lines.append("empty")
    payload = {"command": "semilinear", "vars": list(names), "components": comps}
    _emit(args, payload, "\n".join(lines))
    return EXIT_FALSE if sl.is_empty else EXIT_TRUE


def cmd_feasible(args) -> int:
    names, S = _system(args)
    x = find_solution(S)
    if x is None:
        text = "infeasible"
    else:
        text = "feasible " + " ".join(f"{v}={val}" for v, val in zip(names, x))
    payload = {
        "command": "feasible",
        "feasible": x is not None,
        "witness": None if x is None else dict(zip(names, x)),
    }
    _emit(args, payload, text.rstrip())
    return EXIT_FALSE if x is None else EXIT_TRUE


def cmd_circuit_eval(args) -> int:
    c = parse_circuit(_read(args.file))
    bits = args.input
    if any(b not in "01" for b in bits) or len(bits) != c.n:
        raise UsageError(f"--input needs exactly {c.n} characters 0/1 (input gate i reads character i)")
    out, trace = evaluate(c, [int(b) for b in bits])
    payload = {"command": "circuit-eval", "output": out, "trace": list(trace)}
    _emit(args, payload, str(out))
    return EXIT_TRUE if out else EXIT_FALSE


def cmd_circuit_expand(args) -> int:
    d = parse_circuit(_read(args.file))
    if (d.n - 3) % 3 or d.n < 3:
        raise UsageError(f"a describer needs 3s+3 inputs, this circuit has {d.n}")
    s = (d.n - 3) // 3
    probe = SuccinctCircuit(d, s, 0)
    gates = described_gates(probe, args.max)
    inputs = args.inputs
    if inputs is None:
        inputs = 0
        while inputs < len(gates) and gates[inputs][0] == INPUT:
            inputs += 1
    from .circuits import Circuit

    c = Circuit(len(gates), inputs, tuple(gates)).validate()
    text = print_circuit(c)
    payload = {"command": "circuit-expand", "r": c.r, "n": c.n, "gates": [list(g) for g in c.gates]}
    _emit(args, payload, text.rstrip("\n"))
    return EXIT_TRUE


def _write_formula(args, phi, kind: str) -> int:
    text = print_formula(phi)
    if args.output:
        Path(args.output).write_text(text + "\n", encoding="utf-8")
    payload = {"command": "gen", "family": kind, "free": sorted(phi.free_vars), "formula": text}
    if args.output:
        payload["output"] = args.output
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    elif not args.output:
        print(text)
    return EXIT_TRUE


def cmd_gen(args) -> int:
    fam = args.family
    if fam == "bin":
        phi = encodings.gen_bin(args.n)
    elif fam == "mod":
        phi = encodings.gen_mod(args.n, args.variant)
    elif fam == "prime":
        phi = encodings.gen_prime(args.n, args.variant)
    elif fam == "valid":
        phi = encodings.gen_valid(args.n)
    elif fam == "hard":
        phi = encodings.gen_hard_family(args.n)
    elif fam == "circuit-formula":
        if not args.circuit:
            raise UsageError("gen circuit-formula needs --circuit FILE")
        phi = encodings.gen_circuit_formula(parse_circuit(_read(args.circuit)), args.variant)
    else:
        if not args.circuit:
            raise UsageError("gen reduction needs --circuit FILE holding the describer")
        d = parse_circuit(_read(args.circuit))
        if (d.n - 3) % 3 or d.n < 3:
            raise UsageError(f"a describer needs 3s+3 inputs, this circuit has {d.n}")
        params = encodings.ReductionParams(args.i, args.q, args.r)
        phi = encodings.gen_reduction(SuccinctCircuit(d, (d.n - 3) // 3, args.inputs or 0), params)
    return _write_formula(args, phi, fam)


def cmd_corpus(args) -> int:
    if args.kind == "pa22":
        items = [print_formula(f) for f in corpus.pa22_corpus(args.seed, args.count)]
        suffix = ".pa"
    elif args.kind == "sigma1":
        items = [print_formula(f) for f in corpus.sigma1_corpus(args.seed, args.count)]
        suffix = ".pa"
    else:
        import random

        rng = random.Random(args.seed)
        items = [print_circuit(random_circuit(rng)).rstrip("\n") for _ in range(args.count)]
        suffix = ".circ"
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        for idx, item in enumerate(items):
            (out / f"{idx:04d}{suffix}").write_text(item + "\n", encoding="utf-8")
    payload = {"command": "corpus", "kind": args.kind, "seed": args.seed, "items": items}
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    elif not args.out:
        print(("\n\n" if suffix == ".circ" else "\n").join(items))
    return EXIT_TRUE


# ---------------------------------------------------------------------------
# Wiring


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="presburger", description="Presburger arithmetic toolkit.")
    p.add_argument("--json", action="store_true", help="machine-readable output")
    sub = p.add_subparsers(dest="command", required=True)

    d = sub.add_parser("decide", help="decide a sentence")
    d.add_argument("file")
    d.add_argument("--bound", type=int, help="enumerate outer blocks up to N instead of the default bound")
    d.add_argument("--c", type=int, default=1, help="constant of the default quantifier bound")
    d.add_argument("--assign", action="append", default=[], metavar="NAME=VALUE",
                   help="fix a free variable before deciding")
    d.add_argument("--dnf-cap", type=int, default=DEFAULT_DNF_CAP)
    d.set_defaults(run=cmd_decide)

    u = sub.add_parser("upset", help="ultimately periodic set of a one-variable existential formula")
    u.add_argument("file")
    u.add_argument("--var", required=True)
    u.add_argument("--dnf-cap", type=int, default=DEFAULT_DNF_CAP)
    u.set_defaults(run=cmd_upset)

    s = sub.add_parser("semilinear", help="semilinear solution set of a conjunction of atoms")
    s.add_argument("file")
    s.set_defaults(run=cmd_semilinear)

    f = sub.add_parser("feasible", help="natural solution of a conjunction of atoms")
    f.add_argument("file")
    f.set_defaults(run=cmd_feasible)

    c = sub.add_parser("circuit", help="circuit utilities")
    csub = c.add_subparsers(dest="circuit_command", required=True)
    ce = csub.add_parser("eval", help="evaluate a circuit")
    ce.add_argument("file")
    ce.add_argument("--input", required=True, help="input bits, character i feeds input gate i")
    ce.set_defaults(run=cmd_circuit_eval)
    cx = csub.add_parser("expand", help="materialize the circuit described by a describer")
    cx.add_argument("file")
    cx.add_argument("--max", type=int, required=True, help="largest admissible described size")
    cx.add_argument("--inputs", type=int, help="input gates of the described circuit (default: leading INPUT gates)")
    cx.set_defaults(run=cmd_circuit_expand)

    g = sub.add_parser("gen", help="write a formula family as a .pa formula")
    g.add_argument("family", choices=["bin", "mod", "prime", "valid", "hard", "circuit-formula", "reduction"])
    g.add_argument("--n", type=int, default=1)
    g.add_argument("--variant", choices=[encodings.SIGMA, encodings.PI], default=encodings.SIGMA)
    g.add_argument("--circuit", help="circuit (circuit-formula) or describer (reduction) file")
    g.add_argument("--inputs", type=int, help="input gates of the described circuit (reduction)")
    g.add_argument("--i", type=int, default=1, help="alternation parameter (reduction)")
    g.add_argument("--q", type=int, default=0, help="q exponent (reduction)")
    g.add_argument("--r", type=int, default=1, help="r exponent (reduction)")
    g.add_argument("-o", "--output", help="write here instead of stdout")
    g.set_defaults(run=cmd_gen)

    k = sub.add_parser("corpus", help="seeded random test corpora")
    k.add_argument("kind", choices=["pa22", "sigma1", "circuits"])
    k.add_argument("--count", type=int, default=10)
    k.add_argument("--seed", type=int, default=0)
    k.add_argument("--out", help="directory receiving one file per item")
    k.set_defaults(run=cmd_corpus)
    return p


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_TRUE
    try:
        return args.run(args)
    except RESOURCE_ERRORS as e:
        print(f"presburger: resource bound exceeded: {e}", file=sys.stderr)
        return EXIT_RESOURCE
    except (UsageError, PresburgerError, ValueError) as e:
        print(f"presburger: error: {e}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())
