"""Command-line entry point: ``cslab <command> [options]``.

Every command builds a JSON report (schema version, sorted keys) and prints a
short human summary. With ``--out`` the report goes to that file; without it
the report is printed after the summary. Exit status: 0 success, 1 failed
verification or a counterexample, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Any, Callable

import numpy as np

from . import __version__
from .carrier import Carrier, CarrierError, FiniteCarrier, check_square_generated, load_carrier
from .classify import Classification, ClassificationError, classify_quadruple
from .families.adjudicate import adjudicate, adjudicate_all
from .families.build import build_instance, component_residual, validate_constraints, violations
from .families.catalog import FAMILY_IDS, TemplateError, get_template
from .families.sampling import SamplingError, hosting_carriers, sample_params, seeded_lambdas
from .funcspace import FunctionError, default_tol, enumerate_characters, linear_independence, solve_additive_basis
from .oracles import DEFAULT_DRAWS, SUITES, OracleError, run_suite
from .serialize import (
    SCHEMA_VERSION,
    FormatError,
    additive_to_json,
    character_to_json,
    cjson,
    dumps,
    instance_to_json,
    params_to_json,
    parse_complex,
    read_json,
    solution_from_json,
    template_to_json,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
ERRATA_MODES = ("as-printed", "corrected", "both")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _complex_arg(s: str) -> complex:
    """Real shorthand ("1", "-0.5", "1/2") or [re,im] ("[0.8,0.3]")."""
    import json

    text = s.strip()
    try:
        v = json.loads(text) if text.startswith("[") else text
        return parse_complex(v if not isinstance(v, str) else _num(v), "lambda")
    except (ValueError, FormatError):
        raise argparse.ArgumentTypeError(f"expected a real number or [re,im], got {s!r}") from None


def _num(s: str):
    try:
        return float(s)
    except ValueError:
        return s


def _load_carrier_file(path: str | None) -> Carrier | None:
    if path is None:
        return None
    spec = read_json(path)
    try:
        return load_carrier(spec)
    except CarrierError as e:
        raise FormatError(f"{path}: {e}") from None


def _tol(args) -> float:
    return args.tol if getattr(args, "tol", None) is not None else default_tol()


# ------------------------------------------------------------------ commands


def cmd_carrier_check(args) -> tuple[dict, str, int]:
    spec = read_json(args.carrier)
    try:
        c = load_carrier(spec)
    except CarrierError as e:
        return {"valid": False, "error": str(e)}, f"invalid carrier: {e}", EXIT_FAIL
    sq = check_square_generated(c)
    rep: dict[str, Any] = {
        "valid": True,
        "carrier": c.to_json(),
        "kind": c.kind,
        "square_generated": sq.all_reachable,
        "square_generated_builtin": sq.builtin,
        "unreachable": [c.element_json(x) for x in sq.unreachable],
    }
    if isinstance(c, FiniteCarrier):
        rep["size"] = c.size
        rep["associativity_triples_checked"] = c.size**3
    msg = f"valid {c.kind} carrier; generated by squares: {sq.all_reachable}"
    return rep, msg, EXIT_OK


def cmd_chars(args):
    c = _load_carrier_file(args.carrier)
    if isinstance(c, FiniteCarrier):
        chars = enumerate_characters(c)
        out = []
        for ch in chars:
            d = character_to_json(ch)
            d["zero"] = ch.is_zero
            d["null_ideal"] = [c.element_json(x) for x in ch.null_ideal()]
            out.append(d)
        rep = {"carrier": c.to_json(), "count": len(chars), "characters": out}
        return rep, f"{len(chars)} characters (zero map included)", EXIT_OK
    family = "x -> exp(b.x), b in C^%d" % c.dim if c.kind == "rat-add" else "x -> x^s (0 -> 0), s in C; and x -> 1"
    rep = {"carrier": c.to_json(), "parametric": True, "family": family}
    return rep, f"analytic carrier: characters {family}", EXIT_OK


def cmd_additive(args):
    c = _load_carrier_file(args.carrier)
    domain = None
    if args.domain:
        domain = [v.strip() for v in args.domain.split(",") if v.strip()]
    try:
        b = solve_additive_basis(c, domain)
    except CarrierError as e:
        raise FormatError(str(e)) from None
    rep = {"carrier": c.to_json(), "domain": domain, "dimension": b.dimension,
           "basis": [additive_to_json(a) for a in b.basis]}
    return rep, f"additive basis dimension {b.dimension}", EXIT_OK


def _modes(mode: str) -> list[str]:
    return {"as-printed": ["printed"], "corrected": ["effective"], "both": ["printed", "effective"]}[mode]


def cmd_gen(args):
    t = get_template(args.family)
    c = _load_carrier_file(args.carrier)
    if c is None:
        hosts = hosting_carriers(t.id)
        c = hosts[args.seed % len(hosts)]
    l1d, l2d = seeded_lambdas(t.id, args.seed)
    l1 = args.lambda1 if args.lambda1 is not None else l1d
    l2 = args.lambda2 if args.lambda2 is not None else l2d
    tol = _tol(args)
    variants = {}
    ok = True
    first = None
    for v in _modes(args.errata_mode):
        p = sample_params(t.id, c, l1, l2, args.seed, variant=v)
        inst = build_instance(t.id, p, v, validate=False)
        res = inst.residual()
        passed = res.relative <= tol and (res.independent is not False)
        if v == "effective" or args.errata_mode == "as-printed":
            ok = ok and passed
        variants["as-printed" if v == "printed" else "corrected"] = {
            "instance": instance_to_json(inst),
            "residual": res.to_json(c),
            "constraints": [x.to_json() for x in validate_constraints(t.id, inst.params, v)],
            "passed": passed,
        }
        first = first or inst
    rep = {"family": t.id, "seed": args.seed, "tol": tol, "errata_mode": args.errata_mode, "variants": variants}
    if args.instance:
        key = "corrected" if "corrected" in variants else "as-printed"
        Path(args.instance).write_text(dumps(variants[key]["instance"]))
    lines = [f"{t.id} seed {args.seed}:"]
    for k, v in variants.items():
        lines.append(f"  {k}: relative residual {v['residual']['r1']:.3e}/{v['residual']['r2']:.3e}"
                     f" -> {'pass' if v['passed'] else 'FAIL'}")
    return rep, "\n".join(lines), EXIT_OK if ok else EXIT_FAIL


def _solution(args):
    c = _load_carrier_file(args.carrier)
    spec = read_json(args.solution)
    c, names, fns = solution_from_json(spec, c, str(args.solution))
    l1 = args.lambda1 if args.lambda1 is not None else parse_complex(spec.get("lambda1", 0), "lambda1")
    l2 = args.lambda2 if args.lambda2 is not None else parse_complex(spec.get("lambda2", 0), "lambda2")
    return c, names, fns, l1, l2


def cmd_verify(args):
    c, names, fns, l1, l2 = _solution(args)
    tol = _tol(args)
    rep_r = component_residual(fns, l1, l2)
    res_ok = rep_r.relative <= tol
    reasons = []
    if not res_ok:
        reasons.append(f"relative residual {rep_r.relative:.3e} exceeds {tol:.1e}")
    indep = None
    if len(fns) >= 3:
        iv = linear_independence(fns[0], fns[2])
        indep = bool(iv)
        if not indep:
            reasons.append("independence hypothesis violated: f and h are linearly dependent")
    elif fns[0].max_abs() == 0:
        reasons.append("hypothesis violated: f = 0")
    ok = not reasons
    rep = {
        "components": list(names),
        "lambda1": cjson(l1),
        "lambda2": cjson(l2),
        "tol": tol,
        "residual": rep_r.to_json(c),
        "independent": indep,
        "verified": ok,
        "reasons": reasons,
    }
    msg = "verified" if ok else "; ".join(reasons)
    return rep, msg, EXIT_OK if ok else EXIT_FAIL


def classification_to_json(cl: Classification) -> dict:
    return {
        "matched": not cl.unmatched,
        "family_ids": cl.family_ids(),
        "matches": [
            {
                "families": [
                    {"family": f, "params": params_to_json(p), "fit_residual": r} for f, p, r in m.entries()
                ],
            }
            for m in cl.matches
        ],
        "characters": [character_to_json(ch) for ch in cl.characters],
        "normal_form_misfit": cl.misfit,
        "notes": list(cl.notes),
        "swapped": cl.swapped,
    }


def cmd_classify(args):
    c, names, fns, l1, l2 = _solution(args)
    try:
        cl = classify_quadruple(fns, l1, l2, c, _tol(args))
    except ClassificationError as e:
        return {"matched": False, "error": str(e)}, f"not classified: {e}", EXIT_FAIL
    rep = classification_to_json(cl)
    # an unmatched verified solution is a finding, not a failure
    msg = "matches: " + (", ".join(cl.family_ids()) if not cl.unmatched else "none (potential counterexample)")
    return rep, msg, EXIT_OK


def cmd_oracle(args):
    reports = run_suite(args.suite, args.draws, args.seed)
    ok = all(r.holds for r in reports)
    rep = {"suite": args.suite, "draws": args.draws, "seed": args.seed, "holds": ok,
           "suites": [r.to_json() for r in reports]}
    lines = []
    for r in reports:
        st = [v.status for _, v in r.instances]
        line = (f"{r.suite}: {len(st)} instances ({st.count('holds')} holds, {st.count('not-applicable')} n/a,"
                f" {st.count('counterexample')} counterexamples)")
        if r.draws is not None:
            line += (f"; {r.draws.draws} draws ({r.draws.hypothesis_pass} hypothesis-pass,"
                     f" {len(r.draws.counterexamples)} counterexamples)")
        lines.append(line)
    return rep, "\n".join(lines), EXIT_OK if ok else EXIT_FAIL


def cmd_catalog(args):
    ids = [args.family] if args.family else list(FAMILY_IDS)
    rep = {"templates": [template_to_json(f) for f in ids]}
    lines = [f"{f}: {get_template(f).status}" for f in ids]
    return rep, "\n".join(lines), EXIT_OK


def cmd_adjudicate(args):
    if args.all:
        recs = adjudicate_all(args.samples)
    else:
        recs = [adjudicate(args.family, samples=args.samples)]
    rep = {"records": [r.to_json() for r in recs]}
    lines = []
    for r in recs:
        extra = f" (corrected residual {r.corrected_residual:.1e})" if r.corrected_residual is not None else ""
        lines.append(f"{r.family}: {r.verdict}; printed residual {r.printed_residual:.1e}{extra}")
    ok = all(r.verdict != "unresolved" for r in recs)
    return rep, "\n".join(lines), EXIT_OK if ok else EXIT_FAIL


# ------------------------------------------------------------------ parser and dispatch


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="cslab", description="Verification laboratory for the cosine-sine system on semigroups.")
    ap.add_argument("--version", action="version", version=f"cslab {__version__}")
    sub = ap.add_subparsers(dest="command", parser_class=_Parser)

    def common(p, tol=False):
        p.add_argument("--out", help="write the JSON report to this file")
        if tol:
            p.add_argument("--tol", type=float, help="relative tolerance (default: CSLAB_TOL or 1e-9)")

    def lambdas(p):
        p.add_argument("--lambda1", type=_complex_arg, help="real number or [re,im]")
        p.add_argument("--lambda2", type=_complex_arg, help="real number or [re,im]")

    p = sub.add_parser("carrier", help="carrier utilities")
    csub = p.add_subparsers(dest="carrier_command", parser_class=_Parser)
    pc = csub.add_parser("check", help="validate a carrier file")
    pc.add_argument("carrier_pos", nargs="?", metavar="CARRIER")
    pc.add_argument("--carrier", dest="carrier_opt")
    common(pc)

    p = sub.add_parser("chars", help="enumerate characters of a carrier")
    p.add_argument("--carrier", required=True)
    common(p)

    p = sub.add_parser("additive", help="basis of additive functions")
    p.add_argument("--carrier", required=True)
    p.add_argument("--domain", help="comma-separated element labels of a subsemigroup (finite carriers)")
    common(p)

    p = sub.add_parser("gen", help="sample and verify a family instance")
    p.add_argument("--family", required=True, choices=FAMILY_IDS, metavar="FAMILY")
    p.add_argument("--carrier", help="carrier file (default: seed-selected hosting carrier)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--errata-mode", choices=ERRATA_MODES, default="corrected")
    p.add_argument("--instance", help="also write the instance file here")
    lambdas(p)
    common(p, tol=True)

    for name, hlp in (("verify", "check a solution file against the equations"),
                      ("classify", "identify the families a solution belongs to")):
        p = sub.add_parser(name, help=hlp)
        p.add_argument("--solution", required=True)
        p.add_argument("--carrier", help="carrier file (default: the carrier inside the solution file)")
        lambdas(p)
        common(p, tol=True)

    p = sub.add_parser("oracle", help="run the auxiliary-result oracles")
    p.add_argument("--suite", required=True, choices=SUITES + ("all",))
    p.add_argument("--draws", type=int, default=DEFAULT_DRAWS)
    p.add_argument("--seed", type=int, default=0)
    common(p)

    p = sub.add_parser("catalog", help="list the family templates")
    p.add_argument("--family", choices=FAMILY_IDS, metavar="FAMILY")
    common(p)

    p = sub.add_parser("adjudicate", help="decide whether printed families verify")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--family", choices=FAMILY_IDS, metavar="FAMILY")
    g.add_argument("--all", action="store_true")
    p.add_argument("--samples", type=int, default=4)
    common(p)
    return ap


COMMANDS: dict[str, Callable] = {
    "chars": cmd_chars,
    "additive": cmd_additive,
    "gen": cmd_gen,
    "verify": cmd_verify,
    "classify": cmd_classify,
    "oracle": cmd_oracle,
    "catalog": cmd_catalog,
    "adjudicate": cmd_adjudicate,
}


def dispatch(args) -> tuple[dict, str, int]:
    if args.command == "carrier":
        if args.carrier_command != "check":
            raise UsageError("cslab carrier: expected the 'check' subcommand")
        args.carrier = args.carrier_opt or args.carrier_pos
        if not args.carrier:
            raise UsageError("cslab carrier check: a carrier file is required")
        return cmd_carrier_check(args)
    if args.command not in COMMANDS:
        raise UsageError("cslab: a command is required (see --help)")
    return COMMANDS[args.command](args)


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        args = build_parser().parse_args(argv)
        if getattr(args, "seed", None) is not None and not (0 <= args.seed < 2**64):
            raise UsageError("--seed must be a 64-bit unsigned integer")
        report, summary, code = dispatch(args)
    except UsageError as e:
        print(str(e), file=sys.stderr)
        return EXIT_USAGE
    except (FormatError, TemplateError, SamplingError, FunctionError, OracleError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    full = {"schema_version": SCHEMA_VERSION, "command": args.command, "exit_status": code, **report}
    text = dumps(full)
    print(summary)
    if args.out:
        try:
            Path(args.out).write_text(text)
        except OSError as e:
            print(f"error: {args.out}: cannot write ({e.strerror})", file=sys.stderr)
            return EXIT_USAGE
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
