"""Command-line front end.

Subcommands: sat, entail, model, learn, experiment.  One-line verdicts on
stdout; machine-readable detail behind --json.  Exit codes: 0 answered,
1 internal or protocol error, 2 input error.
"""

from __future__ import annotations

import argparse
import json
import sys

from .elksat import NotSatisfiable, conjunctive_sat, elk_sat, witness_model
from .enumeration import brute_force_elk_sat, default_world_bound
from .learning import BudgetExceeded, PoolExhausted, experiment_thm2
from .parser import ParseError, parse_axiom, parse_formula_file, parse_ontology_file
from .semantics import check_elk
from .sessions import run_session
from .syntax import FragmentError, to_conjunctive

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_INPUT = 2


def _dump(data) -> str:
    return json.dumps(data, sort_keys=True, indent=2)


def _read(path: str) -> str:
    with open(path, "r", encoding="utf-8") as handle:
        return handle.read()


def _verified_witness(pointed, phi):
    """Refuse to hand out a witness that does not model-check."""
    if pointed is not None and not check_elk(pointed, phi):
        raise RuntimeError("witness failed its model check; refusing to print")
    return pointed


def cmd_sat(args) -> int:
    phi = parse_formula_file(_read(args.file))
    want_witness = args.witness or args.json
    if args.mode == "conjunctive":
        verdict = conjunctive_sat(to_conjunctive(phi), want_witness=want_witness)
        witness = _verified_witness(verdict.witness, phi) if verdict.witness else None
        sat, failing = verdict.satisfiable, verdict.failing_check
    elif args.mode == "full":
        verdict = elk_sat(phi, want_witness=want_witness)
        witness = _verified_witness(verdict.witness, phi) if verdict.witness else None
        sat, failing = verdict.satisfiable, verdict.failing_check
    else:
        result = brute_force_elk_sat(phi, max_worlds=args.max_worlds,
                                     max_domain=args.max_domain)
        witness = _verified_witness(result.model, phi) if result.model else None
        sat, failing = result.found, None
    print("SAT" if sat else "UNSAT")
    if args.json:
        print(_dump({"sat": sat,
                     "witness": witness.to_json_dict() if witness else None,
                     "failing_check": failing}))
    elif args.witness and witness is not None:
        print(_dump(witness.to_json_dict()))
    return EXIT_OK


def cmd_entail(args) -> int:
    ontology = parse_ontology_file(_read(args.ontology))
    axiom = parse_axiom(args.axiom)
    from .engine import entails
    answer = entails(ontology, axiom)
    print("ENTAILED" if answer else "NOT-ENTAILED")
    if args.json:
        print(_dump({"entailed": answer}))
    return EXIT_OK


def cmd_model(args) -> int:
    phi = parse_formula_file(_read(args.file))
    try:
        conjunctive = to_conjunctive(phi)
    except FragmentError:
        conjunctive = None
    if conjunctive is not None:
        try:
            witness = witness_model(conjunctive)
        except NotSatisfiable:
            print("UNSAT")
            return EXIT_OK
    else:
        verdict = elk_sat(phi, want_witness=True)
        if not verdict.satisfiable:
            print("UNSAT")
            return EXIT_OK
        witness = verdict.witness
    _verified_witness(witness, phi)
    print(_dump(witness.to_json_dict()))
    return EXIT_OK


def cmd_learn(args) -> int:
    config = json.loads(_read(args.config))
    result = run_session(config)
    print(_dump(result))
    return EXIT_OK


def cmd_experiment(args) -> int:
    if args.what != "thm2":
        raise ValueError("unknown experiment %r" % args.what)
    if not (1 <= args.n <= 10):
        raise ValueError("--n must be between 1 and 10")
    print(_dump(experiment_thm2(args.n)))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="elkat",
        description="Reasoning and learning-protocol toolkit for the "
                    "epistemic description logic ELK.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_sat = sub.add_parser("sat", help="decide satisfiability of a formula file")
    p_sat.add_argument("file")
    p_sat.add_argument("--mode", choices=["conjunctive", "full", "brute"],
                       default="conjunctive")
    p_sat.add_argument("--witness", action="store_true",
                       help="emit a certifying Kripke structure (checked first)")
    p_sat.add_argument("--json", action="store_true")
    p_sat.add_argument("--max-worlds", type=int, default=None,
                       help="world bound for brute mode (default: 1 + total modal depth)")
    p_sat.add_argument("--max-domain", type=int, default=3)
    p_sat.set_defaults(func=cmd_sat)

    p_ent = sub.add_parser("entail", help="decide ontology entailment of one axiom")
    p_ent.add_argument("ontology")
    p_ent.add_argument("--axiom", required=True)
    p_ent.add_argument("--json", action="store_true")
    p_ent.set_defaults(func=cmd_entail)

    p_model = sub.add_parser("model", help="emit a witness model only")
    p_model.add_argument("file")
    p_model.set_defaults(func=cmd_model)

    p_learn = sub.add_parser("learn", help="run a learning session from a JSON config")
    p_learn.add_argument("config")
    p_learn.set_defaults(func=cmd_learn)

    p_exp = sub.add_parser("experiment", help="run a named experiment")
    p_exp.add_argument("what", choices=["thm2"])
    p_exp.add_argument("--n", type=int, required=True)
    p_exp.set_defaults(func=cmd_experiment)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, FragmentError, FileNotFoundError, ValueError,
            json.JSONDecodeError, KeyError) as exc:
        print("input error: %s" % exc, file=sys.stderr)
        return EXIT_INPUT
    except (PoolExhausted, BudgetExceeded, RuntimeError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
