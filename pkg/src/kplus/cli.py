"""Command-line surface: decide sequents, check artifacts, translate formulas,
realize theorems, and generate the theorem corpus.

Exit codes are a stable contract: 0 provable / valid, 10 refutable, 20 budget
exceeded, 2 parse errors, 1 validation failures.
"""

from __future__ import annotations

import argparse
import json
import random
import sys

from . import annotate as annotate_mod
from . import engine as engine_mod
from . import jlogic, kripke, realize, syntax
from .engine import BudgetExceeded, Engine, Provable, Refutable
from .syntax import ParseError, render


EXIT_PROVABLE = 0
EXIT_OK = 0
EXIT_INVALID = 1
EXIT_PARSE = 2
EXIT_REFUTABLE = 10
EXIT_BUDGET = 20


def _emit(path: str | None, data: dict):
    text = json.dumps(data, indent=2)
    if path:
        with open(path, "w") as handle:
            handle.write(text + "\n")
    else:
        print(text)


def _parse_sequent_arg(text: str):
    if "|-" in text:
        seq = syntax.parse_sequent(text)
        if isinstance(seq, syntax.FocusedSequent):
            seq = syntax.sequent(seq.ante, seq.succ)
        return seq
    return syntax.sequent([], [syntax.parse_modal(text)])


def cmd_decide(args) -> int:
    try:
        seq = _parse_sequent_arg(args.sequent)
    except ParseError as err:
        print(f"parse error: {err}", file=sys.stderr)
        return EXIT_PARSE
    engine = Engine(budget=args.budget)
    try:
        verdict = engine.decide(seq)
    except BudgetExceeded as err:
        print(f"budget exceeded: {err}", file=sys.stderr)
        return EXIT_BUDGET
    if isinstance(verdict, Provable):
        if not engine_mod.check_cyclic(verdict.proof, diags := []):
            print(f"internal error: emitted proof invalid: {diags}", file=sys.stderr)
            return EXIT_INVALID
        if args.emit:
            _emit(args.emit, engine_mod.proof_to_json(verdict.proof))
        print(f"provable ({len(verdict.proof.nodes)} nodes, "
              f"{len(verdict.proof.backlinks)} backlinks)")
        return EXIT_PROVABLE
    tree = verdict.refutation
    if args.countermodel:
        model, world = kripke.model_from_refutation(tree)
        formula = kripke.sequent_formula(seq.ante, seq.succ)
        if kripke.eval_formula(model, world, formula):
            print("internal error: countermodel fails to falsify", file=sys.stderr)
            return EXIT_INVALID
        data = kripke.model_to_json(model)
        data["world"] = world
        data["falsifies"] = render(formula)
        _emit(args.countermodel, data)
    if args.emit:
        _emit(args.emit, engine_mod.refutation_to_json(tree))
    print(f"refutable ({len(tree.nodes)} refutation nodes)")
    return EXIT_REFUTABLE


def cmd_realize(args) -> int:
    try:
        formula = syntax.parse_modal(args.formula)
    except ParseError as err:
        print(f"parse error: {err}", file=sys.stderr)
        return EXIT_PARSE
    try:
        result = realize.realize_theorem(formula, budget=args.budget)
    except realize.NotATheorem as err:
        print(str(err), file=sys.stderr)
        return EXIT_REFUTABLE
    except BudgetExceeded as err:
        print(f"budget exceeded: {err}", file=sys.stderr)
        return EXIT_BUDGET
    report = jlogic.check_proof(result.proof)
    if not (report.ok and report.injective):
        print("internal error: emitted proof failed the kernel", file=sys.stderr)
        return EXIT_INVALID
    if syntax.forgetful(result.realized) != formula:
        print("internal error: forgetful round trip failed", file=sys.stderr)
        return EXIT_INVALID
    if args.emit:
        _emit(args.emit, realization_json(result))
    print(f"realized: {render(result.realized)}")
    print(f"proof steps: {len(result.proof.steps)}; injective: {report.injective}")
    return EXIT_OK


def realization_json(result: realize.RealizationResult) -> dict:
    return {
        "kind": "realization",
        "realized": render(result.realized),
        "theta": {
            render(var): render(term) for var, term in sorted(
                result.theta.mapping.items(), key=lambda kv: render(kv[0])
            )
        },
        "proof": jlogic.jproof_to_json(result.proof),
    }


def cmd_check_jproof(args) -> int:
    with open(args.path) as handle:
        data = json.load(handle)
    try:
        proof = jlogic.jproof_from_json(data)
    except (KeyError, jlogic.JLogicError, ParseError) as err:
        print(f"malformed proof file: {err}", file=sys.stderr)
        return EXIT_PARSE
    report = jlogic.check_proof(proof)
    constants = sorted(jlogic.cs_constants(report.cs))
    print(f"ok: {report.ok}; injective: {report.injective}; "
          f"constants: {constants}")
    for line in report.diagnostics:
        print(f"  {line}", file=sys.stderr)
    if not report.ok:
        return EXIT_INVALID
    if args.require_injective and not report.injective:
        return EXIT_INVALID
    return EXIT_OK


def cmd_check_proof(args) -> int:
    with open(args.path) as handle:
        proof = engine_mod.proof_from_json(json.load(handle))
    ok = engine_mod.check_cyclic(proof, diags := [])
    print(f"ok: {ok}")
    for line in diags:
        print(f"  {line}", file=sys.stderr)
    return EXIT_OK if ok else EXIT_INVALID


def cmd_check_refutation(args) -> int:
    with open(args.path) as handle:
        tree = engine_mod.refutation_from_json(json.load(handle))
    engine = Engine(budget=args.budget)
    ok = engine_mod.check_refutation(tree, engine_mod._OracleAdapter(engine), diags := [])
    print(f"ok: {ok}")
    for line in diags:
        print(f"  {line}", file=sys.stderr)
    return EXIT_OK if ok else EXIT_INVALID


def cmd_countermodel(args) -> int:
    try:
        formula = syntax.parse_modal(args.formula)
    except ParseError as err:
        print(f"parse error: {err}", file=sys.stderr)
        return EXIT_PARSE
    hit = kripke.search_countermodel(formula, args.max_worlds)
    if hit is None:
        print(f"no countermodel within {args.max_worlds} worlds")
        return EXIT_PROVABLE
    model, world = hit
    data = kripke.model_to_json(model)
    data["world"] = world
    _emit(args.emit, data)
    return EXIT_REFUTABLE


def cmd_translate(args) -> int:
    try:
        formula = syntax.parse(args.formula)
    except ParseError as err:
        print(f"parse error: {err}", file=sys.stderr)
        return EXIT_PARSE
    if args.forgetful:
        out = syntax.forgetful(formula)
    else:
        out = syntax.erase(formula)
    print(render(out))
    return EXIT_OK


def corpus_entries(depth: int = 2, variables: int = 2, seed: int = 0) -> list[dict]:
    """Instances of the eight axiom schemas over a small formula pool, closed
    under modus ponens and necessitation the given number of rounds."""
    rng = random.Random(seed)
    atoms = [syntax.Var(i) for i in range(max(2, variables))]
    pool = list(atoms)
    pool.append(syntax.Imp(atoms[0], atoms[1]))
    pool.append(syntax.Box(atoms[0]))
    pool.append(syntax.BoxPlus(atoms[1]))

    def instances(a, b, c):
        con, dis, imp, box, plus, ng = (
            syntax.conj, syntax.disj, syntax.Imp, syntax.Box, syntax.BoxPlus, syntax.neg,
        )
        return [
            ("ax-i", imp(a, imp(b, a))),
            ("ax-ii", imp(imp(a, imp(b, c)), imp(imp(a, b), imp(a, c)))),
            ("ax-iii", imp(ng(ng(a)), a)),
            ("ax-iv", imp(box(imp(a, b)), imp(box(a), box(b)))),
            ("ax-v", imp(plus(imp(a, b)), imp(plus(a), plus(b)))),
            ("ax-vi", imp(plus(a), box(a))),
            ("ax-vii", imp(plus(a), box(plus(a)))),
            ("ax-viii", imp(con(box(a), plus(imp(a, box(a)))), plus(a))),
        ]

    tuples = [(pool[0], pool[1], atoms[rng.randrange(len(atoms))])]
    tuples.append((pool[1], pool[0], pool[0]))
    tuples.append((pool[2], pool[0], pool[1]))
    tuples.append((pool[3], pool[1], pool[0]))
    tuples.append((pool[4], pool[0], pool[0]))

    tagged: dict[syntax.Formula, str] = {}
    for a, b, c in tuples:
        for tag, formula in instances(a, b, c):
            tagged.setdefault(formula, tag)
    frontier = dict(tagged)
    for round_no in range(1, depth + 1):
        new: dict[syntax.Formula, str] = {}
        members = list(tagged)
        for f, tag in list(frontier.items()):
            new.setdefault(syntax.BoxPlus(f), f"nec({tag})")
        for minor in members:
            for major in members:
                if isinstance(major, syntax.Imp) and major.lhs == minor:
                    if major.rhs not in tagged:
                        new.setdefault(
                            major.rhs, f"mp@{round_no}"
                        )
        frontier = {f: t for f, t in new.items() if f not in tagged}
        tagged.update(frontier)
    return [
        {"formula": render(f), "expected": "provable", "provenance": tag}
        for f, tag in sorted(tagged.items(), key=lambda kv: (syntax.size(kv[0]), render(kv[0])))
    ]


def cmd_corpus(args) -> int:
    entries = corpus_entries(args.depth, args.vars, args.seed)
    _emit(args.emit, {"kind": "corpus", "entries": entries})
    print(f"{len(entries)} corpus entries", file=sys.stderr)
    return EXIT_OK


def cmd_selftest(args) -> int:
    """Abbreviated end-to-end exercise of every module."""
    engine = Engine()
    seq = syntax.parse_sequent("p0, []p0, [+](p0 -> []p0) |- [+]p0")
    verdict = engine.decide(seq)
    assert isinstance(verdict, Provable) and engine_mod.check_cyclic(verdict.proof)
    print("engine: worked example provable")
    bad = syntax.parse_sequent("|- []p0 -> [+]p0")
    ref = engine.decide(bad)
    assert isinstance(ref, Refutable)
    model, world = kripke.model_from_refutation(ref.refutation)
    formula = kripke.sequent_formula(bad.ante, bad.succ)
    assert not kripke.eval_formula(model, world, formula)
    print("kripke: countermodel verified")
    result = realize.realize_theorem(syntax.parse_modal("[+]p0 -> []p0"))
    report = jlogic.check_proof(result.proof)
    assert report.ok and report.injective
    print(f"realize: {render(result.realized)}")
    print("selftest passed")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kplus")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("decide", help="decide a sequent or formula")
    p.add_argument("sequent")
    p.add_argument("--budget", type=int, default=10**6)
    p.add_argument("--emit", help="write the proof or refutation JSON here")
    p.add_argument("--countermodel", nargs="?", const="", default=None,
                   help="extract and verify a countermodel (optionally to a file)")
    p.set_defaults(func=cmd_decide)

    p = sub.add_parser("realize", help="realize a theorem in justification logic")
    p.add_argument("formula")
    p.add_argument("--budget", type=int, default=10**6)
    p.add_argument("--emit")
    p.set_defaults(func=cmd_realize)

    p = sub.add_parser("check-jproof", help="check a justification proof file")
    p.add_argument("path")
    p.add_argument("--require-injective", action="store_true")
    p.set_defaults(func=cmd_check_jproof)

    p = sub.add_parser("check-proof", help="check a cyclic proof file")
    p.add_argument("path")
    p.set_defaults(func=cmd_check_proof)

    p = sub.add_parser("check-refutation", help="check a refutation tree file")
    p.add_argument("path")
    p.add_argument("--budget", type=int, default=10**6)
    p.set_defaults(func=cmd_check_refutation)

    p = sub.add_parser("countermodel", help="brute-force countermodel search")
    p.add_argument("formula")
    p.add_argument("--max-worlds", type=int, default=4)
    p.add_argument("--emit")
    p.set_defaults(func=cmd_countermodel)

    p = sub.add_parser("translate", help="forgetful translation or label erasure")
    p.add_argument("formula")
    p.add_argument("--forgetful", action="store_true", default=True)
    p.add_argument("--erase", dest="forgetful", action="store_false")
    p.set_defaults(func=cmd_translate)

    p = sub.add_parser("corpus", help="generate the axiom-closure theorem corpus")
    p.add_argument("--depth", type=int, default=2)
    p.add_argument("--vars", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--emit")
    p.set_defaults(func=cmd_corpus)

    p = sub.add_parser("selftest", help="abbreviated end-to-end exercise")
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    code = args.func(args)
    return code


if __name__ == "__main__":
    sys.exit(main())
