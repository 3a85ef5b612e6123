import random

import pytest

from kplus.engine import (
    BudgetExceeded,
    CyclicProof,
    Engine,
    EngineError,
    ProofNode,
    Provable,
    Refutable,
    _OracleAdapter,
    check_cyclic,
    check_refutation,
    decide,
    proof_from_json,
    proof_to_json,
    refutation_from_json,
    refutation_to_json,
    saturate,
)
from kplus.kripke import eval_formula, model_from_refutation, sequent_formula
from kplus.syntax import (
    BoxPlus,
    Var,
    focused,
    parse,
    parse_sequent,
    render,
    sequent,
)

from test_syntax import random_modal


WORKED_EXAMPLE = "p0, []p0, [+](p0 -> []p0) |- [+]p0"


def as_sequent(text):
    seq = parse_sequent(text)
    return sequent(seq.ante, seq.succ)


def test_worked_example_provable_with_progress_cycle():
    verdict = decide(as_sequent(WORKED_EXAMPLE))
    assert isinstance(verdict, Provable)
    proof = verdict.proof
    assert check_cyclic(proof, [])
    assert proof.backlinks
    # some cycle uses only imp-left and boxplus applications, one focus
    found = False
    for leaf, target in proof.backlinks.items():
        path = [leaf]
        parent = {c: i for i, n in enumerate(proof.nodes) for c in n.children}
        while path[-1] != target:
            path.append(parent[path[-1]])
        rules = {proof.nodes[i].rule for i in path} - {None}
        foci = {proof.nodes[i].seq.focus for i in path}
        if rules <= {"imp-left", "boxplus"} and len(foci) == 1:
            found = True
    assert found


def test_axiom_schema_decisions():
    a = Var(0)
    verdict = decide(sequent([], [parse("[]p0 -> [+]p0")]))
    assert isinstance(verdict, Refutable)
    verdict = decide(sequent([], [parse("[+]p0 -> []p0")]))
    assert isinstance(verdict, Provable)


def test_refutable_with_verified_countermodel():
    for text in ["|- []p0 -> [+]p0", "|- [+]p0 -> p0", "|- []p0 -> p0"]:
        seq = as_sequent(text)
        verdict = decide(seq)
        assert isinstance(verdict, Refutable), text
        model, world = model_from_refutation(verdict.refutation)
        assert not eval_formula(model, world, sequent_formula(seq.ante, seq.succ))


def test_check_cyclic_single_axiom():
    proof = CyclicProof(
        [ProofNode(focused([Var(0)], [Var(0)]), "ax-var", Var(0), ())], 0, {}
    )
    assert check_cyclic(proof, [])


def test_check_cyclic_rejects_retargeted_backlink():
    verdict = decide(as_sequent(WORKED_EXAMPLE))
    proof = verdict.proof
    leaf, target = next(iter(proof.backlinks.items()))
    # retarget so the cycle crosses no boxplus right premise
    bad = CyclicProof(list(proof.nodes), proof.root, {leaf: leaf - 1})
    diags = []
    assert not check_cyclic(bad, diags)
    assert diags


def test_check_cyclic_rejects_tampered_rule():
    verdict = decide(as_sequent(WORKED_EXAMPLE))
    proof = verdict.proof
    nodes = list(proof.nodes)
    node = nodes[0]
    nodes[0] = ProofNode(node.seq, "box", node.principal, node.children)
    assert not check_cyclic(CyclicProof(nodes, proof.root, dict(proof.backlinks)), [])


def test_saturate_examples():
    engine = Engine()
    oracle = _OracleAdapter(engine)
    tree = saturate(sequent([Var(0)], [Var(1)]), oracle)
    assert len(tree.nodes) == 1 and tree.nodes[0].rule is None

    tree = saturate(as_sequent("p0 -> p1 |- p1"), oracle)
    root = tree.nodes[tree.root]
    assert root.rule == "imp-left-2"
    assert root.certs and check_cyclic(root.certs[0][1], [])

    with pytest.raises(EngineError):
        saturate(as_sequent("|- p0 -> p0"), oracle)


def test_saturation_leaves_have_no_implications():
    engine = Engine()
    oracle = _OracleAdapter(engine)
    rng = random.Random(23)
    from kplus.syntax import Imp as _Imp

    count = 0
    for _ in range(60):
        f = random_modal(rng, rng.randrange(2, 8))
        seq = sequent([], [f])
        if engine.provable(seq):
            continue
        count += 1
        tree = saturate(seq, oracle)
        for node in tree.nodes:
            assert not engine.provable(node.seq)
            if node.rule is None:
                assert not any(
                    isinstance(g, _Imp) for g in node.seq.ante + node.seq.succ
                )
    assert count > 10


def test_check_refutation_engine_output_and_tampering():
    engine = Engine()
    oracle = _OracleAdapter(engine)
    seq = as_sequent("|- []p0 -> [+]p0")
    verdict = engine.decide(seq)
    tree = verdict.refutation
    assert check_refutation(tree, oracle, [])
    # swap a node's sequent for a provable one
    from kplus.engine import RNode

    nodes = list(tree.nodes)
    nodes[0] = RNode(as_sequent("p0 |- p0"), nodes[0].rule, nodes[0].principal,
                     nodes[0].children, nodes[0].certs)
    from kplus.engine import RefutationTree

    assert not check_refutation(RefutationTree(nodes, tree.root), oracle, [])


def test_check_refutation_lemma8_violation_detected():
    engine = Engine()
    oracle = _OracleAdapter(engine)
    verdict = engine.decide(as_sequent("|- [+]p0"))
    tree = verdict.refutation
    assert check_refutation(tree, oracle, [])
    # drop the crossbox premise of the form Theta |- p0
    from kplus.engine import RNode, RefutationTree

    wanted = sequent([], [Var(0)])
    nodes = []
    for node in tree.nodes:
        children = tuple(
            c for c in node.children if tree.nodes[c].seq != wanted
        )
        if node.rule == "crossbox" and len(children) != len(node.children):
            node = RNode(node.seq, node.rule, node.principal, children, node.certs)
        nodes.append(node)
    diags = []
    assert not check_refutation(RefutationTree(nodes, tree.root), oracle, diags)


def test_budget_exceeded_is_distinct():
    with pytest.raises(BudgetExceeded):
        decide(as_sequent(WORKED_EXAMPLE), budget=3)


def test_decide_deterministic():
    seq = as_sequent(WORKED_EXAMPLE)
    one = decide(seq)
    two = decide(seq)
    assert proof_to_json(one.proof) == proof_to_json(two.proof)


def test_weakening_soundness_on_corpus():
    rng = random.Random(31)
    engine = Engine()
    checked = 0
    for _ in range(80):
        f = random_modal(rng, rng.randrange(2, 8))
        seq = sequent([], [f])
        if not engine.provable(seq):
            continue
        checked += 1
        assert engine.provable(sequent([Var(1)], [f]))
        assert engine.provable(sequent([], [f, Var(0)]))
        assert engine.provable(sequent([BoxPlus(Var(0))], [f]))
    assert checked > 5


def test_proof_json_round_trip():
    verdict = decide(as_sequent(WORKED_EXAMPLE))
    data = proof_to_json(verdict.proof)
    back = proof_from_json(data)
    assert proof_to_json(back) == data
    assert check_cyclic(back, [])


def test_refutation_json_round_trip():
    engine = Engine()
    verdict = engine.decide(as_sequent("|- []p0 -> [+]p0"))
    data = refutation_to_json(verdict.refutation)
    back = refutation_from_json(data)
    assert refutation_to_json(back) == data
    assert check_refutation(back, _OracleAdapter(engine), [])
