import pytest

from kplus.annotate import (
    AnnotationError,
    annotate,
    is_bounding,
    prepare,
    prepared_from_json,
    prepared_to_json,
)
from kplus.engine import CyclicProof, ProofNode, check_cyclic, decide, proof_to_json
from kplus.syntax import (
    Box,
    BoxPlus,
    Var,
    erase,
    focused,
    is_annotated,
    parse,
    parse_sequent,
    sequent,
    sequent_properly_annotated,
)


def proof_of(text):
    seq = parse_sequent(text)
    verdict = decide(sequent(seq.ante, seq.succ))
    return verdict.proof


WORKED_EXAMPLE = "p0, []p0, [+](p0 -> []p0) |- [+]p0"


def test_annotate_worked_example():
    ap = annotate(proof_of(WORKED_EXAMPLE))
    assert check_cyclic(ap, [])
    root = ap.nodes[ap.root].seq
    assert sequent_properly_annotated(root.ante, root.succ)
    assert all(
        is_annotated(f) for n in ap.nodes for f in n.seq.ante + n.seq.succ
    )
    # the unique cycle repeats one annotated sequent with a boxplus focus
    assert len(ap.backlinks) == 1
    leaf, target = next(iter(ap.backlinks.items()))
    assert ap.nodes[leaf].seq == ap.nodes[target].seq
    assert isinstance(ap.nodes[leaf].seq.focus, BoxPlus)


def test_annotate_single_axiom():
    proof = CyclicProof(
        [ProofNode(focused([Var(0)], [Var(0)]), "ax-var", Var(0), ())], 0, {}
    )
    out = annotate(proof)
    assert len(out.nodes) == 1
    assert out.nodes[0].seq == proof.nodes[0].seq  # nothing modal to label


def test_annotate_parity_policy():
    ap = annotate(proof_of("|- [+]p0 -> []p0"))
    root = ap.nodes[ap.root].seq
    f = root.succ[0]
    assert f.lhs.label % 2 == 0  # negative boxplus even
    assert f.rhs.label % 2 == 1  # positive box odd


def test_annotate_deterministic_and_erases_back():
    plain = proof_of(WORKED_EXAMPLE)
    one = annotate(plain)
    two = annotate(plain)
    assert proof_to_json(one) == proof_to_json(two)
    root = one.nodes[one.root].seq
    plain_root = plain.nodes[plain.root].seq
    assert tuple(sorted(map(repr, map(erase, root.ante)))) == tuple(
        sorted(map(repr, plain_root.ante))
    )


def test_annotate_rejects_invalid_input():
    proof = CyclicProof(
        [ProofNode(focused([Var(0)], [Var(1)]), "ax-var", Var(0), ())], 0, {}
    )
    with pytest.raises(AnnotationError):
        annotate(proof)


def test_prepare_worked_example_single_class():
    prepared, g = prepare(annotate(proof_of(WORKED_EXAMPLE)))
    plus_nodes = [
        i for i, n in enumerate(prepared.proof.nodes) if n.rule == "boxplus"
    ]
    assert len(plus_nodes) == 2
    # both applications sit on one focus cycle: same class label
    assert {prepared.occ[i] for i in plus_nodes} == {0}
    label = prepared.proof.nodes[plus_nodes[0]].principal.label
    assert g == {label: 1}


def test_prepare_counts_box_occurrences():
    prepared, g = prepare(annotate(proof_of("|- [+]p0 -> []p0")))
    box_nodes = [i for i, n in enumerate(prepared.proof.nodes) if n.rule == "box"]
    assert len(box_nodes) == 1
    m = prepared.proof.nodes[box_nodes[0]].principal.label
    assert prepared.occ[box_nodes[0]] == 0
    assert g[m - 1] == 1


def test_prepare_no_modal_rules():
    prepared, g = prepare(annotate(proof_of("|- p0 -> p0")))
    assert prepared.occ == {}
    assert g == {}


def test_bounding_function_minimal():
    prepared, g = prepare(annotate(proof_of(WORKED_EXAMPLE)))
    assert is_bounding(prepared, g)
    for key in g:
        smaller = dict(g)
        smaller[key] -= 1
        assert not is_bounding(prepared, smaller)


def test_prepared_json_round_trip():
    prepared, g = prepare(annotate(proof_of(WORKED_EXAMPLE)))
    data = prepared_to_json(prepared, g)
    back, g2 = prepared_from_json(data)
    assert g2 == g
    assert back.occ == prepared.occ
    assert proof_to_json(back.proof) == proof_to_json(prepared.proof)
