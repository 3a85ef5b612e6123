import itertools
import random

import pytest

from kplus.jlogic import (
    JLogicError,
    JProof,
    JSubstitution,
    NotAConsequence,
    check_proof,
    conj_intro_proof,
    cs_axiom,
    cs_injective,
    fresh_constant,
    instance_formula,
    internalize,
    internalize_axiom,
    is_consequence,
    jproof_from_json,
    jproof_to_json,
    lift,
    induction_term,
    match_axiom,
    prop_mp,
    prop_proof,
    proof_cs,
    rename_constants,
    substitute_proof,
)
from kplus.syntax import (
    BOT,
    App1,
    App2,
    Bracket,
    BracketTc,
    Head,
    Imp,
    Ind,
    JConst,
    PVar1,
    Tail,
    Var,
    Var1,
    Var2,
    big_conj,
    conj,
    disj,
    neg,
    parse,
    render,
    term_is_ground,
)

from test_syntax import random_jformula


def test_match_axiom_examples():
    inst = match_axiom(parse("[x0](p0 -> p1) -> ([x1]p0 -> [(x0 . x1)]p1)"))
    assert inst is not None and inst.schema == "iv"
    inst = match_axiom(parse("[y0]tc p0 -> [head(y0)]p0"))
    assert inst is not None and inst.schema == "vii"
    assert match_axiom(parse("p0 -> p0")) is None


def test_match_axiom_all_schemas():
    a, b, c = Var(0), Var(1), Var(2)
    h, w = Var1(0), Var1(1)
    t, s = Var2(0), Var2(1)
    shapes = {
        "i": Imp(a, Imp(b, a)),
        "ii": Imp(Imp(a, Imp(b, c)), Imp(Imp(a, b), Imp(a, c))),
        "iii": Imp(neg(neg(a)), a),
        "iv": Imp(Bracket(h, Imp(a, b)), Imp(Bracket(w, a), Bracket(App1(h, w), b))),
        "v": Imp(disj(Bracket(h, a), Bracket(w, a)), Bracket(App1(h, w), a)),
        "vi": Imp(BracketTc(t, Imp(a, b)), Imp(BracketTc(s, a), BracketTc(App2(t, s), b))),
        "vii": Imp(BracketTc(s, a), Bracket(Head(s), a)),
        "viii": Imp(BracketTc(s, a), Bracket(Tail(s), BracketTc(s, a))),
        "ix": Imp(conj(Bracket(w, a), BracketTc(s, Imp(a, Bracket(w, a)))),
                  BracketTc(Ind(w, s), a)),
        "x": Imp(disj(BracketTc(t, a), BracketTc(s, a)), BracketTc(App2(t, s), a)),
    }
    from kplus.syntax import Sum1, Sum2

    shapes["v"] = Imp(disj(Bracket(h, a), Bracket(w, a)), Bracket(Sum1(h, w), a))
    shapes["x"] = Imp(disj(BracketTc(t, a), BracketTc(s, a)), BracketTc(Sum2(t, s), a))
    for schema, f in shapes.items():
        inst = match_axiom(f)
        assert inst is not None and inst.schema == schema, schema
        assert instance_formula(inst) == f


def test_check_proof_hilbert_identity():
    p = prop_proof(parse("p0 -> p0"))
    report = check_proof(p)
    assert report.ok and report.cs == frozenset() and report.injective


def test_check_proof_noninjective_flagged():
    a1 = cs_axiom(0, instance_formula(match_axiom(Imp(Var(0), Imp(Var(1), Var(0))))))
    a2 = cs_axiom(0, instance_formula(match_axiom(Imp(Var(1), Imp(Var(0), Var(1))))))
    proof = JProof(
        [("ax", a1), ("ax", a2)],
        [instance_formula(a1), instance_formula(a2)],
    )
    report = check_proof(proof)
    assert report.ok and not report.injective


def test_check_proof_rejects_bad_mp():
    p = prop_proof(parse("p0 -> p0"))
    broken = JProof(p.steps + [("mp", 0, 0)], p.formulas + [Var(0)])
    assert not check_proof(broken).ok


def test_check_proof_allowed_specification():
    inst = match_axiom(Imp(Var(0), Imp(Var(1), Var(0))))
    cs1, s, proof = internalize_axiom(frozenset(), inst)
    assert check_proof(proof, allowed=cs1).ok
    assert not check_proof(proof, allowed=frozenset()).ok


def test_prop_proof_examples():
    assert check_proof(prop_proof(parse("((p0 -> false) -> false) -> p0"))).ok
    goal = Imp(conj(Var(0), Var(1)), Var(0))
    assert check_proof(prop_proof(goal)).ok
    with pytest.raises(NotAConsequence):
        prop_proof(Var(0))


def test_prop_proof_with_hypotheses_chains():
    goal = Var(2)
    hyps = [Imp(Var(0), Var(2)), Imp(Var(1), Var(2)), disj(Var(0), Var(1))]
    p = prop_proof(goal, hyps)
    assert p.conclusion == Imp(hyps[0], Imp(hyps[1], Imp(hyps[2], goal)))
    assert check_proof(p).ok


def test_prop_proof_exhaustive_three_atoms():
    # completeness against the truth table on all shapes over three atoms
    rng = random.Random(71)
    atoms = [Var(0), Var(1), BOT]

    def rf(depth):
        if depth == 0 or rng.random() < 0.35:
            return rng.choice(atoms)
        return Imp(rf(depth - 1), rf(depth - 1))

    for _ in range(400):
        goal = rf(3)
        expected = is_consequence(goal)
        try:
            proof = prop_proof(goal)
            assert check_proof(proof).ok and proof.conclusion == goal
            built = True
        except NotAConsequence:
            built = False
        assert built == expected, render(goal)


def test_prop_mp_and_conj_intro():
    x, y = parse("[x0]p0"), parse("[y0]tc p1")
    pair = conj_intro_proof(x, y)
    assert check_proof(pair).ok
    assert pair.conclusion == Imp(x, Imp(y, conj(x, y)))


def test_substitute_proof_examples():
    p = prop_proof(Imp(Bracket(Var1(0), Var(0)), Bracket(Var1(0), Var(0))))
    sigma = JSubstitution({Var1(0): Head(Var2(0))})
    q = substitute_proof(p, sigma)
    assert q.conclusion == Imp(
        Bracket(Head(Var2(0)), Var(0)), Bracket(Head(Var2(0)), Var(0))
    )
    assert check_proof(q).ok
    ident = substitute_proof(p, JSubstitution({}))
    assert ident.conclusion == p.conclusion


def test_substitution_preserves_injectivity():
    inst = match_axiom(Imp(Bracket(Var1(0), Var(0)), Imp(Var(1), Bracket(Var1(0), Var(0)))))
    cs1, s, proof = internalize_axiom(frozenset(), inst)
    sigma = JSubstitution({Var1(0): App1(Var1(1), Var1(2))})
    q = substitute_proof(proof, sigma)
    report = check_proof(q)
    assert report.ok and report.injective


def test_substitution_sort_mismatch():
    with pytest.raises(JLogicError):
        JSubstitution({Var1(0): Var2(0)})


def test_internalize_axiom_base_case():
    inst = match_axiom(Imp(Var(0), Imp(Var(1), Var(0))))
    cs1, s, proof = internalize_axiom(frozenset(), inst)
    assert s == JConst(0)
    assert cs1 == frozenset({(0, instance_formula(inst))})
    assert proof.conclusion == BracketTc(JConst(0), instance_formula(inst))
    assert check_proof(proof).ok


def test_internalize_axiom_constant_case():
    inst = match_axiom(Imp(Var(0), Imp(Var(1), Var(0))))
    cs1, _, _ = internalize_axiom(frozenset(), inst)
    wrapped = instance_formula(inst)
    cs2, s, proof = internalize_axiom(cs1, cs_axiom(0, wrapped))
    assert s == Ind(Tail(JConst(0)), JConst(1))
    assert proof.conclusion == BracketTc(s, BracketTc(JConst(0), wrapped))
    report = check_proof(proof)
    assert report.ok and report.injective
    assert cs_injective(cs2)


def test_internalize_proof():
    p = prop_proof(Imp(Var(0), Var(0)))
    cs, s, proof = internalize(p)
    report = check_proof(proof)
    assert report.ok and report.injective
    assert term_is_ground(s)
    assert proof.conclusion == BracketTc(s, p.conclusion)
    # single axiom step reduces to axiom internalization
    single = JProof(
        [("ax", match_axiom(Imp(Var(0), Imp(Var(1), Var(0)))))],
        [Imp(Var(0), Imp(Var(1), Var(0)))],
    )
    cs2, s2, proof2 = internalize(single)
    assert s2 == JConst(0) and check_proof(proof2).ok


def test_lift_degenerate_and_small_shapes():
    p = prop_proof(Imp(Var(0), Var(0)))
    cs, h, proof = lift(p, [], [], [], p.conclusion, [])
    assert isinstance(h, Head)
    assert proof.conclusion == Bracket(h, p.conclusion)
    assert check_proof(proof).ok

    a1 = Var(0)
    inp = prop_proof(Imp(big_conj([a1]), a1))
    cs, h, proof = lift(inp, [a1], [], [], a1, [Var1(5)])
    assert h == App1(Head(h.fn.arg) if False else h.fn, Var1(5))  # left app on z1
    assert isinstance(h, App1) and h.arg == Var1(5) and isinstance(h.fn, Head)
    assert check_proof(proof).ok

    b1 = Var(1)
    inp = prop_proof(Imp(big_conj([b1, BracketTc(Var2(0), b1)]), b1))
    cs, h, proof = lift(inp, [], [b1], [Var2(0)], b1, [])
    assert h == App1(App1(Head(h.fn.fn.arg), Head(Var2(0))), Tail(Var2(0)))
    assert check_proof(proof).ok


def test_lift_shape_mismatch():
    p = prop_proof(Imp(Var(0), Var(0)))
    with pytest.raises(JLogicError):
        lift(p, [Var(1)], [], [], Var(0), [Var1(0)])


def test_induction_term_literal_shape():
    a = Var(0)
    b = conj(Var(1), neg(Var(1)))  # unsatisfiable so the premise is provable
    inp = prop_proof(Imp(b, Bracket(Var1(0), conj(a, b))))
    cs, t, proof = induction_term(inp)
    assert isinstance(t, App2) and isinstance(t.arg, Ind)
    assert t.arg.w == Var1(0)
    assert proof.conclusion == Imp(b, BracketTc(t, a))
    report = check_proof(proof)
    assert report.ok and report.injective


def test_induction_term_shape_mismatch():
    with pytest.raises(JLogicError):
        induction_term(prop_proof(Imp(Var(0), Var(0))))


def test_rename_constants():
    inst = match_axiom(Imp(Var(0), Imp(Var(1), Var(0))))
    cs1, s, proof = internalize_axiom(frozenset(), inst)
    renamed = rename_constants(proof, {0: 5})
    assert renamed.conclusion == BracketTc(JConst(5), instance_formula(inst))
    assert check_proof(renamed).ok
    assert rename_constants(proof, {}).conclusion == proof.conclusion
    with pytest.raises(JLogicError):
        rename_constants(
            JProof(
                [("ax", cs_axiom(0, instance_formula(inst))),
                 ("ax", cs_axiom(1, instance_formula(inst)))],
                [BracketTc(JConst(0), instance_formula(inst)),
                 BracketTc(JConst(1), instance_formula(inst))],
            ),
            {0: 1, 1: 1},
        )


def test_rename_apart_makes_union_injective():
    inst = match_axiom(Imp(Var(0), Imp(Var(1), Var(0))))
    other = match_axiom(Imp(Var(1), Imp(Var(0), Var(1))))
    _, _, p1 = internalize_axiom(frozenset(), inst)
    _, _, p2 = internalize_axiom(frozenset(), other)
    p2 = rename_constants(p2, {0: 1})
    union = proof_cs(p1) | proof_cs(p2)
    assert cs_injective(union)


def test_fresh_constant():
    assert fresh_constant(frozenset()) == 0
    assert fresh_constant(frozenset({(0, Var(0)), (1, Var(0))})) == 2


def test_jproof_json_round_trip():
    inst = match_axiom(Imp(Var(0), Imp(Var(1), Var(0))))
    _, _, proof = internalize_axiom(frozenset(), cs_axiom(0, instance_formula(inst)))
    data = jproof_to_json(proof)
    back = jproof_from_json(data)
    assert back.formulas == proof.formulas
    assert check_proof(back).ok
