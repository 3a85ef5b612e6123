import random

import pytest

from kplus.syntax import (
    BOT,
    Bot,
    Box,
    BoxPlus,
    Bracket,
    BracketTc,
    Head,
    Imp,
    LabelAllocator,
    ParseError,
    Var,
    Var1,
    Var2,
    PVar1,
    big_conj,
    big_disj,
    dedup,
    erase,
    forgetful,
    formula_key,
    is_annotated,
    mset,
    parity_ok,
    parse,
    parse_modal,
    parse_sequent,
    parse_term,
    proper_annotate,
    properly_annotated,
    render,
    sequent,
    size,
    subformulas,
)


def test_size_defining_clauses():
    assert size(BOT) == 1
    assert size(parse("p0 -> false")) == 3
    assert size(parse("[+]p0 -> []p0")) == 5


def test_size_strictly_monotone_on_subformulas():
    rng = random.Random(5)
    for _ in range(200):
        f = random_modal(rng, rng.randrange(2, 9))
        for sub in subformulas(f):
            if sub is not f:
                assert size(sub) < size(f)


def test_forgetful_clauses():
    assert forgetful(Var(0)) == Var(0)
    assert forgetful(parse("[x0]p0")) == parse("[]p0")
    assert forgetful(parse("[y0]tc p0 -> [head(y0)]p0")) == parse("[+]p0 -> []p0")


def test_erase_drops_labels():
    assert erase(parse("[+]_0 p0")) == parse("[+]p0")
    assert erase(parse("[]_1 (p0 -> []_2 p1)")) == parse("[](p0 -> []p1)")
    assert erase(Var(0)) == Var(0)


def test_proper_annotate_examples():
    out = proper_annotate(parse("[+]p0 -> []p0"), True)
    assert out == Imp(BoxPlus(Var(0), 0), Box(Var(0), 1))
    assert proper_annotate(Var(0), True) == Var(0)
    out = proper_annotate(parse("[]p0 -> []p0"), True)
    assert isinstance(out.lhs, Box) and isinstance(out.rhs, Box)
    assert out.lhs.label != out.rhs.label


def test_proper_annotate_invariants():
    rng = random.Random(11)
    for _ in range(200):
        f = random_modal(rng, rng.randrange(1, 9))
        positive = rng.random() < 0.5
        out = proper_annotate(f, positive, LabelAllocator())
        assert erase(out) == f
        assert parity_ok(out, positive)
        assert properly_annotated(out, positive)


def test_dedup():
    p, q = Var(0), Var(1)
    f = BoxPlus(Imp(p, q))
    assert dedup(mset([p, p, p, q, f, f])) == mset([p, q, f])
    assert dedup(()) == ()
    assert dedup(mset([p])) == (p,)


def test_multiset_canonical_order_is_total():
    rng = random.Random(3)
    pool = [random_modal(rng, rng.randrange(1, 7)) for _ in range(30)]
    keys = [formula_key(f) for f in pool]
    assert sorted(keys) == sorted(keys, reverse=True)[::-1]
    a = mset(pool)
    b = mset(reversed(pool))
    assert a == b


def test_parse_examples():
    f = parse("[+]p0 -> []p0")
    assert f == Imp(BoxPlus(Var(0)), Box(Var(0)))
    g = parse("[y0]tc p0")
    assert g == BracketTc(Var2(0), Var(0))
    with pytest.raises(ParseError):
        parse("p0 ->")
    with pytest.raises(ParseError):
        parse("[]p")
    with pytest.raises(ParseError):
        parse_modal("[x0]p0")


def test_parse_terms():
    assert parse_term("x1_2") == PVar1(1, 2)
    assert parse_term("head(y0)") == Head(Var2(0))
    assert parse_term("(x0 . x1)") == parse_term("( x0 . x1 )")
    with pytest.raises(ParseError):
        parse_term("head(x0)")  # head needs the second sort
    with pytest.raises(ParseError):
        parse_term("(x0 . y0)")  # mixed application


def test_parse_sequent_and_focus():
    seq = parse_sequent("p0, []p0 |- [+]p0")
    assert len(seq.ante) == 2 and len(seq.succ) == 1
    fs = parse_sequent("p0 |- [+]_1 p0 @ [+]_1 p0")
    assert fs.focus == BoxPlus(Var(0), 1)
    fs = parse_sequent("|- p0 @ *")
    assert fs.focus is None


def random_modal(rng, budget, nvars=2):
    if budget <= 2:
        return rng.choice([Var(rng.randrange(nvars)), BOT])
    kind = rng.choice(["imp", "imp", "box", "boxplus", "var"])
    if kind == "var":
        return Var(rng.randrange(nvars))
    if kind == "imp":
        left = rng.randrange(1, budget - 1)
        return Imp(random_modal(rng, left, nvars), random_modal(rng, budget - 1 - left, nvars))
    if kind == "box":
        return Box(random_modal(rng, budget - 1, nvars))
    return BoxPlus(random_modal(rng, budget - 1, nvars))


def random_jformula(rng, depth):
    if depth == 0:
        return rng.choice([Var(rng.randrange(3)), BOT])
    kind = rng.choice(["imp", "bracket", "brackettc", "atom"])
    if kind == "atom":
        return Var(rng.randrange(3))
    if kind == "imp":
        return Imp(random_jformula(rng, depth - 1), random_jformula(rng, depth - 1))
    if kind == "bracket":
        return Bracket(random_term1(rng, depth - 1), random_jformula(rng, depth - 1))
    return BracketTc(random_term2(rng, depth - 1), random_jformula(rng, depth - 1))


def random_term1(rng, depth):
    from kplus.syntax import App1, Sum1, Tail

    if depth == 0:
        return rng.choice([Var1(rng.randrange(3)), PVar1(1, rng.randrange(2))])
    kind = rng.choice(["var", "app", "head", "tail", "sum"])
    if kind == "var":
        return Var1(rng.randrange(3))
    if kind == "app":
        return App1(random_term1(rng, depth - 1), random_term1(rng, depth - 1))
    if kind == "head":
        return Head(random_term2(rng, depth - 1))
    if kind == "tail":
        return Tail(random_term2(rng, depth - 1))
    return Sum1(random_term1(rng, depth - 1), random_term1(rng, depth - 1))


def random_term2(rng, depth):
    from kplus.syntax import App2, Ind, JConst, PVar2, Sum2

    if depth == 0:
        return rng.choice([Var2(rng.randrange(3)), JConst(rng.randrange(3)), PVar2(1, 0)])
    kind = rng.choice(["var", "const", "app", "ind", "sum"])
    if kind == "var":
        return Var2(rng.randrange(3))
    if kind == "const":
        return JConst(rng.randrange(3))
    if kind == "app":
        return App2(random_term2(rng, depth - 1), random_term2(rng, depth - 1))
    if kind == "ind":
        return Ind(random_term1(rng, depth - 1), random_term2(rng, depth - 1))
    return Sum2(random_term2(rng, depth - 1), random_term2(rng, depth - 1))


def test_render_parse_round_trip_modal():
    rng = random.Random(42)
    for _ in range(300):
        f = random_modal(rng, rng.randrange(1, 9))
        assert parse(render(f)) == f
        a = proper_annotate(f, True)
        assert parse(render(a)) == a


def test_render_parse_round_trip_justification():
    rng = random.Random(43)
    for _ in range(300):
        f = random_jformula(rng, rng.randrange(0, 4))
        assert parse(render(f)) == f
        t = random_term2(rng, rng.randrange(0, 4))
        assert parse_term(render(t)) == t


def test_render_parse_round_trip_sequents():
    rng = random.Random(44)
    for _ in range(100):
        seq = sequent(
            [random_modal(rng, rng.randrange(1, 6)) for _ in range(rng.randrange(0, 3))],
            [random_modal(rng, rng.randrange(1, 6)) for _ in range(rng.randrange(0, 3))],
        )
        assert parse_sequent(render(seq)) == seq


def test_big_connectives():
    assert big_conj([]) == Imp(BOT, BOT)
    assert big_disj([]) == BOT
    p = Var(0)
    assert big_conj([p]) == p
    assert big_disj([p]) == p


def test_is_annotated():
    assert is_annotated(parse("[]_1 p0"))
    assert not is_annotated(parse("[]p0"))
    assert is_annotated(Var(0))
