"""Grammar, parsing, printing and measurement of all formula and term sorts.

Two formula languages share the propositional layer (``Var``, ``Bot``,
``Imp``):

* modal formulas add ``Box`` / ``BoxPlus``, whose occurrences may carry an
  optional natural-number annotation label;
* justification formulas add ``Bracket`` (first-sort term) and ``BracketTc``
  (second-sort term).

Justification terms come in two sorts.  First sort: variables ``x_i``,
provisional variables ``x_{m,i}``, application, ``head``/``tail`` of a
second-sort term, and sums.  Second sort: variables ``y_i``, provisional
variables ``y_{n,j}``, constants ``c_i``, application, ``ind`` and sums.

The concrete ASCII grammar (the abstract syntax leaves it open):

    formula   p0, p1, ...   false   A -> B (right assoc)
              []A  [+]A  []_3 A  [+]_2 A  [w]A  [s]tc A
    term      x0  x1_2  y0  y0_1  c0  head(s)  tail(s)  ind(w,s)
              (t . s)  (t + s)
    sequent   G1, G2 |- D1, D2   with focus suffix  @ *  or  @ [+]_1 p0
"""

from __future__ import annotations

from dataclasses import dataclass, fields
from functools import cache


class ParseError(Exception):
    """Malformed input text; carries the offset where parsing failed."""

    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos


class SortError(Exception):
    """A justification term appeared at a position of the wrong sort."""


# ---------------------------------------------------------------------------
# AST base: immutable nodes with cached hash and fast structural equality.


_POOL: dict = {}


class Ast:
    """Interned immutable syntax nodes: equal positional constructions return
    the same object, so equality is usually an identity check and hashes are
    computed once."""

    def __new__(cls, *args, **kwargs):
        if kwargs:
            return super().__new__(cls)
        key = (cls, args)
        hit = _POOL.get(key)
        if hit is None:
            hit = super().__new__(cls)
            _POOL[key] = hit
        return hit

    @classmethod
    def _names(cls) -> tuple[str, ...]:
        names = cls.__dict__.get("_field_names")
        if names is None:
            names = tuple(f.name for f in fields(cls))
            cls._field_names = names
        return names

    def __post_init__(self):
        if "_hash" in self.__dict__:  # pooled instance being re-initialized
            return
        parts = tuple(getattr(self, n) for n in type(self)._names())
        object.__setattr__(self, "_hash", hash((type(self).__name__, parts)))

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        if self is other:
            return True
        if type(other) is not type(self) or self._hash != other._hash:
            return False
        return all(
            getattr(self, n) == getattr(other, n) for n in type(self)._names()
        )

    def __ne__(self, other):
        return not self.__eq__(other)

    def __repr__(self):
        return render(self)


# --- formulas (modal and justification share Var/Bot/Imp) ------------------


class Formula(Ast):
    pass


@dataclass(frozen=True, eq=False, repr=False)
class Var(Formula):
    index: int


@dataclass(frozen=True, eq=False, repr=False)
class Bot(Formula):
    pass


@dataclass(frozen=True, eq=False, repr=False)
class Imp(Formula):
    lhs: Formula
    rhs: Formula


@dataclass(frozen=True, eq=False, repr=False)
class Box(Formula):
    body: Formula
    label: int | None = None


@dataclass(frozen=True, eq=False, repr=False)
class BoxPlus(Formula):
    body: Formula
    label: int | None = None


@dataclass(frozen=True, eq=False, repr=False)
class Bracket(Formula):
    term: "JTerm"
    body: Formula


@dataclass(frozen=True, eq=False, repr=False)
class BracketTc(Formula):
    term: "JTerm"
    body: Formula


BOT = Bot()
TOP = Imp(BOT, BOT)


def neg(a: Formula) -> Formula:
    return Imp(a, BOT)


def conj(a: Formula, b: Formula) -> Formula:
    return neg(Imp(a, neg(b)))


def disj(a: Formula, b: Formula) -> Formula:
    return Imp(neg(a), b)


def big_conj(items) -> Formula:
    """Right-nested conjunction; empty chain reads as top."""
    items = list(items)
    if not items:
        return TOP
    out = items[-1]
    for a in reversed(items[:-1]):
        out = conj(a, out)
    return out


def big_disj(items) -> Formula:
    """Right-nested disjunction; empty chain reads as bottom."""
    items = list(items)
    if not items:
        return BOT
    out = items[-1]
    for a in reversed(items[:-1]):
        out = disj(a, out)
    return out


# --- justification terms ----------------------------------------------------


class JTerm(Ast):
    pass


@dataclass(frozen=True, eq=False, repr=False)
class Var1(JTerm):
    index: int


@dataclass(frozen=True, eq=False, repr=False)
class PVar1(JTerm):
    m: int
    i: int


@dataclass(frozen=True, eq=False, repr=False)
class App1(JTerm):
    fn: JTerm
    arg: JTerm


@dataclass(frozen=True, eq=False, repr=False)
class Head(JTerm):
    arg: JTerm


@dataclass(frozen=True, eq=False, repr=False)
class Tail(JTerm):
    arg: JTerm


@dataclass(frozen=True, eq=False, repr=False)
class Sum1(JTerm):
    lhs: JTerm
    rhs: JTerm


@dataclass(frozen=True, eq=False, repr=False)
class Var2(JTerm):
    index: int


@dataclass(frozen=True, eq=False, repr=False)
class PVar2(JTerm):
    n: int
    j: int


@dataclass(frozen=True, eq=False, repr=False)
class JConst(JTerm):
    index: int


@dataclass(frozen=True, eq=False, repr=False)
class App2(JTerm):
    fn: JTerm
    arg: JTerm


@dataclass(frozen=True, eq=False, repr=False)
class Ind(JTerm):
    w: JTerm
    s: JTerm


@dataclass(frozen=True, eq=False, repr=False)
class Sum2(JTerm):
    lhs: JTerm
    rhs: JTerm


_SORT1 = (Var1, PVar1, App1, Head, Tail, Sum1)
_SORT2 = (Var2, PVar2, JConst, App2, Ind, Sum2)


def is_term1(t) -> bool:
    return isinstance(t, _SORT1)


def is_term2(t) -> bool:
    return isinstance(t, _SORT2)


@cache
def check_term(t: JTerm) -> None:
    """Validate sort discipline of all inner positions; raises SortError."""
    match t:
        case Var1() | PVar1() | Var2() | PVar2() | JConst():
            pass
        case App1(fn, arg) | Sum1(fn, arg):
            if not (is_term1(fn) and is_term1(arg)):
                raise SortError(f"first-sort operation over wrong sorts: {t!r}")
            check_term(fn)
            check_term(arg)
        case Head(arg) | Tail(arg):
            if not is_term2(arg):
                raise SortError(f"head/tail needs a second-sort term: {t!r}")
            check_term(arg)
        case App2(fn, arg) | Sum2(fn, arg):
            if not (is_term2(fn) and is_term2(arg)):
                raise SortError(f"second-sort operation over wrong sorts: {t!r}")
            check_term(fn)
            check_term(arg)
        case Ind(w, s):
            if not (is_term1(w) and is_term2(s)):
                raise SortError(f"ind needs (first, second) sorts: {t!r}")
            check_term(w)
            check_term(s)
        case _:
            raise SortError(f"not a justification term: {t!r}")


@cache
def term_is_ground(t: JTerm) -> bool:
    """No variables of either sort (provisional ones included)."""
    match t:
        case Var1() | PVar1() | Var2() | PVar2():
            return False
        case JConst():
            return True
        case App1(a, b) | Sum1(a, b) | App2(a, b) | Sum2(a, b) | Ind(a, b):
            return term_is_ground(a) and term_is_ground(b)
        case Head(a) | Tail(a):
            return term_is_ground(a)
    raise SortError(f"not a justification term: {t!r}")


@cache
def term_provisional_free(t: JTerm) -> bool:
    match t:
        case PVar1() | PVar2():
            return False
        case Var1() | Var2() | JConst():
            return True
        case App1(a, b) | Sum1(a, b) | App2(a, b) | Sum2(a, b) | Ind(a, b):
            return term_provisional_free(a) and term_provisional_free(b)
        case Head(a) | Tail(a):
            return term_provisional_free(a)
    raise SortError(f"not a justification term: {t!r}")


@cache
def formula_provisional_free(f: Formula) -> bool:
    match f:
        case Var() | Bot():
            return True
        case Imp(a, b):
            return formula_provisional_free(a) and formula_provisional_free(b)
        case Box(a, _) | BoxPlus(a, _):
            return formula_provisional_free(a)
        case Bracket(t, a) | BracketTc(t, a):
            return term_provisional_free(t) and formula_provisional_free(a)
    raise SortError(f"not a formula: {f!r}")


# --- classification ---------------------------------------------------------


@cache
def is_modal(f: Formula) -> bool:
    """Formula of the modal language (no justification brackets)."""
    match f:
        case Var() | Bot():
            return True
        case Imp(a, b):
            return is_modal(a) and is_modal(b)
        case Box(a, _) | BoxPlus(a, _):
            return is_modal(a)
        case _:
            return False


@cache
def is_jformula(f: Formula) -> bool:
    """Formula of the justification language (no modal connectives)."""
    match f:
        case Var() | Bot():
            return True
        case Imp(a, b):
            return is_jformula(a) and is_jformula(b)
        case Bracket(t, a):
            return is_term1(t) and is_jformula(a)
        case BracketTc(t, a):
            return is_term2(t) and is_jformula(a)
        case _:
            return False


@cache
def is_plain(f: Formula) -> bool:
    """Modal formula with no annotation labels."""
    match f:
        case Var() | Bot():
            return True
        case Imp(a, b):
            return is_plain(a) and is_plain(b)
        case Box(a, label) | BoxPlus(a, label):
            return label is None and is_plain(a)
        case _:
            return False


@cache
def is_annotated(f: Formula) -> bool:
    """Modal formula with a label on every modal occurrence."""
    match f:
        case Var() | Bot():
            return True
        case Imp(a, b):
            return is_annotated(a) and is_annotated(b)
        case Box(a, label) | BoxPlus(a, label):
            return label is not None and is_annotated(a)
        case _:
            return False


# --- measurement and basic transforms ---------------------------------------


@cache
def size(f: Formula) -> int:
    match f:
        case Var() | Bot():
            return 1
        case Imp(a, b):
            return size(a) + size(b) + 1
        case Box(a, _) | BoxPlus(a, _):
            return size(a) + 1
    raise SortError(f"size undefined for {f!r}")


@cache
def erase(f: Formula) -> Formula:
    """Drop all annotation labels."""
    match f:
        case Var() | Bot():
            return f
        case Imp(a, b):
            return Imp(erase(a), erase(b))
        case Box(a, _):
            return Box(erase(a))
        case BoxPlus(a, _):
            return BoxPlus(erase(a))
    raise SortError(f"erase undefined for {f!r}")


@cache
def forgetful(f: Formula) -> Formula:
    """Map a justification formula to a modal one: [w]A to []A, [s]tc A to [+]A."""
    match f:
        case Var() | Bot():
            return f
        case Imp(a, b):
            return Imp(forgetful(a), forgetful(b))
        case Bracket(_, a):
            return Box(forgetful(a))
        case BracketTc(_, a):
            return BoxPlus(forgetful(a))
    raise SortError(f"forgetful undefined for {f!r}")


def subformulas(f: Formula):
    """All subformulas, f included, in preorder."""
    yield f
    match f:
        case Imp(a, b):
            yield from subformulas(a)
            yield from subformulas(b)
        case Box(a, _) | BoxPlus(a, _) | Bracket(_, a) | BracketTc(_, a):
            yield from subformulas(a)


class LabelAllocator:
    """Hands out fresh even (negative) and odd (positive) labels in order."""

    def __init__(self, next_even: int = 0, next_odd: int = 1):
        self.next_even = next_even
        self.next_odd = next_odd

    def take(self, positive: bool) -> int:
        if positive:
            out = self.next_odd
            self.next_odd += 2
        else:
            out = self.next_even
            self.next_even += 2
        return out


def proper_annotate(f: Formula, positive: bool, alloc: LabelAllocator | None = None) -> Formula:
    """Label every modal occurrence with a fresh parity-correct natural.

    Labels are assigned left to right in preorder: positive occurrences get
    the smallest unused odd label, negative ones the smallest unused even
    label.  The result erases back to ``f`` and is properly annotated.
    """
    if alloc is None:
        alloc = LabelAllocator()

    def go_pre(g: Formula, pos: bool) -> Formula:
        # preorder: the node's own label is drawn before the children's
        match g:
            case Var() | Bot():
                return g
            case Imp(a, b):
                left = go_pre(a, not pos)
                return Imp(left, go_pre(b, pos))
            case Box(a, _):
                lab = alloc.take(pos)
                return Box(go_pre(a, pos), lab)
            case BoxPlus(a, _):
                lab = alloc.take(pos)
                return BoxPlus(go_pre(a, pos), lab)
        raise SortError(f"cannot annotate {g!r}")

    return go_pre(f, positive)


def modal_label_occurrences(f: Formula, positive: bool = True):
    """Yield (connective, label, positive) triples for all modal occurrences."""
    match f:
        case Var() | Bot():
            return
        case Imp(a, b):
            yield from modal_label_occurrences(a, not positive)
            yield from modal_label_occurrences(b, positive)
        case Box(a, label):
            yield ("box", label, positive)
            yield from modal_label_occurrences(a, positive)
        case BoxPlus(a, label):
            yield ("boxplus", label, positive)
            yield from modal_label_occurrences(a, positive)


def parity_ok(f: Formula, positive: bool) -> bool:
    """Annotated occurrences: positive labels odd, negative labels even."""
    for _, label, pos in modal_label_occurrences(f, positive):
        if label is None or label % 2 != (1 if pos else 0):
            return False
    return True


def properly_annotated(f: Formula, positive: bool = True) -> bool:
    """Distinct box occurrences carry distinct labels; same for boxplus."""
    seen: dict[str, set[int]] = {"box": set(), "boxplus": set()}
    for kind, label, _ in modal_label_occurrences(f, positive):
        if label is None or label in seen[kind]:
            return False
        seen[kind].add(label)
    return True


# --- multisets and sequents -------------------------------------------------


@cache
def formula_key(f: Formula):
    """Total structural order on formulas, used for canonical multisets."""
    match f:
        case Bot():
            return (0,)
        case Var(i):
            return (1, i)
        case Imp(a, b):
            return (2, formula_key(a), formula_key(b))
        case Box(a, label):
            return (3, -1 if label is None else label, formula_key(a))
        case BoxPlus(a, label):
            return (4, -1 if label is None else label, formula_key(a))
        case Bracket(t, a):
            return (5, term_key(t), formula_key(a))
        case BracketTc(t, a):
            return (6, term_key(t), formula_key(a))
    raise SortError(f"no order for {f!r}")


@cache
def term_key(t: JTerm):
    match t:
        case Var1(i):
            return (0, i)
        case PVar1(m, i):
            return (1, m, i)
        case Head(a):
            return (2, term_key(a))
        case Tail(a):
            return (3, term_key(a))
        case App1(a, b):
            return (4, term_key(a), term_key(b))
        case Sum1(a, b):
            return (5, term_key(a), term_key(b))
        case Var2(i):
            return (6, i)
        case PVar2(n, j):
            return (7, n, j)
        case JConst(i):
            return (8, i)
        case App2(a, b):
            return (9, term_key(a), term_key(b))
        case Ind(a, b):
            return (10, term_key(a), term_key(b))
        case Sum2(a, b):
            return (11, term_key(a), term_key(b))
    raise SortError(f"no order for {t!r}")


def mset(items) -> tuple[Formula, ...]:
    """Canonical multiset: formulas sorted under the fixed total order."""
    return tuple(sorted(items, key=formula_key))


def mset_add(ms: tuple[Formula, ...], *items: Formula) -> tuple[Formula, ...]:
    return mset(ms + tuple(items))


def mset_remove(ms: tuple[Formula, ...], item: Formula) -> tuple[Formula, ...]:
    """Remove one occurrence; raises if absent."""
    out = list(ms)
    out.remove(item)
    return tuple(out)


def dedup(ms: tuple[Formula, ...]) -> tuple[Formula, ...]:
    """Each element once (the paper's Gamma^s operation)."""
    out: list[Formula] = []
    for f in ms:
        if not out or out[-1] != f:
            out.append(f)
    return tuple(out)


@dataclass(frozen=True, eq=False, repr=False)
class Sequent(Ast):
    ante: tuple[Formula, ...]
    succ: tuple[Formula, ...]


def sequent(ante, succ) -> Sequent:
    return Sequent(mset(ante), mset(succ))


FOCUS_STAR = None  # focus mark "*"


@dataclass(frozen=True, eq=False, repr=False)
class FocusedSequent(Ast):
    ante: tuple[Formula, ...]
    succ: tuple[Formula, ...]
    focus: Formula | None  # None is the mark *, else a boxplus formula


def focused(ante, succ, focus: Formula | None = FOCUS_STAR) -> FocusedSequent:
    return FocusedSequent(mset(ante), mset(succ), focus)


def focused_ok(fs: FocusedSequent) -> bool:
    """Focus is * or a boxplus succedent member; no other shape allowed."""
    if fs.focus is None:
        return True
    return isinstance(fs.focus, BoxPlus) and fs.focus in fs.succ


def sequent_parity_ok(ante, succ) -> bool:
    """Negative (antecedent) modal labels even, positive (succedent) odd."""
    return all(parity_ok(f, False) for f in ante) and all(
        parity_ok(f, True) for f in succ
    )


def sequent_properly_annotated(ante, succ) -> bool:
    seen: dict[str, set[int]] = {"box": set(), "boxplus": set()}
    for f, pos in [(g, False) for g in ante] + [(g, True) for g in succ]:
        for kind, label, _ in modal_label_occurrences(f, pos):
            if label is None or label in seen[kind]:
                return False
            seen[kind].add(label)
    return True


def sequent_size(ante, succ) -> int:
    return sum(size(f) for f in ante) + sum(size(f) for f in succ)


# --- rendering ---------------------------------------------------------------


def render(x) -> str:
    if isinstance(x, Sequent):
        return _render_sequent(x.ante, x.succ)
    if isinstance(x, FocusedSequent):
        base = _render_sequent(x.ante, x.succ)
        focus = "*" if x.focus is None else render(x.focus)
        return f"{base} @ {focus}"
    if isinstance(x, JTerm):
        return _render_term(x)
    if isinstance(x, Formula):
        return _render_formula(x)
    raise TypeError(f"cannot render {type(x).__name__}")


def _render_sequent(ante, succ) -> str:
    left = ", ".join(render(f) for f in ante)
    right = ", ".join(render(f) for f in succ)
    return f"{left} |- {right}".strip()


def _render_formula(f: Formula) -> str:
    match f:
        case Var(i):
            return f"p{i}"
        case Bot():
            return "false"
        case Imp(a, b):
            left = _render_formula(a)
            if isinstance(a, Imp):
                left = f"({left})"
            return f"{left} -> {_render_formula(b)}"
        case Box(a, label):
            prefix = "[]" if label is None else f"[]_{label} "
            return prefix + _render_operand(a)
        case BoxPlus(a, label):
            prefix = "[+]" if label is None else f"[+]_{label} "
            return prefix + _render_operand(a)
        case Bracket(t, a):
            return f"[{_render_term(t)}]" + _render_operand(a)
        case BracketTc(t, a):
            return f"[{_render_term(t)}]tc " + _render_operand(a)
    raise SortError(f"cannot render {f!r}")


def _render_operand(a: Formula) -> str:
    text = _render_formula(a)
    return f"({text})" if isinstance(a, Imp) else text


def _render_term(t: JTerm) -> str:
    match t:
        case Var1(i):
            return f"x{i}"
        case PVar1(m, i):
            return f"x{m}_{i}"
        case Var2(i):
            return f"y{i}"
        case PVar2(n, j):
            return f"y{n}_{j}"
        case JConst(i):
            return f"c{i}"
        case Head(a):
            return f"head({_render_term(a)})"
        case Tail(a):
            return f"tail({_render_term(a)})"
        case Ind(w, s):
            return f"ind({_render_term(w)},{_render_term(s)})"
        case App1(a, b) | App2(a, b):
            return f"({_render_term(a)} . {_render_term(b)})"
        case Sum1(a, b) | Sum2(a, b):
            return f"({_render_term(a)} + {_render_term(b)})"
    raise SortError(f"cannot render {t!r}")


# --- parsing -----------------------------------------------------------------


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, message: str):
        raise ParseError(message, self.pos)

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def at(self, token: str) -> bool:
        self.skip_ws()
        return self.text.startswith(token, self.pos)

    def eat(self, token: str) -> bool:
        if self.at(token):
            self.pos += len(token)
            return True
        return False

    def expect(self, token: str):
        if not self.eat(token):
            self.error(f"expected {token!r}")

    def nat(self) -> int:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start:
            self.error("expected a number")
        return int(self.text[start : self.pos])

    def word(self) -> str:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isalpha():
            self.pos += 1
        return self.text[start : self.pos]

    def done(self) -> bool:
        self.skip_ws()
        return self.pos >= len(self.text)

    # formulas

    def formula(self) -> Formula:
        left = self.prefixed()
        if self.eat("->"):
            return Imp(left, self.formula())
        return left

    def prefixed(self) -> Formula:
        self.skip_ws()
        if self.at("["):
            return self.modal_or_bracket()
        return self.atom()

    def modal_or_bracket(self) -> Formula:
        self.expect("[")
        if self.eat("]"):
            label = self.nat() if self.eat("_") else None
            return Box(self.prefixed(), label)
        if self.eat("+"):
            self.expect("]")
            label = self.nat() if self.eat("_") else None
            return BoxPlus(self.prefixed(), label)
        term = self.term()
        self.expect("]")
        here = self.pos
        if self.word() == "tc":
            if not is_term2(term):
                self.pos = here
                self.error("[..]tc needs a second-sort term")
            return BracketTc(term, self.prefixed())
        self.pos = here
        if not is_term1(term):
            self.error("[..] needs a first-sort term")
        return Bracket(term, self.prefixed())

    def atom(self) -> Formula:
        if self.eat("("):
            out = self.formula()
            self.expect(")")
            return out
        here = self.pos
        name = self.word()
        if name == "false":
            return BOT
        if name == "p":
            return Var(self.nat())
        self.pos = here
        self.error("expected a formula")

    # justification terms

    def term(self) -> JTerm:
        if self.eat("("):
            left = self.term()
            if self.eat("."):
                right = self.term()
                self.expect(")")
                if is_term1(left) and is_term1(right):
                    return App1(left, right)
                if is_term2(left) and is_term2(right):
                    return App2(left, right)
                self.error("application mixes term sorts")
            if self.eat("+"):
                right = self.term()
                self.expect(")")
                if is_term1(left) and is_term1(right):
                    return Sum1(left, right)
                if is_term2(left) and is_term2(right):
                    return Sum2(left, right)
                self.error("sum mixes term sorts")
            self.error("expected '.' or '+'")
        here = self.pos
        name = self.word()
        if name in ("head", "tail", "ind"):
            self.expect("(")
            first = self.term()
            if name == "ind":
                self.expect(",")
                second = self.term()
                self.expect(")")
                if not (is_term1(first) and is_term2(second)):
                    self.error("ind needs (first-sort, second-sort) arguments")
                return Ind(first, second)
            self.expect(")")
            if not is_term2(first):
                self.error(f"{name} needs a second-sort term")
            return Head(first) if name == "head" else Tail(first)
        if name in ("x", "y", "c"):
            index = self.nat()
            if name != "c" and self.eat("_"):
                sub = self.nat()
                return PVar1(index, sub) if name == "x" else PVar2(index, sub)
            if name == "x":
                return Var1(index)
            if name == "y":
                return Var2(index)
            return JConst(index)
        self.pos = here
        self.error("expected a justification term")

    # sequents

    def formula_list(self, stop: str) -> list[Formula]:
        out: list[Formula] = []
        if self.at(stop) or self.done():
            return out
        out.append(self.formula())
        while self.eat(","):
            out.append(self.formula())
        return out

    def sequent(self):
        ante = self.formula_list("|-")
        self.expect("|-")
        succ = self.formula_list("@")
        if self.eat("@"):
            if self.eat("*"):
                return FocusedSequent(mset(ante), mset(succ), None)
            return FocusedSequent(mset(ante), mset(succ), self.formula())
        return Sequent(mset(ante), mset(succ))


def parse(text: str) -> Formula:
    """Parse a formula of either language; raises ParseError on bad input."""
    p = _Parser(text)
    out = p.formula()
    if not p.done():
        p.error("unexpected trailing input")
    return out


def parse_modal(text: str) -> Formula:
    out = parse(text)
    if not is_modal(out):
        raise ParseError("not a modal formula", 0)
    return out


def parse_jformula(text: str) -> Formula:
    out = parse(text)
    if not is_jformula(out):
        raise ParseError("not a justification formula", 0)
    return out


def parse_term(text: str) -> JTerm:
    p = _Parser(text)
    out = p.term()
    if not p.done():
        p.error("unexpected trailing input")
    return out


def parse_sequent(text: str) -> Sequent | FocusedSequent:
    p = _Parser(text)
    out = p.sequent()
    if not p.done():
        p.error("unexpected trailing input")
    return out
