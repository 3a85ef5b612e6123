"""Hilbert kernel for the two-sorted justification logic and its constructive
proof transformers.

The kernel accepts step-list proofs over axiom schemas (i)-(x), constant-
specification axioms ``[c]tc A`` (A an axiom of the base system), and modus
ponens.  On top of it live a complete classical propositional prover
(``prop_proof``, deduction-theorem based) and the transformers: substitution,
axiom internalization, internalization, lifting, the induction-rule term, and
constant renaming.  Every transformer emits proofs that re-check.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cache

from .syntax import (
    BOT,
    Ast,
    Bot,
    Bracket,
    BracketTc,
    Formula,
    Imp,
    Ind,
    JConst,
    JTerm,
    PVar1,
    PVar2,
    Sum1,
    Sum2,
    App1,
    App2,
    Head,
    Tail,
    Var,
    Var1,
    Var2,
    big_conj,
    check_term,
    formula_key,
    is_jformula,
    is_term1,
    is_term2,
    render,
    term_is_ground,
    term_provisional_free,
)


class JLogicError(Exception):
    pass


class NotAConsequence(JLogicError):
    """prop_proof was asked for something that is not a tautological consequence."""


# ---------------------------------------------------------------------------
# Axiom schemas


@dataclass(frozen=True, eq=False, repr=False)
class AxiomInstance(Ast):
    schema: str  # "i" .. "x", or "cs"
    params: tuple[tuple[str, object], ...]  # sorted (name, formula-or-term-or-int)

    def __repr__(self):
        inner = ", ".join(f"{k}={v!r}" for k, v in self.params)
        return f"{self.schema}({inner})"


def _inst(schema: str, **params) -> AxiomInstance:
    return AxiomInstance(schema, tuple(sorted(params.items())))


def instance_params(inst: AxiomInstance) -> dict:
    return dict(inst.params)


@cache
def instance_formula(inst: AxiomInstance) -> Formula:
    p = instance_params(inst)
    match inst.schema:
        case "i":
            return Imp(p["A"], Imp(p["B"], p["A"]))
        case "ii":
            return Imp(
                Imp(p["A"], Imp(p["B"], p["C"])),
                Imp(Imp(p["A"], p["B"]), Imp(p["A"], p["C"])),
            )
        case "iii":
            return Imp(Imp(Imp(p["A"], BOT), BOT), p["A"])
        case "iv":
            return Imp(
                Bracket(p["h"], Imp(p["A"], p["B"])),
                Imp(Bracket(p["w"], p["A"]), Bracket(App1(p["h"], p["w"]), p["B"])),
            )
        case "v":
            return Imp(
                Imp(Imp(Bracket(p["h"], p["A"]), BOT), Bracket(p["w"], p["A"])),
                Bracket(Sum1(p["h"], p["w"]), p["A"]),
            )
        case "vi":
            return Imp(
                BracketTc(p["t"], Imp(p["A"], p["B"])),
                Imp(
                    BracketTc(p["s"], p["A"]),
                    BracketTc(App2(p["t"], p["s"]), p["B"]),
                ),
            )
        case "vii":
            return Imp(BracketTc(p["s"], p["A"]), Bracket(Head(p["s"]), p["A"]))
        case "viii":
            return Imp(
                BracketTc(p["s"], p["A"]),
                Bracket(Tail(p["s"]), BracketTc(p["s"], p["A"])),
            )
        case "ix":
            w_a = Bracket(p["w"], p["A"])
            return Imp(
                Imp(Imp(w_a, Imp(BracketTc(p["s"], Imp(p["A"], w_a)), BOT)), BOT),
                BracketTc(Ind(p["w"], p["s"]), p["A"]),
            )
        case "x":
            return Imp(
                Imp(Imp(BracketTc(p["t"], p["A"]), BOT), BracketTc(p["s"], p["A"])),
                BracketTc(Sum2(p["t"], p["s"]), p["A"]),
            )
        case "cs":
            return BracketTc(JConst(p["c"]), p["A"])
    raise JLogicError(f"unknown schema {inst.schema}")


def validate_instance(inst: AxiomInstance) -> bool:
    p = instance_params(inst)
    try:
        formula = instance_formula(inst)
    except (KeyError, JLogicError, TypeError):
        return False
    if not is_jformula(formula):
        return False
    for name, value in p.items():
        if name in ("h", "w"):
            if not is_term1(value):
                return False
        elif name in ("t", "s"):
            if not is_term2(value):
                return False
        elif name == "c":
            if not isinstance(value, int) or value < 0:
                return False
        elif not isinstance(value, Formula):
            return False
        if isinstance(value, JTerm):
            check_term(value)
    if inst.schema == "cs" and match_axiom(p["A"]) is None:
        return False
    return True


def _as_imp(f) -> tuple[Formula, Formula] | None:
    return (f.lhs, f.rhs) if isinstance(f, Imp) else None


def match_axiom(f: Formula) -> AxiomInstance | None:
    """First matching schema in the order (i) to (x); None when none fits.

    Conjunction and disjunction occurrences in (v), (ix) and (x) are their
    implication-and-bottom expansions, so matching is purely structural.
    """
    for matcher in (
        _match_i,
        _match_ii,
        _match_iii,
        _match_iv,
        _match_v,
        _match_vi,
        _match_vii,
        _match_viii,
        _match_ix,
        _match_x,
    ):
        inst = matcher(f)
        if inst is not None:
            if instance_formula(inst) != f:  # safety net; matchers are exact
                raise JLogicError(f"matcher produced a wrong instance for {f!r}")
            return inst
    return None


def _match_i(f):
    match f:
        case Imp(a, Imp(b, a2)) if a2 == a:
            return _inst("i", A=a, B=b)
    return None


def _match_ii(f):
    match f:
        case Imp(Imp(a, Imp(b, c)), Imp(Imp(a2, b2), Imp(a3, c2))) if (
            a2 == a and a3 == a and b2 == b and c2 == c
        ):
            return _inst("ii", A=a, B=b, C=c)
    return None


def _match_iii(f):
    match f:
        case Imp(Imp(Imp(a, Bot()), Bot()), a2) if a2 == a:
            return _inst("iii", A=a)
    return None


def _match_iv(f):
    match f:
        case Imp(
            Bracket(h, Imp(a, b)),
            Imp(Bracket(w, a2), Bracket(App1(h2, w2), b2)),
        ) if a2 == a and b2 == b and h2 == h and w2 == w:
            return _inst("iv", h=h, w=w, A=a, B=b)
    return None


def _match_v(f):
    match f:
        case Imp(
            Imp(Imp(Bracket(h, a), Bot()), Bracket(w, a2)),
            Bracket(Sum1(h2, w2), a3),
        ) if a2 == a and a3 == a and h2 == h and w2 == w:
            return _inst("v", h=h, w=w, A=a)
    return None


def _match_vi(f):
    match f:
        case Imp(
            BracketTc(t, Imp(a, b)),
            Imp(BracketTc(s, a2), BracketTc(App2(t2, s2), b2)),
        ) if a2 == a and b2 == b and t2 == t and s2 == s:
            return _inst("vi", t=t, s=s, A=a, B=b)
    return None


def _match_vii(f):
    match f:
        case Imp(BracketTc(s, a), Bracket(Head(s2), a2)) if a2 == a and s2 == s:
            return _inst("vii", s=s, A=a)
    return None


def _match_viii(f):
    match f:
        case Imp(BracketTc(s, a), Bracket(Tail(s2), BracketTc(s3, a2))) if (
            a2 == a and s2 == s and s3 == s
        ):
            return _inst("viii", s=s, A=a)
    return None


def _match_ix(f):
    match f:
        case Imp(
            Imp(Imp(Bracket(w, a), Imp(BracketTc(s, Imp(a2, Bracket(w2, a3))), Bot())), Bot()),
            BracketTc(Ind(w3, s2), a4),
        ) if (
            a2 == a and a3 == a and a4 == a and w2 == w and w3 == w and s2 == s
        ):
            return _inst("ix", w=w, s=s, A=a)
    return None


def _match_x(f):
    match f:
        case Imp(
            Imp(Imp(BracketTc(t, a), Bot()), BracketTc(s, a2)),
            BracketTc(Sum2(t2, s2), a3),
        ) if a2 == a and a3 == a and t2 == t and s2 == s:
            return _inst("x", t=t, s=s, A=a)
    return None


def cs_axiom(c: int, wrapped: Formula) -> AxiomInstance:
    return _inst("cs", c=c, A=wrapped)


# ---------------------------------------------------------------------------
# Constant specifications


CS = frozenset  # of (constant index, wrapped axiom formula) pairs


def cs_constants(cs: CS) -> set[int]:
    return {c for c, _ in cs}


def cs_injective(cs: CS) -> bool:
    by_const: dict[int, Formula] = {}
    for c, a in cs:
        if c in by_const and by_const[c] != a:
            return False
        by_const[c] = a
    return True


def fresh_constant(cs: CS) -> int:
    used = cs_constants(cs)
    c = 0
    while c in used:
        c += 1
    return c


# ---------------------------------------------------------------------------
# Proof objects


@dataclass
class JProof:
    """Hilbert-style proof: step list over axioms and modus ponens."""

    steps: list[tuple]  # ("ax", AxiomInstance) or ("mp", i, j)
    formulas: list[Formula]

    @property
    def conclusion(self) -> Formula:
        return self.formulas[-1]


@dataclass
class ProofCheck:
    ok: bool
    cs: CS
    injective: bool
    diagnostics: list[str]


def proof_cs(p: JProof) -> CS:
    out = set()
    for step in p.steps:
        if step[0] == "ax" and step[1].schema == "cs":
            params = instance_params(step[1])
            out.add((params["c"], params["A"]))
    return frozenset(out)


def check_proof(p: JProof, allowed: CS | None = None) -> ProofCheck:
    """Re-derive every step; reports the used constant specification."""
    diags: list[str] = []
    if not p.steps:
        return ProofCheck(False, frozenset(), True, ["empty proof"])
    if len(p.steps) != len(p.formulas):
        return ProofCheck(False, frozenset(), True, ["step/formula length mismatch"])
    for k, (step, f) in enumerate(zip(p.steps, p.formulas)):
        if step[0] == "ax":
            inst = step[1]
            if not validate_instance(inst):
                diags.append(f"step {k}: invalid axiom instance {inst!r}")
            elif instance_formula(inst) != f:
                diags.append(f"step {k}: axiom instance does not yield its formula")
        elif step[0] == "mp":
            _, i, j = step
            if not (0 <= i < k and 0 <= j < k):
                diags.append(f"step {k}: mp cites out-of-range steps")
                continue
            major = p.formulas[j]
            if not isinstance(major, Imp):
                diags.append(f"step {k}: mp major premise is not an implication")
            elif major.lhs != p.formulas[i] or major.rhs != f:
                diags.append(f"step {k}: mp premises do not fit")
        else:
            diags.append(f"step {k}: unknown step kind {step[0]!r}")
    cs = proof_cs(p)
    injective = cs_injective(cs)
    if allowed is not None and not cs <= allowed:
        diags.append("proof uses constant axioms outside the allowed specification")
    return ProofCheck(not diags, cs, injective, diags)


class ProofBuilder:
    """Step accumulator with structure sharing: one step per proved formula."""

    def __init__(self):
        self.steps: list[tuple] = []
        self.formulas: list[Formula] = []
        self.index: dict[Formula, int] = {}

    def _add(self, step: tuple, f: Formula) -> int:
        at = self.index.get(f)
        if at is not None:
            return at
        self.steps.append(step)
        self.formulas.append(f)
        self.index[f] = len(self.steps) - 1
        return len(self.steps) - 1

    def ax(self, inst: AxiomInstance) -> int:
        return self._add(("ax", inst), instance_formula(inst))

    def mp(self, i: int, j: int) -> int:
        major = self.formulas[j]
        if not isinstance(major, Imp) or major.lhs != self.formulas[i]:
            raise JLogicError(
                f"mp mismatch: {render(self.formulas[i])} vs {render(major)}"
            )
        return self._add(("mp", i, j), major.rhs)

    def import_proof(self, p: JProof) -> int:
        remap: list[int] = []
        for step, f in zip(p.steps, p.formulas):
            if step[0] == "ax":
                remap.append(self.ax(step[1]))
            else:
                remap.append(self.mp(remap[step[1]], remap[step[2]]))
        return remap[-1]

    def extract(self, target: int) -> JProof:
        needed: set[int] = set()
        stack = [target]
        while stack:
            i = stack.pop()
            if i in needed:
                continue
            needed.add(i)
            if self.steps[i][0] == "mp":
                stack.extend(self.steps[i][1:])
        order = sorted(needed)
        order.remove(target)
        order.append(target)  # conclusion last
        pos = {i: k for k, i in enumerate(order)}
        steps = []
        for i in order:
            step = self.steps[i]
            if step[0] == "mp":
                steps.append(("mp", pos[step[1]], pos[step[2]]))
            else:
                steps.append(step)
        return JProof(steps, [self.formulas[i] for i in order])


# ---------------------------------------------------------------------------
# Derivations from hypotheses and the deduction theorem


class Derivation:
    """Step list that may include hypothesis steps; tracks hypothesis use.

    Only hypothesis-free steps are shared through the formula index, so a
    formula derived under one branch's assumptions is never reused under
    another's.
    """

    def __init__(self):
        self.steps: list[tuple] = []  # ("ax", inst) / ("hyp", f) / ("mp", i, j)
        self.formulas: list[Formula] = []
        self.hypsets: list[frozenset] = []
        self.index: dict[Formula, int] = {}
        self.hyp_index: dict[Formula, int] = {}

    def _add(self, step, f, hypset) -> int:
        self.steps.append(step)
        self.formulas.append(f)
        self.hypsets.append(hypset)
        i = len(self.steps) - 1
        if not hypset:
            self.index.setdefault(f, i)
        return i

    def ax(self, inst: AxiomInstance) -> int:
        f = instance_formula(inst)
        at = self.index.get(f)
        if at is not None:
            return at
        return self._add(("ax", inst), f, frozenset())

    def hyp(self, f: Formula) -> int:
        at = self.hyp_index.get(f)
        if at is not None:
            return at
        i = self._add(("hyp", f), f, frozenset([f]))
        self.hyp_index[f] = i
        return i

    def mp(self, i: int, j: int) -> int:
        major = self.formulas[j]
        if not isinstance(major, Imp) or major.lhs != self.formulas[i]:
            raise JLogicError(
                f"mp mismatch: {render(self.formulas[i])} vs {render(major)}"
            )
        f = major.rhs
        hypset = self.hypsets[i] | self.hypsets[j]
        if not hypset and f in self.index:
            return self.index[f]
        return self._add(("mp", i, j), f, hypset)

    def import_proof(self, p: JProof) -> int:
        remap: list[int] = []
        for step, _ in zip(p.steps, p.formulas):
            if step[0] == "ax":
                remap.append(self.ax(step[1]))
            else:
                remap.append(self.mp(remap[step[1]], remap[step[2]]))
        return remap[-1]

    # -- small combinators ---------------------------------------------------

    def k_ax(self, a: Formula, b: Formula) -> int:
        return self.ax(_inst("i", A=a, B=b))

    def s_ax(self, a: Formula, b: Formula, c: Formula) -> int:
        return self.ax(_inst("ii", A=a, B=b, C=c))

    def dne(self, a: Formula) -> int:
        return self.ax(_inst("iii", A=a))

    def identity(self, a: Formula) -> int:
        # A -> A from (i) and (ii)
        k1 = self.k_ax(a, Imp(a, a))  # A -> ((A->A) -> A)
        s1 = self.s_ax(a, Imp(a, a), a)
        m1 = self.mp(k1, s1)  # (A -> (A->A)) -> (A->A)
        k2 = self.k_ax(a, a)  # A -> (A->A)
        return self.mp(k2, m1)

    def wrap(self, i: int, h: Formula) -> int:
        """From F derive h -> F."""
        f = self.formulas[i]
        return self.mp(i, self.k_ax(f, h))

    def deduce(self, target: int, h: Formula) -> int:
        """Deduction theorem: from a derivation of F using hypothesis h,
        produce one of h -> F that no longer uses it."""
        memo: dict[int, int] = {}

        def go(i: int) -> int:
            if i in memo:
                return memo[i]
            if h not in self.hypsets[i]:
                out = self.wrap(i, h)
            else:
                step = self.steps[i]
                if step[0] == "hyp":  # the hypothesis h itself
                    out = self.identity(h)
                else:
                    _, a, b = step
                    ia, ib = go(a), go(b)
                    fa = self.formulas[a]
                    major = self.formulas[b]
                    s1 = self.s_ax(h, fa, major.rhs)
                    out = self.mp(ia, self.mp(ib, s1))
            memo[i] = out
            return out

        return go(target)

    def extract(self, target: int) -> JProof:
        if self.hypsets[target]:
            raise JLogicError(
                f"extracting a step that still uses hypotheses: {self.hypsets[target]}"
            )
        needed: set[int] = set()
        stack = [target]
        while stack:
            i = stack.pop()
            if i in needed:
                continue
            needed.add(i)
            if self.steps[i][0] == "mp":
                stack.extend(self.steps[i][1:])
        order = sorted(needed)
        order.remove(target)
        order.append(target)
        pos = {i: k for k, i in enumerate(order)}
        steps = []
        for i in order:
            step = self.steps[i]
            if step[0] == "hyp":
                raise JLogicError("hypothesis step survived into extraction")
            if step[0] == "mp":
                steps.append(("mp", pos[step[1]], pos[step[2]]))
            else:
                steps.append(step)
        return JProof(steps, [self.formulas[i] for i in order])


# ---------------------------------------------------------------------------
# Classical propositional proving (bracketed formulas are atoms)


def collect_atoms(f: Formula, out: list[Formula]):
    match f:
        case Bot():
            pass
        case Imp(a, b):
            collect_atoms(a, out)
            collect_atoms(b, out)
        case _:  # variables and bracketed formulas are opaque
            if f not in out:
                out.append(f)


def _eval_prop(f: Formula, assignment: dict) -> bool:
    match f:
        case Bot():
            return False
        case Imp(a, b):
            return (not _eval_prop(a, assignment)) or _eval_prop(b, assignment)
        case _:
            return assignment[f]


def is_consequence(goal: Formula, hyps=()) -> bool:
    """Truth-table check treating non-implication subformulas as atoms."""
    atoms: list[Formula] = []
    collect_atoms(goal, atoms)
    for h in hyps:
        collect_atoms(h, atoms)
    for bits in range(1 << len(atoms)):
        assignment = {a: bool(bits >> k & 1) for k, a in enumerate(atoms)}
        if all(_eval_prop(h, assignment) for h in hyps) and not _eval_prop(
            goal, assignment
        ):
            return False
    return True


_TT_LIMIT = 11


@cache
def _fsize(f: Formula) -> int:
    match f:
        case Imp(a, b):
            return _fsize(a) + _fsize(b) + 1
        case _:
            return 1


def _refute(d: Derivation, ctx: frozenset, processed: frozenset) -> int | None:
    """Derivation index of bottom from hypotheses ctx, or None if satisfiable.

    Smallest decomposable formulas are split first; this keeps large opaque
    chunks intact whenever the contradiction lives in the small ones.
    """
    if BOT in ctx:
        return d.hyp(BOT)
    for a in ctx:
        if Imp(a, BOT) in ctx:
            return d.mp(d.hyp(a), d.hyp(Imp(a, BOT)))
    def priority(f: Formula):
        branching = not (
            isinstance(f, Imp) and f.rhs == BOT and isinstance(f.lhs, Imp)
        )
        return (branching, _fsize(f), formula_key(f))

    todo = sorted((f for f in ctx if f not in processed), key=priority)
    for f in todo:
        match f:
            case Imp(Imp(c, e), Bot()):
                sub = _refute(d, ctx | {c, Imp(e, BOT)}, processed | {f})
                if sub is None:
                    return None
                i1 = d.deduce(sub, Imp(e, BOT))  # (e->bot)->bot, under c
                i2 = d.mp(i1, d.dne(e))  # e, under c
                i3 = d.deduce(i2, c)  # c -> e
                return d.mp(i3, d.hyp(f))
            case Imp(a, b) if b != BOT:
                na = Imp(a, BOT)
                s1 = _refute(d, ctx | {na}, processed | {f})
                if s1 is None:
                    return None
                s2 = _refute(d, ctx | {b}, processed | {f})
                if s2 is None:
                    return None
                i1 = d.deduce(s1, na)  # not not a
                i2 = d.mp(i1, d.dne(a))  # a
                i3 = d.mp(i2, d.hyp(f))  # b
                i4 = d.deduce(s2, b)  # b -> bot
                return d.mp(i3, i4)
    return None


def prop_proof(goal: Formula, hyps=()) -> JProof:
    """Proof of hyp1 -> (hyp2 -> ... -> goal) over schemas (i)-(iii) and mp.

    The goal must be a classical consequence of the hypotheses with
    bracketed formulas read as atoms; anything else raises NotAConsequence.
    """
    hyps = list(hyps)
    atoms: list[Formula] = []
    collect_atoms(goal, atoms)
    for h in hyps:
        collect_atoms(h, atoms)
    if len(atoms) <= _TT_LIMIT and not is_consequence(goal, hyps):
        raise NotAConsequence(f"{render(goal)} does not follow from the hypotheses")
    d = Derivation()
    ng = Imp(goal, BOT)
    bottom = _refute(d, frozenset(hyps) | {ng}, frozenset())
    if bottom is None:
        raise NotAConsequence(f"{render(goal)} does not follow from the hypotheses")
    i1 = d.deduce(bottom, ng)  # not not goal
    out = d.mp(i1, d.dne(goal))
    for h in reversed(hyps):
        out = d.deduce(out, h)
    return d.extract(out)


def prop_mp(goal: Formula, proofs) -> JProof:
    """Close a propositional consequence of already-proved formulas."""
    proofs = list(proofs)
    glue = prop_proof(goal, [p.conclusion for p in proofs])
    b = ProofBuilder()
    at = b.import_proof(glue)
    for p in proofs:
        at = b.mp(b.import_proof(p), at)
    return b.extract(at)


def mp_into(b: ProofBuilder, goal: Formula, args: list[int]) -> int:
    """prop_mp against steps already present in a shared builder."""
    glue = prop_proof(goal, [b.formulas[i] for i in args])
    at = b.import_proof(glue)
    for i in args:
        at = b.mp(i, at)
    return at


def axiom_proof(inst: AxiomInstance) -> JProof:
    return JProof([("ax", inst)], [instance_formula(inst)])


def substitute_formulas(p: JProof, mapping: dict) -> JProof:
    """Uniformly replace propositional variables by formulas throughout a
    proof; schemas are closed under this, so the image is again a proof."""
    memo: dict = {}

    def go(f: Formula) -> Formula:
        hit = memo.get(f)
        if hit is not None:
            return hit
        match f:
            case Var():
                out = mapping.get(f, f)
            case Bot():
                out = f
            case Imp(a, b):
                out = Imp(go(a), go(b))
            case Bracket(t, a):
                out = Bracket(t, go(a))
            case BracketTc(t, a):
                out = BracketTc(t, go(a))
            case _:
                raise JLogicError(f"cannot substitute into {f!r}")
        memo[f] = out
        return out

    steps = []
    for step in p.steps:
        if step[0] == "ax":
            inst = step[1]
            params = {
                k: (go(v) if isinstance(v, Formula) else v) for k, v in inst.params
            }
            steps.append(("ax", _inst(inst.schema, **params)))
        else:
            steps.append(step)
    return JProof(steps, [go(f) for f in p.formulas])


_conj_intro_template: JProof | None = None


def conj_intro_proof(x: Formula, y: Formula) -> JProof:
    """Proof of X -> (Y -> X & Y), instantiated from a fixed template."""
    global _conj_intro_template
    if _conj_intro_template is None:
        a, b = Var(0), Var(1)
        _conj_intro_template = prop_proof(Imp(a, Imp(b, big_conj([a, b]))))
    return substitute_formulas(_conj_intro_template, {Var(0): x, Var(1): y})


# ---------------------------------------------------------------------------
# Substitution


class JSubstitution:
    """Sort-preserving map from (possibly provisional) variables to terms."""

    def __init__(self, mapping: dict):
        for var, term in mapping.items():
            if isinstance(var, (Var1, PVar1)):
                if not is_term1(term):
                    raise JLogicError(f"first-sort variable {var!r} mapped across sorts")
            elif isinstance(var, (Var2, PVar2)):
                if not is_term2(term):
                    raise JLogicError(f"second-sort variable {var!r} mapped across sorts")
            else:
                raise JLogicError(f"substitution domain contains non-variable {var!r}")
        self.mapping = dict(mapping)
        self._term_memo: dict = {}
        self._formula_memo: dict = {}

    def domain(self) -> set:
        return set(self.mapping)

    def is_finalizing(self) -> bool:
        return all(isinstance(v, (PVar1, PVar2)) for v in self.mapping) and all(
            term_provisional_free(t) for t in self.mapping.values()
        )

    def term(self, t: JTerm) -> JTerm:
        hit = self._term_memo.get(t)
        if hit is not None:
            return hit
        match t:
            case Var1() | PVar1() | Var2() | PVar2():
                out = self.mapping.get(t, t)
            case JConst():
                out = t
            case App1(a, b):
                out = App1(self.term(a), self.term(b))
            case Sum1(a, b):
                out = Sum1(self.term(a), self.term(b))
            case Head(a):
                out = Head(self.term(a))
            case Tail(a):
                out = Tail(self.term(a))
            case App2(a, b):
                out = App2(self.term(a), self.term(b))
            case Sum2(a, b):
                out = Sum2(self.term(a), self.term(b))
            case Ind(a, b):
                out = Ind(self.term(a), self.term(b))
            case _:
                raise JLogicError(f"not a term: {t!r}")
        self._term_memo[t] = out
        return out

    def formula(self, f: Formula) -> Formula:
        hit = self._formula_memo.get(f)
        if hit is not None:
            return hit
        match f:
            case Var() | Bot():
                out = f
            case Imp(a, b):
                out = Imp(self.formula(a), self.formula(b))
            case Bracket(t, a):
                out = Bracket(self.term(t), self.formula(a))
            case BracketTc(t, a):
                out = BracketTc(self.term(t), self.formula(a))
            case _:
                raise JLogicError(f"substitution into non-justification formula {f!r}")
        self._formula_memo[f] = out
        return out

    def instance(self, inst: AxiomInstance) -> AxiomInstance:
        out = {}
        for name, value in inst.params:
            if isinstance(value, JTerm):
                out[name] = self.term(value)
            elif isinstance(value, Formula):
                out[name] = self.formula(value)
            else:
                out[name] = value
        return _inst(inst.schema, **out)

    def union(self, other: "JSubstitution") -> "JSubstitution":
        overlap = self.domain() & other.domain()
        if overlap:
            raise JLogicError(f"substitution domains overlap on {overlap}")
        return JSubstitution({**self.mapping, **other.mapping})


def identity_substitution() -> JSubstitution:
    return JSubstitution({})


def substitute_proof(p: JProof, sigma: JSubstitution) -> JProof:
    """Pointwise image of a proof; proves sigma of the old conclusion."""
    steps = []
    for step in p.steps:
        if step[0] == "ax":
            steps.append(("ax", sigma.instance(step[1])))
        else:
            steps.append(step)
    return JProof(steps, [sigma.formula(f) for f in p.formulas])


def rename_constants(p: JProof, mapping: dict[int, int]) -> JProof:
    """Rename constants through a map injective on the proof's Con set."""
    used = cs_constants(proof_cs(p))
    images = [mapping.get(c, c) for c in used]
    if len(set(images)) != len(images):
        raise JLogicError("constant renaming is not injective on the used constants")

    term_memo: dict = {}
    formula_memo: dict = {}

    def rterm(t: JTerm) -> JTerm:
        hit = term_memo.get(t)
        if hit is not None:
            return hit
        match t:
            case JConst(i):
                out = JConst(mapping.get(i, i))
            case Var1() | PVar1() | Var2() | PVar2():
                out = t
            case App1(a, b):
                out = App1(rterm(a), rterm(b))
            case Sum1(a, b):
                out = Sum1(rterm(a), rterm(b))
            case Head(a):
                out = Head(rterm(a))
            case Tail(a):
                out = Tail(rterm(a))
            case App2(a, b):
                out = App2(rterm(a), rterm(b))
            case Sum2(a, b):
                out = Sum2(rterm(a), rterm(b))
            case Ind(a, b):
                out = Ind(rterm(a), rterm(b))
            case _:
                raise JLogicError(f"not a term: {t!r}")
        term_memo[t] = out
        return out

    def rformula(f: Formula) -> Formula:
        hit = formula_memo.get(f)
        if hit is not None:
            return hit
        match f:
            case Var() | Bot():
                out = f
            case Imp(a, b):
                out = Imp(rformula(a), rformula(b))
            case Bracket(t, a):
                out = Bracket(rterm(t), rformula(a))
            case BracketTc(t, a):
                out = BracketTc(rterm(t), rformula(a))
            case _:
                raise JLogicError(f"not a justification formula: {f!r}")
        formula_memo[f] = out
        return out

    steps = []
    for step in p.steps:
        if step[0] == "ax":
            inst = step[1]
            out = {}
            for name, value in inst.params:
                if isinstance(value, JTerm):
                    out[name] = rterm(value)
                elif isinstance(value, Formula):
                    out[name] = rformula(value)
                elif name == "c":
                    out[name] = mapping.get(value, value)
                else:
                    out[name] = value
            steps.append(("ax", _inst(inst.schema, **out)))
        else:
            steps.append(step)
    return JProof(steps, [rformula(f) for f in p.formulas])


# ---------------------------------------------------------------------------
# Internalization and lifting


class _ConstantPool:
    """Mutable view of a growing constant specification; allocations take the
    smallest index unused so far."""

    def __init__(self, cs: CS):
        self.pairs: set = set(cs)
        self.used: set[int] = {c for c, _ in cs}
        self._next = 0

    def alloc(self, wrapped: Formula) -> int:
        c = self._next
        while c in self.used:
            c += 1
        self._next = c
        self.used.add(c)
        self.pairs.add((c, wrapped))
        return c

    def freeze(self) -> CS:
        return frozenset(self.pairs)


def _internalize_axiom_into(b: ProofBuilder, pool: _ConstantPool, inst: AxiomInstance):
    """Append a proof of [s]tc A to the builder; returns (s, index)."""
    if inst.schema != "cs":
        wrapped = instance_formula(inst)
        c = pool.alloc(wrapped)
        return JConst(c), b.ax(cs_axiom(c, wrapped))
    params = instance_params(inst)
    c, wrapped = params["c"], params["A"]
    cterm = JConst(c)
    inner = BracketTc(cterm, wrapped)  # [c]tc B
    step_formula = instance_formula(_inst("viii", s=cterm, A=wrapped))
    ci = pool.alloc(step_formula)
    i_cs = b.ax(cs_axiom(c, wrapped))
    i_viii = b.ax(_inst("viii", s=cterm, A=wrapped))
    i_tail = b.mp(i_cs, i_viii)  # [tail(c)][c]tc B
    i_cert = b.ax(cs_axiom(ci, step_formula))
    i_ix = b.ax(_inst("ix", w=Tail(cterm), s=JConst(ci), A=inner))
    glue = conj_intro_proof(b.formulas[i_tail], b.formulas[i_cert])
    at = b.import_proof(glue)
    at = b.mp(i_tail, at)
    at = b.mp(i_cert, at)
    return Ind(Tail(cterm), JConst(ci)), b.mp(at, i_ix)


def internalize_axiom(cs0: CS, inst: AxiomInstance) -> tuple[CS, JTerm, JProof]:
    """Ground term s and proof of [s]tc A for an axiom instance A.

    Base-system axioms are certified by the first constant outside Con(cs0);
    a constant axiom [c]tc B is certified by ind(tail(c), c_i).
    """
    if not validate_instance(inst):
        raise JLogicError(f"not an axiom instance: {inst!r}")
    b = ProofBuilder()
    pool = _ConstantPool(cs0)
    s, at = _internalize_axiom_into(b, pool, inst)
    return pool.freeze(), s, b.extract(at)


def internalize(p: JProof, cs0: CS | None = None) -> tuple[CS, JTerm, JProof]:
    """Ground term s and proof of [s]tc A from a proof of A.

    Axiom leaves are certified via the axiom-internalization step, then mp
    steps are folded through the application axiom for the second sort.
    """
    own = proof_cs(p)
    # substituted proofs may use (c, sigma A) while the ledger holds (c, A);
    # folding own in keeps the allocator clear of every constant either uses
    cs = own if cs0 is None else frozenset(cs0) | own
    b = ProofBuilder()
    pool = _ConstantPool(cs)
    terms: list[JTerm] = []
    concs: list[int] = []
    for step, f in zip(p.steps, p.formulas):
        if step[0] == "ax":
            if not validate_instance(step[1]):
                raise JLogicError(f"not an axiom instance: {step[1]!r}")
            s, at = _internalize_axiom_into(b, pool, step[1])
            terms.append(s)
            concs.append(at)
        else:
            _, i, j = step
            s = App2(terms[j], terms[i])
            major = p.formulas[j]
            i_vi = b.ax(_inst("vi", t=terms[j], s=terms[i], A=major.lhs, B=major.rhs))
            m1 = b.mp(concs[j], i_vi)
            concs.append(b.mp(concs[i], m1))
            terms.append(s)
    out = terms[-1]
    if not term_is_ground(out):
        raise JLogicError("internalization produced a non-ground term")
    return pool.freeze(), out, b.extract(concs[-1])


def lift(
    p: JProof,
    a_list,
    b_list,
    s_list,
    c_formula: Formula,
    z_list,
    cs0: CS | None = None,
) -> tuple[CS, JTerm, JProof]:
    """Lifting: from a proof of A1&..&An&B1&..&Bm&[s1]tc B1&..&[sm]tc Bm -> C
    produce h and a proof of [z1]A1&..&[zn]An&[s1]tc B1&..&[sm]tc Bm -> [h]C.

    With n = m = 0 the input proves C outright and the output proves [h]C.
    The term has the left-nested shape head(t).z1...zn.head(s1)...head(sm).
    tail(s1)...tail(sm).
    """
    a_list, b_list, s_list, z_list = map(list, (a_list, b_list, s_list, z_list))
    if len(b_list) != len(s_list) or len(a_list) != len(z_list):
        raise JLogicError("lift argument lists are misaligned")
    if any(not is_term1(z) for z in z_list) or any(not is_term2(s) for s in s_list):
        raise JLogicError("lift variables have the wrong sorts")
    brackets = [BracketTc(s, bf) for s, bf in zip(s_list, b_list)]
    parts = a_list + b_list + brackets
    expected = Imp(big_conj(parts), c_formula) if parts else c_formula
    if p.conclusion != expected:
        raise JLogicError(
            f"lift input concludes {render(p.conclusion)}, expected {render(expected)}"
        )

    curried = c_formula
    for f in reversed(parts):
        curried = Imp(f, curried)
    cur_proof = _curry(p, parts, c_formula) if parts else p
    cs, t, int_proof = internalize(cur_proof, cs0)

    d = Derivation()
    at = d.import_proof(int_proof)  # [t]tc curried
    at = d.mp(at, d.ax(_inst("vii", s=t, A=curried)))  # [head(t)] curried
    u: JTerm = Head(t)
    rest = curried
    hyp_formulas = [Bracket(z, a) for z, a in zip(z_list, a_list)] + brackets

    def apply_stage(arg_term: JTerm, arg_formula: Formula, arg_idx: int):
        nonlocal at, u, rest
        i_iv = d.ax(_inst("iv", h=u, w=arg_term, A=arg_formula, B=rest.rhs))
        m = d.mp(at, i_iv)
        at = d.mp(arg_idx, m)
        u = App1(u, arg_term)
        rest = rest.rhs

    for z, a in zip(z_list, a_list):
        apply_stage(z, a, d.hyp(Bracket(z, a)))
    for s, bf, br in zip(s_list, b_list, brackets):
        i_vii = d.ax(_inst("vii", s=s, A=bf))
        apply_stage(Head(s), bf, d.mp(d.hyp(br), i_vii))
    for s, bf, br in zip(s_list, b_list, brackets):
        i_viii = d.ax(_inst("viii", s=s, A=bf))
        apply_stage(Tail(s), br, d.mp(d.hyp(br), i_viii))

    for h in reversed(hyp_formulas):
        at = d.deduce(at, h)
    chain = d.extract(at)
    if not hyp_formulas:
        return cs, u, chain
    goal = Imp(big_conj(hyp_formulas), Bracket(u, c_formula))
    return cs, u, prop_mp(goal, [chain])


def _curry(p: JProof, parts, c_formula: Formula) -> JProof:
    """Turn a proof of (the conjunction of parts) -> C into one of the curried
    implication chain, assuming each part and rebuilding the conjunction."""
    d = Derivation()
    at_p = d.import_proof(p)
    conj_at = d.hyp(parts[-1])
    conj_f = parts[-1]
    for f in reversed(parts[:-1]):
        pair = big_conj([f, conj_f])
        g_at = d.import_proof(conj_intro_proof(f, conj_f))
        conj_at = d.mp(conj_at, d.mp(d.hyp(f), g_at))
        conj_f = pair
    at = d.mp(conj_at, at_p)
    for f in reversed(parts):
        at = d.deduce(at, f)
    return d.extract(at)


def induction_term(p: JProof, cs0: CS | None = None) -> tuple[CS, JTerm, JProof]:
    """Induction rule: from a proof of B -> [w](A & B) produce the term
    s1.ind(w, s0) and a proof of B -> [s1.ind(w, s0)]tc A."""
    match p.conclusion:
        case Imp(bf, Bracket(w, Imp(Imp(af, Imp(bf2, Bot())), Bot()))) if bf2 == bf:
            pass
        case _:
            raise JLogicError(
                f"induction input must prove B -> [w](A & B), got {render(p.conclusion)}"
            )
    bf = p.conclusion.lhs
    w = p.conclusion.rhs.term
    ab = p.conclusion.rhs.body  # A & B
    af = ab.lhs.lhs

    step = Imp(ab, Bracket(w, ab))  # A&B -> [w](A&B)
    q1 = prop_mp(step, [p])
    cs, s0, i0 = internalize(q1, cs0)
    b = ProofBuilder()
    at_p = b.import_proof(p)
    at_i0 = b.import_proof(i0)
    # B -> ([w](A&B) & [s0]tc (A&B -> [w](A&B)))
    pair = big_conj([Bracket(w, ab), BracketTc(s0, step)])
    at = mp_into(b, Imp(bf, pair), [at_p, at_i0])
    at_ix = b.ax(_inst("ix", w=w, s=s0, A=ab))
    at = mp_into(b, Imp(bf, BracketTc(Ind(w, s0), ab)), [at, at_ix])
    proj = Imp(ab, af)  # A&B -> A
    cs, s1, i1 = internalize(prop_proof(proj), cs)
    at_i1 = b.import_proof(i1)
    at_vi = b.ax(_inst("vi", t=s1, s=Ind(w, s0), A=ab, B=af))
    t = App2(s1, Ind(w, s0))
    at = mp_into(b, Imp(bf, BracketTc(t, af)), [at, at_i1, at_vi])
    return cs, t, b.extract(at)


# ---------------------------------------------------------------------------
# JSON serialization


def _param_to_json(value):
    if isinstance(value, int):
        return {"nat": value}
    if isinstance(value, JTerm):
        return {"term": render(value)}
    return {"formula": render(value)}


def _param_from_json(data):
    from .syntax import parse, parse_term

    if "nat" in data:
        return data["nat"]
    if "term" in data:
        return parse_term(data["term"])
    return parse(data["formula"])


def jproof_to_json(p: JProof) -> dict:
    steps = []
    for step in p.steps:
        if step[0] == "ax":
            inst = step[1]
            steps.append(
                {
                    "axiom": {
                        "schema": inst.schema,
                        "params": {k: _param_to_json(v) for k, v in inst.params},
                    }
                }
            )
        else:
            steps.append({"mp": [step[1], step[2]]})
    return {"kind": "jproof", "steps": steps, "conclusion": render(p.conclusion)}


def jproof_from_json(data: dict) -> JProof:
    steps: list[tuple] = []
    formulas: list[Formula] = []
    for entry in data["steps"]:
        if "axiom" in entry:
            inst = _inst(
                entry["axiom"]["schema"],
                **{k: _param_from_json(v) for k, v in entry["axiom"]["params"].items()},
            )
            steps.append(("ax", inst))
            formulas.append(instance_formula(inst))
        else:
            i, j = entry["mp"]
            steps.append(("mp", i, j))
            major = formulas[j]
            if not isinstance(major, Imp):
                raise JLogicError("mp cites a non-implication")
            formulas.append(major.rhs)
    return JProof(steps, formulas)
