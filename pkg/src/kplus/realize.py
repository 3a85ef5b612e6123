"""Realization: translate prepared cyclic proofs into justification logic.

``g_translate`` maps annotated modal formulas to justification formulas:
even (negative) labels become plain variables of the matching sort, odd
(positive) labels become sums of provisional variables bounded by g.
``realize_proof`` then eliminates all provisional variables by recursion on
the prepared proof, producing a finalizing substitution together with a
machine-checked injective Hilbert proof.  ``realize_theorem`` is the
end-to-end pipeline from a plain modal theorem to its normal realization.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .annotate import PreparedProof, annotate, prepare
from .engine import (
    CyclicProof,
    ProofNode,
    Provable,
    decide,
    modal_premise_context,
)
from .jlogic import (
    CS,
    axiom_proof,
    JLogicError,
    JProof,
    JSubstitution,
    ProofBuilder,
    _inst,
    check_proof,
    identity_substitution,
    induction_term,
    lift,
    mp_into,
    prop_mp,
    prop_proof,
    substitute_proof,
)
from .syntax import (
    BOT,
    Bot,
    Box,
    BoxPlus,
    Bracket,
    BracketTc,
    FocusedSequent,
    Formula,
    Imp,
    PVar1,
    PVar2,
    Sum1,
    Sum2,
    Var,
    Var1,
    Var2,
    big_conj,
    big_disj,
    conj,
    erase,
    focused,
    forgetful,
    formula_provisional_free,
    is_term1,
    is_term2,
    neg,
    parity_ok,
    render,
)


class RealizeError(Exception):
    pass


@dataclass
class GContext:
    """Bounding function (finitely supported) with fixed sum ordering."""

    g: dict[int, int]

    def __call__(self, k: int) -> int:
        return self.g.get(k, 0)


@dataclass
class RealizationResult:
    theta: JSubstitution
    proof: JProof
    realized: Formula
    audit: list[JProof] = field(default_factory=list)


# ---------------------------------------------------------------------------
# The g-translation


def _sum1(members) -> Formula:
    out = members[0]
    for t in members[1:]:
        out = Sum1(out, t)
    return out


def _sum2(members) -> Formula:
    out = members[0]
    for t in members[1:]:
        out = Sum2(out, t)
    return out


def g_translate(a: Formula, g: GContext | dict, positive: bool | None = None) -> Formula:
    """Translate an annotated formula; the labels drive the clauses.

    The formula must be parity-consistent: as the given polarity when one is
    passed, as either polarity otherwise.
    """
    if positive is None:
        if not (parity_ok(a, True) or parity_ok(a, False)):
            raise RealizeError(f"formula is not parity-consistent: {render(a)}")
    elif not parity_ok(a, positive):
        raise RealizeError(f"formula is not parity-consistent: {render(a)}")
    return _gtrans(a, g)


def _gtrans(a: Formula, g: GContext | dict) -> Formula:
    """Raw translation without the parity precondition (internal shapes mix
    polarities, e.g. the region formulas)."""
    if isinstance(g, dict):
        g = GContext(g)

    def go(f: Formula) -> Formula:
        match f:
            case Var() | Bot():
                return f
            case Imp(x, y):
                return Imp(go(x), go(y))
            case Box(body, label):
                if label is None:
                    raise RealizeError("unannotated box occurrence")
                if label % 2 == 0:
                    return Bracket(Var1(label), go(body))
                bound = g(label - 1)
                if bound == 0:
                    return Bracket(Var1(label), go(body))
                return Bracket(
                    _sum1([PVar1(label, i) for i in range(bound)]), go(body)
                )
            case BoxPlus(body, label):
                if label is None:
                    raise RealizeError("unannotated boxplus occurrence")
                if label % 2 == 0:
                    return BracketTc(Var2(label), go(body))
                bound = g(label)
                if bound == 0:
                    return BracketTc(Var2(label), go(body))
                return BracketTc(
                    _sum2([PVar2(label, j) for j in range(bound)]), go(body)
                )
        raise RealizeError(f"cannot translate {f!r}")

    return go(a)


def sequent_formula(fs: FocusedSequent) -> Formula:
    """The node formula: conjunction of the antecedent implies disjunction of
    the succedent, with empty chains reading as top and bottom."""
    return Imp(big_conj(fs.ante), big_disj(fs.succ))


# ---------------------------------------------------------------------------
# Re-rootable view of a prepared proof


@dataclass
class _View:
    nodes: list[ProofNode]
    backlinks: dict[int, int]
    occ: dict[int, int]
    root: int


def _view(prepared: PreparedProof) -> _View:
    p = prepared.proof
    return _View(list(p.nodes), dict(p.backlinks), dict(prepared.occ), p.root)


def _subtree(v: _View, nid: int) -> _View:
    order: list[int] = []
    stack = [nid]
    while stack:
        i = stack.pop()
        order.append(i)
        stack.extend(reversed(v.nodes[i].children))
    pos = {i: k for k, i in enumerate(order)}
    nodes = [
        ProofNode(
            v.nodes[i].seq,
            v.nodes[i].rule,
            v.nodes[i].principal,
            tuple(pos[c] for c in v.nodes[i].children),
        )
        for i in order
    ]
    backlinks = {}
    for leaf, target in v.backlinks.items():
        if leaf in pos:
            if target not in pos:
                raise RealizeError("backlink escapes the extracted subtree")
            backlinks[pos[leaf]] = pos[target]
    occ = {pos[i]: k for i, k in v.occ.items() if i in pos}
    return _View(nodes, backlinks, occ, 0)


def _replace_root_seq(v: _View, seq: FocusedSequent) -> _View:
    nodes = list(v.nodes)
    old = nodes[v.root]
    nodes[v.root] = ProofNode(seq, old.rule, old.principal, old.children)
    return _View(nodes, dict(v.backlinks), dict(v.occ), v.root)


def _modal_parts(ante):
    """Dedup'd box bodies with their smallest label, same for boxplus."""
    sigma: dict[Formula, int] = {}
    pi: dict[Formula, int] = {}
    for f in ante:
        if isinstance(f, Box):
            if f.body not in sigma or f.label < sigma[f.body]:
                sigma[f.body] = f.label
        elif isinstance(f, BoxPlus):
            if f.body not in pi or f.label < pi[f.body]:
                pi[f.body] = f.label
    sigma_list = sorted(sigma.items(), key=lambda kv: kv[1])
    pi_list = sorted(pi.items(), key=lambda kv: kv[1])
    return sigma_list, pi_list


# ---------------------------------------------------------------------------
# Rank within a constant-focus region


def region_nodes(v: _View, gamma: Formula) -> list[int]:
    """Nodes reachable from the root through constant focus gamma."""
    if v.nodes[v.root].seq.focus != gamma:
        return []
    out: list[int] = []
    stack = [v.root]
    while stack:
        i = stack.pop()
        out.append(i)
        for c in reversed(v.nodes[i].children):
            if v.nodes[c].seq.focus == gamma:
                stack.append(c)
    return sorted(out)


def region_ranks(v: _View, region: list[int]) -> dict[int, int]:
    """Rank per region node: 0 at modal conclusions and axiom leaves, +1
    through imp-right, max+1 through imp-left, target rank +1 at back-links."""
    rset = set(region)
    memo: dict[int, int] = {}

    def rk(b: int, pending: frozenset) -> int:
        if b in memo:
            return memo[b]
        if b in pending:
            raise RealizeError("cyclic rank dependency; malformed region")
        node = v.nodes[b]
        pending = pending | {b}
        if node.rule in ("box", "boxplus"):
            out = 0
        elif node.rule in ("ax-var", "ax-bot"):
            out = 0
        elif node.rule is None:
            out = rk(v.backlinks[b], pending) + 1
        elif node.rule == "imp-right":
            out = rk(node.children[0], pending) + 1
        elif node.rule == "imp-left":
            out = max(rk(c, pending) for c in node.children) + 1
        else:
            raise RealizeError(f"unexpected rule {node.rule} in region")
        memo[b] = out
        return out

    for b in region:
        rk(b, frozenset())
    return {b: memo[b] for b in region}


def rank(prepared: PreparedProof, node: int, gamma: Formula) -> int:
    v = _view(prepared)
    region = region_nodes(v, gamma)
    if node not in region:
        raise RealizeError(f"node {node} is outside the focus region")
    return region_ranks(v, region)[node]


# ---------------------------------------------------------------------------
# Sum weakening helpers (axiom (v) / axiom (x) chains)


def _sum_weaken(members, k: int, body: Formula, second_sort: bool) -> JProof:
    """Proof of [members[k]] body -> [fold-left sum of members] body."""
    bracket = BracketTc if second_sort else Bracket
    mk_sum = Sum2 if second_sort else Sum1
    schema = "x" if second_sort else "v"

    def ax(h, w):
        if second_sort:
            return axiom_proof(_inst(schema, t=h, s=w, A=body))
        return axiom_proof(_inst(schema, h=h, w=w, A=body))

    acc_term = members[0]
    if k == 0:
        proof = prop_proof(Imp(bracket(acc_term, body), bracket(acc_term, body)))
    else:
        proof = None
    for j, t in enumerate(members[1:], start=1):
        new_term = mk_sum(acc_term, t)
        inst = ax(acc_term, t)
        if j == k:
            # inject on the right disjunct
            proof = prop_mp(Imp(bracket(t, body), bracket(new_term, body)), [inst])
        elif proof is not None:
            step = prop_mp(
                Imp(bracket(acc_term, body), bracket(new_term, body)), [inst]
            )
            proof = prop_mp(
                Imp(proof.conclusion.lhs, bracket(new_term, body)), [proof, step]
            )
        acc_term = new_term
    return proof


def sum_of(members, second_sort: bool):
    return (_sum2 if second_sort else _sum1)(members)


# ---------------------------------------------------------------------------
# Disjunction plumbing


def _disj_parts(f: Formula, count: int) -> list[Formula]:
    parts = []
    cur = f
    for _ in range(count - 1):
        parts.append(cur.lhs.lhs)  # (d -> bot) -> rest
        cur = cur.rhs
    parts.append(cur)
    return parts


def _disj_inject(disj: Formula, parts: list[Formula], k: int) -> JProof:
    """Proof of parts[k] -> disj for a right-nested disjunction."""
    if len(parts) == 1:
        return prop_proof(Imp(parts[0], disj))
    rest = big_disj(parts[1:])
    if k == 0:
        return prop_proof(Imp(parts[0], disj), [])
    sub = _disj_inject(rest, parts[1:], k - 1)
    return prop_mp(Imp(parts[k], disj), [sub])


# ---------------------------------------------------------------------------
# The main recursion


class _Realizer:
    def __init__(self, g: GContext, cs0: CS):
        self.g = g
        self.cs: CS = cs0
        self.audit: list[JProof] = []

    def fg(self, a: Formula) -> Formula:
        return _gtrans(a, self.g)

    def node_formula(self, v: _View, i: int) -> Formula:
        return self.fg(sequent_formula(v.nodes[i].seq))

    def run(self, v: _View) -> tuple[JSubstitution, JProof]:
        root = v.nodes[v.root]
        if root.rule in ("ax-var", "ax-bot"):
            return identity_substitution(), prop_proof(self.node_formula(v, v.root))
        if any(t == v.root for t in v.backlinks.values()):
            if not isinstance(root.seq.focus, BoxPlus):
                raise RealizeError("backlink to a root without boxplus focus")
            return self.case_focus(v, root.seq.focus)
        if root.rule == "imp-right":
            return self.case_imp_right(v)
        if root.rule == "imp-left":
            return self.case_imp_left(v)
        if root.rule == "box":
            return self.case_box(v)
        if root.rule == "boxplus":
            refocused = _replace_root_seq(
                v, focused(root.seq.ante, root.seq.succ, root.principal)
            )
            return self.case_focus(refocused, root.principal)
        raise RealizeError(f"cannot realize root rule {root.rule}")

    # -- structural cases ------------------------------------------------------

    def case_imp_right(self, v: _View):
        theta, sub = self.run(_subtree(v, v.nodes[v.root].children[0]))
        goal = theta.formula(self.node_formula(v, v.root))
        return theta, prop_mp(goal, [sub])

    def case_imp_left(self, v: _View):
        root = v.nodes[v.root]
        theta1, p1 = self.run(_subtree(v, root.children[0]))
        theta2, p2 = self.run(_subtree(v, root.children[1]))
        theta = theta1.union(theta2)
        q1 = substitute_proof(p1, theta2)
        q2 = substitute_proof(p2, theta1)
        goal = theta.formula(self.node_formula(v, v.root))
        return theta, prop_mp(goal, [q1, q2])

    def case_box(self, v: _View):
        root = v.nodes[v.root]
        theta1, p1 = self.run(_subtree(v, root.children[0]))
        h, p_lift = self.lift_premise(v, theta1, p1, conclusion=None)
        m = root.principal.label
        x_occ = PVar1(m, v.occ[v.root])
        theta = theta1.union(JSubstitution({x_occ: h}))
        p_lift = substitute_proof(p_lift, JSubstitution({x_occ: h}))
        members = [theta.term(PVar1(m, i)) for i in range(self.g(m - 1))]
        body = theta.formula(self.fg(root.principal.body))
        p_sum = _sum_weaken(members, v.occ[v.root], body, second_sort=False)
        goal = theta.formula(self.node_formula(v, v.root))
        return theta, prop_mp(goal, [p_lift, p_sum])

    def lift_premise(self, v: _View, theta: JSubstitution, premise_proof: JProof, conclusion):
        """Shared lifting step of the box case and the focused boxplus case.

        The premise proof concludes theta(F^g) of a modal-rule premise; the
        result proves [x_i1]A1 & .. & [y_j1]tc B1 & .. -> [h] C where C is
        the premise's own consequent (or the supplied conclusion formula).
        """
        root = v.nodes[v.root]
        sigma_list, pi_list = _modal_parts(root.seq.ante)
        a_list = [theta.formula(self.fg(a)) for a, _ in sigma_list]
        z_list = [Var1(label) for _, label in sigma_list]
        b_list = [theta.formula(self.fg(b)) for b, _ in pi_list]
        s_list = [Var2(label) for _, label in pi_list]
        brackets = [BracketTc(s, b) for s, b in zip(s_list, b_list)]
        if conclusion is None:
            conclusion = theta.formula(self.fg(v.nodes[root.children[0]].seq.succ[0]))
        parts = a_list + b_list + brackets
        grouped = Imp(big_conj(parts), conclusion) if parts else conclusion
        p_grouped = prop_mp(grouped, [premise_proof])
        self.cs, h, p_lift = lift(
            p_grouped, a_list, b_list, s_list, conclusion, z_list, self.cs
        )
        return h, p_lift

    # -- the focused case -------------------------------------------------------

    def case_focus(self, v: _View, gamma: Formula):
        n = gamma.label
        d_formula = gamma.body
        region = region_nodes(v, gamma)
        ranks = region_ranks(v, region)
        dg = self.fg(d_formula)

        g_ann: dict[int, Formula] = {}
        for b in region:
            seq = v.nodes[b].seq
            if gamma not in seq.succ:
                raise RealizeError("region sequent lost its focus formula")
            delta = list(seq.succ)
            delta.remove(gamma)
            g_ann[b] = conj(big_conj(seq.ante), neg(big_disj(delta)))

        h_parts: list[Formula] = []
        for b in region:  # ascending node order, duplicates dropped
            f = g_ann[b]
            if f not in h_parts:
                h_parts.append(f)
        h_ann = big_disj(h_parts)
        hg = self.fg(h_ann)
        dh = conj(dg, hg)

        sigma_map: dict = {}
        base_proof: dict[int, JProof] = {}
        o_of: dict[int, object] = {}
        for a in region:
            if ranks[a] != 0:
                continue
            sigma_a, o_a, pf = self.rank_zero(v, a, gamma, g_ann[a], h_parts, dg, hg, dh)
            for var, term in sigma_a.mapping.items():
                if var in sigma_map:
                    raise RealizeError("rank-zero substitution domains overlap")
                sigma_map[var] = term
            o_of[a] = o_a
            base_proof[a] = pf
        sigma = JSubstitution(sigma_map)

        bld = ProofBuilder()
        v_term: dict[int, object] = {}
        v_at: dict[int, int] = {}
        sdh = sigma.formula(dh)

        def chain(b: int) -> int:
            """Certificate sigma(G_b^g) -> [v_b](sigma D & sigma H), lazily."""
            if b in v_at:
                return v_at[b]
            node = v.nodes[b]
            if ranks[b] == 0:
                v_term[b] = o_of[b]
                at = bld.import_proof(substitute_proof(base_proof[b], sigma))
            elif node.rule is None:  # backlinked leaf
                at = chain(v.backlinks[b])
                v_term[b] = v_term[v.backlinks[b]]
            elif node.rule == "imp-right":
                child = node.children[0]
                sub = chain(child)
                v_term[b] = v_term[child]
                goal = Imp(sigma.formula(self.fg(g_ann[b])), Bracket(v_term[b], sdh))
                at = mp_into(bld, goal, [sub])
            elif node.rule == "imp-left":
                c1, c2 = node.children
                s1, s2 = chain(c1), chain(c2)
                v_term[b] = Sum1(v_term[c1], v_term[c2])
                inst = bld.ax(_inst("v", h=v_term[c1], w=v_term[c2], A=sdh))
                goal = Imp(sigma.formula(self.fg(g_ann[b])), Bracket(v_term[b], sdh))
                at = mp_into(bld, goal, [s1, s2, inst])
            else:
                raise RealizeError(f"unranked rule {node.rule} in region")
            v_at[b] = at
            return at

        # one representative per distinct region formula; the packaged sum
        # ranges over those, which is all the disjunction elimination needs
        reps = [next(b for b in region if g_ann[b] == f) for f in h_parts]
        for b in reps:
            chain(b)
        members = [v_term[b] for b in reps]
        v_sum = sum_of(members, second_sort=False)
        part_at: list[int] = []
        translated_parts = [sigma.formula(self.fg(p)) for p in h_parts]
        for k, (part, b) in enumerate(zip(translated_parts, reps)):
            weaken = bld.import_proof(_sum_weaken(members, k, sdh, second_sort=False))
            part_at.append(
                mp_into(bld, Imp(part, Bracket(v_sum, sdh)), [v_at[b], weaken])
            )
        target = Bracket(v_sum, sdh)
        at = part_at[-1]
        for i in range(len(translated_parts) - 2, -1, -1):
            at = mp_into(
                bld,
                Imp(big_disj(translated_parts[i:]), target),
                [part_at[i], at],
            )
        p_h = bld.extract(at)
        # p_h : sigma(H^g) -> [v](sigma(D^g) & sigma(H^g))
        self.audit.append(p_h)
        if check_proof(p_h).ok is False:
            raise RealizeError("internal certificate failed to check")

        self.cs, t, p_t = induction_term(p_h, self.cs)
        self.audit.append(p_t)
        if check_proof(p_t).ok is False:
            raise RealizeError("internal certificate failed to check")

        j = self._class_label(v, region, gamma)
        y_occ = PVar2(n, j)
        if y_occ in sigma.domain():
            raise RealizeError("focus provisional variable already bound")
        theta = sigma.union(JSubstitution({y_occ: t}))
        p_final = substitute_proof(p_t, JSubstitution({y_occ: t}))
        # p_final : theta(H^g) -> [t]tc theta(D^g)
        sum_members = [theta.term(PVar2(n, jp)) for jp in range(self.g(n))]
        p_x = _sum_weaken(sum_members, j, theta.formula(dg), second_sort=True)
        p_inj = _disj_inject(
            theta.formula(hg),
            [theta.formula(self.fg(p)) for p in h_parts],
            h_parts.index(g_ann[v.root]),
        )
        goal = theta.formula(self.node_formula(v, v.root))
        return theta, prop_mp(goal, [p_inj, p_final, p_x])

    def rank_zero(self, v: _View, a: int, gamma, g_a: Formula, h_parts, dg, hg, dh):
        """The substitution, term and certificate of one rank-zero node."""
        node = v.nodes[a]
        if node.rule in ("ax-var", "ax-bot"):
            goal = Imp(self.fg(g_a), Bracket(Var1(0), dh))
            return identity_substitution(), Var1(0), prop_proof(goal)
        if node.rule == "box" or (node.rule == "boxplus" and node.principal != gamma):
            if a == v.root:
                raise RealizeError("focus region root cannot shed its own focus")
            seq = node.seq
            succ = list(seq.succ)
            succ.remove(gamma)
            sub = _replace_root_seq(_subtree(v, a), focused(seq.ante, succ, None))
            sigma_a, p_sub = self.run(sub)
            goal = Imp(
                sigma_a.formula(self.fg(g_a)), Bracket(Var1(0), sigma_a.formula(dh))
            )
            return sigma_a, Var1(0), prop_mp(goal, [p_sub])
        if node.rule == "boxplus" and node.principal == gamma:
            sigma_a, p_sub = self.run(_subtree(v, node.children[0]))
            sdh = sigma_a.formula(dh)
            sigma_list, pi_list = _modal_parts(node.seq.ante)
            a_list = [sigma_a.formula(self.fg(x)) for x, _ in sigma_list]
            z_list = [Var1(label) for _, label in sigma_list]
            b_list = [sigma_a.formula(self.fg(x)) for x, _ in pi_list]
            s_list = [Var2(label) for _, label in pi_list]
            brackets = [BracketTc(s, b) for s, b in zip(s_list, b_list)]
            parts = a_list + b_list + brackets
            grouped_conj = big_conj(parts)
            # the right premise's region formula is one of H's disjuncts
            right_g = conj(big_conj(v.nodes[node.children[1]].seq.ante), neg(BOT))
            p_d = prop_mp(
                Imp(grouped_conj, sigma_a.formula(dg)) if parts else sigma_a.formula(dg),
                [p_sub],
            )
            p_grp = prop_proof(
                Imp(grouped_conj, sigma_a.formula(self.fg(right_g)))
                if parts
                else sigma_a.formula(self.fg(right_g))
            )
            p_inj = _disj_inject(
                sigma_a.formula(hg),
                [sigma_a.formula(self.fg(p)) for p in h_parts],
                h_parts.index(right_g),
            )
            target = Imp(grouped_conj, sdh) if parts else sdh
            p_dh = prop_mp(target, [p_d, p_grp, p_inj])
            self.cs, h, p_lift = lift(
                p_dh, a_list, b_list, s_list, sdh, z_list, self.cs
            )
            goal = Imp(sigma_a.formula(self.fg(g_a)), Bracket(h, sdh))
            return sigma_a, h, prop_mp(goal, [p_lift])
        raise RealizeError(f"rank-zero node with rule {node.rule}")

    def _class_label(self, v: _View, region, gamma) -> int:
        labels = {
            v.occ[b]
            for b in region
            if v.nodes[b].rule == "boxplus" and v.nodes[b].principal == gamma
        }
        if len(labels) != 1:
            raise RealizeError(
                f"focused boxplus applications carry labels {labels}, expected one"
            )
        return labels.pop()


# ---------------------------------------------------------------------------
# Public operations


def realize_proof(prepared: PreparedProof, g: GContext | dict, cs0: CS = frozenset()) -> RealizationResult:
    """Run the main-lemma recursion over a prepared proof.

    Returns a finalizing substitution adequate for the proof and an
    injective Hilbert proof of its substituted root translation.
    """
    if isinstance(g, dict):
        g = GContext(g)
    realizer = _Realizer(g, cs0)
    view = _view(prepared)
    theta, proof = realizer.run(view)
    realized = theta.formula(
        _gtrans(sequent_formula(view.nodes[view.root].seq), g)
    )
    if proof.conclusion != realized:
        raise RealizeError("proof concludes something other than the translation")
    report = check_proof(proof)
    if not report.ok:
        raise RealizeError(f"emitted proof does not check: {report.diagnostics[:3]}")
    if not report.injective:
        raise RealizeError("emitted proof is not injective")
    _check_adequate(theta, prepared)
    return RealizationResult(theta, proof, realized, realizer.audit)


def _check_adequate(theta: JSubstitution, prepared: PreparedProof):
    if not theta.is_finalizing():
        raise RealizeError("substitution is not finalizing")
    wanted = set()
    for i, k in prepared.occ.items():
        node = prepared.proof.nodes[i]
        if node.rule == "box":
            wanted.add(PVar1(node.principal.label, k))
        else:
            wanted.add(PVar2(node.principal.label, k))
    if theta.domain() != wanted:
        raise RealizeError(
            f"substitution domain {theta.domain()} does not match the rules {wanted}"
        )


class NotATheorem(RealizeError):
    pass


def realize_theorem(a: Formula, budget: int = 10**6) -> RealizationResult:
    """Decide, annotate, prepare and realize: a normal realization of a
    theorem together with its injective justification proof."""
    from .syntax import sequent

    verdict = decide(sequent([], [a]), budget)
    if not isinstance(verdict, Provable):
        raise NotATheorem(f"not a theorem: {render(a)}")
    annotated = annotate(verdict.proof)
    prepared, g = prepare(annotated)
    result = realize_proof(prepared, g)
    b_ann = prepared.proof.nodes[prepared.proof.root].seq.succ[0]
    realized = result.theta.formula(g_translate(b_ann, g))
    proof = prop_mp(realized, [result.proof])
    if forgetful(realized) != a:
        raise RealizeError("forgetful translation does not return the input")
    if not formula_provisional_free(realized):
        raise RealizeError("provisional variables survived realization")
    _check_normal(realized, a)
    report = check_proof(proof)
    if not (report.ok and report.injective):
        raise RealizeError("final proof failed the kernel check")
    return RealizationResult(result.theta, proof, realized, result.audit)


def _check_normal(realized: Formula, a: Formula):
    """Normality: distinct negative modal occurrences became distinct
    variables of the matching sort."""
    seen1: list = []
    seen2: list = []

    def go(b: Formula, f: Formula, positive: bool):
        match (b, f):
            case (Var(i), Var(j)) if i == j:
                return
            case (Bot(), Bot()):
                return
            case (Imp(b1, b2), Imp(f1, f2)):
                go(b1, f1, not positive)
                go(b2, f2, positive)
                return
            case (Bracket(t, b1), Box(f1, _)):
                if not is_term1(t):
                    raise RealizeError("first-sort slot holds a second-sort term")
                if not positive:
                    if not isinstance(t, Var1) or t in seen1:
                        raise RealizeError("negative box not realized by a fresh variable")
                    seen1.append(t)
                go(b1, f1, positive)
                return
            case (BracketTc(t, b1), BoxPlus(f1, _)):
                if not is_term2(t):
                    raise RealizeError("second-sort slot holds a first-sort term")
                if not positive:
                    if not isinstance(t, Var2) or t in seen2:
                        raise RealizeError("negative boxplus not realized by a fresh variable")
                    seen2.append(t)
                go(b1, f1, positive)
                return
        raise RealizeError(f"{render(b)} is not a realization of {render(f)}")

    go(realized, a, True)
