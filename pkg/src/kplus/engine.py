"""Decision procedure for the transitive-closure sequent calculus.

``decide`` either proves a sequent with a finite cyclic proof (a tree with
back-links whose cycles witness boxplus unfolding) or refutes it with a
refutation tree from which a countermodel can be read off.  Independent
validators for both artifact kinds live here as well.

Provability is computed by a focused search: sequents carry a focus that is
either the mark ``*`` or a boxplus succedent formula.  Entering the right
premise of a boxplus rule focuses its principal formula; a repetition of a
focused right premise along the current constant-focus path is discharged by
a back-link.  Search results for self-contained calls (focus ``*``, or a
fresh focus session entry) are memoized; verdicts that were cut off by an
in-progress ancestor call are never cached.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field

from .syntax import (
    BOT,
    Bot,
    Box,
    BoxPlus,
    FocusedSequent,
    Formula,
    Imp,
    Sequent,
    Var,
    dedup,
    focused,
    focused_ok,
    is_annotated,
    is_plain,
    mset,
    mset_add,
    mset_remove,
    parity_ok,
    parse,
    parse_sequent,
    render,
    sequent,
)

sys.setrecursionlimit(max(sys.getrecursionlimit(), 100_000))


class EngineError(Exception):
    pass


class BudgetExceeded(Exception):
    """Search exceeded the configured node budget; distinct from both verdicts."""


# ---------------------------------------------------------------------------
# Proof objects


@dataclass(frozen=True)
class ProofNode:
    seq: FocusedSequent
    rule: str | None  # ax-var ax-bot imp-left imp-right box boxplus; None = backlink leaf
    principal: Formula | None
    children: tuple[int, ...]


@dataclass
class CyclicProof:
    nodes: list[ProofNode]
    root: int
    backlinks: dict[int, int]


@dataclass(frozen=True)
class RNode:
    seq: Sequent
    rule: str | None  # imp-right imp-left imp-left-1 imp-left-2 crossbox; None = saturated leaf
    principal: Formula | None
    children: tuple[int, ...]
    certs: tuple[tuple[Sequent, CyclicProof], ...] = ()


@dataclass
class RefutationTree:
    nodes: list[RNode]
    root: int


@dataclass
class SaturationTree:
    nodes: list[RNode]
    root: int


@dataclass(frozen=True)
class Provable:
    proof: CyclicProof


@dataclass(frozen=True)
class Refutable:
    refutation: RefutationTree


def modal_premise_context(ante) -> tuple[Formula, ...]:
    """Deduplicated premise context of the modal rules: Sigma, Pi, boxplus Pi."""
    parts = [f.body for f in ante if isinstance(f, (Box, BoxPlus))]
    parts += [f for f in ante if isinstance(f, BoxPlus)]
    return dedup(mset(parts))


def _axiom_rule(fs: FocusedSequent):
    if any(isinstance(f, Bot) for f in fs.ante):
        return "ax-bot", BOT
    succ_vars = {f for f in fs.succ if isinstance(f, Var)}
    for f in fs.ante:
        if isinstance(f, Var) and f in succ_vars:
            return "ax-var", f
    return None


def _leftmost_imp(ms) -> Formula | None:
    for f in ms:
        if isinstance(f, Imp):
            return f
    return None


# ---------------------------------------------------------------------------
# Search


class Engine:
    def __init__(self, budget: int = 10**6):
        self.budget = budget
        self.spent = 0
        self._memo: dict[FocusedSequent, tuple | None] = {}
        self._onstack: set[FocusedSequent] = set()

    # -- provability ---------------------------------------------------------

    def provable(self, s: Sequent) -> bool:
        tree, _ = self._star(focused(s.ante, s.succ))
        return tree is not None

    def decide(self, s: Sequent):
        """Provable(cyclic proof) or Refutable(refutation tree)."""
        root = focused(s.ante, s.succ)
        tree, _ = self._star(root)
        if tree is not None:
            return Provable(_flatten(tree))
        return Refutable(_RefutationBuilder(self).build(s))

    # -- memoized self-contained calls ----------------------------------------

    def _star(self, fs: FocusedSequent):
        return self._cached(fs, frozenset())

    def _entry(self, fs: FocusedSequent):
        return self._cached(fs, frozenset({fs}))

    def _cached(self, fs: FocusedSequent, hyps: frozenset):
        if fs in self._memo:
            return self._memo[fs], frozenset()
        if fs in self._onstack:
            return None, frozenset({fs})
        self._onstack.add(fs)
        try:
            tree, blame = self._expand(fs, hyps)
        finally:
            self._onstack.discard(fs)
        blame = blame - {fs}
        if tree is not None or not blame:
            self._memo[fs] = tree
        return tree, blame

    # -- one expansion step ----------------------------------------------------

    def _expand(self, fs: FocusedSequent, hyps: frozenset):
        self.spent += 1
        if self.spent > self.budget:
            raise BudgetExceeded(f"node budget {self.budget} exhausted")

        ax = _axiom_rule(fs)
        if ax is not None:
            rule, principal = ax
            return ("node", fs, rule, principal, ()), frozenset()

        def sub(child: FocusedSequent, hyps2: frozenset):
            if child.focus is None:
                return self._star(child)
            if child in self._memo and self._memo[child] is not None:
                return self._memo[child], frozenset()
            return self._expand(child, hyps2)

        f = _leftmost_imp(fs.ante)
        if f is not None:
            left = focused(mset_add(mset_remove(fs.ante, f), f.rhs), fs.succ, fs.focus)
            right = focused(mset_remove(fs.ante, f), mset_add(fs.succ, f.lhs), fs.focus)
            t1, b1 = sub(left, hyps)
            if t1 is None:
                return None, b1
            t2, b2 = sub(right, hyps)
            if t2 is None:
                return None, b1 | b2
            return ("node", fs, "imp-left", f, (t1, t2)), b1 | b2

        f = _leftmost_imp(fs.succ)
        if f is not None:
            child = focused(
                mset_add(fs.ante, f.lhs),
                mset_add(mset_remove(fs.succ, f), f.rhs),
                fs.focus,
            )
            t, b = sub(child, hyps)
            if t is None:
                return None, b
            return ("node", fs, "imp-right", f, (t,)), b

        # saturated: try modal rules, leftmost box principal first
        context = modal_premise_context(fs.ante)
        blame: frozenset = frozenset()
        for f in dedup(fs.succ):
            if isinstance(f, Box):
                t, b = self._star(focused(context, (f.body,)))
                blame |= b
                if t is not None:
                    return ("node", fs, "box", f, (t,)), blame
        for f in dedup(fs.succ):
            if isinstance(f, BoxPlus):
                lt, b = self._star(focused(context, (f.body,)))
                blame |= b
                if lt is None:
                    continue
                right = focused(context, (f,), f)
                if f == fs.focus and right in hyps:
                    rt: tuple = ("link", right)
                    b2: frozenset = frozenset()
                elif f == fs.focus:
                    rt, b2 = sub(right, hyps | {right})
                else:
                    rt, b2 = self._entry(right)
                blame |= b2
                if rt is not None:
                    return ("node", fs, "boxplus", f, (lt, rt)), blame
        return None, blame


def _flatten(ptree) -> CyclicProof:
    nodes: list[ProofNode] = []
    backlinks: dict[int, int] = {}

    def walk(pt, path):
        if pt[0] == "link":
            fs = pt[1]
            nid = len(nodes)
            nodes.append(ProofNode(fs, None, None, ()))
            for ancestor_fs, ancestor_id in reversed(path):
                if ancestor_fs == fs:
                    backlinks[nid] = ancestor_id
                    return nid
            raise EngineError("dangling backlink during reconstruction")
        _, fs, rule, principal, children = pt
        nid = len(nodes)
        nodes.append(ProofNode(fs, rule, principal, ()))
        child_ids = tuple(walk(c, path + [(fs, nid)]) for c in children)
        nodes[nid] = ProofNode(fs, rule, principal, child_ids)
        return nid

    walk(ptree, [])
    return CyclicProof(nodes, 0, backlinks)


def decide(s: Sequent, budget: int = 10**6):
    return Engine(budget).decide(s)


# ---------------------------------------------------------------------------
# Cyclic proof checking


def _expected_children(node: ProofNode) -> tuple[FocusedSequent, ...] | None:
    fs, rule, f = node.seq, node.rule, node.principal
    if rule in ("ax-var", "ax-bot"):
        return ()
    if rule == "imp-right":
        if not isinstance(f, Imp) or f not in fs.succ:
            return None
        return (
            focused(mset_add(fs.ante, f.lhs), mset_add(mset_remove(fs.succ, f), f.rhs), fs.focus),
        )
    if rule == "imp-left":
        if not isinstance(f, Imp) or f not in fs.ante:
            return None
        return (
            focused(mset_add(mset_remove(fs.ante, f), f.rhs), fs.succ, fs.focus),
            focused(mset_remove(fs.ante, f), mset_add(fs.succ, f.lhs), fs.focus),
        )
    context = modal_premise_context(fs.ante)
    if rule == "box":
        if not isinstance(f, Box) or f not in fs.succ:
            return None
        return (focused(context, (f.body,)),)
    if rule == "boxplus":
        if not isinstance(f, BoxPlus) or f not in fs.succ:
            return None
        return (focused(context, (f.body,)), focused(context, (f,), f))
    return None


def check_cyclic(proof: CyclicProof, diagnostics: list[str] | None = None) -> bool:
    """All cyclic-proof conditions: rule shapes, focus bookkeeping, back-links."""
    diags = diagnostics if diagnostics is not None else []
    nodes = proof.nodes

    parent: dict[int, int] = {}
    seen: set[int] = set()
    stack = [proof.root]
    while stack:
        i = stack.pop()
        if i in seen:
            diags.append(f"node {i} reached twice; not a tree")
            return False
        seen.add(i)
        for c in nodes[i].children:
            if not 0 <= c < len(nodes):
                diags.append(f"node {i} has dangling child {c}")
                return False
            parent[c] = i
            stack.append(c)
    if len(seen) != len(nodes):
        diags.append("unreachable nodes present")
        return False

    annotated = all(
        is_annotated(f) for n in nodes for f in n.seq.ante + n.seq.succ
    )
    plain = all(is_plain(f) for n in nodes for f in n.seq.ante + n.seq.succ)
    if not annotated and not plain:
        diags.append("sequents mix labelled and unlabelled formulas")
        return False

    for i, node in enumerate(nodes):
        if not focused_ok(node.seq):
            diags.append(f"node {i}: focus is not a boxplus succedent member")
            return False
        if annotated and not (
            all(parity_ok(f, False) for f in node.seq.ante)
            and all(parity_ok(f, True) for f in node.seq.succ)
        ):
            diags.append(f"node {i}: parity rule violated")
            return False
        if node.rule is None:
            if i not in proof.backlinks:
                diags.append(f"node {i}: leaf is neither an axiom nor backlinked")
                return False
            continue
        if node.rule == "ax-var":
            if not (
                isinstance(node.principal, Var)
                and node.principal in node.seq.ante
                and node.principal in node.seq.succ
            ):
                diags.append(f"node {i}: bad ax-var")
                return False
            continue
        if node.rule == "ax-bot":
            if not any(isinstance(f, Bot) for f in node.seq.ante):
                diags.append(f"node {i}: bad ax-bot")
                return False
            continue
        expected = _expected_children(node)
        if expected is None:
            diags.append(f"node {i}: malformed {node.rule} application")
            return False
        actual = tuple(nodes[c].seq for c in node.children)
        if actual != expected:
            diags.append(
                f"node {i}: {node.rule} premises {[render(a) for a in actual]} "
                f"differ from expected {[render(e) for e in expected]}"
            )
            return False

    for leaf, target in proof.backlinks.items():
        if nodes[leaf].rule is not None or nodes[leaf].children:
            diags.append(f"backlink source {leaf} is not a bare leaf")
            return False
        path = [leaf]
        while path[-1] != proof.root and path[-1] != target:
            path.append(parent[path[-1]])
        if path[-1] != target:
            diags.append(f"backlink target {target} is not an ancestor of {leaf}")
            return False
        if nodes[leaf].seq != nodes[target].seq:
            diags.append(f"backlink {leaf}->{target} connects different sequents")
            return False
        gamma = nodes[leaf].seq.focus
        if not isinstance(gamma, BoxPlus):
            diags.append(f"backlink {leaf}->{target} without boxplus focus")
            return False
        if any(nodes[i].seq.focus != gamma for i in path):
            diags.append(f"backlink {leaf}->{target}: focus changes along the path")
            return False
        crossing = any(
            nodes[hi].rule == "boxplus"
            and len(nodes[hi].children) == 2
            and nodes[hi].children[1] == lo
            for lo, hi in zip(path, path[1:])
        )
        if not crossing:
            diags.append(
                f"backlink {leaf}->{target}: path crosses no boxplus right premise"
            )
            return False
    return True


# ---------------------------------------------------------------------------
# Saturation and refutation trees


def saturate(s: Sequent, oracle) -> SaturationTree:
    """Saturation tree for an unprovable sequent; oracle decides provability."""
    if oracle(s):
        raise EngineError(f"saturate called on a provable sequent: {render(s)}")
    nodes: list[RNode] = []

    def build(seq: Sequent) -> int:
        nid = len(nodes)
        nodes.append(RNode(seq, None, None, ()))
        f = _leftmost_imp(seq.ante)
        if f is not None:
            p1 = sequent(mset_add(mset_remove(seq.ante, f), f.rhs), seq.succ)
            p2 = sequent(mset_remove(seq.ante, f), mset_add(seq.succ, f.lhs))
            prov1, prov2 = oracle(p1), oracle(p2)
            if prov1 and prov2:
                raise EngineError("oracle contradicts unprovability of the conclusion")
            if not prov1 and not prov2:
                nodes[nid] = RNode(seq, "imp-left", f, (build(p1), build(p2)))
            elif prov2:
                cert = _certificate(oracle, p2)
                nodes[nid] = RNode(seq, "imp-left-1", f, (build(p1),), (cert,))
            else:
                cert = _certificate(oracle, p1)
                nodes[nid] = RNode(seq, "imp-left-2", f, (build(p2),), (cert,))
            return nid
        f = _leftmost_imp(seq.succ)
        if f is not None:
            p = sequent(mset_add(seq.ante, f.lhs), mset_add(mset_remove(seq.succ, f), f.rhs))
            nodes[nid] = RNode(seq, "imp-right", f, (build(p),))
            return nid
        return nid

    build(s)
    return SaturationTree(nodes, 0)


def _certificate(oracle, seq: Sequent) -> tuple[Sequent, CyclicProof]:
    proof = getattr(oracle, "prove", None)
    if proof is None:
        raise EngineError("oracle cannot produce certificate proofs")
    return seq, proof(seq)


class _OracleAdapter:
    """Provability oracle backed by an Engine, able to emit certificates."""

    def __init__(self, engine: Engine):
        self.engine = engine

    def __call__(self, s: Sequent) -> bool:
        return self.engine.provable(s)

    def prove(self, s: Sequent) -> CyclicProof:
        verdict = self.engine.decide(s)
        if not isinstance(verdict, Provable):
            raise EngineError(f"certificate requested for unprovable {render(s)}")
        return verdict.proof


class _RefutationBuilder:
    def __init__(self, engine: Engine):
        self.oracle = _OracleAdapter(engine)
        self.nodes: list[RNode] = []
        self.index: dict[Sequent, int] = {}

    def build(self, root: Sequent) -> RefutationTree:
        rid = self._delta(root)
        tree = RefutationTree(self.nodes, rid)
        return tree

    def _delta(self, seq: Sequent) -> int:
        """Shared refutation subtree for one member of the closure set."""
        if seq in self.index:
            return self.index[seq]
        nid = len(self.nodes)
        self.nodes.append(RNode(seq, None, None, ()))  # placeholder for cycles
        self.index[seq] = nid
        sat = saturate(seq, self.oracle)
        self._graft(nid, sat, sat.root)
        return nid

    def _graft(self, nid: int, sat: SaturationTree, si: int):
        node = sat.nodes[si]
        if node.rule is not None:
            children = tuple(self._fresh(sat, c) for c in node.children)
            self.nodes[nid] = RNode(node.seq, node.rule, node.principal, children, node.certs)
        else:
            self._crossbox(nid, node.seq)

    def _fresh(self, sat: SaturationTree, si: int) -> int:
        nid = len(self.nodes)
        self.nodes.append(RNode(sat.nodes[si].seq, None, None, ()))
        self._graft(nid, sat, si)
        return nid

    def _crossbox(self, nid: int, seq: Sequent):
        context = modal_premise_context(seq.ante)
        children: list[int] = []
        child_seqs: set[Sequent] = set()
        certs: list[tuple[Sequent, CyclicProof]] = []

        def attach(premise: Sequent):
            if premise not in child_seqs:
                child_seqs.add(premise)
                children.append(self._delta(premise))

        for f in dedup(seq.succ):
            if isinstance(f, Box):
                premise = sequent(context, (f.body,))
                if self.oracle(premise):
                    raise EngineError("provable box premise under unprovable conclusion")
                attach(premise)
        for f in dedup(seq.succ):
            if isinstance(f, BoxPlus):
                s1 = sequent(context, (f.body,))
                s2 = sequent(context, (f,))
                prov1, prov2 = self.oracle(s1), self.oracle(s2)
                if prov1 and prov2:
                    raise EngineError("both boxplus premises provable under unprovable conclusion")
                for s, prov in ((s1, prov1), (s2, prov2)):
                    if prov:
                        certs.append(_certificate(self.oracle, s))
                    else:
                        attach(s)
        self.nodes[nid] = RNode(seq, "crossbox", None, tuple(children), tuple(certs))


def check_refutation(tree: RefutationTree, oracle, diagnostics: list[str] | None = None) -> bool:
    """Validate a refutation tree against the rule shapes and side conditions.

    Checks that every node is unprovable per the oracle, that rule
    applications have the right premises, that omitted-premise certificates
    are valid cyclic proofs of the right sequents, and that a boxplus
    formula in the root succedent is eventually falsified by some crossbox
    premise.
    """
    diags = diagnostics if diagnostics is not None else []
    nodes = tree.nodes

    reachable: set[int] = set()
    stack = [tree.root]
    while stack:
        i = stack.pop()
        if i in reachable:
            continue
        reachable.add(i)
        for c in nodes[i].children:
            if not 0 <= c < len(nodes):
                diags.append(f"node {i} has dangling child {c}")
                return False
            stack.append(c)

    for i in sorted(reachable):
        node = nodes[i]
        if oracle(node.seq):
            diags.append(f"node {i} is provable: {render(node.seq)}")
            return False
        if node.rule in ("imp-right", "imp-left", "imp-left-1", "imp-left-2"):
            if not self_check_imp(node, nodes, diags, i):
                return False
        elif node.rule == "crossbox":
            if not _check_crossbox(node, nodes, diags, i):
                return False
        else:
            diags.append(f"node {i}: unknown rule {node.rule}")
            return False
        for cert_seq, cert_proof in node.certs:
            if not check_cyclic(cert_proof, diags):
                diags.append(f"node {i}: invalid certificate proof")
                return False
            got = cert_proof.nodes[cert_proof.root].seq
            if (got.ante, got.succ) != (cert_seq.ante, cert_seq.succ):
                diags.append(f"node {i}: certificate proves the wrong sequent")
                return False

    root_succ = nodes[tree.root].seq.succ
    for f in root_succ:
        if isinstance(f, BoxPlus):
            wanted = mset((f.body,))
            hit = any(
                nodes[c].seq.succ == wanted
                for i in reachable
                if nodes[i].rule == "crossbox"
                for c in nodes[i].children
            )
            if not hit:
                diags.append(
                    f"no crossbox premise of the form Theta |- {render(f.body)}"
                )
                return False
    return True


def self_check_imp(node: RNode, nodes, diags, i) -> bool:
    f = node.principal
    if not isinstance(f, Imp):
        diags.append(f"node {i}: principal of {node.rule} is not an implication")
        return False
    seq = node.seq
    if node.rule == "imp-right":
        if f not in seq.succ:
            diags.append(f"node {i}: imp-right principal missing from succedent")
            return False
        expected = [sequent(mset_add(seq.ante, f.lhs), mset_add(mset_remove(seq.succ, f), f.rhs))]
        needed_certs: list[Sequent] = []
    else:
        if f not in seq.ante:
            diags.append(f"node {i}: imp-left principal missing from antecedent")
            return False
        p1 = sequent(mset_add(mset_remove(seq.ante, f), f.rhs), seq.succ)
        p2 = sequent(mset_remove(seq.ante, f), mset_add(seq.succ, f.lhs))
        if node.rule == "imp-left":
            expected, needed_certs = [p1, p2], []
        elif node.rule == "imp-left-1":
            expected, needed_certs = [p1], [p2]
        else:
            expected, needed_certs = [p2], [p1]
    actual = [nodes[c].seq for c in node.children]
    if actual != expected:
        diags.append(f"node {i}: {node.rule} premises do not match the rule shape")
        return False
    cert_seqs = [c[0] for c in node.certs]
    if cert_seqs != needed_certs:
        diags.append(f"node {i}: {node.rule} missing side-condition certificate")
        return False
    return True


def _check_crossbox(node: RNode, nodes, diags, i) -> bool:
    seq = node.seq
    for f in seq.ante:
        if isinstance(f, Imp):
            diags.append(f"node {i}: crossbox conclusion is not saturated")
            return False
        if not isinstance(f, (Var, Bot, Box, BoxPlus)):
            diags.append(f"node {i}: unexpected antecedent member")
            return False
    for f in seq.succ:
        if isinstance(f, Imp):
            diags.append(f"node {i}: crossbox conclusion is not saturated")
            return False
    context = modal_premise_context(seq.ante)
    child_seqs = {nodes[c].seq for c in node.children}
    cert_seqs = {c[0] for c in node.certs}
    required: set[Sequent] = set()
    for f in dedup(seq.succ):
        if isinstance(f, Box):
            premise = sequent(context, (f.body,))
            required.add(premise)
            if premise not in child_seqs:
                diags.append(f"node {i}: missing box premise {render(premise)}")
                return False
        elif isinstance(f, BoxPlus):
            s1 = sequent(context, (f.body,))
            s2 = sequent(context, (f,))
            required |= {s1, s2}
            for s in (s1, s2):
                if s not in child_seqs and s not in cert_seqs:
                    diags.append(
                        f"node {i}: boxplus premise {render(s)} neither "
                        "present nor certified provable"
                    )
                    return False
            if s1 not in child_seqs and s2 not in child_seqs:
                diags.append(f"node {i}: both boxplus premises omitted")
                return False
    if not child_seqs <= required:
        diags.append(f"node {i}: crossbox has premises outside the rule shape")
        return False
    return True


# ---------------------------------------------------------------------------
# JSON serialization


def _fs_to_json(fs: FocusedSequent) -> dict:
    return {
        "ante": [render(f) for f in fs.ante],
        "succ": [render(f) for f in fs.succ],
        "focus": "*" if fs.focus is None else render(fs.focus),
    }


def _fs_from_json(data: dict) -> FocusedSequent:
    focus = None if data["focus"] == "*" else parse(data["focus"])
    return focused([parse(t) for t in data["ante"]], [parse(t) for t in data["succ"]], focus)


def proof_to_json(proof: CyclicProof) -> dict:
    return {
        "kind": "cyclic-proof",
        "root": proof.root,
        "nodes": [
            {
                "seq": _fs_to_json(n.seq),
                "rule": n.rule,
                "principal": None if n.principal is None else render(n.principal),
                "children": list(n.children),
            }
            for n in proof.nodes
        ],
        "backlinks": [
            {"leaf": leaf, "target": target}
            for leaf, target in sorted(proof.backlinks.items())
        ],
    }


def proof_from_json(data: dict) -> CyclicProof:
    nodes = [
        ProofNode(
            _fs_from_json(n["seq"]),
            n["rule"],
            None if n["principal"] is None else parse(n["principal"]),
            tuple(n["children"]),
        )
        for n in data["nodes"]
    ]
    backlinks = {b["leaf"]: b["target"] for b in data["backlinks"]}
    return CyclicProof(nodes, data["root"], backlinks)


def _seq_to_json(seq: Sequent) -> dict:
    return {"ante": [render(f) for f in seq.ante], "succ": [render(f) for f in seq.succ]}


def _seq_from_json(data: dict) -> Sequent:
    return sequent([parse(t) for t in data["ante"]], [parse(t) for t in data["succ"]])


def refutation_to_json(tree: RefutationTree) -> dict:
    return {
        "kind": "refutation-tree",
        "root": tree.root,
        "nodes": [
            {
                "seq": _seq_to_json(n.seq),
                "rule": n.rule,
                "principal": None if n.principal is None else render(n.principal),
                "children": list(n.children),
                "certs": [
                    {"sequent": _seq_to_json(s), "proof": proof_to_json(p)}
                    for s, p in n.certs
                ],
            }
            for n in tree.nodes
        ],
    }


def refutation_from_json(data: dict) -> RefutationTree:
    nodes = [
        RNode(
            _seq_from_json(n["seq"]),
            n["rule"],
            None if n["principal"] is None else parse(n["principal"]),
            tuple(n["children"]),
            tuple(
                (_seq_from_json(c["sequent"]), proof_from_json(c["proof"]))
                for c in n["certs"]
            ),
        )
        for n in data["nodes"]
    ]
    return RefutationTree(nodes, data["root"])
