"""Turn an unannotated cyclic proof into a properly annotated one, then into a
prepared proof carrying modal-rule occurrence labels and a bounding function.

Annotation propagates labels from a properly annotated root through the rule
applications of the input proof, unravelling through its back-links; a fresh
back-link is placed at the first repetition of a (node, annotated sequent)
state along the current path.  The propagation policy is fixed: premises
inherit the conclusion's labels positionally, newly exposed bodies keep the
labels of their principal formula, and the boxplus right premise keeps the
conclusion's focus label whenever the principal erases to it.
"""

from __future__ import annotations

from dataclasses import dataclass

from .engine import (
    CyclicProof,
    EngineError,
    ProofNode,
    check_cyclic,
    modal_premise_context,
    proof_to_json,
    proof_from_json,
)
from .syntax import (
    Box,
    BoxPlus,
    FocusedSequent,
    Formula,
    Imp,
    LabelAllocator,
    erase,
    focused,
    formula_key,
    mset_add,
    mset_remove,
    proper_annotate,
    sequent_properly_annotated,
)


class AnnotationError(Exception):
    pass


@dataclass
class PreparedProof:
    """Annotated cyclic proof plus an occurrence label per modal rule node."""

    proof: CyclicProof
    occ: dict[int, int]


def annotate(proof: CyclicProof) -> CyclicProof:
    """Properly annotated cyclic proof unravelling-equivalent to the input."""
    if not check_cyclic(proof, diags := []):
        raise AnnotationError(f"input proof does not check: {diags}")
    root = proof.nodes[proof.root].seq
    alloc = LabelAllocator()
    ante = tuple(proper_annotate(f, False, alloc) for f in root.ante)
    succ = tuple(proper_annotate(f, True, alloc) for f in root.succ)
    if root.focus is None:
        focus = None
    else:
        focus = _pick_occurrence(succ, root.focus, None)
    return _unravel(proof, focused(ante, succ, focus))


def _pick_occurrence(ms, plain: Formula, preferred: Formula | None) -> Formula:
    """Annotated occurrence erasing to the plain formula; prefers the focus."""
    if preferred is not None and erase(preferred) == plain and preferred in ms:
        return preferred
    candidates = sorted((f for f in ms if erase(f) == plain), key=formula_key)
    if not candidates:
        raise AnnotationError(f"no occurrence of {plain!r} to annotate")
    return candidates[0]


def _unravel(proof: CyclicProof, root_fs: FocusedSequent) -> CyclicProof:
    nodes: list[ProofNode] = []
    backlinks: dict[int, int] = {}
    plain_nodes = proof.nodes

    def expand(orig: int, fs: FocusedSequent, path) -> int:
        while plain_nodes[orig].rule is None:  # follow the original back-link
            orig = proof.backlinks[orig]
        state = (orig, fs)
        for prev_state, prev_id in reversed(path):
            if prev_state == state:
                nid = len(nodes)
                nodes.append(ProofNode(fs, None, None, ()))
                backlinks[nid] = prev_id
                return nid
        node = plain_nodes[orig]
        nid = len(nodes)
        nodes.append(ProofNode(fs, node.rule, None, ()))
        path = path + [(state, nid)]
        rule = node.rule
        if rule in ("ax-var", "ax-bot"):
            principal = node.principal  # atoms carry no labels
            nodes[nid] = ProofNode(fs, rule, principal, ())
            return nid
        if rule == "imp-right":
            principal = _pick_occurrence(fs.succ, node.principal, None)
            child_fs = focused(
                mset_add(fs.ante, principal.lhs),
                mset_add(mset_remove(fs.succ, principal), principal.rhs),
                fs.focus,
            )
            child = expand(node.children[0], child_fs, path)
            nodes[nid] = ProofNode(fs, rule, principal, (child,))
            return nid
        if rule == "imp-left":
            principal = _pick_occurrence(fs.ante, node.principal, None)
            left_fs = focused(
                mset_add(mset_remove(fs.ante, principal), principal.rhs),
                fs.succ,
                fs.focus,
            )
            right_fs = focused(
                mset_remove(fs.ante, principal),
                mset_add(fs.succ, principal.lhs),
                fs.focus,
            )
            left = expand(node.children[0], left_fs, path)
            right = expand(node.children[1], right_fs, path)
            nodes[nid] = ProofNode(fs, rule, principal, (left, right))
            return nid
        context = modal_premise_context(fs.ante)
        if rule == "box":
            principal = _pick_occurrence(fs.succ, node.principal, None)
            child = expand(node.children[0], focused(context, (principal.body,)), path)
            nodes[nid] = ProofNode(fs, rule, principal, (child,))
            return nid
        if rule == "boxplus":
            principal = _pick_occurrence(fs.succ, node.principal, fs.focus)
            left = expand(node.children[0], focused(context, (principal.body,)), path)
            right = expand(
                node.children[1], focused(context, (principal,), principal), path
            )
            nodes[nid] = ProofNode(fs, rule, principal, (left, right))
            return nid
        raise AnnotationError(f"unknown rule {rule}")

    expand(proof.root, root_fs, [])
    out = CyclicProof(nodes, 0, backlinks)
    if not check_cyclic(out, diags := []):
        raise AnnotationError(f"annotated proof does not check: {diags}")
    root = out.nodes[out.root].seq
    if not sequent_properly_annotated(root.ante, root.succ):
        raise AnnotationError("root annotation is not proper")
    return out


# ---------------------------------------------------------------------------
# Preparation: occurrence labels and the bounding function


def _preorder(proof: CyclicProof) -> list[int]:
    order: list[int] = []
    stack = [proof.root]
    while stack:
        i = stack.pop()
        order.append(i)
        stack.extend(reversed(proof.nodes[i].children))
    return order


def _focus_components(proof: CyclicProof, gamma: Formula) -> dict[int, int]:
    """Connected components of the constant-focus subgraph (back-links count)."""
    members = {i for i, n in enumerate(proof.nodes) if n.seq.focus == gamma}
    adj: dict[int, list[int]] = {i: [] for i in members}
    for i, n in enumerate(proof.nodes):
        for c in n.children:
            if i in members and c in members:
                adj[i].append(c)
                adj[c].append(i)
    for leaf, target in proof.backlinks.items():
        if leaf in members and target in members:
            adj[leaf].append(target)
            adj[target].append(leaf)
    comp: dict[int, int] = {}
    for start in sorted(members):
        if start in comp:
            continue
        label = start
        stack = [start]
        while stack:
            i = stack.pop()
            if i in comp:
                continue
            comp[i] = label
            stack.extend(adj[i])
    return comp


def prepare(proof: CyclicProof) -> tuple[PreparedProof, dict[int, int]]:
    """Label modal rule occurrences and compute the minimal bounding function.

    Box applications with principal label m are numbered 0..k-1 in preorder
    and g(m-1) is set to k.  Boxplus applications with principal label n are
    grouped into constant-focus classes, the classes numbered in preorder,
    and g(n) set to the class count.  Everywhere else g is 0.
    """
    if not check_cyclic(proof, diags := []):
        raise AnnotationError(f"input proof does not check: {diags}")
    order = _preorder(proof)
    rank_of = {nid: k for k, nid in enumerate(order)}
    occ: dict[int, int] = {}
    g: dict[int, int] = {}

    box_by_label: dict[int, list[int]] = {}
    plus_by_label: dict[int, list[int]] = {}
    for i in order:
        node = proof.nodes[i]
        if node.rule == "box":
            box_by_label.setdefault(node.principal.label, []).append(i)
        elif node.rule == "boxplus":
            plus_by_label.setdefault(node.principal.label, []).append(i)

    for m, apps in box_by_label.items():
        for k, i in enumerate(apps):
            occ[i] = k
        g[m - 1] = len(apps)

    for n, apps in plus_by_label.items():
        gammas = {proof.nodes[i].principal for i in apps}
        if len(gammas) != 1:
            raise AnnotationError(f"boxplus label {n} used by distinct formulas")
        comp = _focus_components(proof, next(iter(gammas)))
        class_ids: dict[int, int] = {}
        for i in apps:
            right = proof.nodes[i].children[1]
            c = comp[right]
            if c not in class_ids:
                class_ids[c] = len(class_ids)
            occ[i] = class_ids[c]
        g[n] = len(class_ids)

    prepared = PreparedProof(proof, occ)
    _check_bounding(prepared, g)
    return prepared, g


def _check_bounding(prepared: PreparedProof, g: dict[int, int]):
    for i, k in prepared.occ.items():
        node = prepared.proof.nodes[i]
        m = node.principal.label
        bound = g.get(m - 1, 0) if node.rule == "box" else g.get(m, 0)
        if not k < bound:
            raise AnnotationError(f"occurrence label {k} at node {i} not bounded")


def is_bounding(prepared: PreparedProof, g: dict[int, int]) -> bool:
    try:
        _check_bounding(prepared, g)
        return True
    except AnnotationError:
        return False


def prepared_to_json(prepared: PreparedProof, g: dict[int, int]) -> dict:
    data = proof_to_json(prepared.proof)
    data["kind"] = "prepared-proof"
    for i, node in enumerate(data["nodes"]):
        if i in prepared.occ:
            node["occ"] = prepared.occ[i]
    data["g"] = {str(k): v for k, v in sorted(g.items())}
    return data


def prepared_from_json(data: dict) -> tuple[PreparedProof, dict[int, int]]:
    proof = proof_from_json(data)
    occ = {i: n["occ"] for i, n in enumerate(data["nodes"]) if "occ" in n}
    g = {int(k): v for k, v in data.get("g", {}).items()}
    return PreparedProof(proof, occ), g
