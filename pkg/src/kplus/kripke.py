"""Finite Kripke semantics: model checking, brute-force validity oracle, and
countermodel extraction from refutation trees.

Frames are pairs of relations (R, R+) over a finite world set where R+ must
equal the transitive closure of R.  Box quantifies over R-successors,
boxplus over R+-successors.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .syntax import (
    Bot,
    Box,
    BoxPlus,
    Formula,
    Imp,
    Var,
    big_conj,
    big_disj,
    render,
)


class ModelError(Exception):
    pass


@dataclass(frozen=True)
class KripkeModel:
    """Finite bimodal model; treat all fields as immutable after construction."""

    worlds: frozenset[int]
    r: frozenset[tuple[int, int]]
    rplus: frozenset[tuple[int, int]]
    valuation: dict[int, frozenset[int]]

    def __post_init__(self):
        if not self.worlds:
            raise ModelError("world set is empty")
        for u, v in self.r:
            if u not in self.worlds or v not in self.worlds:
                raise ModelError(f"edge ({u},{v}) leaves the world set")
        if self.rplus != transitive_closure(self.r):
            raise ModelError("rplus is not the transitive closure of r")
        for w in self.valuation:
            if w not in self.worlds:
                raise ModelError(f"valuation mentions unknown world {w}")


def make_model(worlds, r, valuation) -> KripkeModel:
    worlds = frozenset(int(w) for w in worlds)
    r = frozenset((int(u), int(v)) for u, v in r)
    full = {w: frozenset() for w in worlds}
    full.update(
        {int(w): frozenset(int(i) for i in vs) for w, vs in valuation.items()}
    )
    return KripkeModel(
        worlds=worlds, r=r, rplus=transitive_closure(r), valuation=full
    )


def transitive_closure(rel) -> frozenset[tuple[int, int]]:
    """Smallest transitive superset of a finite relation."""
    succ: dict[int, set[int]] = {}
    for u, v in rel:
        succ.setdefault(u, set()).add(v)
    changed = True
    while changed:
        changed = False
        for u, vs in succ.items():
            extra = set()
            for v in vs:
                extra |= succ.get(v, set())
            if not extra <= vs:
                vs |= extra
                changed = True
    return frozenset((u, v) for u, vs in succ.items() for v in vs)


def eval_formula(m: KripkeModel, w: int, f: Formula) -> bool:
    """Standard satisfaction; box over R-successors, boxplus over R+ ones."""
    if w not in m.worlds:
        raise ModelError(f"unknown world {w}")
    memo: dict[tuple[int, Formula], bool] = {}

    def go(u: int, g: Formula) -> bool:
        key = (u, g)
        if key in memo:
            return memo[key]
        match g:
            case Bot():
                out = False
            case Var(i):
                out = i in m.valuation.get(u, frozenset())
            case Imp(a, b):
                out = (not go(u, a)) or go(u, b)
            case Box(a, _):
                out = all(go(v, a) for (s, v) in m.r if s == u)
            case BoxPlus(a, _):
                out = all(go(v, a) for (s, v) in m.rplus if s == u)
            case _:
                raise ModelError(f"cannot evaluate {g!r}")
        memo[key] = out
        return out

    return go(w, f)


def sequent_formula(ante, succ) -> Formula:
    return Imp(big_conj(ante), big_disj(succ))


# ---------------------------------------------------------------------------
# Brute-force countermodel search.
#
# Relations over n worlds are encoded as integer masks with bit u*n+v for the
# edge (u, v); masks are enumerated in increasing order, world counts in
# increasing order, valuations innermost.  The distinguished world is always
# 0: any model falsifying a formula somewhere can be relabelled so world 0 is
# the falsifying one, and masks whose models do not reach every world from 0
# are skipped because their reachable part already occurs at a smaller world
# count.  This keeps the search exhaustive while shrinking the n=4 table.

_TABLE_LIMIT = 4
_tables: dict[int, tuple[np.ndarray, np.ndarray, np.ndarray]] = {}


def _relation_tables(n: int):
    """(masks, succ, succplus) for all reachable-complete relations on n worlds."""
    if n in _tables:
        return _tables[n]
    count = 1 << (n * n)
    masks = np.arange(count, dtype=np.uint32)
    succ = np.empty((count, n), dtype=np.uint8)
    for w in range(n):
        succ[:, w] = (masks >> np.uint32(w * n)) & np.uint32((1 << n) - 1)
    succplus = succ.copy()
    for _ in range(n):
        for w in range(n):
            acc = succplus[:, w].copy()
            for v in range(n):
                has_v = (succplus[:, w] >> v) & 1
                acc |= has_v * succplus[:, v]
            succplus[:, w] = acc
    reach = np.full(count, 1, dtype=np.uint8)
    for _ in range(n):
        acc = reach.copy()
        for v in range(n):
            has_v = (reach >> v) & 1
            acc |= has_v * succ[:, v]
        reach = acc
    keep = reach == (1 << n) - 1
    out = (masks[keep], succ[keep], succplus[keep])
    _tables[n] = out
    return out


def _formula_vars(f: Formula) -> list[int]:
    out: set[int] = set()

    def go(g):
        match g:
            case Var(i):
                out.add(i)
            case Imp(a, b):
                go(a)
                go(b)
            case Box(a, _) | BoxPlus(a, _):
                go(a)
            case Bot():
                pass
            case _:
                raise ModelError(f"cannot search over {g!r}")

    go(f)
    return sorted(out)


def _sat_masks(f, n, succ, succplus, var_masks):
    """Bitmask-over-worlds satisfaction arrays, per relation and valuation."""
    full = np.uint8((1 << n) - 1)

    def go(g) -> np.ndarray:
        match g:
            case Bot():
                return np.zeros((1, 1), dtype=np.uint8)
            case Var(i):
                return var_masks[i]
            case Imp(a, b):
                return ((go(a) ^ full) | go(b)) & full
            case Box(a, _):
                return boxish(go(a), succ)
            case BoxPlus(a, _):
                return boxish(go(a), succplus)
        raise ModelError(f"cannot evaluate {g!r}")

    def boxish(sat_a, rel) -> np.ndarray:
        nonsat = (sat_a ^ full) & full
        out = np.zeros(np.broadcast_shapes(nonsat.shape, (rel.shape[0], 1)), dtype=np.uint8)
        for w in range(n):
            ok = (rel[:, w : w + 1] & nonsat) == 0
            out |= ok.astype(np.uint8) << w
        return out

    return go(f)


def search_countermodel(f: Formula, max_worlds: int) -> tuple[KripkeModel, int] | None:
    """Exhaustive search for a model falsifying f on at most max_worlds worlds.

    Returns the first hit under the fixed enumeration order, or None; the
    falsified world of a returned model is always 0.
    """
    if max_worlds < 1:
        raise ModelError("max_worlds must be at least 1")
    variables = _formula_vars(f)
    for n in range(1, max_worlds + 1):
        hit = _search_at(f, n, variables)
        if hit is not None:
            return hit
    return None


def _search_at(f, n, variables):
    if n > _TABLE_LIMIT:
        return _search_at_slow(f, n, variables)
    masks, succ, succplus = _relation_tables(n)
    val_bits = n * len(variables)
    slab = 1 << min(val_bits, 10)
    best = None
    for start in range(0, 1 << val_bits, slab):
        vals = np.arange(start, start + slab, dtype=np.uint32)
        var_masks = {
            v: ((vals >> np.uint32(k * n)) & np.uint32((1 << n) - 1))
            .astype(np.uint8)
            .reshape(1, -1)
            for k, v in enumerate(variables)
        }
        sat = _sat_masks(f, n, succ, succplus, var_masks)
        sat = np.broadcast_to(sat, (len(masks), slab))
        falsified = (sat & 1) == 0
        if falsified.any():
            flat = int(np.argmax(falsified))
            r_idx, v_idx = divmod(flat, slab)
            cand = (r_idx, start + v_idx)
            if best is None or cand < best:
                best = cand
    if best is None:
        return None
    r_idx, val = best
    mask = int(masks[r_idx])
    r = {(u, v) for u in range(n) for v in range(n) if mask >> (u * n + v) & 1}
    valuation = {
        w: frozenset(
            v for k, v in enumerate(variables) if val >> (k * n + w) & 1
        )
        for w in range(n)
    }
    model = make_model(range(n), r, valuation)
    assert not eval_formula(model, 0, f)
    return model, 0


def _search_at_slow(f, n, variables):
    from itertools import product

    edges = [(u, v) for u in range(n) for v in range(n)]
    for mask in range(1 << len(edges)):
        r = {edges[k] for k in range(len(edges)) if mask >> k & 1}
        for val in range(1 << (n * len(variables))):
            valuation = {
                w: frozenset(
                    v for k, v in enumerate(variables) if val >> (k * n + w) & 1
                )
                for w in range(n)
            }
            model = make_model(range(n), r, valuation)
            if not eval_formula(model, 0, f):
                return model, 0
    return None


# ---------------------------------------------------------------------------
# Countermodel construction from a refutation tree.  Worlds are the
# conclusions of crossbox applications; u precedes v when v lies in the
# saturated fringe above one of u's premises.


def model_from_refutation(tree) -> tuple[KripkeModel, int]:
    """Read off the falsifying model of a refutation tree.

    Expects an engine RefutationTree: nodes with .seq/.rule/.children, rule
    tag "crossbox" for the batched modal rule.  The distinguished world is
    the leftmost saturated descendant of the root.
    """
    nodes = tree.nodes
    world_of: dict[int, int] = {}
    order: list[int] = []
    seen: set[int] = set()
    stack = [tree.root]
    while stack:
        i = stack.pop()
        if i in seen:
            continue
        seen.add(i)
        if nodes[i].rule == "crossbox":
            world_of[i] = len(order)
            order.append(i)
        stack.extend(reversed(nodes[i].children))
    if not order:
        raise ModelError("refutation tree has no crossbox applications")

    sat_memo: dict[int, list[int]] = {}

    def sat(i: int, pending: frozenset[int]) -> list[int]:
        if i in sat_memo:
            return sat_memo[i]
        if i in pending:
            raise ModelError("cycle without a crossbox application")
        if nodes[i].rule == "crossbox":
            out = [i]
        else:
            out = []
            for c in nodes[i].children:
                for j in sat(c, pending | {i}):
                    if j not in out:
                        out.append(j)
        sat_memo[i] = out
        return out

    prec: set[tuple[int, int]] = set()
    for i in order:
        for c in nodes[i].children:
            for j in sat(c, frozenset()):
                prec.add((world_of[i], world_of[j]))

    valuation = {
        world_of[i]: frozenset(f.index for f in nodes[i].seq.ante if isinstance(f, Var))
        for i in order
    }
    model = make_model(range(len(order)), prec, valuation)
    root_sat = sat(tree.root, frozenset())
    if not root_sat:
        raise ModelError("empty saturated fringe at the root")
    return model, world_of[root_sat[0]]


# ---------------------------------------------------------------------------
# JSON model schema


def model_to_json(m: KripkeModel) -> dict:
    return {
        "worlds": sorted(m.worlds),
        "r": sorted([u, v] for (u, v) in m.r),
        "rplus": sorted([u, v] for (u, v) in m.rplus),
        "valuation": {
            str(w): [render(Var(i)) for i in sorted(m.valuation.get(w, frozenset()))]
            for w in sorted(m.worlds)
        },
    }


def model_from_json(data: dict) -> KripkeModel:
    valuation = {}
    for w, names in data.get("valuation", {}).items():
        indices = []
        for name in names:
            if not name.startswith("p"):
                raise ModelError(f"bad variable name {name!r}")
            indices.append(int(name[1:]))
        valuation[int(w)] = frozenset(indices)
    model = make_model(data["worlds"], [tuple(e) for e in data["r"]], valuation)
    if "rplus" in data:
        given = frozenset((int(u), int(v)) for u, v in data["rplus"])
        if given != model.rplus:
            raise ModelError("stored rplus disagrees with the transitive closure")
    return model
