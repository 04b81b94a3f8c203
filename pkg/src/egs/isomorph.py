"""Exact structure isomorphism via invariant refinement plus backtracking.

Two structures are isomorphic when bijections on players (identity unless
permutation is requested), per-player actions, and histories preserve the
tree, the active-player correspondence, and the information partitions.
A relabeling-invariant color is refined over the trees first; the
backtracking search then only has to resolve genuine symmetry, which keeps
desk-scale instances fast.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .core import History, InfoSet, Structure


@dataclass(frozen=True)
class StructureIsomorphism:
    player_map: tuple[tuple[str, str], ...]
    action_maps: tuple[tuple[str, tuple[tuple[str, str], ...]], ...]
    history_map: tuple[tuple[History, History], ...]


def _colors(structure: Structure) -> dict[History, tuple]:
    """Label-free color per history, refined bottom-up: branching shape,
    per-player-slot fan-outs, and the size/length profile of the touching
    information sets."""
    color: dict[History, tuple] = {}

    def infoset_stats(h: History) -> tuple:
        stats = []
        for p in structure.active(h):
            s = structure.info_set_of(p, h)
            stats.append((
                len(structure.feasible(h, p)),
                len(s.members),
                tuple(sorted(m.length for m in s.members)),
            ))
        return tuple(sorted(stats))

    def visit(h: History) -> tuple:
        kids = structure.children(h)
        c = (
            infoset_stats(h),
            tuple(sorted(visit(k) for k in kids)),
        )
        color[h] = c
        return c

    visit(structure.root)
    return color


def structure_isomorphic(
    g1: Structure,
    g2: Structure,
    allow_player_permutation: bool = False,
) -> StructureIsomorphism | None:
    if len(g1.players) != len(g2.players):
        return None
    if len(g1.histories) != len(g2.histories):
        return None
    if allow_player_permutation:
        perms = itertools.permutations(g2.players)
    else:
        if tuple(g1.players) != tuple(g2.players):
            return None
        perms = [tuple(g1.players)]
    c1 = _colors(g1)
    c2 = _colors(g2)
    if c1[g1.root] != c2[g2.root]:
        return None
    for perm in perms:
        pmap = dict(zip(g1.players, perm))
        result = _search(g1, g2, pmap, c1, c2)
        if result is not None:
            return result
    return None


def _search(g1, g2, pmap, c1, c2) -> StructureIsomorphism | None:
    action_maps: dict[str, dict[str, str]] = {p: {} for p in g1.players}
    hist_map: dict[History, History] = {}

    def partitions_compatible() -> bool:
        for p in g1.players:
            q = pmap[p]
            blocks2 = {s.member_set: s for s in g2.partitions.get(q, ())}
            for s in g1.partitions.get(p, ()):
                mapped = [hist_map.get(m) for m in s.members]
                if any(m is None for m in mapped):
                    continue  # not fully mapped yet
                if frozenset(mapped) not in blocks2:
                    return False
        return True

    def match(h1: History, h2: History) -> bool:
        hist_map[h1] = h2
        if g1.is_terminal(h1) != g2.is_terminal(h2):
            return False
        if g1.is_terminal(h1):
            return True
        players1 = g1.active(h1)
        if tuple(sorted(pmap[p] for p in players1)) != g2.active(h2):
            return False

        def try_actions(idx: int) -> bool:
            if idx == len(players1):
                # All action maps extended; recurse into children.
                for kid in g1.children(h1):
                    move = dict(kid.moves[-1])
                    image_move = tuple(sorted(
                        (pmap[p], action_maps[p][a]) for p, a in move.items()
                    ))
                    kid2 = h2.extend(image_move)
                    if not g2.has_history(kid2):
                        return False
                    if c1[kid] != c2[kid2]:
                        return False
                    if not match(kid, kid2):
                        return False
                return partitions_compatible()
            p = players1[idx]
            q = pmap[p]
            f1 = g1.feasible(h1, p)
            f2 = g2.feasible(h2, q)
            if len(f1) != len(f2):
                return False
            amap = action_maps[p]
            fixed = [(a, amap[a]) for a in f1 if a in amap]
            if fixed:
                # Images of already-mapped actions must land in f2.
                if any(b not in f2 for _, b in fixed):
                    return False
            free1 = [a for a in f1 if a not in amap]
            used = set(amap.values())
            free2 = [b for b in f2 if b not in used]
            if len(free1) != len(free2):
                return False
            saved_hist = dict(hist_map)
            saved_actions = {pl: dict(m) for pl, m in action_maps.items()}
            for images in itertools.permutations(free2):
                for a, b in zip(free1, images):
                    amap[a] = b
                if try_actions(idx + 1):
                    return True
                for pl in action_maps:
                    action_maps[pl].clear()
                    action_maps[pl].update(saved_actions[pl])
                hist_map.clear()
                hist_map.update(saved_hist)
            return False

        return try_actions(0)

    if match(g1.root, g2.root) and partitions_compatible():
        # Final full-partition check (all histories mapped by now).
        for p in g1.players:
            q = pmap[p]
            blocks1 = {frozenset(hist_map[m] for m in s.members) for s in g1.partitions.get(p, ())}
            blocks2 = {s.member_set for s in g2.partitions.get(q, ())}
            if blocks1 != blocks2:
                return None
        return StructureIsomorphism(
            player_map=tuple(sorted(pmap.items())),
            action_maps=tuple(
                (p, tuple(sorted(action_maps[p].items()))) for p in g1.players
            ),
            history_map=tuple(sorted(hist_map.items(), key=lambda kv: kv[0].moves)),
        )
    return None
