"""Invariant transformations on extensive game structures.

Coalescing merges an information set into the own set that controls it
(the mover's choice migrates up into the controlling action); an
interchange/simultanizing (IS) synchronizes a dictated part of an
information set with a predecessor history.  Histories strictly inside the
affected region are replicated once per mover action; histories past the
mover are rewritten by moving the mover's action component up and deleting
the vacated move when nobody else acted there.  On top of these two
operators sit UO-preserving minimization, complete immediate
compactification opportunities and their composed transformation, the
backward (leaves-to-root) compactification, and the equal-length-
preserving synthesized transformation for von Neumann structures.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .core import (
    EgsError,
    History,
    InfoSet,
    Profile,
    Structure,
    history_key,
    make_profile,
    sim_classes,
    strictly_precedes,
)
from .strategy import Plan
from .validate import check_uo, check_vnm


class TransformError(EgsError):
    pass


@dataclass(frozen=True)
class CoalescingOpp:
    """base is controlled by mover via the link action: choosing the link
    at base leads exactly to the mover's subtrees."""

    owner: str
    base: InfoSet
    mover: InfoSet
    link: str


@dataclass(frozen=True)
class IsOpp:
    """anchor's subtree terminals coincide with those of the sub-mover, a
    subset of the mover information set owned by a player inactive at the
    anchor."""

    owner: str
    anchor: History
    submover: tuple[History, ...]
    mover: InfoSet

    def __post_init__(self):
        object.__setattr__(
            self, "submover", tuple(sorted(set(self.submover), key=history_key))
        )

    @property
    def submover_set(self) -> frozenset[History]:
        return frozenset(self.submover)


@dataclass(frozen=True)
class HistoryMap:
    """The natural correspondence of one transformation step.

    forward sends each old history to its replacements (one per mover
    action for histories weakly between the opportunity's ends, exactly one
    elsewhere); mover_lift records where the mover's own histories went
    from the owner's point of view; infoset_map sends every old
    information set to its identity in the new structure (the coalescing
    mover maps onto its base).
    """

    kind: str
    owner: str
    forward: dict[History, tuple[History, ...]]
    infoset_map: dict[InfoSet, InfoSet]
    mover_lift: dict[History, tuple[History, ...]]
    base: InfoSet | None = None
    mover: InfoSet | None = None
    link: str | None = None
    anchor: History | None = None
    submover: tuple[History, ...] = ()


@dataclass
class CompositeMap:
    """Composition of several HistoryMaps, oldest step first."""

    forward: dict[History, tuple[History, ...]]
    infoset_map: dict[InfoSet, InfoSet]
    steps: tuple[HistoryMap, ...] = ()

    @staticmethod
    def identity(structure: Structure) -> "CompositeMap":
        return CompositeMap(
            {h: (h,) for h in structure.histories},
            {s: s for s in structure.info_sets},
            (),
        )

    def extend(self, step: HistoryMap) -> "CompositeMap":
        forward = {
            h: tuple(sorted(
                {img for mid in mids for img in step.forward[mid]}, key=history_key
            ))
            for h, mids in self.forward.items()
        }
        infosets = {s: step.infoset_map[cur] for s, cur in self.infoset_map.items()}
        return CompositeMap(forward, infosets, self.steps + (step,))

    def terminal_bijection(self, old: Structure, new: Structure) -> dict[History, History]:
        out = {}
        for z in old.terminals:
            images = [h for h in self.forward[z] if new.is_terminal(h)]
            if len(images) != 1:
                raise TransformError(f"terminal {z.label()!r} has {len(images)} images")
            out[z] = images[0]
        if len(set(out.values())) != len(out):
            raise TransformError("terminal correspondence is not injective")
        return out


# -- control and dictation ----------------------------------------------


def controls(structure: Structure, base: InfoSet, mover: InfoSet) -> str | None:
    """The action at base whose terminal set equals the mover's, if any."""
    if base.owner != mover.owner:
        raise EgsError("control relates information sets of one player")
    structure.require_info_set(base)
    structure.require_info_set(mover)
    if base == mover:
        return None
    target = structure.terminals_below_set(mover.members)
    for action in structure.feasible_at(base):
        if structure.terminals_after_action(base, action) == target:
            return action
    return None


def dictates(structure: Structure, anchor: History, members, owner: str) -> bool:
    """True iff the candidate sub-mover's terminal set equals the anchor's."""
    if owner in structure.active(anchor):
        raise EgsError(f"{owner} is active at the anchor {anchor.label()!r}")
    members = tuple(members)
    if not members:
        return False
    return structure.terminals_below(anchor) == structure.terminals_below_set(members)


# -- opportunity discovery ----------------------------------------------


def _infoset_key(s: InfoSet):
    return (s.owner, tuple(history_key(m) for m in s.members))


def find_coalescing(structure: Structure) -> list[CoalescingOpp]:
    out = []
    for p in structure.players:
        blocks = structure.partitions.get(p, ())
        for base in blocks:
            for mover in blocks:
                if base == mover:
                    continue
                link = controls(structure, base, mover)
                if link is not None:
                    out.append(CoalescingOpp(p, base, mover, link))
    out.sort(key=lambda o: (o.owner, _infoset_key(o.base), o.link))
    return out


def find_is(structure: Structure) -> list[IsOpp]:
    out = []
    for h in structure.nonterminals:
        active = set(structure.active(h))
        for p in structure.players:
            if p in active:
                continue
            for block in structure.partitions.get(p, ()):
                d = tuple(m for m in block.members if strictly_precedes(h, m))
                if d and dictates(structure, h, d, p):
                    out.append(IsOpp(p, h, d, block))
    out.sort(key=lambda o: (history_key(o.anchor), o.owner, _infoset_key(o.mover)))
    return out


def is_non_crossing(structure: Structure, opp: IsOpp) -> bool:
    """A sub-mover may not be lifted over an information set that keeps a
    foothold before the destination: crossing holds when some other set
    has a member weakly between the anchor and the sub-mover while another
    of its members sits before the anchor or before a non-moving member of
    the mover."""
    d = opp.submover
    leftover = [x for x in opp.mover.members if x not in opp.submover_set]
    for s in structure.info_sets:
        if s == opp.mover:
            continue
        lifted_over = any(
            strictly_precedes(opp.anchor, g)
            and any(g.is_prefix_of(m) for m in d)
            for g in s.members
        )
        if not lifted_over:
            continue
        foothold = any(
            strictly_precedes(m, opp.anchor)
            or any(strictly_precedes(m, x) for x in leftover)
            for m in s.members
        )
        if foothold:
            return False  # crossing found
    return True


# -- applying a coalescing ----------------------------------------------


def _descendants(structure: Structure, h: History) -> list[History]:
    out = []
    stack = list(structure.children(h))
    while stack:
        g = stack.pop()
        out.append(g)
        stack.extend(structure.children(g))
    return out


def _with_component(profile: Profile, player: str, action: str) -> Profile:
    entries = dict(profile)
    entries[player] = action
    return make_profile(entries)


def _without_component(profile: Profile, player: str) -> Profile | None:
    entries = {p: a for p, a in profile if p != player}
    return make_profile(entries) if entries else None


def apply_coalescing(
    structure: Structure, opp: CoalescingOpp
) -> tuple[Structure, HistoryMap]:
    if not structure.has_info_set(opp.base) or not structure.has_info_set(opp.mover):
        raise TransformError(f"stale coalescing opportunity {opp!r}")
    if controls(structure, opp.base, opp.mover) != opp.link:
        raise TransformError(f"stale coalescing opportunity {opp!r}")
    i = opp.owner
    mover_actions = structure.feasible_at(opp.mover)

    base_prefix: dict[History, History] = {}
    for b in opp.base.members:
        for kid in structure.children(b):
            if dict(kid.moves[-1]).get(i) == opp.link:
                base_prefix[kid] = b
                for g in _descendants(structure, kid):
                    base_prefix[g] = b
    mover_prefix: dict[History, History] = {}
    for m in opp.mover.members:
        for g in _descendants(structure, m):
            mover_prefix[g] = m

    forward: dict[History, tuple[History, ...]] = {}
    for g in structure.histories:
        b = base_prefix.get(g)
        if b is None:
            forward[g] = (g,)
            continue
        first = g.move_at(b.length)
        mid = g.moves[b.length + 1:]
        m = mover_prefix.get(g)
        if m is None:
            # weakly between the base and the mover: one replica per action
            forward[g] = tuple(sorted(
                (History(b.moves + (_with_component(first, i, c),) + mid)
                 for c in mover_actions),
                key=history_key,
            ))
        else:
            taken = dict(g.move_at(m.length))[i]
            stripped = _without_component(g.move_at(m.length), i)
            tail = g.moves[b.length + 1:m.length] \
                + ((stripped,) if stripped else ()) \
                + g.moves[m.length + 1:]
            forward[g] = (History(b.moves + (_with_component(first, i, taken),) + tail),)

    new_histories = sorted({h for imgs in forward.values() for h in imgs}, key=history_key)
    infoset_map: dict[InfoSet, InfoSet] = {}
    partitions: dict[str, list[InfoSet]] = {p: [] for p in structure.players}
    for p in structure.players:
        for block in structure.partitions.get(p, ()):
            if block == opp.mover:
                infoset_map[block] = opp.base
                continue
            if block == opp.base:
                new_block = block
            else:
                new_block = InfoSet(p, tuple(
                    h for m in block.members for h in forward[m]
                ))
            partitions[p].append(new_block)
            infoset_map[block] = new_block
    new_structure = Structure(
        structure.players, structure.actions, new_histories,
        {p: tuple(blocks) for p, blocks in partitions.items()},
    )
    mover_lift = {m: (base_prefix[m],) for m in opp.mover.members}
    return new_structure, HistoryMap(
        kind="coalescing", owner=i, forward=forward, infoset_map=infoset_map,
        mover_lift=mover_lift, base=opp.base, mover=opp.mover, link=opp.link,
    )


# -- applying an interchange/simultanizing -------------------------------


def apply_is(structure: Structure, opp: IsOpp) -> tuple[Structure, HistoryMap]:
    i = opp.owner
    if not structure.has_history(opp.anchor) or not structure.has_info_set(opp.mover):
        raise TransformError(f"stale IS opportunity {opp!r}")
    if not opp.submover_set <= opp.mover.member_set:
        raise TransformError("sub-mover is not part of the mover")
    if not dictates(structure, opp.anchor, opp.submover, i):
        raise TransformError(f"stale IS opportunity {opp!r}")
    mover_actions = structure.feasible_at(opp.mover)
    anchor = opp.anchor

    sub_prefix: dict[History, History] = {}
    for m in opp.submover:
        for g in _descendants(structure, m):
            sub_prefix[g] = m
    region = set(_descendants(structure, anchor))

    forward: dict[History, tuple[History, ...]] = {}
    for g in structure.histories:
        if g not in region:
            forward[g] = (g,)
            continue
        first = g.move_at(anchor.length)
        m = sub_prefix.get(g)
        if m is None:
            if not any(g.is_prefix_of(d) for d in opp.submover):
                raise TransformError(
                    f"{g.label()!r} is unrelated to the sub-mover; dictation is broken"
                )
            forward[g] = tuple(sorted(
                (History(anchor.moves
                         + (_with_component(first, i, c),)
                         + g.moves[anchor.length + 1:])
                 for c in mover_actions),
                key=history_key,
            ))
        else:
            taken = dict(g.move_at(m.length))[i]
            stripped = _without_component(g.move_at(m.length), i)
            tail = g.moves[anchor.length + 1:m.length] \
                + ((stripped,) if stripped else ()) \
                + g.moves[m.length + 1:]
            forward[g] = (History(
                anchor.moves + (_with_component(first, i, taken),) + tail
            ),)

    new_histories = sorted({h for imgs in forward.values() for h in imgs}, key=history_key)
    infoset_map: dict[InfoSet, InfoSet] = {}
    partitions: dict[str, list[InfoSet]] = {p: [] for p in structure.players}
    for p in structure.players:
        for block in structure.partitions.get(p, ()):
            if block == opp.mover:
                kept = [m for m in block.members if m not in opp.submover_set]
                new_block = InfoSet(p, (anchor,) + tuple(
                    h for m in kept for h in forward[m]
                ))
            else:
                new_block = InfoSet(p, tuple(
                    h for m in block.members for h in forward[m]
                ))
            partitions[p].append(new_block)
            infoset_map[block] = new_block
    new_structure = Structure(
        structure.players, structure.actions, new_histories,
        {p: tuple(blocks) for p, blocks in partitions.items()},
    )
    mover_lift = {m: (anchor,) for m in opp.submover}
    return new_structure, HistoryMap(
        kind="is", owner=i, forward=forward, infoset_map=infoset_map,
        mover_lift=mover_lift, mover=opp.mover, anchor=anchor,
        submover=opp.submover,
    )


# -- plan transport -------------------------------------------------------


def transport_plan(plan: Plan, step: HistoryMap) -> Plan:
    """Carry a plan across one transformation step.

    An IS step only re-keys information sets.  A coalescing step merges the
    mover's choice into the base: plans that chose the link at the base now
    choose the mover's action there instead.
    """
    if step.kind == "is":
        return Plan(plan.owner, tuple(
            (step.infoset_map[s], a) for s, a in plan.choices
        ))
    if plan.owner != step.owner:
        return Plan(plan.owner, tuple(
            (step.infoset_map[s], a) for s, a in plan.choices
        ))
    mover_choice = plan.get(step.mover)
    out = []
    for s, a in plan.choices:
        if s == step.mover:
            continue
        if s == step.base and a == step.link:
            if mover_choice is None:
                raise TransformError(f"{plan!r} chose the link but not at the mover")
            out.append((step.infoset_map[s], mover_choice))
        else:
            out.append((step.infoset_map[s], a))
    return Plan(plan.owner, tuple(out))


def transport_plan_through(plan: Plan, comp: CompositeMap) -> Plan:
    for step in comp.steps:
        plan = transport_plan(plan, step)
    return plan


# -- minimization ---------------------------------------------------------


def _available_reductions(structure: Structure):
    opps: list = list(find_coalescing(structure))
    opps.extend(o for o in find_is(structure) if is_non_crossing(structure, o))
    return opps


def minimize_uo(structure: Structure, rng=None) -> Structure:
    """Iterate coalescings and non-crossing ISs until none remains.  The
    endpoint is unique up to structure isomorphism whatever the order, so a
    seeded rng may pick arbitrary reduction orders for testing."""
    ok, witness = check_uo(structure)
    if not ok:
        raise EgsError(f"minimization requires UO; offending pair {witness}")
    current = structure
    while True:
        opps = _available_reductions(current)
        if not opps:
            return current
        opp = opps[0] if rng is None else opps[rng.randrange(len(opps))]
        if isinstance(opp, CoalescingOpp):
            current, _ = apply_coalescing(current, opp)
        else:
            current, _ = apply_is(current, opp)


# -- immediate compactification opportunities -----------------------------


def is_immediate_coalescing(structure: Structure, opp: CoalescingOpp) -> bool:
    base = opp.base.members
    return all(
        any(strictly_precedes(b, m) and m.length == b.length + 1 for b in base)
        for m in opp.mover.members
    )


def is_immediate_is(structure: Structure, opp: IsOpp) -> bool:
    return all(
        strictly_precedes(opp.anchor, m) and m.length == opp.anchor.length + 1
        for m in opp.submover
    )


@dataclass(frozen=True)
class Ico:
    """An immediate compactification opportunity: a bundle of immediate
    coalescings and immediate IS parts whose movers share one transitive-
    simultaneity class."""

    coalescings: tuple[CoalescingOpp, ...]
    is_parts: tuple[IsOpp, ...]

    def elements(self) -> tuple[tuple[str, frozenset[History]], ...]:
        out = [(c.owner, c.mover.member_set) for c in self.coalescings]
        out.extend((p.owner, p.submover_set) for p in self.is_parts)
        return tuple(out)

    def participants(self) -> tuple[InfoSet, ...]:
        sets = [c.mover for c in self.coalescings]
        sets.extend(p.mover for p in self.is_parts)
        return tuple(dict.fromkeys(sets))

    @property
    def size(self) -> int:
        return len(self.coalescings) + len(self.is_parts)


def _class_atoms(structure: Structure):
    """Immediate atoms grouped by the transitive-simultaneity class of
    their mover information set."""
    classes = sim_classes(structure)
    class_of: dict[InfoSet, int] = {}
    for idx, group in enumerate(classes):
        for s in group:
            class_of[s] = idx
    atoms: dict[int, list] = {idx: [] for idx in range(len(classes))}
    for opp in find_coalescing(structure):
        if is_immediate_coalescing(structure, opp):
            atoms[class_of[opp.mover]].append(opp)
    for opp in find_is(structure):
        if is_immediate_is(structure, opp):
            atoms[class_of[opp.mover]].append(opp)
    return classes, atoms


def _complete_in_class(structure: Structure, class_sets, atoms) -> list[Ico]:
    """All complete ICOs built from the class's immediate atoms: every set
    in the class participates, the named parts are pairwise distinct, and
    every overlap of two participants is exactly the intersection of two
    named parts (so overlaps move as a whole)."""
    if len(atoms) > 16:
        raise TransformError(
            f"too many immediate atoms in one class ({len(atoms)}); instance too large"
        )
    out: list[Ico] = []
    indexed = list(enumerate(atoms))
    for r in range(1, len(indexed) + 1):
        for combo in itertools.combinations(indexed, r):
            chosen = [a for _, a in combo]
            coal = tuple(a for a in chosen if isinstance(a, CoalescingOpp))
            isps = tuple(a for a in chosen if isinstance(a, IsOpp))
            ico = Ico(coal, isps)
            elements = ico.elements()
            if len(set(elements)) != len(elements):
                continue
            participants = set(ico.participants())
            if participants != set(class_sets):
                continue
            if _overlaps_covered(ico):
                out.append(ico)
    return out


def _overlaps_covered(ico: Ico) -> bool:
    elements = ico.elements()
    participants = ico.participants()
    for f, e in itertools.combinations(participants, 2):
        overlap = f.member_set & e.member_set
        if not overlap:
            continue
        found = False
        for owner_b, members_b in elements:
            if owner_b != f.owner or not members_b <= f.member_set:
                continue
            for owner_c, members_c in elements:
                if owner_c != e.owner or not members_c <= e.member_set:
                    continue
                if members_b & members_c == overlap:
                    found = True
                    break
            if found:
                break
        if not found:
            return False
    return True


def find_complete_icos(structure: Structure) -> list[Ico]:
    ok, witness = check_uo(structure)
    if not ok:
        raise EgsError(f"complete ICOs require UO; offending pair {witness}")
    classes, atoms = _class_atoms(structure)
    out: list[Ico] = []
    for idx, group in enumerate(classes):
        if atoms[idx]:
            out.extend(_complete_in_class(structure, group, atoms[idx]))
    return out


def _verify_complete(structure: Structure, ico: Ico) -> None:
    for opp in ico.coalescings:
        if controls(structure, opp.base, opp.mover) != opp.link:
            raise TransformError(f"stale coalescing part {opp!r}")
        if not is_immediate_coalescing(structure, opp):
            raise TransformError(f"coalescing part {opp!r} is not immediate")
    for opp in ico.is_parts:
        if not structure.has_info_set(opp.mover) or not dictates(
            structure, opp.anchor, opp.submover, opp.owner
        ):
            raise TransformError(f"stale IS part {opp!r}")
        if not is_immediate_is(structure, opp):
            raise TransformError(f"IS part {opp!r} is not immediate")
    elements = ico.elements()
    if len(set(elements)) != len(elements):
        raise TransformError("the named parts of the ICO are not distinct")
    participants = set(ico.participants())
    classes = sim_classes(structure)
    for group in classes:
        if participants & set(group) and participants != set(group):
            raise TransformError(
                "incomplete ICO: some transitively simultaneous set does not participate"
            )
    if not _overlaps_covered(ico):
        raise TransformError("incomplete ICO: an overlap does not move as a whole")


def apply_tau(structure: Structure, ico: Ico) -> tuple[Structure, CompositeMap]:
    """Compose the ICO's IS parts (input order) and then its coalescing
    parts.  Unambiguous ordering may break on intermediate structures and
    is restored by the final one."""
    _verify_complete(structure, ico)
    current = structure
    comp = CompositeMap.identity(structure)
    for part in ico.is_parts:
        anchors = comp.forward[part.anchor]
        for anchor in anchors:
            mover_now = comp.infoset_map[part.mover]
            d = tuple(m for m in mover_now.members if strictly_precedes(anchor, m))
            if not d or not dictates(current, anchor, d, part.owner):
                raise TransformError(
                    f"IS part {part!r} no longer dictates at {anchor.label()!r}"
                )
            # Sibling anchor images live in disjoint subtrees, so the
            # remaining ones are untouched by this application.
            current, step = apply_is(
                current, IsOpp(part.owner, anchor, d, mover_now)
            )
            comp = comp.extend(step)
    for part in ico.coalescings:
        base_now = comp.infoset_map[part.base]
        mover_now = comp.infoset_map[part.mover]
        link = controls(current, base_now, mover_now)
        if link is None:
            raise TransformError(f"coalescing part {part!r} no longer controls")
        current, step = apply_coalescing(
            current, CoalescingOpp(part.owner, base_now, mover_now, link)
        )
        comp = comp.extend(step)
    return current, comp


def backward_compactify(structure: Structure) -> tuple[Structure, list[Ico]]:
    """Apply complete ICOs class by class from the deepest transitive-
    simultaneity class toward the root; ties break on the class's smallest
    member history."""
    ok, witness = check_uo(structure)
    if not ok:
        raise EgsError(f"backward compactification requires UO; offending pair {witness}")
    current = structure
    schedule: list[Ico] = []
    while True:
        classes, atoms = _class_atoms(current)

        def class_depth(group) -> int:
            return max(m.length for s in group for m in s.members)

        def class_tiebreak(group):
            return min(history_key(m) for s in group for m in s.members)

        order = sorted(
            range(len(classes)),
            key=lambda idx: (-class_depth(classes[idx]), class_tiebreak(classes[idx])),
        )
        applied = False
        for idx in order:
            if not atoms[idx]:
                continue
            icos = _complete_in_class(current, classes[idx], atoms[idx])
            if icos:
                ico = icos[0]
                current, _ = apply_tau(current, ico)
                schedule.append(ico)
                applied = True
                break
        if not applied:
            return current, schedule


# -- synthesized opportunities for von Neumann structures ------------------


@dataclass(frozen=True)
class CompleteControl:
    """A whole information set dictated piecewise by equal-length,
    pairwise-incomparable anchor histories."""

    owner: str
    mover: InfoSet
    anchors: tuple[History, ...]
    pieces: tuple[tuple[History, ...], ...]

    def __post_init__(self):
        pairs = sorted(
            zip(self.anchors, self.pieces), key=lambda ap: history_key(ap[0])
        )
        object.__setattr__(self, "anchors", tuple(a for a, _ in pairs))
        object.__setattr__(self, "pieces", tuple(tuple(p) for _, p in pairs))


@dataclass(frozen=True)
class SynthOpp:
    """A synthesized opportunity: coalescings plus complete controls whose
    movers are distinct, shifting collectively so every non-participating
    information set keeps its equal-length property."""

    coalescings: tuple[CoalescingOpp, ...]
    controls: tuple[CompleteControl, ...]

    def movers(self) -> tuple[InfoSet, ...]:
        out = [c.mover for c in self.coalescings]
        out.extend(k.mover for k in self.controls)
        return tuple(out)


def _complete_controls_for(structure: Structure, mover: InfoSet, opps: list[IsOpp]):
    """Subsets of the mover's IS anchors whose pieces partition it, with
    pairwise-incomparable anchors of equal length."""
    out = []
    indexed = list(enumerate(opps))
    for r in range(1, len(indexed) + 1):
        for combo in itertools.combinations(indexed, r):
            chosen = [o for _, o in combo]
            anchors = [o.anchor for o in chosen]
            if len({a.length for a in anchors}) != 1:
                continue
            if any(
                a.is_prefix_of(b) or b.is_prefix_of(a)
                for a, b in itertools.combinations(anchors, 2)
            ):
                continue
            covered: set[History] = set()
            disjoint = True
            for o in chosen:
                if covered & o.submover_set:
                    disjoint = False
                    break
                covered |= o.submover_set
            if not disjoint or covered != mover.member_set:
                continue
            out.append(CompleteControl(
                mover.owner, mover,
                tuple(o.anchor for o in chosen),
                tuple(o.submover for o in chosen),
            ))
    return out


def shift_depth(structure: Structure, h: History, movers: frozenset[InfoSet]) -> int:
    """How many strict prefixes of h are covered exclusively by mover
    information sets (each such move is absorbed upward by the composed
    transformation)."""
    count = 0
    for n in range(h.length):
        g = h.prefix(n)
        sets = [structure.info_set_of(p, g) for p in structure.active(g)]
        if sets and all(s in movers for s in sets):
            count += 1
    return count


def _uniform_shift(structure: Structure, movers: frozenset[InfoSet]) -> bool:
    for s in structure.info_sets:
        if s in movers:
            continue
        depths = {shift_depth(structure, m, movers) for m in s.members}
        if len(depths) > 1:
            return False
    return True


def find_synthesized(structure: Structure, atom_cap: int = 14) -> list[SynthOpp]:
    ok, witness = check_vnm(structure)
    if not ok:
        raise EgsError(f"synthesized opportunities require a vNM structure; see {witness!r}")
    coal_atoms = find_coalescing(structure)
    is_by_mover: dict[InfoSet, list[IsOpp]] = {}
    for opp in find_is(structure):
        is_by_mover.setdefault(opp.mover, []).append(opp)
    control_atoms: list[CompleteControl] = []
    for mover in structure.info_sets:
        if mover in is_by_mover:
            control_atoms.extend(
                _complete_controls_for(structure, mover, is_by_mover[mover])
            )
    atoms: list = list(coal_atoms) + control_atoms
    if len(atoms) > atom_cap:
        raise TransformError(
            f"too many candidate atoms ({len(atoms)}); instance too large"
        )
    out: list[SynthOpp] = []
    indexed = list(enumerate(atoms))
    for r in range(1, len(indexed) + 1):
        for combo in itertools.combinations(indexed, r):
            chosen = [a for _, a in combo]
            opp = SynthOpp(
                tuple(a for a in chosen if isinstance(a, CoalescingOpp)),
                tuple(a for a in chosen if isinstance(a, CompleteControl)),
            )
            movers = opp.movers()
            if len(set(movers)) != len(movers):
                continue
            if _uniform_shift(structure, frozenset(movers)):
                out.append(opp)
    return out


def _verify_synth(structure: Structure, opp: SynthOpp) -> None:
    for c in opp.coalescings:
        if controls(structure, c.base, c.mover) != c.link:
            raise TransformError(f"stale coalescing part {c!r}")
    for k in opp.controls:
        structure.require_info_set(k.mover)
        if len({a.length for a in k.anchors}) != 1:
            raise TransformError(f"anchors of {k!r} are not equal length")
        covered: set[History] = set()
        for anchor, piece in zip(k.anchors, k.pieces):
            if not dictates(structure, anchor, piece, k.owner):
                raise TransformError(f"stale control part {k!r}")
            covered |= set(piece)
        if covered != k.mover.member_set:
            raise TransformError(f"pieces of {k!r} do not partition the mover")
    movers = opp.movers()
    if len(set(movers)) != len(movers):
        raise TransformError("movers of a synthesized opportunity must be distinct")
    if not _uniform_shift(structure, frozenset(movers)):
        raise TransformError(
            "a non-participating information set would lose equal length"
        )


def apply_phi(structure: Structure, opp: SynthOpp) -> Structure:
    """The composed equal-length-preserving transformation: all control
    pieces (deepest anchors first), then all coalescings (deepest movers
    first)."""
    ok, witness = check_vnm(structure)
    if not ok:
        raise EgsError(f"the transformation requires a vNM structure; see {witness!r}")
    _verify_synth(structure, opp)
    current = structure
    comp = CompositeMap.identity(structure)
    pieces = [
        (k, anchor) for k in opp.controls for anchor in k.anchors
    ]
    pieces.sort(key=lambda ka: (-ka[1].length, history_key(ka[1])))
    for k, anchor in pieces:
        mover_now = comp.infoset_map[k.mover]
        for a in comp.forward[anchor]:
            d = tuple(m for m in mover_now.members if strictly_precedes(a, m))
            if not d or not dictates(current, a, d, k.owner):
                raise TransformError(f"control piece at {a.label()!r} is gone")
            current, step = apply_is(current, IsOpp(k.owner, a, d, mover_now))
            comp = comp.extend(step)
            mover_now = step.infoset_map[mover_now]
    coals = sorted(
        opp.coalescings,
        key=lambda c: (-max(m.length for m in c.mover.members), _infoset_key(c.mover)),
    )
    for c in coals:
        base_now = comp.infoset_map[c.base]
        mover_now = comp.infoset_map[c.mover]
        link = controls(current, base_now, mover_now)
        if link is None:
            raise TransformError(f"coalescing part {c!r} no longer controls")
        current, step = apply_coalescing(
            current, CoalescingOpp(c.owner, base_now, mover_now, link)
        )
        comp = comp.extend(step)
    ok, witness = check_vnm(current)
    if not ok:
        raise TransformError(f"transformation result lost equal length at {witness!r}")
    return current
