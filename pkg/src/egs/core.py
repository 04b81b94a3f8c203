"""Immutable value types for extensive game structures with simultaneous moves.

A history is a sequence of action profiles; a profile maps each player who
moves at that point to the action she takes, so simultaneous moves need no
component ordering.  A structure bundles the player set, the per-player
action alphabets, a prefix-closed history set, and per-player information
partitions.  Everything derived (terminals, active players, feasible
actions, subtree terminal sets) is computed once and cached; all values are
immutable and safe to share across threads.
"""

from __future__ import annotations

from dataclasses import dataclass


class EgsError(Exception):
    """Base error for this package."""


Profile = tuple[tuple[str, str], ...]  # ((player, action), ...) sorted by player


def make_profile(entries: dict[str, str]) -> Profile:
    if not entries:
        raise EgsError("action profile must be non-empty")
    return tuple(sorted(entries.items()))


@dataclass(frozen=True)
class History:
    """A finite sequence of action profiles from the root."""

    moves: tuple[Profile, ...] = ()

    @property
    def length(self) -> int:
        return len(self.moves)

    def prefix(self, n: int) -> "History":
        return History(self.moves[:n])

    @property
    def parent(self) -> "History":
        if not self.moves:
            raise EgsError("the root history has no predecessor")
        return History(self.moves[:-1])

    def extend(self, profile: Profile) -> "History":
        return History(self.moves + (profile,))

    def move_at(self, index: int) -> Profile:
        return self.moves[index]

    def is_prefix_of(self, other: "History") -> bool:
        n = len(self.moves)
        return n <= len(other.moves) and other.moves[:n] == self.moves

    def label(self) -> str:
        """Canonical display form: profiles joined by '/', singleton
        profiles shown as the bare action, others parenthesised with
        entries 'player=action' sorted by player."""
        parts = []
        for profile in self.moves:
            if len(profile) == 1:
                parts.append(profile[0][1])
            else:
                parts.append("(" + ",".join(f"{p}={a}" for p, a in profile) + ")")
        return "/".join(parts)

    def __repr__(self) -> str:
        return f"History({self.label()!r})"


ROOT = History()


def is_prefix(x: History, y: History) -> bool:
    """Sequence-prefix order on histories; the empty history precedes all."""
    return x.is_prefix_of(y)


def strictly_precedes(x: History, y: History) -> bool:
    return x.length < y.length and x.is_prefix_of(y)


@dataclass(frozen=True)
class InfoSet:
    """An information set: the owning player plus a block of her histories.

    Two information sets with equal member sets but different owners are
    distinct values, which the identity of this type preserves.
    """

    owner: str
    members: tuple[History, ...]

    def __post_init__(self):
        ordered = tuple(sorted(set(self.members), key=lambda h: h.moves))
        object.__setattr__(self, "members", ordered)
        if not ordered:
            raise EgsError("an information set needs at least one member")

    @property
    def member_set(self) -> frozenset[History]:
        return frozenset(self.members)

    def __repr__(self) -> str:
        names = ",".join(h.label() or "''" for h in self.members)
        return f"InfoSet({self.owner}:{{{names}}})"


@dataclass(frozen=True)
class RelationSet:
    """Which of the three order relations hold between two information sets."""

    before: bool
    simultaneous: bool
    after: bool

    @property
    def related(self) -> bool:
        return self.before or self.simultaneous or self.after

    @property
    def weakly_follows(self) -> bool:
        # second argument weakly follows the first: before or simultaneous
        return self.before or self.simultaneous


def history_key(h: History):
    return h.moves


class Structure:
    """An extensive game structure: players, actions, histories, partitions.

    The constructor canonicalises its inputs and builds derived indices
    defensively, so malformed data can still be represented and then
    reported on by the validator rather than raising here.
    """

    def __init__(
        self,
        players: tuple[str, ...] | list[str],
        actions: dict[str, frozenset[str]],
        histories,
        partitions: dict[str, tuple[InfoSet, ...]] | dict[str, list[InfoSet]],
    ):
        self.players: tuple[str, ...] = tuple(players)
        self.actions: dict[str, frozenset[str]] = {
            p: frozenset(a) for p, a in actions.items()
        }
        hist = sorted(set(histories), key=history_key)
        self.histories: tuple[History, ...] = tuple(hist)
        self._hist_set = frozenset(hist)
        self.partitions: dict[str, tuple[InfoSet, ...]] = {
            p: tuple(sorted(blocks, key=lambda s: tuple(history_key(m) for m in s.members)))
            for p, blocks in partitions.items()
        }
        self._build_indices()

    def _build_indices(self) -> None:
        children: dict[History, list[History]] = {h: [] for h in self.histories}
        for h in self.histories:
            if h.length == 0:
                continue
            parent = h.parent
            if parent in children:
                children[parent].append(h)
        self._children = {
            h: tuple(sorted(c, key=history_key)) for h, c in children.items()
        }
        self.terminals: tuple[History, ...] = tuple(
            h for h in self.histories if not self._children[h]
        )
        self.nonterminals: tuple[History, ...] = tuple(
            h for h in self.histories if self._children[h]
        )
        self._terminal_set = frozenset(self.terminals)
        # Active players at h: key set of the first child's last move.  The
        # validator checks that all children agree.
        active: dict[History, tuple[str, ...]] = {}
        feasible: dict[tuple[History, str], tuple[str, ...]] = {}
        for h in self.nonterminals:
            kids = self._children[h]
            keys = tuple(sorted({p for kid in kids for p, _ in kid.moves[-1]}))
            active[h] = keys
            for p in keys:
                acts = sorted(
                    {dict(kid.moves[-1])[p] for kid in kids if p in dict(kid.moves[-1])}
                )
                feasible[(h, p)] = tuple(acts)
        self._active = active
        self._feasible = feasible
        index: dict[tuple[str, History], InfoSet] = {}
        for p, blocks in self.partitions.items():
            for block in blocks:
                for m in block.members:
                    index[(p, m)] = block
        self._infoset_index = index
        self._z_cache: dict[History, frozenset[History]] = {}

    # -- basic queries -------------------------------------------------

    @property
    def root(self) -> History:
        return ROOT

    def has_history(self, h: History) -> bool:
        return h in self._hist_set

    def is_terminal(self, h: History) -> bool:
        return h in self._terminal_set

    def children(self, h: History) -> tuple[History, ...]:
        return self._children[h]

    def active(self, h: History) -> tuple[str, ...]:
        """I(h): the players who move at non-terminal h."""
        return self._active.get(h, ())

    def feasible(self, h: History, player: str) -> tuple[str, ...]:
        """F_i(h): actions feasible for an active player at h."""
        return self._feasible.get((h, player), ())

    def feasible_at(self, s: InfoSet) -> tuple[str, ...]:
        return self.feasible(s.members[0], s.owner)

    def player_histories(self, player: str) -> tuple[History, ...]:
        """H_i: non-terminal histories where the player is active."""
        return tuple(h for h in self.nonterminals if player in self._active[h])

    @property
    def info_sets(self) -> tuple[InfoSet, ...]:
        out = []
        for p in self.players:
            out.extend(self.partitions.get(p, ()))
        return tuple(out)

    def info_set_of(self, player: str, h: History) -> InfoSet:
        try:
            return self._infoset_index[(player, h)]
        except KeyError:
            raise EgsError(f"player {player} has no information set at {h.label()!r}")

    def has_info_set(self, s: InfoSet) -> bool:
        return s in self.partitions.get(s.owner, ())

    def require_info_set(self, s: InfoSet) -> None:
        if not self.has_info_set(s):
            raise EgsError(f"{s!r} is not an information set of this structure")

    # -- subtree terminal sets ------------------------------------------

    def terminals_below(self, h: History) -> frozenset[History]:
        """Z(h): terminals reachable from h."""
        cached = self._z_cache.get(h)
        if cached is not None:
            return cached
        if h not in self._hist_set:
            raise EgsError(f"{h.label()!r} is not a history of this structure")
        if h in self._terminal_set:
            out = frozenset((h,))
        else:
            out = frozenset().union(*(self.terminals_below(c) for c in self._children[h]))
        self._z_cache[h] = out
        return out

    def terminals_below_set(self, hs) -> frozenset[History]:
        """Z(U) for a set of histories."""
        out: frozenset[History] = frozenset()
        for h in hs:
            out |= self.terminals_below(h)
        return out

    def terminals_after_action(self, s: InfoSet, action: str) -> frozenset[History]:
        """Z(h_i a_i): terminals reached when the owner picks `action` at s."""
        out: frozenset[History] = frozenset()
        for m in s.members:
            for kid in self.children(m):
                if dict(kid.moves[-1]).get(s.owner) == action:
                    out |= self.terminals_below(kid)
        return out

    # -- equality -------------------------------------------------------

    def _key(self):
        return (
            self.players,
            tuple(sorted((p, tuple(sorted(a))) for p, a in self.actions.items())),
            self.histories,
            tuple(sorted(
                ((p, tuple(s.members for s in blocks)) for p, blocks in self.partitions.items())
            )),
        )

    def __eq__(self, other) -> bool:
        return isinstance(other, Structure) and self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())

    def __repr__(self) -> str:
        return (
            f"Structure(players={len(self.players)}, histories={len(self.histories)},"
            f" infosets={len(self.info_sets)})"
        )


def build_structure(players, actions, histories, partitions) -> Structure:
    """Convenience constructor taking loose containers."""
    return Structure(
        tuple(players),
        {p: frozenset(a) for p, a in actions.items()},
        histories,
        {p: tuple(blocks) for p, blocks in partitions.items()},
    )


# -- order relations between information sets ---------------------------


def relation(structure: Structure, a: InfoSet, b: InfoSet) -> RelationSet:
    """Compute which of <, ~, > hold between two information sets of G."""
    structure.require_info_set(a)
    structure.require_info_set(b)
    before = any(
        strictly_precedes(x, y) for x in a.members for y in b.members
    )
    after = any(
        strictly_precedes(y, x) for x in a.members for y in b.members
    )
    simultaneous = bool(a.member_set & b.member_set)
    return RelationSet(before=before, simultaneous=simultaneous, after=after)


def _sim_class_index(structure: Structure) -> dict[History, int]:
    """Union-find over non-terminal histories: one class per transitive-
    simultaneity component (co-membership in some information set)."""
    parent: dict[History, History] = {}

    def find(x: History) -> History:
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    for h in structure.nonterminals:
        parent[h] = h
    for s in structure.info_sets:
        first = s.members[0]
        if first not in parent:
            continue
        for m in s.members[1:]:
            if m in parent:
                ra, rb = find(first), find(m)
                if ra != rb:
                    parent[rb] = ra
    reps: dict[History, int] = {}
    out: dict[History, int] = {}
    for h in structure.nonterminals:
        r = find(h)
        if r not in reps:
            reps[r] = len(reps)
        out[h] = reps[r]
    return out


def transitively_simultaneous(structure: Structure, a: InfoSet, b: InfoSet) -> bool:
    """True iff the member histories of a and b are linked by a chain of
    co-memberships (the reflexive-symmetric-transitive closure of ~)."""
    idx = _sim_class_index(structure)
    classes_a = {idx[m] for m in a.members if m in idx}
    classes_b = {idx[m] for m in b.members if m in idx}
    if a == b:
        return True
    return bool(classes_a & classes_b)


def sim_classes(structure: Structure) -> tuple[tuple[InfoSet, ...], ...]:
    """Partition all information sets into transitive-simultaneity classes.

    All members of one information set land in one history class, so each
    set belongs to exactly one class.
    """
    idx = _sim_class_index(structure)
    by_class: dict[int, list[InfoSet]] = {}
    for s in structure.info_sets:
        c = idx[s.members[0]]
        by_class.setdefault(c, []).append(s)
    ordered = []
    for c in sorted(
        by_class,
        key=lambda c: min(
            tuple(history_key(m) for m in s.members) for s in by_class[c]
        ),
    ):
        ordered.append(tuple(sorted(
            by_class[c], key=lambda s: (s.owner, tuple(history_key(m) for m in s.members))
        )))
    return tuple(ordered)


