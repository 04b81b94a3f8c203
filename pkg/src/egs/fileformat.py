"""Line-based text format for structures and games.

    egs 1
    player 1 actions A,O,B,E,F
    player 2 actions c,d,h,i
    node "" 1:A|O|B
    node "A" 1:E|F 2:c|d
    node "O" 2:h|i
    infoset 2 {"O","B"}
    payoff "O/h" 1=1/1 2=0/1

Only non-terminal histories get node lines; children are the full action
profile product, and anything without a node line is a terminal.  History
labels join profiles with '/'; a profile with one entry is the bare action
and otherwise is '(player=action,...)' sorted by player.  Active histories
not covered by an infoset line become singleton information sets, so only
non-trivial blocks need declaring.  Payoff lines (rationals 'p/q') turn
the file into a game.  '#' starts a comment outside quotes.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .core import EgsError, History, InfoSet, ROOT, Structure
from .dominance import Game


class FormatError(EgsError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


_TOKEN = re.compile(r'"(?:[^"\\]|\\.)*"|\S+')


def _strip_comment(line: str) -> str:
    out = []
    in_quote = False
    for ch in line:
        if ch == '"':
            in_quote = not in_quote
        if ch == "#" and not in_quote:
            break
        out.append(ch)
    return "".join(out)


def _unquote(token: str, lineno: int) -> str:
    if len(token) < 2 or token[0] != '"' or token[-1] != '"':
        raise FormatError(lineno, f"expected a quoted history, got {token}")
    return token[1:-1].replace('\\"', '"')


def _parse_fraction(text: str, lineno: int) -> Fraction:
    try:
        if "/" in text:
            num, den = text.split("/", 1)
            value = Fraction(int(num), int(den))
        else:
            value = Fraction(int(text))
    except (ValueError, ZeroDivisionError):
        raise FormatError(lineno, f"bad rational {text!r}")
    return value


def parse(text: str):
    """Parse the format; returns a Structure, or a Game when payoff lines
    are present.  Diagnostics carry line numbers; semantic problems are
    left for validate_structure."""
    players: list[str] = []
    actions: dict[str, set[str]] = {}
    nodes: dict[str, tuple[int, list[tuple[str, list[str]]]]] = {}
    infoset_lines: list[tuple[int, str, list[str]]] = []
    payoff_lines: list[tuple[int, str, dict[str, Fraction]]] = []
    header_seen = False

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw).strip()
        if not line:
            continue
        tokens = _TOKEN.findall(line)
        if not header_seen:
            if tokens[:2] != ["egs", "1"]:
                raise FormatError(lineno, "expected header 'egs 1'")
            header_seen = True
            continue
        kind = tokens[0]
        if kind == "player":
            if len(tokens) != 4 or tokens[2] != "actions":
                raise FormatError(lineno, "expected: player <id> actions a,b,...")
            pid = tokens[1]
            if pid in actions:
                raise FormatError(lineno, f"player {pid} declared twice")
            players.append(pid)
            actions[pid] = {a for a in tokens[3].split(",") if a}
        elif kind == "node":
            if len(tokens) < 3:
                raise FormatError(lineno, "expected: node \"<history>\" pid:a|b ...")
            label = _unquote(tokens[1], lineno)
            specs = []
            for tok in tokens[2:]:
                if ":" not in tok:
                    raise FormatError(lineno, f"expected pid:a|b|..., got {tok}")
                pid, acts = tok.split(":", 1)
                specs.append((pid, [a for a in acts.split("|") if a]))
            if label in nodes:
                raise FormatError(lineno, f"node {label!r} declared twice")
            nodes[label] = (lineno, specs)
        elif kind == "infoset":
            if len(tokens) < 3:
                raise FormatError(lineno, "expected: infoset <pid> {\"h\",...}")
            body = line.split(None, 2)[2].strip()
            if not (body.startswith("{") and body.endswith("}")):
                raise FormatError(lineno, "infoset members must be {...}")
            labels = [
                _unquote(t, lineno)
                for t in re.findall(r'"(?:[^"\\]|\\.)*"', body[1:-1])
            ]
            infoset_lines.append((lineno, tokens[1], labels))
        elif kind == "payoff":
            if len(tokens) < 3:
                raise FormatError(lineno, "expected: payoff \"<terminal>\" pid=p/q ...")
            label = _unquote(tokens[1], lineno)
            values: dict[str, Fraction] = {}
            for tok in tokens[2:]:
                if "=" not in tok:
                    raise FormatError(lineno, f"expected pid=p/q, got {tok}")
                pid, num = tok.split("=", 1)
                values[pid] = _parse_fraction(num, lineno)
            payoff_lines.append((lineno, label, values))
        else:
            raise FormatError(lineno, f"unknown directive {kind!r}")
    if not header_seen:
        raise FormatError(1, "empty input; expected header 'egs 1'")

    histories: dict[str, History] = {}
    used_nodes: set[str] = set()
    if "" in nodes:
        stack = [ROOT]
        histories[""] = ROOT
        while stack:
            h = stack.pop()
            label = h.label()
            spec = nodes.get(label)
            if spec is None:
                continue
            used_nodes.add(label)
            lineno, entries = spec
            pools = []
            for pid, acts in entries:
                if not acts:
                    raise FormatError(lineno, f"player {pid} offers no actions")
                pools.append([(pid, a) for a in acts])
            for combo in _product(pools):
                child = h.extend(tuple(sorted(combo)))
                histories[child.label()] = child
                stack.append(child)
    unreachable = sorted(set(nodes) - used_nodes)
    if unreachable:
        lineno = nodes[unreachable[0]][0]
        raise FormatError(lineno, f"node {unreachable[0]!r} is not reachable from the root")

    declared: dict[str, list[InfoSet]] = {p: [] for p in players}
    declared_members: dict[str, set[History]] = {p: set() for p in players}
    for lineno, pid, labels in infoset_lines:
        if pid not in actions:
            raise FormatError(lineno, f"infoset for undeclared player {pid}")
        members = []
        for lbl in labels:
            if lbl not in histories:
                raise FormatError(lineno, f"unknown history {lbl!r} in infoset")
            members.append(histories[lbl])
        if not members:
            raise FormatError(lineno, "empty infoset")
        declared[pid].append(InfoSet(pid, tuple(members)))
        declared_members[pid].update(members)

    skeleton = Structure(
        players, {p: frozenset(a) for p, a in actions.items()},
        histories.values(), {p: tuple(v) for p, v in declared.items()},
    )
    partitions = {p: list(declared[p]) for p in players}
    for p in players:
        for h in skeleton.player_histories(p):
            if h not in declared_members[p]:
                partitions[p].append(InfoSet(p, (h,)))
    structure = Structure(
        players, {p: frozenset(a) for p, a in actions.items()},
        histories.values(), {p: tuple(v) for p, v in partitions.items()},
    )

    if not payoff_lines:
        return structure
    payoffs: dict[str, dict[History, Fraction]] = {p: {} for p in players}
    for lineno, label, values in payoff_lines:
        if label not in histories:
            raise FormatError(lineno, f"unknown terminal {label!r}")
        z = histories[label]
        for pid, v in values.items():
            if pid not in actions:
                raise FormatError(lineno, f"payoff for undeclared player {pid}")
            payoffs[pid][z] = v
    return Game(structure, payoffs)


def _product(pools):
    if not pools:
        yield ()
        return
    head, *tail = pools
    for a in head:
        for rest in _product(tail):
            yield (a,) + rest


def _quote(label: str) -> str:
    return '"' + label.replace('"', '\\"') + '"'


def serialize(obj) -> str:
    """Deterministic text form; parse(serialize(x)) == x."""
    game = obj if isinstance(obj, Game) else None
    structure: Structure = game.structure if game else obj
    lines = ["egs 1"]
    for p in structure.players:
        lines.append(f"player {p} actions {','.join(sorted(structure.actions[p]))}")
    for h in structure.histories:
        if structure.is_terminal(h):
            continue
        specs = " ".join(
            f"{p}:{'|'.join(structure.feasible(h, p))}" for p in structure.active(h)
        )
        lines.append(f"node {_quote(h.label())} {specs}")
    for p in structure.players:
        for block in structure.partitions.get(p, ()):
            members = ",".join(_quote(m.label()) for m in block.members)
            lines.append(f"infoset {p} {{{members}}}")
    if game is not None:
        for z in structure.terminals:
            values = " ".join(
                f"{p}={game.payoffs[p][z].numerator}/{game.payoffs[p][z].denominator}"
                for p in structure.players
            )
            lines.append(f"payoff {_quote(z.label())} {values}")
    return "\n".join(lines) + "\n"
