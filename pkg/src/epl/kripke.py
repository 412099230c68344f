"""Finite multi-agent Kripke models."""

from __future__ import annotations

import json
import re
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Mapping

from .errors import AgentMismatch, ModelError, NotK45, NotSimplifiable

FRAME_CLASSES = ("K", "K45", "KD45", "S5")


class KripkeModel:
    """States, per-agent accessibility relations and a valuation.

    Treated as an immutable value; every update builds a new model.
    """

    __slots__ = ("states", "agents", "rel", "val", "_succ", "_index", "cache")

    def __init__(
        self,
        states: Iterable[str],
        agents: Iterable[str],
        rel: Mapping[str, Iterable[tuple[str, str]]] | None = None,
        val: Mapping[str, Iterable[str]] | None = None,
    ):
        self.states = tuple(dict.fromkeys(states))
        self.agents = tuple(dict.fromkeys(agents))
        if not self.states:
            raise ModelError("a model needs at least one state")
        if not self.agents:
            raise ModelError("a model needs at least one agent")
        known = set(self.states)
        rel = rel or {}
        for a in rel:
            if a not in self.agents:
                raise ModelError(f"relation given for undeclared agent {a!r}")
        self.rel = {}
        for a in self.agents:
            pairs = frozenset((s, t) for s, t in rel.get(a, ()))
            for s, t in pairs:
                if s not in known or t not in known:
                    raise ModelError(f"agent {a!r} relates undeclared state in {(s, t)!r}")
            self.rel[a] = pairs
        val = val or {}
        for s in val:
            if s not in known:
                raise ModelError(f"valuation given for undeclared state {s!r}")
        self.val = {s: frozenset(val.get(s, ())) for s in self.states}
        self._succ = None
        self._index = None
        # memo used by the semantics module (formula extensions, updates)
        self.cache = {}

    def succ(self, agent: str) -> dict[str, frozenset[str]]:
        if self._succ is None:
            table = {}
            for a in self.agents:
                out = {s: set() for s in self.states}
                for s, t in self.rel[a]:
                    out[s].add(t)
                table[a] = {s: frozenset(ts) for s, ts in out.items()}
            self._succ = table
        return self._succ[agent]

    def index(self, state: str) -> int:
        if self._index is None:
            self._index = {s: i for i, s in enumerate(self.states)}
        return self._index[state]

    def atoms(self) -> frozenset[str]:
        return frozenset().union(*self.val.values())

    def arrow_count(self) -> int:
        return sum(len(r) for r in self.rel.values())

    def __eq__(self, other):
        if not isinstance(other, KripkeModel):
            return NotImplemented
        return (
            set(self.states) == set(other.states)
            and set(self.agents) == set(other.agents)
            and self.rel == other.rel
            and self.val == other.val
        )

    def __hash__(self):
        return hash((frozenset(self.states), frozenset(self.rel.items())))

    def __repr__(self):
        return f"KripkeModel({len(self.states)} states, agents={list(self.agents)})"


@dataclass(frozen=True)
class PointedModel:
    model: KripkeModel
    point: str

    def __post_init__(self):
        if self.point not in self.model.val:
            raise ModelError(f"point {self.point!r} is not a state of the model")


# -- frame conditions ----------------------------------------------------------


def check_frame_class(m: KripkeModel, c: str, agents: Iterable[str] | None = None):
    """Return ``(ok, witness)``; the witness names the first violated condition.

    A witness is ``(agent, condition, states)``.
    """
    c = c.upper()
    if c not in FRAME_CLASSES:
        raise ValueError(f"unknown frame class {c!r}")
    conditions = {
        "K": (),
        "K45": ("transitive", "euclidean"),
        "KD45": ("serial", "transitive", "euclidean"),
        "S5": ("reflexive", "symmetric", "transitive"),
    }[c]
    for a in m.agents if agents is None else agents:
        succ = m.succ(a)
        for cond in conditions:
            bad = _violation(m.states, succ, cond)
            if bad is not None:
                return False, (a, cond, bad)
    return True, None


def _violation(states, succ, cond):
    for s in states:
        if cond == "serial" and not succ[s]:
            return (s,)
        if cond == "reflexive" and s not in succ[s]:
            return (s,)
        for t in sorted(succ[s], key=states.index):
            if cond == "symmetric" and s not in succ[t]:
                return (s, t)
            if cond == "transitive":
                for u in succ[t]:
                    if u not in succ[s]:
                        return (s, t, u)
            if cond == "euclidean":
                for u in succ[s]:
                    if u not in succ[t]:
                        return (s, t, u)
    return None


# -- restriction ---------------------------------------------------------------


def restrict(m: KripkeModel, keep: Iterable[str]) -> KripkeModel:
    keep = set(keep)
    return KripkeModel(
        [s for s in m.states if s in keep],
        m.agents,
        {a: [(s, t) for s, t in m.rel[a] if s in keep and t in keep] for a in m.agents},
        {s: m.val[s] for s in m.states if s in keep},
    )


def reachable(m: KripkeModel, start: str, agents: Iterable[str] | None = None) -> set[str]:
    agents = m.agents if agents is None else tuple(agents)
    seen = {start}
    queue = deque([start])
    while queue:
        s = queue.popleft()
        for a in agents:
            for t in m.succ(a)[s]:
                if t not in seen:
                    seen.add(t)
                    queue.append(t)
    return seen


def generated_submodel(pm: PointedModel) -> PointedModel:
    keep = reachable(pm.model, pm.point)
    if len(keep) == len(pm.model.states):
        return pm
    return PointedModel(restrict(pm.model, keep), pm.point)


# -- bisimulation ----------------------------------------------------------------


def bisim_partition(m: KripkeModel, atoms: Iterable[str] | None = None) -> dict[str, int]:
    """Coarsest bisimulation on ``m`` as a map state -> block number.

    Signature-based partition refinement: split blocks by the set of blocks
    reachable per agent until the number of blocks stops growing.
    """
    atoms = m.atoms() if atoms is None else frozenset(atoms)
    block = _number({s: m.val[s] & atoms for s in m.states}, m.states)
    count = len(set(block.values()))
    while True:
        sig = {
            s: (block[s],) + tuple(frozenset(block[t] for t in m.succ(a)[s]) for a in m.agents)
            for s in m.states
        }
        block = _number(sig, m.states)
        new_count = len(set(block.values()))
        if new_count == count:
            return block
        count = new_count


def _number(keys, order):
    ids = {}
    out = {}
    for s in order:
        out[s] = ids.setdefault(keys[s], len(ids))
    return out


def disjoint_union(m1: KripkeModel, m2: KripkeModel) -> KripkeModel:
    if set(m1.agents) != set(m2.agents):
        raise AgentMismatch(f"agent sets differ: {sorted(m1.agents)} vs {sorted(m2.agents)}")

    def tag(i, m):
        return {
            "states": [f"{i}:{s}" for s in m.states],
            "rel": {a: [(f"{i}:{s}", f"{i}:{t}") for s, t in m.rel[a]] for a in m.agents},
            "val": {f"{i}:{s}": m.val[s] for s in m.states},
        }

    l, r = tag(0, m1), tag(1, m2)
    return KripkeModel(
        l["states"] + r["states"],
        m1.agents,
        {a: l["rel"][a] + r["rel"][a] for a in m1.agents},
        {**l["val"], **r["val"]},
    )


def bisimilar(pm1: PointedModel, pm2: PointedModel) -> bool:
    if pm1.model is pm2.model:
        u, p1, p2 = pm1.model, pm1.point, pm2.point
    else:
        g1, g2 = generated_submodel(pm1), generated_submodel(pm2)
        u = disjoint_union(g1.model, g2.model)
        p1, p2 = f"0:{pm1.point}", f"1:{pm2.point}"
    block = bisim_partition(u)
    return block[p1] == block[p2]


def bisim_contraction(pm: PointedModel) -> PointedModel:
    g = generated_submodel(pm)
    m = g.model
    block = bisim_partition(m)
    rep = {}
    for s in m.states:
        rep.setdefault(block[s], s)
    name = {s: rep[block[s]] for s in m.states}
    states = list(rep.values())
    rel = {a: {(name[s], name[t]) for s, t in m.rel[a]} for a in m.agents}
    return PointedModel(
        KripkeModel(states, m.agents, rel, {s: m.val[s] for s in states}),
        name[g.point],
    )


# -- clusters and drawing --------------------------------------------------------


def detect_clusters(m: KripkeModel, agent: str):
    """Clusters of a K45 relation, plus the states lying in no cluster.

    In a K45 relation every successor set is a cluster: all its members see
    exactly that set.
    """
    ok, witness = check_frame_class(m, "K45", agents=[agent])
    if not ok:
        raise NotK45(f"relation of agent {agent!r} is not K45: {witness}")
    succ = m.succ(agent)
    clusters = []
    for s in m.states:
        c = succ[s]
        if c and c not in clusters:
            clusters.append(c)
    clusters.sort(key=lambda c: min(m.index(s) for s in c))
    covered = frozenset().union(*clusters)
    unreachable = frozenset(s for s in m.states if s not in covered)
    return clusters, unreachable


EDGE_STYLES = ("solid", "dashed", "dotted", "bold")


def _q(s):
    return '"' + str(s).replace('"', '\\"') + '"'


def to_dot(pm: PointedModel, style: str = "full") -> str:
    m = pm.model
    if style not in ("full", "simplified"):
        raise ValueError(f"unknown style {style!r}")
    serial = [a for a in m.agents if check_frame_class(m, "KD45", [a])[0]]
    lines = ["digraph model {"]
    if style == "simplified":
        lines.append(f"  // serial: {' '.join(serial)}")
    lines.append("  node [shape=circle];")
    for s in m.states:
        shape = "doublecircle" if s == pm.point else "circle"
        label = f"{s}\\n{','.join(sorted(m.val[s]))}" if m.val[s] else str(s)
        lines.append(f"  {_q(s)} [shape={shape}, label={_q(label)}];")
    for i, a in enumerate(m.agents):
        st = EDGE_STYLES[i % len(EDGE_STYLES)]
        attrs = f'label={_q(a)}, style={st}'
        if style == "full":
            for s, t in sorted(m.rel[a], key=lambda e: (m.index(e[0]), m.index(e[1]))):
                lines.append(f"  {_q(s)} -> {_q(t)} [{attrs}];")
            continue
        try:
            clusters, unreachable = detect_clusters(m, a)
        except NotK45 as e:
            raise NotSimplifiable(str(e)) from None
        succ = m.succ(a)
        targeted = set()
        for s in m.states:
            if s in unreachable and succ[s]:
                target = min(succ[s], key=m.index)
                targeted |= succ[s]
                lines.append(f"  {_q(s)} -> {_q(target)} [{attrs}];")
        for c in clusters:
            members = sorted(c, key=m.index)
            for s, t in zip(members, members[1:]):
                lines.append(f"  {_q(s)} -> {_q(t)} [{attrs}, dir=none];")
            if len(members) == 1 and a not in serial and members[0] not in targeted:
                s = members[0]
                lines.append(f"  {_q(s)} -> {_q(s)} [{attrs}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


_EDGE_RE = re.compile(r'^\s*"((?:[^"\\]|\\.)*)" -> "((?:[^"\\]|\\.)*)" \[label="((?:[^"\\]|\\.)*)"[^\]]*\];')
_NODE_RE = re.compile(r'^\s*"((?:[^"\\]|\\.)*)" \[shape=')


def relation_from_simplified_dot(text: str, agents: Iterable[str]) -> dict[str, set]:
    """Rebuild the full relations from a simplified drawing.

    Undirected links join a cluster (closed reflexively and transitively);
    a directed edge from a state outside a cluster stands for arrows to the
    whole cluster; an isolated state is a singleton cluster exactly when
    the agent is marked serial.
    """
    unq = lambda s: s.replace('\\"', '"')
    states, serial = [], set()
    links = {a: [] for a in agents}
    arrows = {a: [] for a in agents}
    for line in text.splitlines():
        if line.strip().startswith("// serial:"):
            serial = set(line.split(":", 1)[1].split())
            continue
        e = _EDGE_RE.match(line)
        if e:
            s, t, a = unq(e.group(1)), unq(e.group(2)), unq(e.group(3))
            (links if "dir=none" in line else arrows)[a].append((s, t))
            continue
        n = _NODE_RE.match(line)
        if n:
            states.append(unq(n.group(1)))
    rel = {}
    for a in agents:
        parent = {s: s for s in states}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for s, t in links[a]:
            parent[find(s)] = find(t)
        comp = {}
        for s in states:
            comp.setdefault(find(s), set()).add(s)
        in_link = {x for e in links[a] for x in e}
        loops = {s for s, t in arrows[a] if s == t}
        sources = {s for s, t in arrows[a] if s != t}
        targets = {t for s, t in arrows[a] if s != t}
        pairs = set()
        for s, t in arrows[a]:
            if s != t:
                pairs |= {(s, u) for u in comp[find(t)]}
        for s in states:
            if s in sources:
                continue
            is_cluster = s in in_link or s in targets or s in loops or a in serial
            if is_cluster:
                pairs |= {(s, u) for u in comp[find(s)]}
        rel[a] = pairs
    return rel


# -- serialization ---------------------------------------------------------------


def model_from_dict(data: Mapping) -> PointedModel:
    try:
        m = KripkeModel(
            [str(s) for s in data["states"]],
            [str(a) for a in data["agents"]],
            {a: [tuple(map(str, e)) for e in pairs] for a, pairs in data.get("rel", {}).items()},
            {s: list(v) for s, v in data.get("val", {}).items()},
        )
    except KeyError as e:
        raise ModelError(f"model is missing field {e.args[0]!r}") from None
    except (TypeError, ValueError) as e:
        raise ModelError(f"malformed model: {e}") from None
    return PointedModel(m, str(data.get("point", m.states[0])))


def model_to_dict(pm: PointedModel) -> dict:
    m = pm.model
    return {
        "agents": list(m.agents),
        "states": list(m.states),
        "rel": {
            a: [list(e) for e in sorted(m.rel[a], key=lambda e: (m.index(e[0]), m.index(e[1])))]
            for a in m.agents
        },
        "val": {s: sorted(m.val[s]) for s in m.states if m.val[s]},
        "point": pm.point,
    }


def load_model(path: str) -> PointedModel:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as e:
        raise ModelError(f"cannot read model file {path!r}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise ModelError(f"{path}: invalid JSON at line {e.lineno}, column {e.colno}") from None
    return model_from_dict(data)


def dump_model(pm: PointedModel, path: str | None = None) -> str:
    text = json.dumps(model_to_dict(pm), indent=2) + "\n"
    if path is not None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    return text
