"""Action models with pre- and postconditions, and product update."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .errors import AgentMismatch, ModelError, PreconditionFailedAtPoint, UnknownKind
from .formula import TOP, Atom, Formula, agents_of, atoms_of, neg
from .kripke import KripkeModel, PointedModel, bisimilar, generated_submodel


class ActionModel:
    """Actions, per-agent relations between them, and pre/postconditions.

    ``post[a]`` maps atoms to formulas; atoms it does not mention keep their
    value.  Compared by identity, so it can sit inside formula nodes.
    """

    def __init__(
        self,
        actions: Iterable[str],
        agents: Iterable[str],
        rel: Mapping[str, Iterable[tuple[str, str]]],
        pre: Mapping[str, Formula],
        post: Mapping[str, Mapping[str, Formula]] | None = None,
        name: str | None = None,
    ):
        self.actions = tuple(dict.fromkeys(actions))
        self.agents = tuple(dict.fromkeys(agents))
        if not self.actions:
            raise ModelError("an action model needs at least one action")
        known = set(self.actions)
        for a in rel:
            if a not in self.agents:
                raise ModelError(f"relation given for undeclared agent {a!r}")
        self.rel = {}
        for a in self.agents:
            pairs = frozenset((x, y) for x, y in rel.get(a, ()))
            if any(x not in known or y not in known for x, y in pairs):
                raise ModelError(f"agent {a!r} relates an undeclared action")
            self.rel[a] = pairs
        missing = known - set(pre)
        if missing:
            raise ModelError(f"no precondition for action(s) {sorted(missing)}")
        self.pre = {x: pre[x] for x in self.actions}
        post = post or {}
        if set(post) - known:
            raise ModelError(f"postcondition for undeclared action(s) {sorted(set(post) - known)}")
        self.post = {x: dict(post.get(x, {})) for x in self.actions}
        self.name = name

    def atoms(self) -> frozenset[str]:
        out = set()
        for x in self.actions:
            out |= atoms_of(self.pre[x])
            for q, g in self.post[x].items():
                out.add(q)
                out |= atoms_of(g)
        return frozenset(out)

    def agents_used(self) -> frozenset[str]:
        out = set(self.agents)
        for x in self.actions:
            out |= agents_of(self.pre[x])
            for g in self.post[x].values():
                out |= agents_of(g)
        return frozenset(out)

    def __repr__(self):
        return f"ActionModel({list(self.actions)}, name={self.name!r})"


@dataclass(frozen=True)
class PointedActionModel:
    model: ActionModel
    point: str

    def __post_init__(self):
        if self.point is not None and self.point not in self.model.pre:
            raise ModelError(f"point {self.point!r} is not an action of the model")


def raw_product(m: KripkeModel, am: ActionModel):
    """The full product ``m x am`` and the naming map (state, action) -> id."""
    from .semantics import extension

    key = ("product", id(am))
    hit = m.cache.get(key)
    if hit is not None and hit[0] is am:
        return hit[1], hit[2]
    if set(am.agents) != set(m.agents):
        raise AgentMismatch(
            f"action model agents {sorted(am.agents)} differ from model agents {sorted(m.agents)}"
        )
    pre = {x: extension(m, am.pre[x]) for x in am.actions}
    pairs = [(s, x) for s in m.states for x in am.actions if s in pre[x]]
    names, used = {}, set()
    for s, x in pairs:
        name = f"{s}.{x}"
        while name in used:
            name += "'"
        used.add(name)
        names[(s, x)] = name
    by_action = {x: [s for s, y in pairs if y == x] for x in am.actions}
    rel = {}
    for ag in m.agents:
        succ = m.succ(ag)
        edges = []
        for x, y in am.rel[ag]:
            targets = set(by_action[y])
            for s in by_action[x]:
                for t in succ[s] & targets:
                    edges.append((names[(s, x)], names[(t, y)]))
        rel[ag] = edges
    post_ext = {
        x: {q: extension(m, g) for q, g in am.post[x].items()} for x in am.actions
    }
    val = {}
    for s, x in pairs:
        atoms = set(m.val[s])
        for q, ext in post_ext[x].items():
            if s in ext:
                atoms.add(q)
            else:
                atoms.discard(q)
        val[names[(s, x)]] = atoms
    prod = KripkeModel([names[p] for p in pairs] or ["empty"], m.agents, rel, val)
    m.cache[key] = (am, prod, names)
    return prod, names


def product_update(pm: PointedModel, pa: PointedActionModel, generated: bool = True) -> PointedModel:
    from .semantics import extension

    if pm.point not in extension(pm.model, pa.model.pre[pa.point]):
        raise PreconditionFailedAtPoint(
            f"precondition of action {pa.point!r} is false at the point"
        )
    prod, names = raw_product(pm.model, pa.model)
    out = PointedModel(prod, names[(pm.point, pa.point)])
    return generated_submodel(out) if generated else out


def apply_sequence(pm: PointedModel, seq: Sequence[PointedActionModel]) -> PointedModel:
    for pa in seq:
        pm = product_update(pm, pa)
    return pm


# -- constructors ----------------------------------------------------------------


def _identity(actions):
    return [(x, x) for x in actions]


def public_truthful(phi: Formula, agents: Iterable[str]) -> PointedActionModel:
    agents = list(agents)
    am = ActionModel(["ann"], agents, {a: [("ann", "ann")] for a in agents}, {"ann": phi},
                     name="public_truthful")
    return PointedActionModel(am, "ann")


def public_believed(phi: Formula, agents: Iterable[str], lie: bool = True) -> PointedActionModel:
    """Two actions: ``honest`` (pre phi) and ``lie`` (pre ~phi); everyone believes ``honest``."""
    agents = list(agents)
    edges = [("lie", "honest"), ("honest", "honest")]
    am = ActionModel(
        ["honest", "lie"], agents, {a: edges for a in agents},
        {"honest": phi, "lie": neg(phi)}, name="public_believed",
    )
    return PointedActionModel(am, "lie" if lie else "honest")


def public_assign(atom: str, value: Formula, agents: Iterable[str]) -> PointedActionModel:
    agents = list(agents)
    am = ActionModel(["set"], agents, {a: [("set", "set")] for a in agents},
                     {"set": TOP}, {"set": {atom: value}}, name="public_assign")
    return PointedActionModel(am, "set")


def private_lie(phi: Formula, listener: str, others: Iterable[str]) -> PointedActionModel:
    """Lie ``phi`` to ``listener`` alone; the others believe nothing happened.

    Actions: ``lie`` (pre ~phi, the point), ``honest`` (pre phi) and ``skip``
    (pre true).
    """
    others = list(others)
    rel = {listener: [("lie", "honest"), ("honest", "honest"), ("skip", "skip")]}
    for a in others:
        rel[a] = [("lie", "skip"), ("honest", "skip"), ("skip", "skip")]
    am = ActionModel(
        ["lie", "honest", "skip"], [listener] + others, rel,
        {"lie": neg(phi), "honest": phi, "skip": TOP}, name=f"private_lie_{listener}",
    )
    return PointedActionModel(am, "lie")


def private_assign(atom: str, value: Formula, actor: str, others: Iterable[str]) -> PointedActionModel:
    """``atom := value`` noticed only by ``actor``; the others see ``skip``."""
    others = list(others)
    rel = {actor: _identity(["set", "skip"])}
    for a in others:
        rel[a] = [("set", "skip"), ("skip", "skip")]
    am = ActionModel(
        ["set", "skip"], [actor] + others, rel, {"set": TOP, "skip": TOP},
        {"set": {atom: value}}, name=f"private_assign_{atom}",
    )
    return PointedActionModel(am, "set")


def pang_juan(atom: str, agents: Iterable[str]) -> PointedActionModel:
    """Lie that ``atom`` holds and make it true at once (both actions set it)."""
    agents = list(agents)
    p = Atom(atom)
    edges = [("lie", "honest"), ("honest", "honest")]
    am = ActionModel(
        ["lie", "honest"], agents, {a: edges for a in agents},
        {"lie": neg(p), "honest": p}, {"lie": {atom: TOP}, "honest": {atom: TOP}},
        name=f"pang_juan_{atom}",
    )
    return PointedActionModel(am, "lie")


ACTION_KINDS = {
    "public_truthful": public_truthful,
    "public_believed": public_believed,
    "public_assign": public_assign,
    "private_lie": private_lie,
    "private_assign": private_assign,
    "pang_juan": pang_juan,
}


def mk_action(kind: str, **params) -> PointedActionModel:
    if kind == "custom":
        return load_action_model(params["path"])
    try:
        build = ACTION_KINDS[kind]
    except KeyError:
        raise UnknownKind(f"unknown action kind {kind!r}") from None
    return build(**params)


# -- equivalence -----------------------------------------------------------------


def _as_seq(x):
    if isinstance(x, PointedActionModel):
        return [x]
    return list(x)


def _run(pm, seq):
    from .semantics import extension

    for pa in seq:
        if pm.point not in extension(pm.model, pa.model.pre[pa.point]):
            return None
        pm = product_update(pm, pa)
    return pm


def actions_equivalent(left, right, suite: Iterable[PointedModel]) -> bool:
    """Bisimilar outcomes on every suite model where both sides can execute."""
    left, right = _as_seq(left), _as_seq(right)
    for pm in suite:
        a, b = _run(pm, left), _run(pm, right)
        if a is None or b is None:
            continue
        if not bisimilar(a, b):
            return False
    return True


# -- serialization ---------------------------------------------------------------


def action_model_from_dict(data: Mapping, name: str | None = None) -> PointedActionModel:
    from .parser import parse_formula

    try:
        am = ActionModel(
            [str(x) for x in data["actions"]],
            [str(a) for a in data["agents"]],
            {a: [tuple(map(str, e)) for e in pairs] for a, pairs in data.get("rel", {}).items()},
            {x: parse_formula(src) for x, src in data["pre"].items()},
            {
                x: {q: parse_formula(src) for q, src in m.items()}
                for x, m in data.get("post", {}).items()
            },
            name=name,
        )
    except KeyError as e:
        raise ModelError(f"action model is missing field {e.args[0]!r}") from None
    point = data.get("point")
    return PointedActionModel(am, None if point is None else str(point))


def action_model_to_dict(pa: PointedActionModel) -> dict:
    from .parser import print_formula

    am = pa.model
    out = {
        "agents": list(am.agents),
        "actions": list(am.actions),
        "rel": {a: [list(e) for e in sorted(am.rel[a])] for a in am.agents},
        "pre": {x: print_formula(am.pre[x]) for x in am.actions},
        "post": {
            x: {q: print_formula(g) for q, g in sorted(am.post[x].items())}
            for x in am.actions if am.post[x]
        },
    }
    if pa.point is not None:
        out["point"] = pa.point
    return out


def load_action_model(path: str, name: str | None = None) -> PointedActionModel:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as e:
        raise ModelError(f"cannot read action file {path!r}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise ModelError(f"{path}: invalid JSON at line {e.lineno}, column {e.colno}") from None
    return action_model_from_dict(data, name=name or os.path.basename(path))


def dump_action_model(pa: PointedActionModel, path: str | None = None) -> str:
    text = json.dumps(action_model_to_dict(pa), indent=2) + "\n"
    if path is not None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    return text
