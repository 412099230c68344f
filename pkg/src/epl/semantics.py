"""Model checking and model updates.

Truth is computed as extensions (sets of states), memoised per model, so an
announcement builds its updated model once and reuses it at every state.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .errors import AnnouncementFalseAtPoint, UndeclaredAgent
from .formula import (
    ActionBox,
    And,
    Announce,
    Atom,
    Bottom,
    Box,
    CommonBelief,
    Formula,
    Not,
    Top,
    agents_of,
    build_sigma_check,
    neg,
)
from .kripke import KripkeModel, PointedModel, restrict


def _check_agents(m: KripkeModel, f: Formula):
    missing = agents_of(f) - set(m.agents)
    if missing:
        raise UndeclaredAgent(f"formula uses undeclared agent(s) {sorted(missing)}")


def extension(m: KripkeModel, f: Formula) -> frozenset[str]:
    """The set of states of ``m`` where ``f`` holds."""
    key = ("ext", f)
    hit = m.cache.get(key)
    if hit is not None:
        return hit
    out = _extension(m, f)
    m.cache[key] = out
    return out


def _extension(m, f):
    if isinstance(f, Atom):
        return frozenset(s for s in m.states if f.name in m.val[s])
    if isinstance(f, Top):
        return frozenset(m.states)
    if isinstance(f, Bottom):
        return frozenset()
    if isinstance(f, Not):
        return frozenset(m.states) - extension(m, f.sub)
    if isinstance(f, And):
        left = extension(m, f.left)
        if not left:
            return left
        return left & extension(m, f.right)
    if isinstance(f, Box):
        if f.agent not in m.rel:
            raise UndeclaredAgent(f"agent {f.agent!r} is not declared in the model")
        sub = extension(m, f.sub)
        succ = m.succ(f.agent)
        return frozenset(s for s in m.states if succ[s] <= sub)
    if isinstance(f, Announce):
        return extension(believed_update(m, f.ann), f.body)
    if isinstance(f, CommonBelief):
        return _common_belief(m, f)
    if isinstance(f, ActionBox):
        return _action_box(m, f)
    raise TypeError(f"not a formula: {f!r}")


def _common_belief(m, f):
    for a in f.agents:
        if a not in m.rel:
            raise UndeclaredAgent(f"agent {a!r} is not declared in the model")
    # states from which a nonempty group path reaches a failure of f.sub
    frontier = set(m.states) - extension(m, f.sub)
    pred = {s: set() for s in m.states}
    for a in f.agents:
        for s, t in m.rel[a]:
            pred[t].add(s)
    bad = set()
    while frontier:
        t = frontier.pop()
        for s in pred[t]:
            if s not in bad:
                bad.add(s)
                frontier.add(s)
    return frozenset(s for s in m.states if s not in bad)


def _action_box(m, f):
    from .actionmodel import raw_product

    pam = f.action
    prod, names = raw_product(m, pam.model)
    holds = extension(prod, f.sub)
    pre_ok = extension(m, pam.model.pre[pam.point])
    return frozenset(
        s for s in m.states if s not in pre_ok or names[(s, pam.point)] in holds
    )


def eval_formula(pm: PointedModel, f: Formula) -> bool:
    _check_agents(pm.model, f)
    return pm.point in extension(pm.model, f)


# short alias, so callers can use either name
eval = eval_formula  # noqa: A001


def believed_update(m: KripkeModel, f: Formula) -> KripkeModel:
    """Arrow elimination: keep only arrows pointing at ``f``-states."""
    key = ("bel", f)
    hit = m.cache.get(key)
    if hit is not None:
        return hit
    ext = extension(m, f)
    if all(t in ext for r in m.rel.values() for _, t in r):
        out = m
    else:
        out = KripkeModel(
            m.states,
            m.agents,
            {a: [(s, t) for s, t in m.rel[a] if t in ext] for a in m.agents},
            m.val,
        )
    m.cache[key] = out
    return out


def truthful_update(pm: PointedModel, f: Formula) -> PointedModel:
    """State elimination; only defined when ``f`` holds at the point."""
    ext = extension(pm.model, f)
    if pm.point not in ext:
        raise AnnouncementFalseAtPoint("announced formula is false at the point")
    if len(ext) == len(pm.model.states):
        return pm
    return PointedModel(restrict(pm.model, ext), pm.point)


def announce_whether(pm: PointedModel, f: Formula) -> PointedModel:
    if eval_formula(pm, f):
        return truthful_update(pm, f)
    return truthful_update(pm, neg(f))


@dataclass
class TraceReport:
    bits: tuple[int, ...]
    fixpoint_index: Optional[int]
    final_model: PointedModel
    models: list = field(default_factory=list, repr=False)

    @property
    def bitstring(self) -> str:
        return "".join(map(str, self.bits))


TRACE_STYLES = ("believed", "truthful", "truthful_whether")


def sigma_trace(
    pm: PointedModel,
    f: Formula,
    steps: int,
    style: str = "believed",
    announced: Formula | None = None,
) -> TraceReport:
    """Truth of ``f`` at the point after 0, 1, ..., steps-1 updates.

    Each update announces ``announced`` (default ``f`` itself).
    """
    if steps < 1:
        raise ValueError("steps must be positive")
    if style not in TRACE_STYLES:
        raise ValueError(f"unknown trace style {style!r}")
    g = f if announced is None else announced
    _check_agents(pm.model, f)
    _check_agents(pm.model, g)
    bits, models = [], []
    fixpoint = None
    cur = pm
    for k in range(steps):
        models.append(cur)
        bits.append(int(cur.point in extension(cur.model, f)))
        if k == steps - 1:
            break
        if fixpoint is not None:
            continue
        if style == "believed":
            nxt = PointedModel(believed_update(cur.model, g), cur.point)
            changed = nxt.model.rel != cur.model.rel
        elif style == "truthful":
            nxt = truthful_update(cur, g)
            changed = len(nxt.model.states) != len(cur.model.states)
        else:
            nxt = announce_whether(cur, g)
            changed = len(nxt.model.states) != len(cur.model.states)
        if not changed:
            fixpoint = k
        cur = nxt
    if fixpoint is None and style == "believed":
        # one more update decides whether the last model is already fixed
        if believed_update(cur.model, g).rel == cur.model.rel:
            fixpoint = steps - 1
    return TraceReport(tuple(bits), fixpoint, cur, models)


def iterate_until_fixpoint(pm: PointedModel, f: Formula):
    """Apply believed updates with ``f`` until the relation stops changing.

    Returns ``(k, final)`` where ``k`` is the number of updates that changed
    the relation.
    """
    _check_agents(pm.model, f)
    m, k = pm.model, 0
    while True:
        nxt = believed_update(m, f)
        if nxt.rel == m.rel:
            return k, PointedModel(m, pm.point)
        m, k = nxt, k + 1


SIGMAS2 = ("00", "01", "10", "11")


@dataclass(frozen=True)
class ModelClassification:
    plain: dict
    believable: dict

    def which(self) -> str:
        return next(s for s in SIGMAS2 if self.plain[s])


def classify_on_model(pm: PointedModel, f: Formula) -> ModelClassification:
    agents = pm.model.agents
    plain = {s: eval_formula(pm, build_sigma_check(f, s, "satisfiable")) for s in SIGMAS2}
    bel = {
        s: eval_formula(pm, build_sigma_check(f, s, "satisfiable", True, agents))
        for s in SIGMAS2
    }
    return ModelClassification(plain, bel)
