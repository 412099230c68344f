"""Formula AST for believed public announcement logic and its extensions.

The AST only stores the primitive connectives (atoms, constants, negation,
conjunction, per-agent box, announcement) plus common belief and the
action-model modality.  Disjunction, implication, diamonds and friends are
built from the primitives by the helper functions below.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

from .errors import (
    SigmaTooShort,
    UnsupportedNesting,
    UnsupportedOperator,
    UntranslatedDynamicOperator,
)


_HASHED: list = []


class Formula:
    __slots__ = ()

    def __init_subclass__(cls, **kw):
        super().__init_subclass__(**kw)
        _HASHED.append(cls)

    def __and__(self, other: Formula) -> Formula:
        return And(self, other)

    def __invert__(self) -> Formula:
        return Not(self)


@dataclass(frozen=True)
class Atom(Formula):
    name: str


@dataclass(frozen=True)
class Top(Formula):
    pass


@dataclass(frozen=True)
class Bottom(Formula):
    pass


@dataclass(frozen=True)
class Not(Formula):
    sub: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Box(Formula):
    agent: str
    sub: Formula


@dataclass(frozen=True)
class Announce(Formula):
    """``[ann] body``: believed public announcement (arrow elimination)."""

    ann: Formula
    body: Formula


@dataclass(frozen=True)
class CommonBelief(Formula):
    agents: tuple[str, ...]
    sub: Formula

    def __post_init__(self):
        if not self.agents:
            raise ValueError("common belief needs a nonempty group")
        object.__setattr__(self, "agents", tuple(sorted(set(self.agents))))


@dataclass(frozen=True)
class ActionBox(Formula):
    # a PointedActionModel; typed loosely to avoid a module cycle
    action: object
    sub: Formula


def _cache_hash(cls):
    # formulas are deep immutable trees used as dict keys everywhere; the
    # generated dataclass hash would walk the whole tree on every lookup
    plain = cls.__hash__

    def __hash__(self):
        h = self.__dict__.get("_hash")
        if h is None:
            h = plain(self)
            object.__setattr__(self, "_hash", h)
        return h

    cls.__hash__ = __hash__


for _cls in _HASHED:
    _cache_hash(_cls)

TOP = Top()
BOT = Bottom()


# -- derived connectives ----------------------------------------------------
#
# The plain versions (Or, Implies, ...) expand mechanically and are what the
# parser uses, so printing can recognise them again.  The lower-case
# versions (neg, conj, disj, implies) additionally fold constants and double
# negations; they are used when formulas are assembled programmatically.


def Or(a: Formula, b: Formula) -> Formula:
    return Not(And(Not(a), Not(b)))


def Implies(a: Formula, b: Formula) -> Formula:
    return Not(And(a, Not(b)))


def Iff(a: Formula, b: Formula) -> Formula:
    return And(Implies(a, b), Implies(b, a))


def Diamond(agent: str, f: Formula) -> Formula:
    return Not(Box(agent, Not(f)))


def neg(f: Formula) -> Formula:
    if isinstance(f, Not):
        return f.sub
    if isinstance(f, Top):
        return BOT
    if isinstance(f, Bottom):
        return TOP
    return Not(f)


def conj(*fs: Formula) -> Formula:
    parts = []
    for f in fs:
        if isinstance(f, Bottom):
            return BOT
        if not isinstance(f, Top):
            parts.append(f)
    if not parts:
        return TOP
    out = parts[0]
    for f in parts[1:]:
        out = And(out, f)
    return out


def disj(*fs: Formula) -> Formula:
    parts = []
    for f in fs:
        if isinstance(f, Top):
            return TOP
        if not isinstance(f, Bottom):
            parts.append(f)
    if not parts:
        return BOT
    out = parts[0]
    for f in parts[1:]:
        out = Or(out, f)
    return out


def implies(a: Formula, b: Formula) -> Formula:
    if isinstance(a, Top):
        return b
    if isinstance(a, Bottom) or isinstance(b, Top):
        return TOP
    if isinstance(b, Bottom):
        return neg(a)
    return Implies(a, b)


def box(agent: str, f: Formula) -> Formula:
    return TOP if isinstance(f, Top) else Box(agent, f)


def diamond(agent: str, f: Formula) -> Formula:
    return neg(Box(agent, neg(f)))


def shared_box(agents: Iterable[str], f: Formula) -> Formula:
    """Everybody in the group believes ``f``."""
    return conj(*(box(a, f) for a in sorted(agents)))


def believable(agents: Iterable[str], f: Formula) -> Formula:
    """Every agent in the group considers ``f`` possible."""
    return conj(*(diamond(a, f) for a in sorted(agents)))


# -- inspection --------------------------------------------------------------


def subformulas(f: Formula):
    yield f
    if isinstance(f, Not):
        yield from subformulas(f.sub)
    elif isinstance(f, And):
        yield from subformulas(f.left)
        yield from subformulas(f.right)
    elif isinstance(f, (Box, CommonBelief)):
        yield from subformulas(f.sub)
    elif isinstance(f, Announce):
        yield from subformulas(f.ann)
        yield from subformulas(f.body)
    elif isinstance(f, ActionBox):
        yield from subformulas(f.sub)


def _children(f: Formula):
    if isinstance(f, Not):
        return (f.sub,)
    if isinstance(f, And):
        return (f.left, f.right)
    if isinstance(f, (Box, CommonBelief, ActionBox)):
        return (f.sub,)
    if isinstance(f, Announce):
        return (f.ann, f.body)
    return ()


@lru_cache(maxsize=65536)
def atoms_of(f: Formula) -> frozenset[str]:
    if isinstance(f, Atom):
        return frozenset((f.name,))
    out = frozenset().union(*map(atoms_of, _children(f)))
    if isinstance(f, ActionBox):
        out |= f.action.model.atoms()
    return out


@lru_cache(maxsize=65536)
def agents_of(f: Formula) -> frozenset[str]:
    out = frozenset().union(*map(agents_of, _children(f)))
    if isinstance(f, Box):
        out |= {f.agent}
    elif isinstance(f, CommonBelief):
        out |= set(f.agents)
    elif isinstance(f, ActionBox):
        out |= f.action.model.agents_used()
    return out


@lru_cache(maxsize=65536)
def node_types(f: Formula) -> frozenset:
    """The node classes occurring in ``f``."""
    return frozenset((type(f),)).union(*map(node_types, _children(f)))


def is_dynamic_free(f: Formula) -> bool:
    return not node_types(f) & {Announce, ActionBox}


def modal_depth(f: Formula) -> int:
    if isinstance(f, (Atom, Top, Bottom)):
        return 0
    if isinstance(f, Not):
        return modal_depth(f.sub)
    if isinstance(f, And):
        return max(modal_depth(f.left), modal_depth(f.right))
    if isinstance(f, (Box, CommonBelief)):
        return 1 + modal_depth(f.sub)
    raise UntranslatedDynamicOperator(
        f"modal depth is only defined for announcement-free formulas, got {type(f).__name__}"
    )


# -- announcement elimination ------------------------------------------------


def translate(f: Formula) -> Formula:
    """Rewrite ``f`` into an equivalent formula without announcements."""
    if isinstance(f, (Atom, Top, Bottom)):
        return f
    if isinstance(f, Not):
        return Not(translate(f.sub))
    if isinstance(f, And):
        return And(translate(f.left), translate(f.right))
    if isinstance(f, Box):
        return Box(f.agent, translate(f.sub))
    if isinstance(f, CommonBelief):
        return CommonBelief(f.agents, translate(f.sub))
    if isinstance(f, Announce):
        return _push(translate(f.ann), translate(f.body))
    if isinstance(f, ActionBox):
        raise UnsupportedOperator("translate does not reduce action-model modalities")
    raise TypeError(f"not a formula: {f!r}")


def _push(ann: Formula, body: Formula) -> Formula:
    # body is announcement-free here
    if isinstance(body, (Atom, Top, Bottom)):
        return body
    if isinstance(body, Not):
        return Not(_push(ann, body.sub))
    if isinstance(body, And):
        return And(_push(ann, body.left), _push(ann, body.right))
    if isinstance(body, Box):
        return Box(body.agent, implies(ann, _push(ann, body.sub)))
    if isinstance(body, CommonBelief):
        raise UnsupportedNesting("no reduction for common belief under an announcement")
    raise TypeError(f"unexpected node under announcement: {body!r}")


# -- iterated-announcement check formulas -----------------------------------


def parse_sigma(bits) -> tuple[int, ...]:
    if isinstance(bits, str):
        if not bits or set(bits) - {"0", "1"}:
            raise ValueError(f"not a 0/1 string: {bits!r}")
        return tuple(int(c) for c in bits)
    out = tuple(int(b) for b in bits)
    if any(b not in (0, 1) for b in out):
        raise ValueError(f"not a 0/1 sequence: {bits!r}")
    return out


def sigma_apply(bit: int, f: Formula) -> Formula:
    return f if bit else neg(f)


def build_sigma_check(
    f: Formula,
    sigma,
    mode: str = "valid",
    believable_: bool = False,
    agents: Iterable[str] = (),
) -> Formula:
    """Formula whose satisfiability/validity expresses sigma-satisfiability/validity of ``f``.

    ``mode='satisfiable'`` gives  s1(f) & [f] t2,  ``mode='valid'`` gives
    s1(f) -> [f] t2, where t_k = s_k(f) & [f] t_{k+1} and t_n = s_n(f).  With
    ``believable_`` every s_k(f) for k < n is accompanied by D_A f.
    """
    bits = parse_sigma(sigma)
    if len(bits) < 2:
        raise SigmaTooShort(f"sigma needs at least two digits, got {len(bits)}")
    if mode not in ("valid", "satisfiable"):
        raise ValueError(f"mode must be 'valid' or 'satisfiable', not {mode!r}")
    agents = sorted(set(agents))
    if believable_ and not agents:
        raise ValueError("believable checks need a nonempty agent set")
    bel = believable(agents, f) if believable_ else TOP

    tau = sigma_apply(bits[-1], f)
    for b in reversed(bits[1:-1]):
        tau = conj(sigma_apply(b, f), bel, Announce(f, tau))
    if mode == "satisfiable":
        return conj(sigma_apply(bits[0], f), bel, Announce(f, tau))
    return implies(conj(sigma_apply(bits[0], f), bel), Announce(f, tau))
