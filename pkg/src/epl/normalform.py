"""Single-agent K45/KD45 machinery.

Depth-one disjunctive normal forms, clarity, canonical models (a point
valuation plus a cluster of valuations), decisions by enumerating those
canonical models, and a bounded counterexample search for any number of
agents.
"""

from __future__ import annotations

import functools
import itertools
import os
from dataclasses import dataclass
from typing import Iterable

from .errors import MultiAgentFormula, TooManyAtoms, UnsupportedOperator
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
    atoms_of,
    build_sigma_check,
    conj,
    diamond,
    disj,
    node_types,
    translate,
)
from .kripke import KripkeModel, PointedModel, check_frame_class
from .semantics import extension

DEFAULT_AGENT = "a"
DEFAULT_MAX_ATOMS = 2

# A literal is (atom, polarity); polarity False means negated.
Literal = tuple


def lit_neg(l: Literal) -> Literal:
    return (l[0], not l[1])


def is_open(lits: Iterable[Literal]) -> bool:
    s = set(lits)
    return not any(lit_neg(l) in s for l in s)


def lit_formula(l: Literal) -> Formula:
    return Atom(l[0]) if l[1] else Not(Atom(l[0]))


def _lit_key(l):
    return (l[0], not l[1])


@dataclass(frozen=True)
class Disjunct:
    """alpha & B beta_1 & ... & B beta_n & D gamma_1 & ... & D gamma_m.

    ``alpha`` and each gamma are conjunctions of literals; each beta is a
    disjunction of literals (empty beta is falsum, so ``B beta`` is B false).
    """

    alpha: frozenset = frozenset()
    boxes: tuple = ()
    diamonds: tuple = ()

    def merge(self, other: "Disjunct") -> "Disjunct":
        return Disjunct(
            self.alpha | other.alpha,
            _uniq(self.boxes + other.boxes),
            _uniq(self.diamonds + other.diamonds),
        )

    def modal_part(self) -> "Disjunct":
        return Disjunct(frozenset(), self.boxes, self.diamonds)

    def is_trivially_false(self) -> bool:
        return not is_open(self.alpha) or any(not is_open(g) for g in self.diamonds)

    def to_formula(self, agent: str = DEFAULT_AGENT) -> Formula:
        parts = [lit_formula(l) for l in sorted(self.alpha, key=_lit_key)]
        for b in self.boxes:
            parts.append(Box(agent, disj(*(lit_formula(l) for l in sorted(b, key=_lit_key)))))
        for g in self.diamonds:
            parts.append(diamond(agent, conj(*(lit_formula(l) for l in sorted(g, key=_lit_key)))))
        return conj(*parts)


def _uniq(items):
    return tuple(dict.fromkeys(items))


def _normalize(d: Disjunct) -> Disjunct:
    boxes = _uniq(d.boxes)
    # B b1 implies B b2 when b1 is a subset of b2, so the weaker box is redundant
    boxes = tuple(b for b in boxes if not any(o < b for o in boxes))
    return Disjunct(d.alpha, tuple(sorted(boxes, key=_set_key)),
                    tuple(sorted(_uniq(d.diamonds), key=_set_key)))


def _set_key(s):
    return (len(s), sorted(map(_lit_key, s)))


@dataclass(frozen=True)
class DnfFormula:
    disjuncts: tuple = ()

    def to_formula(self, agent: str = DEFAULT_AGENT) -> Formula:
        return disj(*(d.to_formula(agent) for d in self.disjuncts))


# -- conversion ------------------------------------------------------------------


def single_agent_of(f: Formula) -> str:
    ags = agents_of(f)
    if len(ags) > 1:
        raise MultiAgentFormula(f"formula mentions several agents: {sorted(ags)}")
    return next(iter(ags)) if ags else DEFAULT_AGENT


@functools.lru_cache(maxsize=1 << 16)
def _nnf_dnf(f: Formula, positive: bool):
    """DNF (tuple of Disjuncts) of ``f`` if positive else of its negation."""
    if isinstance(f, Atom):
        return (Disjunct(alpha=frozenset([(f.name, positive)])),)
    if isinstance(f, Top):
        return (Disjunct(),) if positive else ()
    if isinstance(f, Bottom):
        return () if positive else (Disjunct(),)
    if isinstance(f, Not):
        return _nnf_dnf(f.sub, not positive)
    if isinstance(f, And):
        left = _nnf_dnf(f.left, positive)
        right = _nnf_dnf(f.right, positive)
        if positive:
            return _and(left, right)
        return _or(left, right)
    if isinstance(f, (Box, CommonBelief)):
        # for one agent, common belief coincides with belief (transitivity)
        if positive:
            return _box(_nnf_dnf(f.sub, True))
        return _dia(_nnf_dnf(f.sub, False))
    if isinstance(f, (Announce, ActionBox)):
        raise UnsupportedOperator("eliminate dynamic operators before normalising")
    raise TypeError(f"not a formula: {f!r}")


def _clean(ds):
    out = []
    seen = set()
    for d in ds:
        if d.is_trivially_false():
            continue
        d = _normalize(d)
        if d not in seen:
            seen.add(d)
            out.append(d)
    return tuple(out)


def _or(a, b):
    return _clean(tuple(a) + tuple(b))


def _and(a, b):
    return _clean([x.merge(y) for x in a for y in b])


def _box(inner):
    """DNF of B(inner) using B(beta | D) <-> B beta | D for modal D."""
    if any(not d.alpha and not d.boxes and not d.diamonds for d in inner):
        return (Disjunct(),)
    # clauses of the CNF: pick one item from every disjunct of inner
    options = []
    for d in inner:
        items = [("lit", l) for l in sorted(d.alpha, key=_lit_key)]
        items += [("box", b) for b in d.boxes]
        items += [("dia", g) for g in d.diamonds]
        options.append(items)
    result = (Disjunct(),)
    seen_clauses = set()
    for choice in itertools.product(*options):
        beta = frozenset(x for k, x in choice if k == "lit")
        if not is_open(beta):
            continue  # tautological clause
        modal = frozenset((k, x) for k, x in choice if k != "lit")
        key = (beta, modal)
        if key in seen_clauses:
            continue
        seen_clauses.add(key)
        alts = [Disjunct(boxes=(beta,))]
        for k, x in sorted(modal, key=lambda kx: (kx[0], _set_key(kx[1]))):
            alts.append(Disjunct(boxes=(x,)) if k == "box" else Disjunct(diamonds=(x,)))
        result = _and(result, _clean(alts))
        if not result:
            break
    return result


def _dia(inner):
    """DNF of D(inner) using D(alpha & M) <-> D alpha & M for modal M."""
    out = []
    for d in inner:
        out.append(Disjunct(boxes=d.boxes, diamonds=d.diamonds + (d.alpha,)))
    return _clean(out)


def to_dnf(f: Formula) -> DnfFormula:
    single_agent_of(f)
    if ActionBox in node_types(f):
        raise UnsupportedOperator("action-model modalities have no normal form here")
    g = translate(f)
    return DnfFormula(tuple(_nnf_dnf(g, True)))


# -- clarity ---------------------------------------------------------------------


def _choice_exists(betas, base):
    """Is there one literal per beta such that, together with ``base``, they are open?"""
    if not is_open(base):
        return False
    chosen = set(base)

    def go(i):
        if i == len(betas):
            return True
        for l in sorted(betas[i], key=_lit_key):
            if lit_neg(l) in chosen:
                continue
            added = l not in chosen
            chosen.add(l)
            if go(i + 1):
                return True
            if added:
                chosen.discard(l)
        return False

    return go(0)


def disjunct_clarity(d: Disjunct):
    """``None`` if clear, else which condition fails."""
    if not is_open(d.alpha):
        return "(i) alpha is not open"
    if not _choice_exists(list(d.boxes), frozenset()):
        return "(ii) no open choice of box literals"
    for g in d.diamonds:
        if not _choice_exists(list(d.boxes), frozenset(g)):
            return "(iii) a diamond clashes with every choice of box literals"
    return None


def is_clear(f: DnfFormula):
    """Return ``(clear, detail)``: the first clear disjunct, or the failure reasons."""
    reasons = []
    for d in f.disjuncts:
        why = disjunct_clarity(d)
        if why is None:
            return True, d
        reasons.append(why)
    return False, reasons or ["empty disjunction"]


# -- canonical models --------------------------------------------------------------


def max_atoms() -> int:
    try:
        return int(os.environ.get("EPL_MAX_ATOMS", DEFAULT_MAX_ATOMS))
    except ValueError:
        return DEFAULT_MAX_ATOMS


@dataclass(frozen=True)
class CanonicalModel:
    """A point valuation and a (possibly empty) cluster of valuations."""

    atoms: tuple
    point_val: frozenset
    cluster: frozenset
    label: str | None = None

    def to_pointed(self, agent: str = DEFAULT_AGENT) -> PointedModel:
        members = sorted(self.cluster, key=lambda v: _val_key(self.atoms, v))
        names = [f"c{i}" for i in range(len(members))]
        rel = [("pt", n) for n in names] + [(x, y) for x in names for y in names]
        val = {"pt": self.point_val, **dict(zip(names, members))}
        return PointedModel(KripkeModel(["pt"] + names, [agent], {agent: rel}, val), "pt")

    def describe(self) -> str:
        def show(v):
            lits = [q if q in v else "~" + q for q in self.atoms]
            return "&".join(lits) if lits else "T"

        members = sorted(self.cluster, key=lambda v: _val_key(self.atoms, v))
        return f"<{show(self.point_val)} | {{{', '.join(show(v) for v in members)}}}>"


def _val_key(atoms, v):
    return tuple(q in v for q in atoms)


def valuations(atoms):
    atoms = tuple(sorted(atoms))
    for bits in itertools.product((False, True), repeat=len(atoms)):
        yield frozenset(q for q, b in zip(atoms, bits) if b)


def enumerate_canonical(atoms: Iterable[str], c: str = "K45") -> list[CanonicalModel]:
    atoms = tuple(sorted(set(atoms)))
    c = c.upper()
    if c not in ("K45", "KD45"):
        raise ValueError(f"canonical models exist for K45 and KD45, not {c}")
    if len(atoms) > max_atoms():
        raise TooManyAtoms(
            f"{len(atoms)} atoms exceed the enumeration bound {max_atoms()} (set EPL_MAX_ATOMS)"
        )
    vals = list(valuations(atoms))
    clusters = []
    for r in range(0 if c == "K45" else 1, len(vals) + 1):
        clusters.extend(frozenset(x) for x in itertools.combinations(vals, r))
    return [CanonicalModel(atoms, pv, cl) for pv in vals for cl in clusters]


def _decidable(f: Formula):
    agent = single_agent_of(f)
    if CommonBelief in node_types(f):
        raise UnsupportedOperator("common belief is not supported by the single-agent decider")
    return agent


def decide_single_agent(f: Formula, c: str = "KD45", mode: str = "valid"):
    """Decide K45/KD45 validity or satisfiability on the canonical models.

    Returns ``(answer, witness)``: the satisfying model, or the falsifying
    model when not valid, else ``None``.
    """
    if mode not in ("valid", "satisfiable"):
        raise ValueError(f"mode must be 'valid' or 'satisfiable', not {mode!r}")
    agent = _decidable(f)
    for cm in enumerate_canonical(atoms_of(f), c):
        pm = cm.to_pointed(agent)
        holds = pm.point in extension(pm.model, f)
        if mode == "valid" and not holds:
            return False, cm
        if mode == "satisfiable" and holds:
            return True, cm
    return mode == "valid", None


def sigma_valid_single_agent(f: Formula, sigma, c: str = "KD45", believable: bool = False) -> bool:
    agent = single_agent_of(f)
    check = build_sigma_check(f, sigma, "valid", believable, [agent])
    return decide_single_agent(check, c, "valid")[0]


# -- bounded search over small models ----------------------------------------------

_REL_CACHE: dict = {}


def relations(n: int, c: str) -> list[frozenset]:
    """All relations of class ``c`` on states 0..n-1, as sets of pairs."""
    key = (n, c)
    if key in _REL_CACHE:
        return _REL_CACHE[key]
    pairs = [(i, j) for i in range(n) for j in range(n)]
    out = []
    states = [str(i) for i in range(n)]
    for mask in range(1 << len(pairs)):
        rel = frozenset(p for k, p in enumerate(pairs) if mask >> k & 1)
        if c != "K":
            m = KripkeModel(states, ["x"], {"x": [(str(i), str(j)) for i, j in rel]})
            if not check_frame_class(m, c)[0]:
                continue
        out.append(rel)
    _REL_CACHE[key] = out
    return out


def falsify_bounded(
    f: Formula,
    c: str = "K",
    agents: Iterable[str] | None = None,
    max_states: int = 3,
):
    """First pointed model (point = state "0") with at most ``max_states`` states
    falsifying ``f``, or ``None`` when the search is inconclusive."""
    c = c.upper()
    agents = sorted(set(agents) if agents is not None else (agents_of(f) or {DEFAULT_AGENT}))
    atoms = sorted(atoms_of(f))
    for n in range(1, max_states + 1):
        states = [str(i) for i in range(n)]
        rels = relations(n, c)
        vals = list(valuations(atoms))
        for rel_choice in itertools.product(rels, repeat=len(agents)):
            rel = {a: [(str(i), str(j)) for i, j in r] for a, r in zip(agents, rel_choice)}
            for vchoice in itertools.product(vals, repeat=n):
                m = KripkeModel(states, agents, rel, dict(zip(states, vchoice)))
                if "0" not in extension(m, f):
                    return PointedModel(m, "0")
    return None
