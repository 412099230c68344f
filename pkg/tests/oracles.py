"""Independent reference implementations used to cross-check the library.

Everything here is deliberately naive: state-by-state recursion, explicit
relation copies, brute-force fixpoints.  Nothing is imported from the code
under test except the AST classes.
"""

import itertools

from epl.formula import ActionBox, And, Announce, Atom, Bottom, Box, CommonBelief, Not, Top


class Model:
    def __init__(self, states, rel, val):
        self.states = list(states)
        self.rel = {a: set(r) for a, r in rel.items()}
        self.val = {s: set(val.get(s, ())) for s in self.states}


def from_kripke(m):
    return Model(m.states, {a: set(m.rel[a]) for a in m.agents}, {s: set(m.val[s]) for s in m.states})


def holds(m, s, f):
    if isinstance(f, Atom):
        return f.name in m.val[s]
    if isinstance(f, Top):
        return True
    if isinstance(f, Bottom):
        return False
    if isinstance(f, Not):
        return not holds(m, s, f.sub)
    if isinstance(f, And):
        return holds(m, s, f.left) and holds(m, s, f.right)
    if isinstance(f, Box):
        return all(holds(m, t, f.sub) for (x, t) in m.rel[f.agent] if x == s)
    if isinstance(f, Announce):
        keep = {t for t in m.states if holds(m, t, f.ann)}
        n = Model(m.states, {a: {(x, y) for x, y in r if y in keep} for a, r in m.rel.items()},
                  m.val)
        return holds(n, s, f.body)
    if isinstance(f, CommonBelief):
        # every state reachable in one or more group steps satisfies the body
        seen, todo = set(), [s]
        while todo:
            x = todo.pop()
            for a in f.agents:
                for (u, v) in m.rel[a]:
                    if u == x and v not in seen:
                        seen.add(v)
                        todo.append(v)
        return all(holds(m, t, f.sub) for t in seen)
    if isinstance(f, ActionBox):
        raise NotImplementedError("the oracle does not do action models")
    raise TypeError(f)


def believed(m, f):
    keep = {t for t in m.states if holds(m, t, f)}
    return Model(m.states, {a: {(x, y) for x, y in r if y in keep} for a, r in m.rel.items()}, m.val)


def bisimilar(m1, s1, m2, s2):
    """Greatest bisimulation by removing bad pairs until nothing changes."""
    agents = set(m1.rel) | set(m2.rel)
    atoms = set().union(*m1.val.values(), *m2.val.values())
    z = {(x, y) for x in m1.states for y in m2.states
         if m1.val[x] & atoms == m2.val[y] & atoms}
    changed = True
    while changed:
        changed = False
        for x, y in list(z):
            ok = True
            for a in agents:
                sx = [t for (u, t) in m1.rel.get(a, ()) if u == x]
                sy = [t for (u, t) in m2.rel.get(a, ()) if u == y]
                if not all(any((t, w) in z for w in sy) for t in sx):
                    ok = False
                if not all(any((t, w) in z for t in sx) for w in sy):
                    ok = False
            if not ok:
                z.discard((x, y))
                changed = True
    return (s1, s2) in z


def frame_ok(states, r, cls):
    serial = all(any((s, t) in r for t in states) for s in states)
    refl = all((s, s) in r for s in states)
    sym = all((t, s) in r for (s, t) in r)
    trans = all((s, u) in r for (s, t) in r for (t2, u) in r if t == t2)
    eucl = all((t, u) in r for (s, t) in r for (s2, u) in r if s == s2)
    return {
        "K": True,
        "K45": trans and eucl,
        "KD45": serial and trans and eucl,
        "S5": refl and sym and trans,
    }[cls]


def all_relations(n):
    pairs = [(i, j) for i in range(n) for j in range(n)]
    for bits in itertools.product((0, 1), repeat=len(pairs)):
        yield {p for p, b in zip(pairs, bits) if b}
