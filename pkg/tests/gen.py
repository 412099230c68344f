

from epl.formula import And, Announce, Atom, Bottom, Box, Not, Top
from epl.kripke import KripkeModel, PointedModel


def random_formula(rng, atoms, agents, depth, announce=True):
    if depth == 0 or rng.random() < 0.25:
        r = rng.random()
        if r < 0.08:
            return Top()
        if r < 0.14:
            return Bottom()
        return Atom(rng.choice(atoms))
    kind = rng.choice(["not", "and", "and", "box", "box"] + (["ann"] if announce else []))
    sub = lambda: random_formula(rng, atoms, agents, depth - 1, announce)
    if kind == "not":
        return Not(sub())
    if kind == "and":
        return And(sub(), sub())
    if kind == "box":
        return Box(rng.choice(agents), sub())
    return Announce(sub(), sub())


def random_model(rng, agents, atoms, max_states, density=0.4):
    n = rng.randint(1, max_states)
    states = [f"w{i}" for i in range(n)]
    rel = {a: [(s, t) for s in states for t in states if rng.random() < density] for a in agents}
    val = {s: [q for q in atoms if rng.random() < 0.5] for s in states}
    return PointedModel(KripkeModel(states, agents, rel, val), states[0])



def random_k45_model(rng, atoms, max_states):
    """Single-agent K45: every state sees nothing or exactly one cluster,
    and the members of a cluster see that cluster."""
    n = rng.randint(1, max_states)
    states = [f"w{i}" for i in range(n)]
    clusters = []
    for s in states:
        r = rng.random()
        if r < 0.4 and clusters:
            rng.choice(clusters).append(s)
        elif r < 0.75:
            clusters.append([s])
    members = {s for c in clusters for s in c}
    rel = []
    for c in clusters:
        rel += [(s, t) for s in c for t in c]
    for s in states:
        if s not in members and clusters and rng.random() < 0.7:
            rel += [(s, t) for t in rng.choice(clusters)]
    val = {s: [q for q in atoms if rng.random() < 0.5] for s in states}
    return PointedModel(KripkeModel(states, ["a"], {"a": rel}, val), rng.choice(states))
