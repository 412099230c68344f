"""Parametric example models with bundled checks."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any, Callable

from . import actionmodel as am
from .errors import ParamOutOfRange, UnknownScenario
from .formula import Atom, CommonBelief, Formula, conj, disj, neg, parse_sigma
from .kripke import (
    KripkeModel,
    PointedModel,
    bisim_contraction,
    bisimilar,
    check_frame_class,
    generated_submodel,
)
from .normalform import enumerate_canonical, falsify_bounded, sigma_valid_single_agent
from .parser import parse_formula
from .semantics import (
    believed_update,
    classify_on_model,
    eval_formula,
    sigma_trace,
    truthful_update,
)

P = parse_formula

# formulas shared by several scenarios
LEAF_FORMULA = P("~B false & ((D B false & D ~B false) -> D (p & B false))")
DOUBLED_PSI = P("~D{b} (B{a} p | B{a} ~p) & ((p & B{b} ~p) -> D{a} D{b} B{a} p)")
CLOSURE_PHI = P("~D{b} (B{a} p | B{a} ~p)")
CLOSURE_PSI = P("~(B{b} p | B{b} ~p) -> D{a} D{b} B{a} p")
EIGHT_PHI = P("B false | (p & D p & D ~p) | (~p & D p & B p)")


@dataclass
class Check:
    description: str
    anchor: str
    run: Callable[[], Any]
    expected: Any = True


@dataclass
class Scenario:
    name: str
    params: dict
    models: dict = field(default_factory=dict)
    formulas: dict = field(default_factory=dict)
    actions: list = field(default_factory=list)
    checks: list = field(default_factory=list)
    budget: int | None = None


@dataclass
class CheckResult:
    description: str
    anchor: str
    expected: Any
    actual: Any
    passed: bool


def verify_scenario(s: Scenario) -> list[CheckResult]:
    out = []
    for c in s.checks:
        try:
            actual = c.run()
        except Exception as e:  # failures are report entries, not crashes
            actual = f"error: {type(e).__name__}: {e}"
        out.append(CheckResult(c.description, c.anchor, c.expected, actual, actual == c.expected))
    return out


def _range(name, value, lo, hi):
    if not lo <= value <= hi:
        raise ParamOutOfRange(f"{name}={value} is outside {lo}..{hi}")


def alternating(n: int, first: int = 0) -> str:
    return "".join(str((first + i) % 2) for i in range(n))


# -- two-state model -------------------------------------------------------------------


def two_state_model() -> KripkeModel:
    """One agent who cannot tell a ~p state ``s`` from a p state ``t``."""
    return KripkeModel(
        ["s", "t"], ["a"], {"a": [(x, y) for x in "st" for y in "st"]}, {"t": ["p"]}
    )


def build_two_state(params) -> Scenario:
    m = two_state_model()
    lie = P("~(p & B p) -> [ann p & B p](p & B p)")
    sc = Scenario("sec31", params, models={"M": PointedModel(m, "s")}, formulas={"check": lie})
    after_box = believed_update(m, P("B p"))
    after_disj = believed_update(m, P("p | B p"))
    sc.checks = [
        Check("p & B p becomes true when announced at t", "two-state example",
              lambda: eval_formula(PointedModel(m, "t"), lie)),
        Check("... but not at s", "two-state example",
              lambda: eval_formula(PointedModel(m, "s"), lie), False),
        Check("model is S5", "two-state example", lambda: check_frame_class(m, "S5")[0]),
        Check("announcing B p removes every arrow", "two-state example",
              lambda: after_box.arrow_count(), 0),
        Check("announcing p | B p keeps exactly the arrows into t", "two-state example",
              lambda: sorted(after_disj.rel["a"]), [("s", "t"), ("t", "t")]),
    ]
    return sc


# -- the fan ------------------------------------------------------------------------------


def _decoration(sigma, n, guard):
    bits = parse_sigma(sigma) if sigma is not None else parse_sigma(alternating(n))
    if len(bits) < n:
        raise ParamOutOfRange(f"sigma has {len(bits)} digits, need at least N={n}")
    bits = list(bits[:n])
    if guard:
        bits.append(1 - bits[-1])
    return bits


def fan_model(n: int, sigma=None, guard: bool = True, root_p: bool = True) -> PointedModel:
    """Root with branches of length 1..n (plus one guard branch of length n+1).

    Node ``d`` steps down branch ``l`` carries p iff digit l-d+1 of sigma is 1,
    so every leaf carries digit 1.  Branches 1..n alone support n-1 faithful
    update steps; the guard branch makes all n steps faithful.
    """
    bits = _decoration(sigma, n, guard)
    length = len(bits)
    states, rel, val = ["r"], [], {"r": ["p"] if root_p else []}
    for l in range(1, length + 1):
        prev = "r"
        for d in range(1, l + 1):
            s = f"b{l}_{d}"
            states.append(s)
            rel.append((prev, s))
            if bits[l - d]:
                val[s] = ["p"]
            prev = s
    return PointedModel(KripkeModel(states, ["a"], {"a": rel}, val), "r")


def build_fan(params) -> Scenario:
    n = int(params.get("N", 8))
    _range("N", n, 1, 12)
    sigma = params.get("sigma")
    guard = _bool(params.get("guard", True))
    bits = "".join(map(str, _decoration(sigma, n, False)))
    pm = fan_model(n, sigma, guard, _bool(params.get("root_p", True)))
    steps = n if guard else max(n - 1, 1)
    sc = Scenario("fan", dict(params), models={"M": pm}, formulas={"phi": LEAF_FORMULA}, budget=steps)
    sc.checks = [
        Check(f"trace of the leaf formula equals sigma for {steps} steps", "unstable formula, fan model",
              lambda: sigma_trace(pm, LEAF_FORMULA, steps).bitstring, bits[:steps]),
    ]
    return sc


def build_sigma_fan(params) -> Scenario:
    params = dict(params)
    params.setdefault("sigma", "011100011")
    params.setdefault("N", len(params["sigma"]))
    sc = build_fan(params)
    sc.name = "sigma-fan"
    return sc


# -- doubled model for two agents with consistent beliefs --------------------------------


def doubled_model(n: int, sigma=None, guard: bool = True, closure: bool = False) -> PointedModel:
    """Every fan node becomes a b-pair; fan arrows become a-links.

    The root (p) points to the first a-class directed for a and to an extra
    ~p node for b; that node sees itself for b and the first a-class for a.
    With ``closure`` both relations are closed into equivalences.
    """
    bits = _decoration(sigma, n, guard)
    length = len(bits)
    states = ["r", "n"]
    val = {"r": ["p"], "n": []}
    ra, rb = [], [("r", "n"), ("n", "n")]
    first = []
    for l in range(1, length + 1):
        names = [f"x{l}_{j}" for j in range(1, 2 * l + 1)]
        states += names
        first.append(names[0])
        for i in range(1, l + 1):
            u, v = names[2 * i - 2], names[2 * i - 1]
            if bits[l - i]:
                val[u] = val[v] = ["p"]
            rb += [(u, u), (u, v), (v, u), (v, v)]
        for i in range(1, l):
            u, v = names[2 * i - 1], names[2 * i]
            ra += [(u, u), (u, v), (v, u), (v, v)]
        ra.append((names[-1], names[-1]))
    ra += [(x, y) for x in first for y in first]
    ra += [("r", y) for y in first] + [("n", y) for y in first]
    rel = {"a": ra, "b": rb}
    if closure:
        rel = {a: _equivalence_closure(states, r) for a, r in rel.items()}
    return PointedModel(KripkeModel(states, ["a", "b"], rel, val), "r")


def _equivalence_closure(states, pairs):
    parent = {s: s for s in states}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for s, t in pairs:
        parent[find(s)] = find(t)
    groups = {}
    for s in states:
        groups.setdefault(find(s), []).append(s)
    return [(x, y) for g in groups.values() for x in g for y in g]


def build_doubled(params) -> Scenario:
    n = int(params.get("N", 8))
    _range("N", n, 2, 12)
    guard = _bool(params.get("guard", True))
    sigma = params.get("sigma") or alternating(n)
    pm = doubled_model(n, sigma, guard)
    steps = n if guard else n - 1
    bits = sigma[:steps]
    sc = Scenario("doubled-kd45", dict(params), models={"N": pm}, formulas={"psi": DOUBLED_PSI}, budget=steps)

    def all_kd45():
        rep = sigma_trace(pm, DOUBLED_PSI, steps)
        return all(check_frame_class(generated_submodel(m).model, "KD45")[0] for m in rep.models)

    sc.checks = [
        Check("initial model is KD45", "consistent-belief variant",
              lambda: check_frame_class(pm.model, "KD45")[0]),
        Check(f"psi trace equals sigma for {steps} steps", "consistent-belief variant",
              lambda: sigma_trace(pm, DOUBLED_PSI, steps).bitstring, bits),
        Check("every intermediate point-generated model is KD45", "consistent-belief variant", all_kd45),
        Check("the root is the only state where b believes something false", "consistent-belief variant",
              lambda: _wrong_belief_states(pm.model, "b"), ["r"]),
    ]
    return sc


def _wrong_belief_states(m: KripkeModel, agent: str):
    """States from which the agent's successors all differ from it on some atom,
    that is, states where the agent holds some false belief about atoms."""
    out = []
    for s in m.states:
        succ = m.succ(agent)[s]
        atoms = m.atoms()
        if any(all((q in m.val[t]) != (q in m.val[s]) for t in succ) for q in atoms) and succ:
            out.append(s)
    return out


def closure_trace(pm: PointedModel, steps: int):
    """psi after 0..steps-1 truthful announcements of phi, with the models."""
    return sigma_trace(pm, CLOSURE_PSI, steps, style="truthful", announced=CLOSURE_PHI)


def build_closure(params) -> Scenario:
    n = int(params.get("N", 8))
    _range("N", n, 2, 12)
    guard = _bool(params.get("guard", False))
    sigma = params.get("sigma") or alternating(n)
    pm = doubled_model(n, sigma, guard, closure=True)
    steps = n
    sc = Scenario("s5-closure", dict(params), models={"N": pm},
                  formulas={"phi": CLOSURE_PHI, "psi": CLOSURE_PSI}, budget=steps)
    sc.checks = [
        Check("model is S5", "knowledge variant", lambda: check_frame_class(pm.model, "S5")[0]),
        Check(f"psi trace under truthful announcements of phi equals sigma for {steps} steps",
              "knowledge variant", lambda: closure_trace(pm, steps).bitstring, sigma[:steps]),
        Check("every intermediate model is S5", "knowledge variant",
              lambda: all(check_frame_class(m.model, "S5")[0] for m in closure_trace(pm, steps).models)),
    ]
    return sc


# -- muddy children -----------------------------------------------------------------------


def muddy_atoms(n):
    return [f"m_{i}" for i in range(1, n + 1)]


def muddy_agents(n):
    return [f"c{i}" for i in range(1, n + 1)]


def muddy_cube(n: int, k: int) -> PointedModel:
    """All 2^n mud distributions; child i sees everyone's forehead but its own."""
    states = ["".join(b) for b in itertools.product("01", repeat=n)]
    val = {s: [f"m_{i + 1}" for i in range(n) if s[i] == "1"] for s in states}
    rel = {}
    for i, ag in enumerate(muddy_agents(n)):
        rel[ag] = [(s, t) for s in states for t in states
                   if all(s[j] == t[j] for j in range(n) if j != i)]
    point = "1" * k + "0" * (n - k)
    return PointedModel(KripkeModel(states, muddy_agents(n), rel, val), point)


def at_least(n: int, j: int) -> Formula:
    if j <= 0:
        return P("true")
    return disj(*(conj(*(Atom(f"m_{i}") for i in c))
                  for c in itertools.combinations(range(1, n + 1), j)))


def nobody_knows(n: int) -> Formula:
    parts = []
    for i, ag in zip(range(1, n + 1), muddy_agents(n)):
        parts.append(P(f"~(B{{{ag}}} m_{i} | B{{{ag}}} ~m_{i})"))
    return conj(*parts)


def muddy_model(n: int, k: int) -> PointedModel:
    return truthful_update(muddy_cube(n, k), at_least(n, 1))


def muddy_rounds(n: int, k: int):
    """Models after 0, 1, ..., k-1 truthful nobody-knows announcements."""
    pm = muddy_model(n, k)
    nk = nobody_knows(n)
    out = [pm]
    for _ in range(k - 1):
        pm = truthful_update(pm, nk)
        out.append(pm)
    return out


def build_muddy(params) -> Scenario:
    n = int(params.get("n", 3))
    k = int(params.get("k", n))
    _range("n", n, 1, 6)
    _range("k", k, 1, n)
    nk = nobody_knows(n)
    rounds = muddy_rounds(n, k)
    group = muddy_agents(n)
    sc = Scenario("muddy", dict(params), models={f"round{j}": m for j, m in enumerate(rounds)},
                  formulas={"nobody_knows": nk})
    sc.checks.append(Check("initial model keeps every state but the clean one", "muddy children",
                           lambda: len(rounds[0].model.states), 2 ** n - 1))
    for r in range(1, k):
        expected = r <= k - 2
        sc.checks.append(Check(
            f"round {r}: nobody-knows is {'successful' if expected else 'not successful'} at the point",
            "muddy children, successful update",
            lambda r=r: classify_on_model(rounds[r - 1], nk).plain["11"], expected))
    last = rounds[-1]
    sc.checks.append(Check(f"after {k - 1} rounds every muddy child knows it is muddy", "muddy children",
                           lambda: all(eval_formula(last, P(f"B{{c{i}}} m_{i}")) for i in range(1, k + 1))))
    for j in range(k):
        f = CommonBelief(tuple(group), at_least(n, j + 1))
        sc.checks.append(Check(f"after {j} rounds it is common belief that at least {j + 1} are muddy",
                               "muddy children", lambda j=j, f=f: eval_formula(rounds[j], f)))
    return sc


# -- eight single-agent models ----------------------------------------------------------

EIGHT = {
    # label: (point has p, cluster valuations as p-values)
    "a": (True, ()),
    "b": (False, ()),
    "c": (True, (False, True)),
    "d": (False, (True,)),
    "e": (True, (True,)),
    "f": (False, (False,)),
    "g": (False, (False, True)),
    "h": (True, (False,)),
}
EIGHT_UPDATES = {"e": "a", "f": "b", "g": "d", "h": "a", "c": "e"}


def eight_models() -> dict:
    from .normalform import CanonicalModel

    out = {}
    for label, (pt, cl) in EIGHT.items():
        v = lambda b: frozenset(["p"]) if b else frozenset()
        out[label] = CanonicalModel(("p",), v(pt), frozenset(v(b) for b in cl), label)
    return out


def build_prop5(params) -> Scenario:
    models = eight_models()
    pms = {k: cm.to_pointed() for k, cm in models.items()}
    sc = Scenario("prop5", dict(params), models=pms, formulas={"phi": EIGHT_PHI})
    for label, pm in pms.items():
        sc.checks.append(Check(f"phi at model {label}", "eight K45 models",
                               lambda pm=pm: eval_formula(pm, EIGHT_PHI), label in "abcd"))
    for src, dst in EIGHT_UPDATES.items():
        def upd(src=src, dst=dst):
            pm = pms[src]
            return bisimilar(PointedModel(believed_update(pm.model, EIGHT_PHI), pm.point), pms[dst])
        sc.checks.append(Check(f"{src} updated with phi is bisimilar to {dst}", "eight K45 models", upd))
    for c in ("K45", "KD45"):
        sc.checks.append(Check(f"phi is 01-valid on {c}", "eight K45 models",
                               lambda c=c: sigma_valid_single_agent(EIGHT_PHI, "01", c)))
        sc.checks.append(Check(f"phi is not 11-valid on {c}", "eight K45 models",
                               lambda c=c: sigma_valid_single_agent(EIGHT_PHI, "11", c), False))
    return sc


# -- private lies and private assignments -----------------------------------------------------


def butterfly_initial() -> PointedModel:
    """Worlds named by (p_y, p_s); each knows their own plan only."""
    states = ["00", "10", "01", "11"]
    val = {s: [q for q, b in zip(("p_y", "p_s"), s) if b == "1"] for s in states}
    rel = {
        "y": [(s, t) for s in states for t in states if s[0] == t[0]],
        "s": [(s, t) for s in states for t in states if s[1] == t[1]],
    }
    return PointedModel(KripkeModel(states, ["y", "s"], rel, val), "00")


def butterfly_actions():
    return [
        am.private_lie(P("p_s"), "y", ["s"]),
        am.private_lie(P("p_y"), "s", ["y"]),
        am.private_assign("p_y", P("B{y} p_s"), "y", ["s"]),
        am.private_assign("p_s", P("B{s} p_y"), "s", ["y"]),
    ]


def butterfly_steps():
    pm = butterfly_initial()
    out = [pm]
    for act in butterfly_actions():
        pm = am.product_update(pm, act)
        out.append(pm)
    return out


BUTTERFLY_AFTER_LIES = {
    "y": P("~p_y & B{y} p_s & B{y} ~(B{s} p_y | B{s} ~p_y)"),
    "s": P("~p_s & B{s} p_y & B{s} ~(B{y} p_s | B{y} ~p_s)"),
}
BUTTERFLY_FINAL = {
    "y": P("p_y & p_s & B{y} B{s} ~(B{y} p_s | B{y} ~p_s)"),
    "s": P("p_y & p_s & B{s} B{y} ~(B{s} p_y | B{s} ~p_y)"),
}


def build_butterfly(params) -> Scenario:
    steps = butterfly_steps()
    sc = Scenario("butterfly", dict(params),
                  models={name: pm for name, pm in zip(
                      ["initial", "lie_y", "lie_s", "assign_y", "assign_s"], steps)},
                  actions=butterfly_actions())
    one = steps[1]
    both = steps[2]
    sc.checks = [
        Check("initial model is S5", "private lies", lambda: check_frame_class(steps[0].model, "S5")[0]),
        Check("first lie: raw product has 8 states", "private lies",
              lambda: len(am.product_update(steps[0], butterfly_actions()[0], generated=False).model.states), 8),
        Check("after the first lie y believes p_s although it is false", "private lies",
              lambda: eval_formula(one, P("~p_s & B{y} p_s"))),
        Check("after both lies the point-generated model has the 7 states of the figure", "private lies",
              lambda: len(both.model.states), 7),
        Check("... and is already bisimulation-minimal", "private lies",
              lambda: len(bisim_contraction(both).model.states), 7),
        Check("after both lies (y side)", "private lies", lambda: eval_formula(both, BUTTERFLY_AFTER_LIES["y"])),
        Check("after both lies (s side)", "private lies", lambda: eval_formula(both, BUTTERFLY_AFTER_LIES["s"])),
        Check("after both lies the model is KD45", "private lies",
              lambda: check_frame_class(both.model, "KD45")[0]),
        Check("final: the lies have come true (y side)", "private lies, both expect a surprise",
              lambda: eval_formula(steps[-1], BUTTERFLY_FINAL["y"])),
        Check("final: the lies have come true (s side)", "private lies, both expect a surprise",
              lambda: eval_formula(steps[-1], BUTTERFLY_FINAL["s"])),
    ]
    return sc


# -- lie and assignment combined ------------------------------------------------------------------


def pang_juan_model() -> PointedModel:
    m = KripkeModel(["np", "p"], ["a"], {"a": [(x, y) for x in ("np", "p") for y in ("np", "p")]},
                    {"p": ["p"]})
    return PointedModel(m, "np")


def pang_juan_suite(seed: int = 0, count: int = 100):
    import random

    suite = [cm.to_pointed() for cm in enumerate_canonical(["p"], "KD45") if "p" not in cm.point_val]
    rng = random.Random(seed)
    for _ in range(count):
        suite.append(random_model(rng, ["a"], ["p", "q"], rng.randint(1, 4)))
    return suite


def random_model(rng, agents, atoms, n, cls="K", point=None) -> PointedModel:
    """A random pointed model; ``cls`` K gives arbitrary relations, S5 random partitions."""
    states = [f"w{i}" for i in range(n)]
    rel = {}
    for a in agents:
        if cls == "S5":
            block = {s: rng.randrange(n) for s in states}
            rel[a] = [(s, t) for s in states for t in states if block[s] == block[t]]
        else:
            rel[a] = [(s, t) for s in states for t in states if rng.random() < 0.4]
    val = {s: [q for q in atoms if rng.random() < 0.5] for s in states}
    return PointedModel(KripkeModel(states, agents, rel, val), point or states[0])


def build_pang_juan(params) -> Scenario:
    pm = pang_juan_model()
    alpha = am.pang_juan("p", ["a"])
    seq = [am.public_believed(P("p"), ["a"], lie=True), am.public_assign("p", P("true"), ["a"])]
    sc = Scenario("pang-juan", dict(params), models={"M": pm}, actions=[alpha])
    sc.checks = [
        Check("~p now, and p after the action", "lie plus assignment",
              lambda: eval_formula(pm, conj(neg(P("p")), _act(alpha, P("p"))))),
        Check("the single action equals the lie followed by the assignment", "lie plus assignment",
              lambda: am.actions_equivalent(alpha, seq, pang_juan_suite())),
    ]
    return sc


def _act(pa, f):
    from .formula import ActionBox

    return ActionBox(pa, f)


def oscillation_model() -> PointedModel:
    """a is unsure about p, b knows whether p; p holds at the point."""
    m = KripkeModel(["u", "v"], ["a", "b"],
                    {"a": [(x, y) for x in "uv" for y in "uv"], "b": [("u", "u"), ("v", "v")]},
                    {"u": ["p"]})
    return PointedModel(m, "u")


def oscillation_action() -> am.PointedActionModel:
    model = am.ActionModel(
        ["s", "t"], ["a", "b"],
        {"a": [("s", "s"), ("t", "t")], "b": [(x, y) for x in "st" for y in "st"]},
        {"s": P("~B{a} p"), "t": P("p & B{b} ~B{a} p")},
        name="oscillation",
    )
    return am.PointedActionModel(model, "s")


def oscillation_sizes(steps: int):
    pm = oscillation_model()
    act = oscillation_action()
    sizes = [len(bisim_contraction(pm).model.states)]
    models = [pm]
    for _ in range(steps):
        pm = am.product_update(pm, act)
        models.append(pm)
        sizes.append(len(bisim_contraction(pm).model.states))
    return sizes, models


def build_oscillation(params) -> Scenario:
    steps = int(params.get("steps", 6))
    _range("steps", steps, 1, 20)
    sc = Scenario("oscillation", dict(params), models={"M": oscillation_model()},
                  actions=[oscillation_action()])

    def period_two():
        _, models = oscillation_sizes(steps)
        return all(bisimilar(models[i], models[i + 2]) for i in range(len(models) - 2)) and not bisimilar(
            models[0], models[1])

    sc.checks = [
        Check("contracted sizes alternate between 2 and 3", "two-action oscillation",
              lambda: oscillation_sizes(steps)[0], [2 if i % 2 == 0 else 3 for i in range(steps + 1)]),
        Check("period two up to bisimilarity", "two-action oscillation", period_two),
        Check("all models stay S5", "two-action oscillation",
              lambda: all(check_frame_class(m.model, "S5")[0] for m in oscillation_sizes(steps)[1])),
    ]
    return sc


# -- belief table with two spies -----------------------------------------------------------------

ARNOLD_ROWS = {
    "i": "p_a & ~p_j & B{a} p_a & B{j} ~p_a & B{a} ~p_j & B{j} ~p_j",
    "ii": "p_a & ~p_j & B{a} p_a & B{j} ~p_a & B{a} ~p_j & B{j} p_j",
    "iii": "p_a & ~p_j & B{a} p_a & B{j} p_a & B{a} ~p_j & B{j} p_j",
    "iv": "p_a & p_j & B{a} p_a & B{j} p_a & B{a} p_j & B{j} p_j",
}
ARNOLD_GOALS = {
    "i": "B{j} ~p_a & B{a} ~p_j",
    "ii": "B{j} ~p_a & B{a} p_j",
    "iii": "B{j} ~p_a & B{a} p_j",
    "iv": "B{j} p_a & B{a} p_j",
}


def arnold_witness(row: str, max_states: int = 3):
    """Smallest KD45 model (by state count) satisfying the row, found by search."""
    f = P(ARNOLD_ROWS[row])
    return falsify_bounded(neg(f), "KD45", ["a", "j"], max_states)


def build_arnold(params) -> Scenario:
    sc = Scenario("arnold", dict(params))
    for row in ARNOLD_ROWS:
        w = arnold_witness(row)
        sc.models[row] = w
        sc.checks.append(Check(f"row ({row}) has a KD45 witness", "belief table",
                               lambda w=w: w is not None))
        sc.checks.append(Check(
            f"row ({row}): both goals hold", "belief table",
            lambda w=w, row=row: w is not None and eval_formula(w, P(ARNOLD_GOALS[row])),
            row in ("i", "iv")))
    return sc


# -- export ---------------------------------------------------------------------------------


def export_scenario(s: Scenario, directory: str) -> list[str]:
    """Write every model and action model of ``s`` as JSON files; returns the paths."""
    import os

    from .kripke import dump_model

    os.makedirs(directory, exist_ok=True)
    written = []
    for key, pm in s.models.items():
        if pm is None:
            continue
        path = os.path.join(directory, f"{s.name}_{key}.json")
        dump_model(pm, path)
        written.append(path)
    for i, pa in enumerate(s.actions):
        path = os.path.join(directory, f"{s.name}_action{i}.json")
        am.dump_action_model(pa, path)
        written.append(path)
    return written


# -- registry -----------------------------------------------------------------------------


def _bool(x):
    if isinstance(x, bool):
        return x
    return str(x).lower() not in ("0", "false", "no", "off")


BUILDERS = {
    "sec31": build_two_state,
    "fan": build_fan,
    "sigma-fan": build_sigma_fan,
    "doubled-kd45": build_doubled,
    "s5-closure": build_closure,
    "muddy": build_muddy,
    "prop5": build_prop5,
    "butterfly": build_butterfly,
    "pang-juan": build_pang_juan,
    "oscillation": build_oscillation,
    "arnold": build_arnold,
}


def scenario_names():
    return list(BUILDERS)


def build_scenario(name: str, params: dict | None = None) -> Scenario:
    try:
        build = BUILDERS[name]
    except KeyError:
        raise UnknownScenario(f"unknown scenario {name!r}; try one of {', '.join(BUILDERS)}") from None
    return build(dict(params or {}))
