"""Acceptance criteria 1 to 11, one test each.

Every test prints a single ``criterion N: PASS`` or ``criterion N: FAIL``
line (collected into the end-of-run summary) and asserts the
criterion at its stated tolerance.
"""

import itertools
import random
import sys
import time

import pytest

from epl import actionmodel as am
from epl.formula import (
    BOT,
    TOP,
    Announce,
    Atom,
    CommonBelief,
    agents_of,
    believable,
    build_sigma_check,
    conj,
    implies,
    neg,
)
from epl.kripke import (
    PointedModel,
    bisimilar,
    check_frame_class,
    generated_submodel,
)
from epl.normalform import (
    Disjunct,
    DnfFormula,
    decide_single_agent,
    enumerate_canonical,
    falsify_bounded,
    sigma_valid_single_agent,
)
from epl.parser import parse_formula as P
from epl.scenarios import (
    BUTTERFLY_AFTER_LIES,
    BUTTERFLY_FINAL,
    CLOSURE_PHI,
    CLOSURE_PSI,
    DOUBLED_PSI,
    EIGHT_PHI,
    EIGHT_UPDATES,
    LEAF_FORMULA,
    alternating,
    at_least,
    butterfly_steps,
    closure_trace,
    doubled_model,
    eight_models,
    fan_model,
    muddy_rounds,
    nobody_knows,
    oscillation_sizes,
    pang_juan_model,
    pang_juan_suite,
)
from epl.semantics import (
    believed_update,
    classify_on_model,
    eval_formula,
    iterate_until_fixpoint,
    sigma_trace,
    truthful_update,
)
from epl.truelie import canonical_traces, dlf_witness_search, sigma_valid_on_trace
from gen import random_formula, random_k45_model, random_model


LINES = []  # read by the terminal summary hook in conftest.py


def report(number, failures, note=""):
    line = f"criterion {number}: {'PASS' if not failures else 'FAIL'}"
    if note:
        line += f"  ({note})"
    if failures:
        line += "  first problems: " + "; ".join(map(str, failures[:3]))
    LINES.append(line)
    assert not failures, line


# -- 1 ------------------------------------------------------------------------------


def test_criterion_01_eight_model_table():
    start = time.perf_counter()
    fails = []
    models = {k: cm.to_pointed() for k, cm in eight_models().items()}
    for label, pm in models.items():
        if eval_formula(pm, EIGHT_PHI) != (label in "abcd"):
            fails.append(f"phi at {label}")
    found = set()
    for src in "efghc":
        pm = models[src]
        up = PointedModel(believed_update(pm.model, EIGHT_PHI), pm.point)
        for dst, other in models.items():
            if bisimilar(up, other):
                found.add((src, dst))
    if found != set(EIGHT_UPDATES.items()):
        fails.append(f"bisimilarity verdicts {sorted(found)}")
    for c in ("K45", "KD45"):
        if not sigma_valid_single_agent(EIGHT_PHI, "01", c):
            fails.append(f"01 on {c}")
        if sigma_valid_single_agent(EIGHT_PHI, "11", c):
            fails.append(f"11 on {c}")
    elapsed = time.perf_counter() - start
    if elapsed >= 1:
        fails.append(f"took {elapsed:.2f}s")
    report(1, fails, f"{elapsed * 1000:.0f} ms")


# -- 2 ------------------------------------------------------------------------------


def _valid(f, sigma, c, bel=False):
    return sigma_valid_single_agent(f, sigma, c, believable=bel)


def test_criterion_02_classification_battery():
    fails = []

    def expect(name, got, want=True):
        if got != want:
            fails.append(name)

    boxp, porb, p = P("B p"), P("p | B p"), Atom("p")
    expect("B p 01 K45", _valid(boxp, "01", "K45"))
    for c in ("K45", "KD45"):
        expect(f"p|Bp 01 {c}", _valid(porb, "01", c))
        expect(f"p|Bp 11 {c}", _valid(porb, "11", c))
    expect("p|Bp believable 01", _valid(porb, "01", "KD45", True))
    sat = build_sigma_check(porb, "01", "satisfiable", True, ["a"])
    expect("p|Bp believable 01 satisfiable", decide_single_agent(sat, "KD45", "satisfiable")[0])
    for c in ("K45", "KD45"):
        expect(f"p 11 {c}", _valid(p, "11", c))
        expect(f"p 00 {c}", _valid(p, "00", c))
        expect(f"p 01 {c}", _valid(p, "01", c), False)
        expect(f"~Bp 11 {c}", _valid(P("~B p"), "11", c))
        expect(f"~Bp 00 {c}", _valid(P("~B p"), "00", c))
        expect(f"p&~Bp 10 {c}", _valid(P("p & ~B p"), "10", c))
        expect(f"p&Bp 01 {c}", _valid(P("p & B p"), "01", c), False)
        expect(f"false 01 {c}", _valid(BOT, "01", c), False)
    check = build_sigma_check(P("p & B p"), "01", "valid")
    w = falsify_bounded(check, "K", ["a"], 2)
    expect("p&Bp counterexample within 2 states", w is not None and len(w.model.states) <= 2)
    report(2, fails)


# -- 3 ------------------------------------------------------------------------------

P_, N_ = ("p", True), ("p", False)
_LIT_SETS = [frozenset(), frozenset({P_}), frozenset({N_}), frozenset({P_, N_})]


def exhaustive_dnf_corpus():
    """All DNFs over p with at most two disjuncts, each with at most one box and one diamond."""
    ds = [Disjunct(a, b, g)
          for a in _LIT_SETS
          for b in [()] + [(x,) for x in _LIT_SETS]
          for g in [()] + [(x,) for x in _LIT_SETS]]
    return [DnfFormula((d,)) for d in ds] + [DnfFormula(pair) for pair in itertools.combinations(ds, 2)]


def test_criterion_03_syntactic_and_semantic_true_lies_agree():
    fails = []
    corpus = exhaustive_dnf_corpus()
    for d in corpus:
        syn = dlf_witness_search(d, "a") is None
        sem = sigma_valid_single_agent(d.to_formula("a"), "01", "KD45", believable=True)
        if syn != sem:
            fails.append(f"exhaustive {d}")
    rng = random.Random(3003)
    randoms = [random_formula(rng, ["p", "q"], ["a"], 2, announce=False) for _ in range(500)]
    for f in randoms:
        syn = dlf_witness_search(f) is None
        sem = sigma_valid_single_agent(f, "01", "KD45", believable=True)
        if syn != sem:
            fails.append(f"random {f}")
    if dlf_witness_search(P("p | B p")) is not None:
        fails.append("p|Bp has a witness")
    w = dlf_witness_search(P("p & B p"))
    if w is None or (w.S, w.T) != ((0,), ()):
        fails.append(f"p&Bp witness {w}")
    report(3, fails, f"{len(corpus)} exhaustive + {len(randoms)} random")


# -- 4 ------------------------------------------------------------------------------


def test_criterion_04_traces():
    fails = []
    rng = random.Random(4004)
    sigmas = ["0101010101", "0111000110"] + ["".join(rng.choice("01") for _ in range(10)) for _ in range(20)]
    for s in sigmas:
        got = sigma_trace(fan_model(10, s), LEAF_FORMULA, 10).bitstring
        if got != s:
            fails.append(f"fan {s} gave {got}")
    rep = sigma_trace(doubled_model(8), DOUBLED_PSI, 8)
    if rep.bitstring != alternating(8):
        fails.append(f"doubled gave {rep.bitstring}")
    if not all(check_frame_class(generated_submodel(m).model, "KD45")[0] for m in rep.models):
        fails.append("doubled intermediate model not KD45")
    rep = closure_trace(doubled_model(8, guard=False, closure=True), 8)
    if rep.bitstring != alternating(8):
        fails.append(f"closure gave {rep.bitstring}")
    if not all(check_frame_class(m.model, "S5")[0] for m in rep.models):
        fails.append("closure intermediate model not S5")
    report(4, fails, f"{len(sigmas)} fan strings")


# -- 5 and 6 share a corpus -----------------------------------------------------------


def stabilization_corpus():
    rng = random.Random(5005)
    out = []
    for _ in range(1000):
        agents = ["a"] if rng.random() < 0.5 else ["a", "b"]
        pm = random_model(rng, agents, ["p", "q"], 6)
        f = random_formula(rng, ["p", "q"], agents, 3)
        out.append((pm, f))
    return out


CORPUS = stabilization_corpus()


def test_criterion_05_finite_stabilization():
    fails = []
    for pm, f in CORPUS:
        budget = pm.model.arrow_count()
        k, _ = iterate_until_fixpoint(pm, f)
        if k > budget:
            fails.append(f"{k} changing steps > {budget} arrows")
            continue
        bits = sigma_trace(pm, f, k + 4).bits
        if len(set(bits[k:])) > 1:
            fails.append(f"bits move after fixpoint: {bits}")
    report(5, fails, f"{len(CORPUS)} pairs")


def test_criterion_06_no_001_validities_and_prefix_closure():
    fails = []
    sigmas = ["".join(b) for n in range(2, 5) for b in itertools.product("01", repeat=n)]
    single = [f for _, f in CORPUS if len(agents_of(f)) <= 1]
    for f in single:
        for c in ("K45", "KD45"):
            traces = canonical_traces(f, c, 4)
            table = {s: all(sigma_valid_on_trace(t, s) for t in traces) for s in sigmas}
            if table["001"] and not decide_single_agent(f, c)[0]:
                fails.append(f"001-valid but not valid: {f} on {c}")
            for s, ok in table.items():
                if ok and len(s) > 2 and not table[s[:-1]]:
                    fails.append(f"{s} valid but prefix is not: {f} on {c}")
    report(6, fails, f"{len(single)} single-agent formulas")


# -- 7 ------------------------------------------------------------------------------


def test_criterion_07_truthful_and_believed_agree():
    fails = []
    rng = random.Random(7007)
    done = 0
    while done < 300:
        pm = random_model(rng, ["a", "b"], ["p", "q"], 5)
        f = random_formula(rng, ["p", "q"], ["a", "b"], 3)
        if not eval_formula(pm, f):
            continue
        done += 1
        g = generated_submodel(PointedModel(believed_update(pm.model, f), pm.point))
        if not bisimilar(g, truthful_update(pm, f)):
            fails.append(f)
    report(7, fails, f"{done} pairs")


# -- 8 ------------------------------------------------------------------------------


def test_criterion_08_muddy_children():
    fails = []
    for n, k in ((3, 2), (3, 3), (4, 3), (5, 4)):
        nk = nobody_knows(n)
        rounds = muddy_rounds(n, k)
        for r in range(1, k):
            got = classify_on_model(rounds[r - 1], nk).plain["11"]
            if got != (r <= k - 2):
                fails.append(f"({n},{k}) round {r}: 11 is {got}")
        last = rounds[k - 1]
        for i in range(1, k + 1):
            if not eval_formula(last, P(f"B{{c{i}}} m_{i}")):
                fails.append(f"({n},{k}) child {i} does not know")
        group = tuple(f"c{i}" for i in range(1, n + 1))
        for j in range(k):
            if not eval_formula(rounds[j], CommonBelief(group, at_least(n, j + 1))):
                fails.append(f"({n},{k}) no common belief in {j + 1} muddy after {j} rounds")
    report(8, fails)


# -- 9 ------------------------------------------------------------------------------


def test_criterion_09_butterfly_lovers():
    fails = []
    steps = butterfly_steps()
    both, final = steps[2], steps[4]
    for side in ("y", "s"):
        if not eval_formula(final, BUTTERFLY_FINAL[side]):
            fails.append(f"final {side}-check")
        if not eval_formula(both, BUTTERFLY_AFTER_LIES[side]):
            fails.append(f"after-lies {side}-check")
    size = len(generated_submodel(both).model.states)
    if size != 5:
        fails.append(f"generated model after both lies has {size} states, criterion says 5")
    report(9, fails)


# -- 10 -----------------------------------------------------------------------------


def test_criterion_10_lie_plus_assignment_and_oscillation():
    fails = []
    alpha = am.pang_juan("p", ["a"])
    from epl.formula import ActionBox

    if not eval_formula(pang_juan_model(), conj(neg(Atom("p")), ActionBox(alpha, Atom("p")))):
        fails.append("~p & [alpha]p fails")
    seq = [am.public_believed(Atom("p"), ["a"], lie=True), am.public_assign("p", TOP, ["a"])]
    if not am.actions_equivalent(alpha, seq, pang_juan_suite()):
        fails.append("alpha differs from lie then assignment")
    sizes, models = oscillation_sizes(6)
    if sizes != [2, 3, 2, 3, 2, 3, 2]:
        fails.append(f"sizes {sizes}")
    for i in range(len(models) - 2):
        if not bisimilar(models[i], models[i + 2]) or bisimilar(models[i], models[i + 1]):
            fails.append(f"period breaks at {i}")
    report(10, fails)


# -- 11 -----------------------------------------------------------------------------


def test_criterion_11_canonical_enumeration():
    fails = []
    expected = {("K45", 1): 8, ("KD45", 1): 6, ("K45", 2): 64, ("KD45", 2): 60}
    for (c, n), want in expected.items():
        ms = [cm.to_pointed() for cm in enumerate_canonical(["p", "q"][:n], c)]
        if len(ms) != want:
            fails.append(f"{c} with {n} atoms: {len(ms)}")
        for x, y in itertools.combinations(ms, 2):
            if bisimilar(x, y):
                fails.append(f"{c}/{n}: duplicates")
                break
    canon = [cm.to_pointed() for cm in enumerate_canonical(["p", "q"], "K45")]
    rng = random.Random(1111)
    for _ in range(200):
        pm = random_k45_model(rng, ["p", "q"], 6)
        assert check_frame_class(pm.model, "K45")[0]
        hits = sum(bisimilar(pm, c) for c in canon)
        if hits != 1:
            fails.append(f"random model matches {hits} canonical models")
    report(11, fails)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
