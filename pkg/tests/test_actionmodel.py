import json
import random

import pytest

from epl import actionmodel as am
from epl.errors import AgentMismatch, ModelError, PreconditionFailedAtPoint, UnknownKind
from epl.formula import TOP, ActionBox, Atom
from epl.kripke import KripkeModel, PointedModel, bisimilar, generated_submodel
from epl.parser import parse_formula as P
from epl.scenarios import butterfly_initial, pang_juan_model
from epl.semantics import believed_update, eval_formula, extension, truthful_update
from gen import random_formula, random_model

p = Atom("p")


def test_first_private_lie_gives_eight_states():
    pm = butterfly_initial()
    out = am.product_update(pm, am.private_lie(P("p_s"), "y", ["s"]), generated=False)
    assert len(out.model.states) == 8
    assert eval_formula(out, P("~p_s & B{y} p_s"))
    # s still sees the untouched copy of the initial model
    assert eval_formula(out, P("B{s} ~(B{y} p_s | B{y} ~p_s)"))


def test_truthful_top_changes_nothing_up_to_bisimilarity():
    rng = random.Random(2)
    for _ in range(50):
        pm = random_model(rng, ["a", "b"], ["p"], 4)
        assert bisimilar(am.product_update(pm, am.public_truthful(TOP, ["a", "b"])), pm)
    assert am.actions_equivalent(am.public_truthful(TOP, ["a"]), [], [PointedModel(KripkeModel(["x"], ["a"]), "x")])


def test_pang_juan_makes_p_true():
    pm = pang_juan_model()
    assert eval_formula(pm, ActionBox(am.pang_juan("p", ["a"]), p))
    assert eval_formula(am.product_update(pm, am.pang_juan("p", ["a"])), p)


def test_lie_product_matches_believed_update():
    rng = random.Random(3)
    checked = 0
    for _ in range(200):
        pm = random_model(rng, ["a", "b"], ["p", "q"], 4)
        f = random_formula(rng, ["p", "q"], ["a", "b"], 2, announce=False)
        holds = eval_formula(pm, f)
        action = am.public_believed(f, ["a", "b"], lie=not holds)
        out = am.product_update(pm, action)
        ref = generated_submodel(PointedModel(believed_update(pm.model, f), pm.point))
        assert bisimilar(out, ref)
        if holds:
            assert bisimilar(am.product_update(pm, am.public_truthful(f, ["a", "b"])), truthful_update(pm, f))
        checked += 1
    assert checked == 200


def test_raw_product_size_counts_precondition_pairs():
    rng = random.Random(4)
    for _ in range(50):
        pm = random_model(rng, ["a", "b"], ["p"], 4)
        act = am.private_lie(P("p"), "a", ["b"])
        prod, _ = am.raw_product(pm.model, act.model)
        expected = sum(len(extension(pm.model, act.model.pre[x])) for x in act.model.actions)
        assert len(prod.states) == expected


def test_private_assign_shape():
    pa = am.private_assign("p_y", P("B{y} p_s"), "y", ["s"])
    m = pa.model
    assert pa.point == "set"
    assert m.rel["y"] == {("set", "set"), ("skip", "skip")}
    assert m.rel["s"] == {("set", "skip"), ("skip", "skip")}
    assert m.post["set"] == {"p_y": P("B{y} p_s")} and m.post["skip"] == {}


def test_pang_juan_shape():
    m = am.pang_juan("p", ["a"]).model
    assert m.pre == {"lie": P("~p"), "honest": p}
    assert all(m.post[x] == {"p": TOP} for x in m.actions)


def test_lie_is_not_a_truthful_announcement():
    lie = am.public_believed(p, ["a"], lie=True)
    suite = [PointedModel(KripkeModel(["x", "y"], ["a"], {"a": [("x", "y"), ("y", "y")]}, {"y": ["p"]}), "x")]
    # the truthful version cannot run at a ~p point, so compare at the honest end
    honest = am.public_believed(p, ["a"], lie=False)
    pm = PointedModel(suite[0].model, "y")
    assert bisimilar(am.product_update(pm, honest), am.product_update(pm, am.public_truthful(p, ["a"])))
    assert not am.actions_equivalent(lie, [am.public_assign("p", P("false"), ["a"])], suite)


def test_postconditions_read_the_old_model():
    m = KripkeModel(["x"], ["a"], {"a": [("x", "x")]}, {"x": ["p"]})
    swap = am.ActionModel(["go"], ["a"], {"a": [("go", "go")]}, {"go": TOP},
                          {"go": {"p": P("q"), "q": P("p")}})
    out = am.product_update(PointedModel(m, "x"), am.PointedActionModel(swap, "go"))
    assert out.model.val[out.point] == {"q"}


def test_errors():
    pm = pang_juan_model()
    with pytest.raises(PreconditionFailedAtPoint):
        am.product_update(pm, am.public_truthful(p, ["a"]))
    with pytest.raises(AgentMismatch):
        am.product_update(pm, am.public_truthful(TOP, ["a", "b"]))
    with pytest.raises(UnknownKind):
        am.mk_action("telepathy")
    with pytest.raises(ModelError):
        am.ActionModel(["x"], ["a"], {}, {})


def test_mk_action_and_json_round_trip(tmp_path):
    pa = am.mk_action("private_lie", phi=p, listener="a", others=["b"])
    path = tmp_path / "lie.json"
    am.dump_action_model(pa, str(path))
    back = am.load_action_model(str(path))
    assert back.point == pa.point
    assert back.model.rel == pa.model.rel and back.model.pre == pa.model.pre
    custom = am.mk_action("custom", path=str(path))
    assert json.loads(am.dump_action_model(custom)) == json.loads(path.read_text())
