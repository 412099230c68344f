"""Believed and truthful public announcements on Kripke models."""

from .actionmodel import (
    ActionModel,
    PointedActionModel,
    actions_equivalent,
    mk_action,
    product_update,
)
from .formula import build_sigma_check, translate
from .kripke import (
    KripkeModel,
    PointedModel,
    bisim_contraction,
    bisimilar,
    check_frame_class,
    generated_submodel,
    to_dot,
)
from .normalform import decide_single_agent, enumerate_canonical, falsify_bounded, to_dnf
from .parser import parse_formula, print_formula
from .scenarios import build_scenario, verify_scenario
from .semantics import (
    announce_whether,
    believed_update,
    eval_formula,
    sigma_trace,
    truthful_update,
)
from .truelie import classify_validities, dlf_witness_search, validity_profile

__all__ = [
    "ActionModel", "PointedActionModel", "actions_equivalent", "mk_action", "product_update",
    "build_sigma_check", "translate", "KripkeModel", "PointedModel", "bisim_contraction",
    "bisimilar", "check_frame_class", "generated_submodel", "to_dot", "decide_single_agent",
    "enumerate_canonical", "falsify_bounded", "to_dnf", "parse_formula", "print_formula",
    "build_scenario", "verify_scenario", "announce_whether", "believed_update", "eval_formula",
    "sigma_trace", "truthful_update", "classify_validities", "dlf_witness_search", "validity_profile",
]
