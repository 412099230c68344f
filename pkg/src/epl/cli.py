"""Command-line front end: ``epl <verb> ...``.

Exit status 0 means the command ran (the verdict is in the report), 1 is a
user error, 2 an internal failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import actionmodel, kripke, normalform, scenarios, semantics, truelie
from .errors import EplError
from .parser import parse_formula, print_formula


class UsageError(EplError):
    pass


class _ArgParser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(1)


def _formula(args):
    if not args.formula:
        raise UsageError("a formula is required (-f)")
    return parse_formula(args.formula, base_dir=os.getcwd())


def _model(args, index=0):
    if not args.model or len(args.model) <= index:
        raise UsageError("a model file is required (-m)")
    return kripke.load_model(args.model[index])


def _cls(args, default="KD45"):
    return (args.cls or default).upper()


def _write_or_return(args, text, key, report):
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        report["written"] = args.out
    else:
        report[key] = text if key != "model" else json.loads(text)
    return report


def _witness(w):
    if w is None:
        return None
    if isinstance(w, normalform.CanonicalModel):
        return w.describe()
    return kripke.model_to_dict(w)


# -- verbs -----------------------------------------------------------------------


def cmd_check(args):
    pm = _model(args)
    if args.at:
        pm = kripke.PointedModel(pm.model, args.at)
    f = _formula(args)
    return {"formula": print_formula(f), "point": pm.point, "value": semantics.eval_formula(pm, f)}


def cmd_update(args):
    pm = _model(args)
    f = _formula(args)
    if args.kind == "believed":
        semantics.eval_formula(pm, f)  # agent check
        out = kripke.PointedModel(semantics.believed_update(pm.model, f), pm.point)
    elif args.kind == "truthful":
        out = semantics.truthful_update(pm, f)
    else:
        out = semantics.announce_whether(pm, f)
    if args.generated:
        out = kripke.generated_submodel(out)
    return _write_or_return(args, kripke.dump_model(out), "model", {"kind": args.kind})


def cmd_trace(args):
    pm = _model(args)
    f = _formula(args)
    g = parse_formula(args.announce, base_dir=os.getcwd()) if args.announce else None
    rep = semantics.sigma_trace(pm, f, args.steps, style=args.style, announced=g)
    return {"bits": rep.bitstring, "fixpoint_index": rep.fixpoint_index}


def cmd_classify(args):
    f = _formula(args)
    if args.model:
        c = semantics.classify_on_model(_model(args), f)
        return {"plain": c.plain, "believable": c.believable, "pattern": c.which()}
    return {"class": _cls(args), "table": truelie.classify_validities(f, _cls(args))}


def cmd_dnf(args):
    d = normalform.to_dnf(_formula(args))
    agent = normalform.single_agent_of(_formula(args))
    return {"disjuncts": [print_formula(x.to_formula(agent)) for x in d.disjuncts]}


def cmd_clarity(args):
    f = _formula(args)
    ok, detail = normalform.is_clear(normalform.to_dnf(f))
    agent = normalform.single_agent_of(f)
    if ok:
        return {"clear": True, "clear_disjunct": print_formula(detail.to_formula(agent))}
    return {"clear": False, "reasons": [str(r) for r in detail]}


def cmd_dlf(args):
    f = _formula(args)
    agent = normalform.single_agent_of(f)
    d = normalform.to_dnf(f)
    w = truelie.dlf_witness_search(d, agent)
    if w is None:
        return {"witness": None, "believable_true_lie": True}
    show = lambda i: print_formula(d.disjuncts[i].to_formula(agent))
    return {
        "witness": {
            "S": [show(i) for i in w.S],
            "T": [show(i) for i in w.T],
            "beta_choice": {show(i): sorted(map(str, b)) for i, b in w.beta_choice.items()},
            "chi": print_formula(w.chi),
        },
        "believable_true_lie": False,
    }


def cmd_decide(args):
    f = _formula(args)
    ans, w = normalform.decide_single_agent(f, _cls(args), args.mode)
    return {"mode": args.mode, "class": _cls(args), "answer": ans, "witness": _witness(w)}


def cmd_sigma_valid(args):
    f = _formula(args)
    if not args.sigma:
        raise UsageError("--sigma is required")
    ans = normalform.sigma_valid_single_agent(f, args.sigma, _cls(args), args.believable)
    return {"sigma": args.sigma, "class": _cls(args), "believable": args.believable, "valid": ans}


def cmd_falsify(args):
    f = _formula(args)
    w = normalform.falsify_bounded(f, _cls(args, "K"), max_states=args.max_states)
    return {"class": _cls(args, "K"), "max_states": args.max_states, "counterexample": _witness(w)}


def cmd_profile(args):
    f = _formula(args)
    p = truelie.validity_profile(f, _cls(args), args.steps or 6, args.believable)
    return {"class": _cls(args), "valid": p.valid(), "maximal": p.maximal}


def cmd_bisim(args):
    if not args.model or len(args.model) != 2:
        raise UsageError("bisim needs exactly two models (-m A -m B)")
    return {"bisimilar": kripke.bisimilar(_model(args, 0), _model(args, 1))}


def cmd_enumerate(args):
    atoms = [a for a in (args.atoms or "p").split(",") if a]
    ms = normalform.enumerate_canonical(atoms, _cls(args, "K45"))
    return {"class": _cls(args, "K45"), "count": len(ms), "models": [m.describe() for m in ms]}


def cmd_product(args):
    pm = _model(args)
    if not args.action:
        raise UsageError("an action model file is required (-a)")
    pa = actionmodel.load_action_model(args.action)
    if pa.point is None:
        raise UsageError("the action model has no designated point")
    out = actionmodel.product_update(pm, pa)
    return _write_or_return(args, kripke.dump_model(out), "model", {})


def cmd_dot(args):
    text = kripke.to_dot(_model(args), args.style)
    return _write_or_return(args, text, "dot", {})


def _scenario_params(items):
    out = {}
    for item in items:
        if "=" not in item:
            raise UsageError(f"scenario parameter {item!r} is not of the form key=value")
        k, v = item.split("=", 1)
        out[k] = v
    return out


def cmd_scenario(args):
    if args.action_ == "list":
        return {"scenarios": scenarios.scenario_names()}
    if not args.name:
        raise UsageError(f"scenario {args.action_} needs a scenario name")
    sc = scenarios.build_scenario(args.name, _scenario_params(args.params))
    if args.action_ == "export":
        if not args.out:
            raise UsageError("scenario export needs --out <directory>")
        return {"scenario": sc.name, "written": scenarios.export_scenario(sc, args.out)}
    results = scenarios.verify_scenario(sc)
    return {
        "scenario": sc.name,
        "checks": [
            {"description": r.description, "anchor": r.anchor, "expected": r.expected,
             "actual": r.actual, "passed": r.passed}
            for r in results
        ],
        "all_passed": all(r.passed for r in results),
    }


VERBS = {
    "check": cmd_check,
    "update": cmd_update,
    "trace": cmd_trace,
    "classify": cmd_classify,
    "dnf": cmd_dnf,
    "clarity": cmd_clarity,
    "dlf": cmd_dlf,
    "decide": cmd_decide,
    "sigma-valid": cmd_sigma_valid,
    "falsify": cmd_falsify,
    "profile": cmd_profile,
    "bisim": cmd_bisim,
    "enumerate": cmd_enumerate,
    "product": cmd_product,
    "scenario": cmd_scenario,
    "dot": cmd_dot,
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-m", "--model", action="append", help="model JSON file (repeatable)")
    common.add_argument("-a", "--action", help="action model JSON file")
    common.add_argument("-f", "--formula")
    common.add_argument("--sigma")
    common.add_argument("--class", dest="cls", choices=["k", "k45", "kd45", "s5", "K", "K45", "KD45", "S5"])
    common.add_argument("--steps", type=int)
    common.add_argument("--believable", action="store_true")
    common.add_argument("--format", choices=["text", "json"], default="text")
    common.add_argument("--out")

    p = _ArgParser(prog="epl", description="Believed and truthful announcement toolkit.")
    sub = p.add_subparsers(dest="verb", required=True, parser_class=_ArgParser)
    for verb in VERBS:
        sp = sub.add_parser(verb, parents=[common])
        if verb == "check":
            sp.add_argument("--at", help="evaluate at this state instead of the model's point")
        elif verb == "update":
            sp.add_argument("--kind", choices=["believed", "truthful", "whether"], default="believed")
            sp.add_argument("--generated", action="store_true", help="keep only the point-generated part")
        elif verb == "trace":
            sp.add_argument("--style", choices=list(semantics.TRACE_STYLES), default="believed")
            sp.add_argument("--announce", help="announce this formula instead of -f")
        elif verb == "decide":
            sp.add_argument("--mode", choices=["valid", "satisfiable"], default="valid")
        elif verb == "falsify":
            sp.add_argument("--max-states", type=int, default=3)
        elif verb == "enumerate":
            sp.add_argument("--atoms", help="comma-separated atoms (default p)")
        elif verb == "dot":
            sp.add_argument("--style", choices=["full", "simplified"], default="full")
        elif verb == "scenario":
            sp.add_argument("action_", choices=["list", "run", "export"])
            sp.add_argument("name", nargs="?")
            sp.add_argument("params", nargs="*", help="key=value parameters")
    return p


def _text(report, indent=0):
    pad = "  " * indent
    lines = []
    for k, v in report.items():
        if isinstance(v, dict) and v:
            lines.append(f"{pad}{k}:")
            lines.extend(_text(v, indent + 1))
        elif isinstance(v, list) and v and isinstance(v[0], dict):
            lines.append(f"{pad}{k}:")
            for item in v:
                if "passed" in item:
                    mark = "PASS" if item["passed"] else "FAIL"
                    lines.append(f"{pad}  {mark}  {item['description']}  [{item['anchor']}]"
                                 + ("" if item["passed"] else f"  expected {item['expected']!r}, got {item['actual']!r}"))
                else:
                    lines.append(f"{pad}  {json.dumps(item, sort_keys=True)}")
        elif isinstance(v, list):
            lines.append(f"{pad}{k}:" + ("" if v else " []"))
            lines.extend(f"{pad}  {x}" for x in v)
        elif isinstance(v, str) and "\n" in v:
            lines.append(f"{pad}{k}:")
            lines.extend(f"{pad}  {x}" for x in v.rstrip("\n").split("\n"))
        else:
            lines.append(f"{pad}{k}: {json.dumps(v) if isinstance(v, (bool, type(None))) else v}")
    return lines


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        report = VERBS[args.verb](args)
    except (EplError, ValueError) as e:
        print(f"epl: {type(e).__name__}: {e}", file=sys.stderr)
        return 1
    except Exception as e:  # anything else is a bug, not bad input
        print(f"epl: internal error: {type(e).__name__}: {e}", file=sys.stderr)
        return 2
    if args.format == "json":
        print(json.dumps(report, indent=2, default=str))
    else:
        print("\n".join(_text(report)))
    return 0


if __name__ == "__main__":
    sys.exit(main())
