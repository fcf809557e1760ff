"""Command-line surface and model file formats.

Models are JSON documents.  Probability kind:

    {"kind": "probability",
     "worlds": ["w1", "w2"],
     "partition": [["w1", "w2"]],
     "valuation": {"w1": ["p"], "w2": []},
     "weights": {"w1": "1/3", "w2": "2/3"}}

Neighborhood kind replaces "weights" with "generators": one list per
partition cell, each a list of world-name lists naming the minimal
neighborhoods.  Rationals always serialize as "p/q" strings.

Exit codes: 0 for a positive verdict (true, holds, feasible, accepted,
witness found), 1 for the negative verdict, 2 or more for errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import corpus
from .calculus import check_derivation, parse_proof
from .core import (
    EventSet,
    Frame,
    NeighborhoodModel,
    ProbabilityModel,
    make_neighborhood_model,
    make_probability_model,
)
from .errors import FormulaSyntaxError, HighProbError
from .formula import FormulaKB, Threshold, parse_kb, parse_l
from .neighborhood import (
    PropertyReport,
    ScottWitness,
    Verdict,
    check_agreement,
    check_base_properties,
    check_conjectured,
    check_mid_threshold,
    derive_neighborhoods,
    verify_scott_witness,
)
from .semantics import (
    eval_kb_nbhd,
    eval_kb_prob,
    eval_l,
    find_nbhd_countermodel,
    sample_prob_countermodel,
)
from .synthesis import (
    ComparativeRelation,
    check_definetti,
    measure_order,
    realize_comparative,
    synthesize_measure,
)


# ---------------------------------------------------------------------------
# Model files

def model_to_dict(model) -> dict:
    frame = model.frame
    base = {
        "worlds": list(frame.worlds),
        "partition": [list(frame.names(cell)) for cell in frame.partition],
        "valuation": {w: sorted(frame.valuation[w]) for w in frame.worlds},
    }
    if isinstance(model, ProbabilityModel):
        base["kind"] = "probability"
        base["weights"] = {w: str(q) for w, q in model.weight_map().items()}
    else:
        base["kind"] = "neighborhood"
        base["generators"] = [
            [list(frame.names(g)) for g in gens]
            for gens in model.generators]
    return base


def model_from_dict(doc: dict):
    kind = doc.get("kind")
    frame = Frame(tuple(doc["worlds"]),
                  tuple(tuple(cell) for cell in doc["partition"]),
                  {w: frozenset(v) for w, v in doc["valuation"].items()})
    if kind == "probability":
        weights = {w: Fraction(q) for w, q in doc["weights"].items()}
        return make_probability_model(frame, weights)
    if kind == "neighborhood":
        gens = tuple(tuple(frame.event(g) for g in cell_gens)
                     for cell_gens in doc["generators"])
        return make_neighborhood_model(frame, gens)
    raise HighProbError(f"unknown model kind {kind!r}")


_BUILTINS = {
    "horses1": corpus.horses_common_prior,
    "horses2": corpus.horses_cut,
    "horses3": corpus.horses_uniform,
    "walley-fine": corpus.walley_fine_model,
}


def load_model(spec: str):
    if spec in _BUILTINS:
        return _BUILTINS[spec]()
    try:
        with open(spec, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise HighProbError(f"cannot read model file {spec}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise HighProbError(f"bad JSON in {spec}: {exc}") from exc
    return model_from_dict(doc)


def _emit(args, payload: dict, human: str) -> None:
    if args.json:
        print(json.dumps(payload, sort_keys=True, separators=(",", ":")))
    else:
        print(human)


def _names(frame: Frame, event: EventSet) -> list[str]:
    return list(frame.names(event))


def _witness_payload(frame: Frame, verdict: Verdict):
    w = verdict.witness
    if w is None:
        return None
    if isinstance(w, ScottWitness):
        return {"cell": w.cell_index,
                "xs": [_names(frame, x) for x in w.xs],
                "ys": [_names(frame, y) for y in w.ys]}
    if hasattr(w, "cell_index"):
        return {"cell": w.cell_index,
                "sets": [_names(frame, s) for s in w.sets]}
    if isinstance(w, tuple):
        return [_names(frame, p) if isinstance(p, EventSet) else p
                for p in w]
    return str(w)


def _report_payload(frame: Frame, report: PropertyReport) -> dict:
    return {name: {"holds": v.holds,
                   "witness": _witness_payload(frame, v)}
            for name, v in report.verdicts}


def _parse_formula(text: str):
    try:
        return parse_kb(text)
    except FormulaSyntaxError:
        return parse_l(text)


def _threshold(text: str) -> Threshold:
    return Threshold(Fraction(text))


# ---------------------------------------------------------------------------
# Subcommands

def cmd_eval(args) -> int:
    model = load_model(args.model)
    formula = _parse_formula(args.formula)
    if isinstance(formula, FormulaKB):
        if isinstance(model, NeighborhoodModel):
            verdict = eval_kb_nbhd(model, args.world, formula)
        else:
            if args.threshold is None:
                raise HighProbError(
                    "probability evaluation needs --threshold")
            verdict = eval_kb_prob(model, args.world, formula,
                                   _threshold(args.threshold))
    else:
        if not isinstance(model, ProbabilityModel):
            raise HighProbError(
                "probability-language formulas need a probability model")
        verdict = eval_l(model, args.world, formula)
    _emit(args, {"verdict": verdict}, "true" if verdict else "false")
    return 0 if verdict else 1


def cmd_check_model(args) -> int:
    model = load_model(args.model)
    if isinstance(model, ProbabilityModel):
        raise HighProbError("check-model expects a neighborhood model")
    frame = model.frame
    reports = {"base": check_base_properties(model)}
    if args.mid_threshold:
        reports["mid-threshold"] = check_mid_threshold(
            model, m_max=args.m_max, cell_budget=args.cell_budget)
    if args.conjectured is not None:
        reports["conjectured"] = check_conjectured(
            model, _threshold(args.conjectured), m_max=args.m_max,
            cell_budget=args.cell_budget)
    ok = all(r.all_hold for r in reports.values())
    payload = {group: _report_payload(frame, rep)
               for group, rep in reports.items()}
    lines = []
    for group, rep in reports.items():
        for name, v in rep.verdicts:
            lines.append(f"{group}/{name}: "
                         + ("holds" if v.holds else "FAILS"))
    _emit(args, payload, "\n".join(lines))
    return 0 if ok else 1


def cmd_derive(args) -> int:
    model = load_model(args.model)
    if not isinstance(model, ProbabilityModel):
        raise HighProbError("derive expects a probability model")
    derived = derive_neighborhoods(model, _threshold(args.threshold))
    doc = model_to_dict(derived)
    print(json.dumps(doc, sort_keys=True,
                     separators=(",", ":") if args.json else (", ", ": ")))
    return 0


def cmd_synthesize(args) -> int:
    model = load_model(args.model)
    if not isinstance(model, NeighborhoodModel):
        raise HighProbError("synthesize expects a neighborhood model")
    result = synthesize_measure(model, _threshold(args.threshold))
    if not result.feasible:
        _emit(args, {"feasible": False, "cell": result.failed_cell},
              "INFEASIBLE")
        return 1
    doc = model_to_dict(result.model)
    if args.json:
        print(json.dumps({"feasible": True, "model": doc},
                         sort_keys=True, separators=(",", ":")))
    else:
        print(json.dumps(doc, sort_keys=True))
    return 0


def cmd_agree(args) -> int:
    nbhd = load_model(args.nbhd)
    prob = load_model(args.prob)
    if not isinstance(nbhd, NeighborhoodModel) \
            or not isinstance(prob, ProbabilityModel):
        raise HighProbError("agree expects --nbhd neighborhood and "
                            "--prob probability models")
    verdict = check_agreement(nbhd, prob, _threshold(args.threshold))
    if verdict.holds:
        _emit(args, {"holds": True}, "Holds")
        return 0
    world, x = verdict.witness
    _emit(args, {"holds": False,
                 "witness": {"world": world,
                             "set": _names(nbhd.frame, x)}},
          f"Fails at world {world} on set {{{', '.join(nbhd.frame.names(x))}}}")
    return 1


def cmd_countermodel(args) -> int:
    formula = parse_kb(args.formula)
    if args.prob:
        result = sample_prob_countermodel(
            formula, _threshold(args.threshold), args.trials,
            args.max_worlds, args.seed)
    else:
        result = find_nbhd_countermodel(formula, args.max_worlds,
                                        args.mid_threshold)
    if not result.found:
        _emit(args, {"found": False, "bound": result.bound}, "NONE")
        return 1
    doc = model_to_dict(result.model)
    payload = {"found": True, "world": result.world, "model": doc}
    _emit(args, payload,
          f"false at {result.world} in\n" + json.dumps(doc, sort_keys=True))
    return 0


def cmd_prove(args) -> int:
    try:
        with open(args.proof, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise HighProbError(f"cannot read proof {args.proof}: {exc}") from exc
    derivation = parse_proof(text)
    result = check_derivation(derivation, args.theory,
                              cl_oracle=args.cl_oracle)
    if result.accepted:
        _emit(args, {"accepted": True}, "Accepted")
        return 0
    _emit(args, {"accepted": False, "line": result.line,
                 "reason": result.reason},
          f"RejectedAt line {result.line}: {result.reason}")
    return 1


def _parse_statements(text: str, worlds) -> ComparativeRelation:
    worlds = tuple(worlds)

    def event(token: str) -> EventSet:
        names = [] if token == "-" else token.split(",")
        for nm in names:
            if nm not in worlds:
                raise HighProbError(f"unknown world {nm!r} in statement")
        return EventSet.of((worlds.index(nm) for nm in names), len(worlds))

    statements = []
    for raw in text.splitlines():
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        parts = stripped.split()
        if len(parts) != 3 or parts[1] not in ("<", "<=", "="):
            raise HighProbError(f"malformed statement {raw!r}; expected "
                                "`x,y REL z` with REL one of < <= =")
        statements.append((event(parts[0]), parts[1], event(parts[2])))
    return ComparativeRelation(worlds, tuple(statements))


def cmd_comparative(args) -> int:
    worlds = tuple(args.universe.split())
    if args.statements:
        with open(args.statements, encoding="utf-8") as fh:
            rel = _parse_statements(fh.read(), worlds)
    else:
        rel = ComparativeRelation(worlds, ())
    result = realize_comparative(rel)
    payload: dict = {"feasible": result.feasible}
    lines = []
    if result.feasible:
        assignment = {v: str(q) for v, q in result.assignment}
        payload["measure"] = assignment
        lines.append("Feasible: " + json.dumps(assignment, sort_keys=True))
        if args.definetti:
            weights = [Fraction(dict(result.assignment)[f"p_{w}"])
                       for w in worlds]
            report = check_definetti(
                measure_order(weights, len(worlds)), len(worlds))
            payload["definetti"] = {name: v.holds
                                    for name, v in report.verdicts}
            for name, v in report.verdicts:
                lines.append(f"definetti/{name}: "
                             + ("holds" if v.holds else "FAILS"))
    else:
        lines.append("INFEASIBLE")
    _emit(args, payload, "\n".join(lines))
    return 0 if result.feasible else 1


# ---------------------------------------------------------------------------
# Demos

def _demo_walley_fine(args) -> int:
    model = corpus.walley_fine_model()
    xs, ys = corpus.walley_fine_witness()
    frame = model.frame
    base = check_base_properties(model)
    witness_ok = verify_scott_witness(model, 0, xs, ys)
    thresholds = [Fraction(1, 3), Fraction(1, 2), Fraction(3, 5),
                  Fraction(2, 3), Fraction(3, 4)]
    synth = {str(c): synthesize_measure(model, Threshold(c)).feasible
             for c in thresholds}
    x_counts = [sum(1 for x in xs if i in x) for i in range(frame.size)]
    y_counts = [sum(1 for y in ys if i in y) for i in range(frame.size)]
    payload = {
        "base_properties_hold": base.all_hold,
        "counting_violation": {
            "verified": witness_ok,
            "xs": [_names(frame, x) for x in xs],
            "ys": [_names(frame, y) for y in ys]},
        "synthesis_feasible": synth,
        "x_occurrences": x_counts,
        "y_occurrences": y_counts,
    }
    lines = [
        f"base properties: {'all hold' if base.all_hold else 'FAIL'}",
        "counting violation (m = 7): "
        + ("verified" if witness_ok else "NOT VERIFIED"),
        "  X: " + " ".join("".join(frame.names(x)) for x in xs),
        "  Y: " + " ".join("".join(frame.names(y)) for y in ys),
        "  each world in "
        + f"{x_counts[0]} X-members and {y_counts[0]} Y-members",
    ]
    for c in thresholds:
        lines.append(f"synthesize at c = {c}: "
                     + ("Feasible" if synth[str(c)] else "INFEASIBLE"))
    _emit(args, payload, "\n".join(lines))
    ok = (base.all_hold and witness_ok
          and not any(synth.values()))
    return 0 if ok else 1


def _demo_kps(args) -> int:
    rel = corpus.kps_relation()
    result = realize_comparative(rel)
    leq = corpus.kps_definetti_extension()
    report = check_definetti(leq, len(corpus.KPS_WORLDS))
    payload = {
        "statements": [f"{x} < {y}" for x, _, y in corpus.KPS_STATEMENTS],
        "realizable": result.feasible,
        "extension_conditions": {name: v.holds
                                 for name, v in report.verdicts},
    }
    lines = ["statements:"]
    lines += [f"  {{{','.join(x)}}} < {{{','.join(y)}}}"
              for x, _, y in corpus.KPS_STATEMENTS]
    lines.append("realizable: "
                 + ("Feasible" if result.feasible else "INFEASIBLE"))
    lines.append("a condition-satisfying total extension exists; "
                 "its five classical conditions: "
                 + ("all hold" if report.all_hold else "FAIL"))
    _emit(args, payload, "\n".join(lines))
    return 0 if not result.feasible and report.all_hold else 1


def _demo_horses(args) -> int:
    half = Threshold(Fraction(1, 2))
    m1 = corpus.horses_common_prior()
    m2 = corpus.horses_cut()
    m3 = corpus.horses_uniform()
    checks = [
        ("P_w1({w1,w3}) = 2/3 in the common-prior model",
         eval_l(m1, "w1", parse_l("P(h1 | h3) = 2/3"))),
        ("P_w1({w3}) = 0 after cutting the third world",
         eval_l(m2, "w1", parse_l("P(h3) = 0"))),
        ("uniform model believes some horse wins",
         eval_kb_prob(m3, "w1", parse_kb("B (h1 | h2 | h3)"), half)),
        ("uniform model believes each horse loses",
         eval_kb_prob(m3, "w1",
                      parse_kb("B ~h1 & B ~h2 & B ~h3"), half)),
        ("yet does not believe horses 1 and 2 both lose",
         eval_kb_prob(m3, "w1", parse_kb("~ B (~h1 & ~h2)"), half)),
    ]
    payload = {desc: ok for desc, ok in checks}
    lines = [f"{'ok  ' if ok else 'FAIL'} {desc}" for desc, ok in checks]
    _emit(args, payload, "\n".join(lines))
    return 0 if all(ok for _, ok in checks) else 1


def cmd_demo(args) -> int:
    runners = {"walley-fine": _demo_walley_fine, "kps": _demo_kps,
               "horses": _demo_horses}
    return runners[args.scenario](args)


# ---------------------------------------------------------------------------
# Entry point

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="highprob",
        description="exact model checking and measure synthesis for "
                    "modal logics of high probability")
    parser.add_argument("--json", action="store_true",
                        help="machine-readable output")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true",
                        default=argparse.SUPPRESS,
                        help="machine-readable output")
    sub = parser.add_subparsers(dest="command", required=True,
                                parser_class=lambda **kw: argparse.ArgumentParser(
                                    parents=[common], **kw))

    p = sub.add_parser("eval", help="evaluate a formula at a world")
    p.add_argument("--model", required=True)
    p.add_argument("--world", required=True)
    p.add_argument("--formula", required=True)
    p.add_argument("--threshold")
    p.add_argument("--semantics", choices=("prob", "nbhd"))
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("check-model",
                       help="verify neighborhood-system properties")
    p.add_argument("--model", required=True)
    p.add_argument("--mid-threshold", action="store_true")
    p.add_argument("--conjectured", metavar="C")
    p.add_argument("--m-max", type=int, default=3)
    p.add_argument("--cell-budget", type=int, default=6,
                   help="largest cell the counting-transfer search accepts")
    p.set_defaults(func=cmd_check_model)

    p = sub.add_parser("derive",
                       help="neighborhood system induced by a measure")
    p.add_argument("--model", required=True)
    p.add_argument("--threshold", required=True)
    p.set_defaults(func=cmd_derive)

    p = sub.add_parser("synthesize",
                       help="find an agreeing measure or INFEASIBLE")
    p.add_argument("--model", required=True)
    p.add_argument("--threshold", required=True)
    p.set_defaults(func=cmd_synthesize)

    p = sub.add_parser("agree", help="test model agreement")
    p.add_argument("--nbhd", required=True)
    p.add_argument("--prob", required=True)
    p.add_argument("--threshold", required=True)
    p.set_defaults(func=cmd_agree)

    p = sub.add_parser("countermodel", help="search for a falsifying model")
    p.add_argument("--formula", required=True)
    p.add_argument("--max-worlds", type=int, default=3)
    p.add_argument("--mid-threshold", action="store_true")
    p.add_argument("--prob", action="store_true",
                   help="random search over probability models")
    p.add_argument("--threshold", default="1/2")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_countermodel)

    p = sub.add_parser("prove", help="check a derivation file")
    p.add_argument("--theory", required=True,
                   choices=("kb", "kb-half", "kb-half-minus"))
    p.add_argument("--proof", required=True)
    p.add_argument("--cl-oracle", action="store_true",
                   help="allow truth-table justification of classical lines")
    p.set_defaults(func=cmd_prove)

    p = sub.add_parser("comparative",
                       help="realize a comparative-probability relation")
    p.add_argument("--universe", required=True,
                   help="space-separated world names")
    p.add_argument("--statements",
                   help="file of lines `x,y REL z` with REL in {<, <=, =}")
    p.add_argument("--definetti", action="store_true",
                   help="also check the five classical conditions on the "
                        "witness measure's induced order")
    p.set_defaults(func=cmd_comparative)

    p = sub.add_parser("demo", help="run a built-in scenario")
    p.add_argument("scenario", choices=("walley-fine", "kps", "horses"))
    p.set_defaults(func=cmd_demo)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except HighProbError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
