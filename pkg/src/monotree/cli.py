"""``monotree`` command line: train, cv, ablate, solve, schema-dump."""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import corpus, experiment, expr, features, infer, learn, schema
from .errors import MonotreeError

REL_FILE, LCA_FILE, META_FILE = "relevance.model", "lca.model", "meta.json"
ABLATION_GROUPS = (["none"] + [f"rel:{g}" for g in features.REL_GROUPS] + [f"lca:{g}" for g in features.LCA_GROUPS]
                   + [f"constraints:{g}" for g in ("positive", "integral", "all")])


class CliError(Exception):
    pass


def _w_rel(text):
    if text == "tune":
        return text
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError("expected a real number or 'tune'") from None


def _shared(sp):
    sp.add_argument("--corpus", help="corpus file (JSON lines); defaults to the bundled mini-corpus")
    sp.add_argument("--beam", type=int, default=200, help="beam width (default 200)")
    sp.add_argument("--constraints", default="positive,integral",
                    help="comma-separated subset of positive,integral, or none")
    sp.add_argument("--no-constraints", dest="constraints", action="store_const", const="none",
                    help="same as --constraints none")
    sp.add_argument("--w-rel", type=_w_rel, default="tune", help="relevance weight, or 'tune' (default)")
    sp.add_argument("--seed", type=int, default=13, help="trainer seed")
    sp.add_argument("--epochs", type=int, default=50)
    sp.add_argument("--drop", action="append", default=None, metavar="GROUP",
                    help="feature/constraint group to switch off, e.g. lca:individual")
    sp.add_argument("--out", help="output directory")
    sp.add_argument("--report", help="write the evaluation report (JSON) to this path")
    sp.add_argument("--jobs", type=int, default=1, help="folds evaluated in parallel")
    sp.add_argument("-v", "--verbose", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="monotree", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)
    for name, help_ in (("train", "train both classifiers and save them"),
                        ("cv", "cross-validate over the corpus fold ids"),
                        ("ablate", "cross-validate with feature or constraint groups removed"),
                        ("solve", "solve one problem"),
                        ("schema-dump", "print quantity schemas (and features)")):
        sp = sub.add_parser(name, help=help_)
        _shared(sp)
        if name == "solve":
            sp.add_argument("--problem", help="file holding the problem record(s); default is --corpus")
            sp.add_argument("--id", help="problem id (default: first record)")
            g = sp.add_mutually_exclusive_group()
            g.add_argument("--models", help="directory written by 'monotree train'")
            g.add_argument("--oracle", action="store_true", help="score with the gold annotation")
            sp.add_argument("--explain", action="store_true", help="print the score table")
        if name == "schema-dump":
            sp.add_argument("--id", help="only this problem")
            sp.add_argument("--features", action="store_true", help="also dump feature vectors")
    return ap


# ---------------------------------------------------------------------------


def _load(path):
    return corpus.load_corpus(path) if path else corpus.load_bundled()


def _trainer(args):
    return learn.TrainerConfig(epochs=args.epochs, seed=args.seed)


def _inference(args, w_rel=1.0):
    return infer.InferenceConfig(beam_width=args.beam, w_rel=w_rel,
                                 constraints=infer.parse_constraints(args.constraints))


def _cv_config(args, ablation=experiment.Ablation()):
    tune = args.w_rel == "tune"
    return experiment.CvConfig(_trainer(args), _inference(args, 1.0 if tune else args.w_rel), tune, ablation)


def _single_ablation(args):
    drops = args.drop or []
    if len(drops) > 1:
        raise CliError("cv takes at most one --drop group; use 'ablate' for several")
    return experiment.parse_group(drops[0] if drops else None)


def _write_report(path, payload):
    if path:
        Path(path).write_text(payload + "\n", encoding="utf-8")


def cmd_train(args):
    if not args.out:
        raise CliError("train needs --out DIR")
    problems = _load(args.corpus)
    ab = _single_ablation(args)
    models = experiment.train_models(problems, _trainer(args), ab.rel_drop, ab.lca_drop)
    inf = _inference(args)
    w = infer.tune_w_rel(problems, models, inf) if args.w_rel == "tune" else args.w_rel
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    learn.save_model(models.rel_model, out / REL_FILE)
    learn.save_model(models.pair_model, out / LCA_FILE)
    meta = {"w_rel": w, "rel_drop": list(ab.rel_drop), "lca_drop": list(ab.lca_drop), "problems": len(problems)}
    (out / META_FILE).write_text(json.dumps(meta, indent=2) + "\n", encoding="utf-8")
    print(f"trained on {len(problems)} problems; w_rel={w:g}; models in {out}")
    return 0


def cmd_cv(args):
    problems = _load(args.corpus)
    report = experiment.cross_validate(problems, _cv_config(args, _single_ablation(args)), args.jobs)
    print(report.summary())
    _write_report(args.report, report.dumps())
    return 0


def cmd_ablate(args):
    problems = _load(args.corpus)
    groups = args.drop or ABLATION_GROUPS
    reports = []
    for g in groups:
        r = experiment.cross_validate(problems, _cv_config(args, experiment.parse_group(g)), args.jobs)
        print(r.summary())
        reports.append(r.to_dict())
    _write_report(args.report, json.dumps(reports, indent=2, sort_keys=True))
    return 0


def _pick(problems, pid):
    if not problems:
        raise CliError("no problems in input")
    if pid is None:
        return problems[0]
    for p in problems:
        if p.id == pid:
            return p
    raise CliError(f"no problem with id {pid!r}")


def load_models(path):
    d = Path(path)
    try:
        meta = json.loads((d / META_FILE).read_text(encoding="utf-8"))
        rel = learn.load_model(d / REL_FILE)
        pair = learn.load_model(d / LCA_FILE)
    except FileNotFoundError as e:
        raise CliError(f"model directory incomplete: {e.filename}") from None
    return infer.Models(rel, pair, tuple(meta.get("rel_drop", ())), tuple(meta.get("lca_drop", ()))), meta


def _explain(p, scorer, tree):
    used = set(expr.leaves(tree))
    lines = ["quantity\tvalue\tRel\tin_tree"]
    for q in p.quantities:
        lines.append(f"q{q.index}\t{corpus.format_number(q.value)}\t{scorer.rel(q.index):.4f}\t"
                     f"{'yes' if q.index in used else 'no'}")
    lines.append("pair\tlabel\tPair")
    for (i, j), lab in expr.lca_map(tree).items():
        lines.append(f"q{i},q{j}\t{lab.value}\t{scorer.pair(i, j, lab):.4f}")
    return "\n".join(lines)


def cmd_solve(args):
    src = args.problem or args.corpus
    if src:
        problems, errors = corpus.read_corpus(src)
        if errors and not problems:
            raise CliError(str(errors[0]))
    else:
        problems = corpus.load_bundled()
    p = _pick(problems, args.id)
    if len(p.quantities) < 2:
        raise CliError(f"{p.id}: too few quantities ({len(p.quantities)})")
    if args.oracle:
        if p.gold_tree is None:
            raise CliError(f"{p.id} has no gold tree for --oracle")
        models, w = infer.OracleModels(), 1.0 if args.w_rel == "tune" else args.w_rel
    elif args.models:
        models, meta = load_models(args.models)
        w = meta.get("w_rel", 1.0) if args.w_rel == "tune" else args.w_rel
    else:
        raise CliError("solve needs --models DIR or --oracle")
    sol = infer.solve_detailed(p, models, _inference(args, w))
    print(f"problem: {p.id}")
    print(f"prefix: {expr.format_tree(sol.tree)}")
    print(f"infix: {expr.to_infix(sol.tree, p.values)}")
    print(f"answer: {corpus.format_number(sol.value)}")
    if not sol.satisfied:
        print("note: no beam entry satisfies the constraints; returning the top entry")
    if args.explain:
        print(f"score: {sol.score:.4f} (w_rel={w:g}, beam rank {sol.rank})")
        print(_explain(p, models.scorer(p), sol.tree))
    return 0


def cmd_schema_dump(args):
    problems = _load(args.corpus)
    if args.id:
        problems = [_pick(problems, args.id)]
    for p in problems:
        print(f"# {p.id}: {p.text}")
        for line in schema.describe(p):
            print(line)
        if args.features:
            schemas, question = schema.extract_all(p), schema.question_or_none(p)
            for q in p.quantities:
                print(f"## rel q{q.index}")
                print(features.dump(features.relevance_features(p, schemas, question, q)))
            for i, a in enumerate(p.quantities):
                for b in p.quantities[i + 1:]:
                    print(f"## lca q{a.index},q{b.index}")
                    print(features.dump(features.lca_features(p, schemas, question, a, b)))
    return 0


COMMANDS = {"train": cmd_train, "cv": cmd_cv, "ablate": cmd_ablate, "solve": cmd_solve,
            "schema-dump": cmd_schema_dump}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except (CliError, MonotreeError, ValueError, OSError) as e:
        print(f"monotree {args.command}: error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
