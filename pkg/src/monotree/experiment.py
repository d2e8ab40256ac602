"""Training, cross-validation and feature-group ablation."""
from __future__ import annotations

import json
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Optional, Sequence

from . import expr, features, learn, schema
from .corpus import Problem, derive_labels
from .errors import EmptyClass, MissingFolds, UnknownGroup
from .infer import (ALL_CONSTRAINTS, Constraint, InferenceConfig, Models, solve, tune_w_rel)
from .learn import IRRELEVANT, RELEVANT, TrainerConfig

log = logging.getLogger(__name__)

LCA_CLASSES = tuple(l.name for l in expr.LABELS)
# margin given to an LCA class that never occurs in the training data
ABSENT_CLASS_BIAS = -1.0


# ---------------------------------------------------------------------------
# training examples


def _annotated(problems):
    return [p for p in problems if p.gold_tree is not None]


def relevance_examples(problems: Sequence[Problem], drop=(), trace: Optional[list] = None) -> list:
    out = []
    for p in _annotated(problems):
        if trace is not None:
            trace.append(p.id)
        gold = derive_labels(p)
        schemas, question = schema.extract_all(p), schema.question_or_none(p)
        for q in p.quantities:
            fv = features.relevance_features(p, schemas, question, q, drop)
            out.append((fv, RELEVANT if gold.relevance[q.index] else IRRELEVANT))
    return out


def lca_examples(problems: Sequence[Problem], drop=(), trace: Optional[list] = None) -> list:
    out = []
    for p in _annotated(problems):
        if trace is not None:
            trace.append(p.id)
        gold = derive_labels(p)
        schemas, question = schema.extract_all(p), schema.question_or_none(p)
        for (i, j), lab in sorted(gold.lca.items()):
            fv = features.lca_features(p, schemas, question, p.quantity(i), p.quantity(j), drop)
            out.append((fv, lab.name))
    return out


def train_models(problems: Sequence[Problem], config: TrainerConfig = TrainerConfig(),
                 rel_drop=(), lca_drop=(), trace: Optional[list] = None) -> Models:
    rel_ex = relevance_examples(problems, rel_drop, trace)
    try:
        rel = learn.train(rel_ex, config, learn.REL_CLASSES)
    except EmptyClass:
        # every training quantity has the same label: no evidence either way
        log.info("relevance training data has a single class; using a zero model")
        rel = learn.zero_model(learn.REL_CLASSES, config)
    lca_ex = lca_examples(problems, lca_drop, trace)
    present = sorted({y for _, y in lca_ex}, key=LCA_CLASSES.index)
    pair = learn.train(lca_ex, config, present)
    for c in LCA_CLASSES:
        if c not in pair.weights:
            pair.weights[c], pair.bias[c] = {}, ABSENT_CLASS_BIAS
    pair.classes = LCA_CLASSES
    return Models(rel, pair, tuple(rel_drop), tuple(lca_drop))


# ---------------------------------------------------------------------------
# ablation groups


@dataclass(frozen=True)
class Ablation:
    rel_drop: tuple = ()
    lca_drop: tuple = ()
    constraint_drop: frozenset = frozenset()
    name: str = "none"


def parse_group(text: Optional[str]) -> Ablation:
    """``none``, ``rel:<unit|np|misc>``, ``lca:<individual|pair|question>`` or
    ``constraints:<positive|integral|none|all>`` (the constraints named are the
    ones switched off)."""
    if text is None or text.strip().lower() in ("", "none"):
        return Ablation()
    text = text.strip().lower()
    kind, _, group = text.partition(":")
    if kind == "rel" and group in features.REL_GROUPS:
        return Ablation(rel_drop=(group,), name=text)
    if kind == "lca" and group in features.LCA_GROUPS:
        return Ablation(lca_drop=(group,), name=text)
    if kind == "constraints":
        table = {"positive": frozenset({Constraint.POSITIVE}), "integral": frozenset({Constraint.INTEGRAL}),
                 "none": frozenset(), "all": ALL_CONSTRAINTS}
        if group in table:
            return Ablation(constraint_drop=table[group], name=text)
    raise UnknownGroup(f"unknown group {text!r}; expected none, rel:{{{','.join(features.REL_GROUPS)}}}, "
                       f"lca:{{{','.join(features.LCA_GROUPS)}}} or constraints:{{positive,integral,none,all}}")


# ---------------------------------------------------------------------------
# evaluation


@dataclass
class FoldReport:
    fold: int
    n_test: int
    w_rel: float
    rel_correct: int
    rel_total: int
    rel_problems_correct: int
    lca_correct: int
    lca_total: int
    lca_problems_correct: int
    n_annotated: int
    solved: int
    train_ids: list = field(default_factory=list)
    tune_ids: list = field(default_factory=list)
    test_ids: list = field(default_factory=list)

    @property
    def relevance_relax(self):
        return _ratio(self.rel_correct, self.rel_total)

    @property
    def relevance_strict(self):
        return _ratio(self.rel_problems_correct, self.n_annotated)

    @property
    def lca_relax(self):
        return _ratio(self.lca_correct, self.lca_total)

    @property
    def lca_strict(self):
        return _ratio(self.lca_problems_correct, self.n_annotated)

    @property
    def solve_accuracy(self):
        return _ratio(self.solved, self.n_test)


def _ratio(a, b):
    return a / b if b else 0.0


@dataclass
class EvalReport:
    relevance_relax: float
    relevance_strict: float
    lca_relax: float
    lca_strict: float
    solve_accuracy: float
    folds: list
    config: dict
    dropped: str = "none"

    def to_dict(self) -> dict:
        d = {k: getattr(self, k) for k in ("relevance_relax", "relevance_strict", "lca_relax", "lca_strict",
                                            "solve_accuracy", "dropped", "config")}
        d["folds"] = []
        for f in self.folds:
            fd = asdict(f)
            for k in ("relevance_relax", "relevance_strict", "lca_relax", "lca_strict", "solve_accuracy"):
                fd[k] = getattr(f, k)
            d["folds"].append(fd)
        return d

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def summary(self) -> str:
        head = f"[{self.dropped}]"
        lines = [f"{head} relevance relax={self.relevance_relax:.3f} strict={self.relevance_strict:.3f}",
                 f"{head} lca       relax={self.lca_relax:.3f} strict={self.lca_strict:.3f}",
                 f"{head} solve accuracy={self.solve_accuracy:.3f}"]
        for f in self.folds:
            lines.append(f"{head}   fold {f.fold}: n={f.n_test} w_rel={f.w_rel:g} rel={f.relevance_relax:.3f} "
                         f"lca={f.lca_relax:.3f} solve={f.solve_accuracy:.3f}")
        return "\n".join(lines)


def classifier_counts(problems, models: Models) -> tuple:
    rc = rt = rp = lc = lt = lp = n = 0
    for p in _annotated(problems):
        n += 1
        gold = derive_labels(p)
        sc = models.scorer(p)
        ok = 0
        for q in p.quantities:
            pred_rel = sc.rel(q.index) <= 0
            ok += pred_rel == gold.relevance[q.index]
        rc, rt, rp = rc + ok, rt + len(p.quantities), rp + (ok == len(p.quantities))
        ok = 0
        for (i, j), lab in gold.lca.items():
            m = sc.pair_margins(i, j)
            ok += max(LCA_CLASSES, key=lambda c: (m[c], -LCA_CLASSES.index(c))) == lab.name
        lc, lt, lp = lc + ok, lt + len(gold.lca), lp + (ok == len(gold.lca))
    return rc, rt, rp, lc, lt, lp, n


@dataclass(frozen=True)
class CvConfig:
    trainer: TrainerConfig = TrainerConfig()
    inference: InferenceConfig = InferenceConfig()
    tune: bool = True
    ablation: Ablation = Ablation()

    def echo(self) -> dict:
        inf = self.inference
        return {
            "trainer": asdict(self.trainer),
            "beam_width": inf.beam_width,
            "w_rel": "tune" if self.tune else inf.w_rel,
            "w_rel_grid": list(inf.w_rel_grid),
            "constraints": sorted(c.value for c in self.effective_constraints()),
            "rel_drop": list(self.ablation.rel_drop),
            "lca_drop": list(self.ablation.lca_drop),
        }

    def effective_constraints(self):
        return frozenset(self.inference.constraints) - self.ablation.constraint_drop


def run_fold(problems: Sequence[Problem], fold: int, cfg: CvConfig) -> FoldReport:
    train = [p for p in problems if p.fold != fold]
    test = [p for p in problems if p.fold == fold]
    train_trace, tune_trace = [], []
    models = train_models(train, cfg.trainer, cfg.ablation.rel_drop, cfg.ablation.lca_drop, train_trace)
    inf = cfg.inference
    inf = InferenceConfig(inf.beam_width, inf.w_rel, cfg.effective_constraints(), inf.w_rel_grid)
    w = tune_w_rel(train, models, inf, tune_trace) if cfg.tune else inf.w_rel
    inf = inf.with_w_rel(w)
    solved = 0
    for p in test:
        _, v = solve(p, models, inf)
        solved += v == p.answer
    rc, rt, rp, lc, lt, lp, n = classifier_counts(test, models)
    return FoldReport(fold, len(test), w, rc, rt, rp, lc, lt, lp, n, solved,
                      sorted(set(train_trace)), sorted(set(tune_trace)), sorted(p.id for p in test))


def _run_fold_args(args):
    return run_fold(*args)


def cross_validate(problems: Sequence[Problem], cfg: CvConfig = CvConfig(), jobs: int = 1) -> EvalReport:
    folds = sorted({p.fold for p in problems})
    if len(folds) < 2:
        raise MissingFolds(f"need at least 2 distinct fold ids, found {folds}")
    args = [(list(problems), f, cfg) for f in folds]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            reports = list(pool.map(_run_fold_args, args))
    else:
        reports = [run_fold(*a) for a in args]
    reports.sort(key=lambda r: r.fold)

    def tot(attr):
        return sum(getattr(r, attr) for r in reports)

    return EvalReport(
        relevance_relax=_ratio(tot("rel_correct"), tot("rel_total")),
        relevance_strict=_ratio(tot("rel_problems_correct"), tot("n_annotated")),
        lca_relax=_ratio(tot("lca_correct"), tot("lca_total")),
        lca_strict=_ratio(tot("lca_problems_correct"), tot("n_annotated")),
        solve_accuracy=_ratio(tot("solved"), tot("n_test")),
        folds=reports,
        config=cfg.echo(),
        dropped=cfg.ablation.name,
    )


def ablate(problems, group: str, cfg: CvConfig = CvConfig(), jobs: int = 1) -> EvalReport:
    ab = parse_group(group)
    return cross_validate(problems, CvConfig(cfg.trainer, cfg.inference, cfg.tune, ab), jobs)
