"""Joint scoring and beam search over expression trees for one problem.

A *scorer* answers two questions for a fixed problem: ``rel(q)`` (how likely
quantity ``q`` is irrelevant) and ``pair(qi, qj, label)`` (how likely the LCA
of ``qi < qj`` carries ``label``).  Anything that builds scorers from a problem
(``Models``, ``OracleModels``, ``TableModels``) can drive :func:`solve`.
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from . import expr, features, learn, schema
from .corpus import GoldLabels, Problem, derive_labels
from .errors import DivByZero, NoEvaluableCandidate, TooFewQuantities
from .expr import LcaLabel, Leaf, Node, Op, Tree

W_REL_GRID = (1e-6, 1e-4, 1e-2, 1.0, 1e2, 1e4, 1e6)


class Constraint(enum.Enum):
    POSITIVE = "positive"
    INTEGRAL = "integral"


ALL_CONSTRAINTS = frozenset(Constraint)


def parse_constraints(text: str) -> frozenset:
    """``"positive,integral"`` / ``"none"`` / ``"all"`` -> constraint set."""
    text = text.strip().lower()
    if text in ("", "none"):
        return frozenset()
    if text == "all":
        return ALL_CONSTRAINTS
    try:
        return frozenset(Constraint(t.strip()) for t in text.split(","))
    except ValueError:
        raise ValueError(f"unknown constraint in {text!r}; use positive, integral, none or all") from None


@dataclass(frozen=True)
class InferenceConfig:
    beam_width: int = 200
    w_rel: float = 1.0
    constraints: frozenset = ALL_CONSTRAINTS
    w_rel_grid: tuple = W_REL_GRID

    def __post_init__(self):
        if self.beam_width < 1:
            raise ValueError("beam_width must be >= 1")

    def with_w_rel(self, w):
        return InferenceConfig(self.beam_width, w, self.constraints, self.w_rel_grid)


# ---------------------------------------------------------------------------
# scorers


class ZeroScorer:
    def rel(self, q: int) -> float:
        return 0.0

    def pair(self, qi: int, qj: int, label: LcaLabel) -> float:
        return 0.0


class OracleScorer:
    """1 on gold labels, 0 elsewhere."""

    def __init__(self, gold: GoldLabels):
        self.gold = gold

    def rel(self, q):
        return 0.0 if self.gold.relevance.get(q, False) else 1.0

    def pair(self, qi, qj, label):
        return 1.0 if self.gold.lca.get((qi, qj)) is label else 0.0


class TableScorer:
    """Explicit score tables, missing entries score 0."""

    def __init__(self, rel: Optional[dict] = None, pair: Optional[dict] = None):
        self.rel_table = dict(rel or {})
        self.pair_table = dict(pair or {})

    def rel(self, q):
        return self.rel_table.get(q, 0.0)

    def pair(self, qi, qj, label):
        return self.pair_table.get((qi, qj, label), 0.0)


class ModelScorer:
    def __init__(self, p: Problem, rel_model, pair_model, rel_drop=(), lca_drop=()):
        self.p = p
        self.rel_model, self.pair_model = rel_model, pair_model
        self.rel_drop, self.lca_drop = tuple(rel_drop), tuple(lca_drop)
        self.schemas = schema.extract_all(p)
        self.question = schema.question_or_none(p)
        self._rel, self._pair = {}, {}

    def rel_features(self, q):
        return features.relevance_features(self.p, self.schemas, self.question, self.p.quantity(q), self.rel_drop)

    def pair_features(self, qi, qj):
        return features.lca_features(self.p, self.schemas, self.question, self.p.quantity(qi),
                                     self.p.quantity(qj), self.lca_drop)

    def rel(self, q):
        if q not in self._rel:
            self._rel[q] = learn.score_rel(self.rel_model, self.rel_features(q))
        return self._rel[q]

    def pair_margins(self, qi, qj) -> dict:
        if (qi, qj) not in self._pair:
            self._pair[(qi, qj)] = self.pair_model.margins(self.pair_features(qi, qj))
        return self._pair[(qi, qj)]

    def pair(self, qi, qj, label):
        return self.pair_margins(qi, qj)[label.name]


@dataclass
class Models:
    """Trained relevance and LCA models plus the feature groups they were
    trained without."""
    rel_model: learn.LinearModel
    pair_model: learn.LinearModel
    rel_drop: tuple = ()
    lca_drop: tuple = ()
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def scorer(self, p: Problem) -> ModelScorer:
        s = self._cache.get(p)
        if s is None:
            s = self._cache[p] = ModelScorer(p, self.rel_model, self.pair_model, self.rel_drop, self.lca_drop)
        return s


class OracleModels:
    def scorer(self, p: Problem) -> OracleScorer:
        return OracleScorer(derive_labels(p))


class TableModels:
    """Same score tables for every problem (keyed by problem id when ``by_id``)."""

    def __init__(self, tables: dict, by_id: bool = True):
        self.tables, self.by_id = tables, by_id

    def scorer(self, p):
        if self.by_id:
            return self.tables.get(p.id, ZeroScorer())
        return self.tables


def _scorer(p, models):
    if hasattr(models, "scorer"):
        return models.scorer(p)
    return models  # already a scorer


# ---------------------------------------------------------------------------
# scoring and constraints


def pair_score(tree: Tree, scorer) -> float:
    return sum(scorer.pair(a, b, lab) for (a, b), lab in expr._lca_items(tree))


def score_expression(tree: Tree, p: Problem, models, w_rel: float) -> float:
    scorer = _scorer(p, models)
    used = set(expr.leaves(tree))
    rel = sum(scorer.rel(q.index) for q in p.quantities if q.index not in used)
    return w_rel * rel + pair_score(tree, scorer)


def satisfies_constraints(tree: Tree, p: Problem, active: Iterable[Constraint]) -> bool:
    try:
        value = expr.evaluate(tree, p.values)
    except DivByZero:
        return False
    return value_satisfies(value, p, active)


def value_satisfies(value: Fraction, p: Problem, active) -> bool:
    active = frozenset(active)
    if Constraint.POSITIVE in active and value < 0:
        return False
    if Constraint.INTEGRAL in active and value.denominator != 1:
        q = schema.question_or_none(p)
        if q is not None and q.wh_kind is schema.WhKind.HOW_MANY:
            return False
    return True


# ---------------------------------------------------------------------------
# beam search


@dataclass(frozen=True)
class BeamState:
    irrelevant: frozenset
    terms: tuple
    score: float
    rel_score: float = 0.0

    @property
    def key(self):
        return (tuple(sorted(self.irrelevant)), self.terms)

    def serial(self) -> str:
        return " ".join(expr.format_tree(t) for t in self.terms) + " | " + \
            ",".join(str(i) for i in sorted(self.irrelevant))


def _compositions(a: Tree, b: Tree):
    yield Node(Op.ADD, a, b)
    yield Node(Op.MUL, a, b)
    for op in (Op.SUB, Op.DIV):
        yield Node(op, a, b)
        yield Node(op, b, a)


class _Search:
    def __init__(self, p, scorer, w_rel):
        self.p, self.scorer, self.w_rel = p, scorer, w_rel
        self.values = p.values
        self._value, self._pair = {}, {}

    def value(self, t):
        if t not in self._value:
            try:
                self._value[t] = expr.evaluate(t, self.values)
            except DivByZero:
                self._value[t] = None
        return self._value[t]

    def term_score(self, t):
        if t not in self._pair:
            self._pair[t] = pair_score(t, self.scorer)
        return self._pair[t]

    def initial(self):
        idx = [q.index for q in self.p.quantities]
        out = []
        for r in range(0, len(idx) - 1):
            for irr in itertools.combinations(idx, r):
                rel = self.w_rel * sum(self.scorer.rel(q) for q in irr)
                terms = tuple(Leaf(q) for q in idx if q not in irr)
                out.append(BeamState(frozenset(irr), terms, rel, rel))
        return out

    def expand(self, st: BeamState):
        n = len(st.terms)
        for i, j in itertools.combinations(range(n), 2):
            rest = [t for k, t in enumerate(st.terms) if k not in (i, j)]
            for cand in _compositions(st.terms[i], st.terms[j]):
                if self.value(cand) is None:
                    continue
                new = expr.monotonize(cand)
                terms = tuple(sorted(rest + [new], key=expr.min_leaf))
                # the score is recomputed from the terms: joining can flip labels
                # of pairs decided earlier (a / (b / c) -> (a * c) / b)
                score = st.rel_score + sum(self.term_score(t) for t in terms)
                yield BeamState(st.irrelevant, terms, score, st.rel_score)


def _prune(states, width):
    best = {}
    for s in states:
        k = s.key
        if k not in best or s.score > best[k].score:
            best[k] = s
    ranked = sorted(best.values(), key=lambda s: (-s.score, s.serial()))
    return ranked[:width]


def beam_search(p: Problem, models, config: InferenceConfig = InferenceConfig()) -> list:
    """Ranked ``(tree, score)`` list from the final beam."""
    if len(p.quantities) < 2:
        raise TooFewQuantities(f"{p.id}: too few quantities ({len(p.quantities)}), need at least 2")
    search = _Search(p, _scorer(p, models), config.w_rel)
    beam = _prune(search.initial(), config.beam_width)
    while any(len(s.terms) > 1 for s in beam):
        pool = []
        for s in beam:
            if len(s.terms) == 1:
                pool.append(s)
            else:
                pool.extend(search.expand(s))
        beam = _prune(pool, config.beam_width)
    out = [(s.terms[0], s.score) for s in beam]
    out.sort(key=lambda ts: (-ts[1], expr.format_tree(ts[0])))
    return out


@dataclass(frozen=True)
class Solution:
    tree: Tree
    value: Fraction
    score: float
    satisfied: bool
    rank: int
    beam: tuple


def solve_detailed(p: Problem, models, config: InferenceConfig = InferenceConfig()) -> Solution:
    beam = beam_search(p, models, config)
    values = p.values
    evaluable = []
    for rank, (t, s) in enumerate(beam):
        try:
            v = expr.evaluate(t, values)
        except DivByZero:
            continue
        if value_satisfies(v, p, config.constraints):
            return Solution(t, v, s, True, rank, tuple(beam))
        evaluable.append((rank, t, v, s))
    if not evaluable:
        raise NoEvaluableCandidate(f"{p.id}: every beam entry divides by zero")
    rank, t, v, s = evaluable[0]
    return Solution(t, v, s, False, rank, tuple(beam))


def solve(p: Problem, models, config: InferenceConfig = InferenceConfig()) -> tuple:
    sol = solve_detailed(p, models, config)
    return sol.tree, sol.value


def accuracy(problems: Sequence[Problem], models, config: InferenceConfig, trace: Optional[list] = None) -> float:
    if not problems:
        return 0.0
    hits = 0
    for p in problems:
        if trace is not None:
            trace.append(p.id)
        _, v = solve(p, models, config)
        hits += v == p.answer
    return hits / len(problems)


def tune_w_rel(train: Sequence[Problem], models, config: InferenceConfig = InferenceConfig(),
               trace: Optional[list] = None) -> float:
    """Grid value with the best training solve accuracy; ties go to the smaller value."""
    grid = sorted(config.w_rel_grid)
    if not grid:
        raise ValueError("w_rel grid is empty")
    if len(grid) == 1:
        return grid[0]
    best, best_acc = None, -1.0
    for w in grid:
        acc = accuracy(train, models, config.with_w_rel(w), trace)
        if acc > best_acc:
            best, best_acc = w, acc
    return best
