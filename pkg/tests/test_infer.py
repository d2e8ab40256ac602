import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from monotree import corpus, expr, infer, synth
from monotree.corpus import derive_labels
from monotree.errors import TooFewQuantities
from monotree.expr import LcaLabel
from monotree.infer import Constraint, InferenceConfig, OracleModels, TableScorer, ZeroScorer

P = expr.parse_tree
BUNDLED = corpus.load_bundled()
HUGE = InferenceConfig(beam_width=10 ** 9)
NO_CONSTRAINTS = InferenceConfig(constraints=frozenset())

HOW_MANY_Q = "How/WRB/B-ADVP/1/advmod many/JJ/I-ADVP/-1/root ?/./O/1/punct"
HOW_MUCH_Q = "How/WRB/B-ADVP/1/advmod much/JJ/I-ADVP/-1/root ?/./O/1/punct"


def problem(values, question=HOW_MANY_Q, gold=None, pid="t"):
    body = " ".join(f"{v}/CD/B-NP/0/dep" if i else f"{v}/CD/B-NP/-1/root" for i, v in enumerate(values))
    return synth.build_problem(pid, [body + " ././O/0/punct", question], gold,
                               answer=None if gold else "0")


def exhaustive(p, scorer, w_rel):
    """Every distinct monotone tree over every subset of >= 2 quantities, scored."""
    idx = [q.index for q in p.quantities]
    seen = {}
    for r in range(2, len(idx) + 1):
        for sub in itertools.combinations(idx, r):
            for t in expr.enumerate_trees(sub):
                try:
                    expr.evaluate(t, p.values)
                except expr.DivByZero:
                    continue
                m = expr.monotonize(t)
                seen[m] = infer.score_expression(m, p, scorer, w_rel)
    return sorted(seen.items(), key=lambda ts: (-ts[1], expr.format_tree(ts[0])))


def int_table(p, rng):
    idx = [q.index for q in p.quantities]
    rel = {q: float(rng.randint(-3, 3)) for q in idx}
    pair = {(a, b, lab): float(rng.randint(-3, 3)) for a, b in itertools.combinations(idx, 2) for lab in LcaLabel}
    return TableScorer(rel, pair)


# -- score_expression ------------------------------------------------------------------

def test_zero_models_score_zero():
    p = synth.figure3_problem()
    for t in itertools.islice(expr.enumerate_trees([0, 2, 3]), 50):
        assert infer.score_expression(expr.monotonize(t), p, ZeroScorer(), 1.0) == 0


def test_oracle_gold_is_brute_force_max():
    p = synth.figure3_problem()
    ranking = exhaustive(p, OracleModels(), 1.0)
    best = ranking[0][1]
    gold_score = infer.score_expression(p.gold_tree, p, OracleModels(), 1.0)
    assert gold_score == best
    assert all(expr.lca_map(t) == expr.lca_map(p.gold_tree) for t, s in ranking if s == best)


def test_irrelevant_quantity_adds_w_rel_times_rel():
    p = synth.figure3_problem()
    sc = TableScorer({0: 0.5, 1: 2.0, 2: -1.0, 3: 4.0}, {(0, 2, LcaLabel.TIMES): 3.0})
    t_all = P("(* q0 (+ (+ q1 q2) q3))")
    t_drop1 = P("(* q0 (+ q2 q3))")
    for w in (1e-2, 1.0, 7.0):
        a = infer.score_expression(t_all, p, sc, w)
        b = infer.score_expression(t_drop1, p, sc, w)
        assert b - infer.pair_score(t_drop1, sc) == pytest.approx(w * 2.0)
        assert a - infer.pair_score(t_all, sc) == 0


# -- constraints ---------------------------------------------------------------------------

def test_integral_only_for_how_many():
    p = problem([7, 2])
    assert not infer.satisfies_constraints(P("(/ q0 q1)"), p, {Constraint.INTEGRAL})
    q = problem([7, 2], HOW_MUCH_Q)
    assert infer.satisfies_constraints(P("(/ q0 q1)"), q, {Constraint.INTEGRAL})


def test_positive_admits_zero():
    p = problem([3, 6])
    assert not infer.satisfies_constraints(P("(- q0 q1)"), p, {Constraint.POSITIVE})
    z = problem([4, 4])
    assert infer.satisfies_constraints(P("(- q0 q1)"), z, {Constraint.POSITIVE})


def test_figure3_satisfies_both():
    p = synth.figure3_problem()
    assert infer.satisfies_constraints(p.gold_tree, p, infer.ALL_CONSTRAINTS)


def test_div_by_zero_fails():
    p = problem([4, 4, 1])
    assert not infer.satisfies_constraints(P("(/ q2 (- q0 q1))"), p, frozenset())


def test_parse_constraints():
    assert infer.parse_constraints("positive,integral") == infer.ALL_CONSTRAINTS
    assert infer.parse_constraints("none") == frozenset()
    assert infer.parse_constraints("integral") == {Constraint.INTEGRAL}
    with pytest.raises(ValueError):
        infer.parse_constraints("odd")


# -- beam search -------------------------------------------------------------------------------

def test_two_quantity_oracle():
    p = problem([9, 4], gold="(- q0 q1)")
    ranked = infer.beam_search(p, OracleModels())
    assert ranked[0][0] == P("(- q0 q1)")
    assert len(ranked) == 6  # commutative operations counted once


def test_figure3_oracle_top_is_72():
    p = synth.figure3_problem()
    ranked = infer.beam_search(p, OracleModels())
    assert expr.evaluate(ranked[0][0], p.values) == 72
    assert ranked[0] == exhaustive(p, OracleModels(), 1.0)[0]


def test_too_few_quantities():
    p = synth.build_problem("one", ["5/CD/B-NP/-1/root ?/./O/0/punct"], None, answer="5")
    with pytest.raises(TooFewQuantities, match="too few quantities"):
        infer.solve(p, OracleModels())


@pytest.mark.parametrize("pid", ["fig3", "example2", "example3", "addmul-0", "subdiv-1", "mulsub-2"])
def test_unbounded_beam_equals_exhaustive_ranking(pid):
    p = next(q for q in BUNDLED if q.id == pid)
    rng = random.Random(pid)
    sc = int_table(p, rng)
    for w in (1.0, 3.0):
        got = infer.beam_search(p, sc, InferenceConfig(beam_width=10 ** 9, w_rel=w))
        assert got == exhaustive(p, sc, w)


def test_beam_states_partition_quantities():
    p = synth.figure3_problem()
    search = infer._Search(p, int_table(p, random.Random(1)), 1.0)
    frontier = search.initial()
    assert all(len(s.terms) >= 2 for s in frontier)
    all_idx = sorted(q.index for q in p.quantities)
    while frontier:
        nxt = []
        for s in frontier:
            used = [i for t in s.terms for i in expr.leaves(t)]
            assert sorted(used + list(s.irrelevant)) == all_idx
            assert all(expr.is_monotonic(t) for t in s.terms)
            nxt.extend(x for x in search.expand(s) if len(x.terms) > 1)
        frontier = nxt[:300]


def test_deterministic():
    p = synth.figure3_problem()
    sc = int_table(p, random.Random(2))
    cfg = InferenceConfig(beam_width=5)
    assert infer.beam_search(p, sc, cfg) == infer.beam_search(p, sc, cfg)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(BUNDLED), st.integers(0, 10 ** 6), st.integers(1, 30))
def test_beam_monotonicity_property(p, seed, k):
    sc = int_table(p, random.Random(seed))
    small = infer.beam_search(p, sc, InferenceConfig(beam_width=k))
    big = infer.beam_search(p, sc, InferenceConfig(beam_width=200))
    assert big[0][1] >= small[0][1]


# -- solve ---------------------------------------------------------------------------------------

def test_solve_skips_non_integral_top():
    p = problem([7, 2])
    sc = TableScorer(pair={(0, 1, LcaLabel.DIV): 5.0, (0, 1, LcaLabel.MINUS): 3.0})
    tree, value = infer.solve(p, sc)
    assert tree == P("(- q0 q1)") and value == 5
    tree, value = infer.solve(p, sc, NO_CONSTRAINTS)
    assert value == Fraction(7, 2)


def test_solve_falls_back_to_top_when_nothing_satisfies():
    p = problem([1, 3])
    cfg = InferenceConfig(beam_width=1)
    sc = TableScorer(pair={(0, 1, LcaLabel.MINUS): 9.0})
    sol = infer.solve_detailed(p, sc, cfg)
    assert sol.value == -2 and not sol.satisfied and sol.rank == 0


def test_solve_oracle_mini_corpus():
    for p in BUNDLED:
        tree, value = infer.solve(p, OracleModels(), HUGE)
        assert value == p.answer
        assert expr.lca_map(tree) == derive_labels(p).lca


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(BUNDLED), st.integers(0, 10 ** 6))
def test_constraint_soundness(p, seed):
    sc = int_table(p, random.Random(seed))
    sol = infer.solve_detailed(p, sc, InferenceConfig(beam_width=20))
    if sol.satisfied:
        assert infer.satisfies_constraints(sol.tree, p, infer.ALL_CONSTRAINTS)
    else:
        assert all(not infer.satisfies_constraints(t, p, infer.ALL_CONSTRAINTS) for t, _ in sol.beam)


# -- w_rel tuning ------------------------------------------------------------------------------------

def test_tune_ties_to_smallest():
    assert infer.tune_w_rel(BUNDLED[:5], infer.TableModels({}), InferenceConfig()) == 1e-6


def test_tune_single_value():
    cfg = InferenceConfig(w_rel_grid=(42.0,))
    assert infer.tune_w_rel(BUNDLED[:3], OracleModels(), cfg) == 42.0


def test_tune_prefers_large_weight_with_distractors():
    rng = random.Random(4)
    problems, tables = [], {}
    for k in range(10):
        a, b, d = rng.randint(2, 20), rng.randint(2, 20), rng.randint(2, 20)
        p = problem([a, b, d], gold="(+ q0 q1)", pid=f"d{k}")
        problems.append(p)
        # the distractor q2 also looks addable; only Rel tells it apart
        pair = {(i, j, LcaLabel.PLUS): 1.0 for i, j in ((0, 1), (0, 2), (1, 2))}
        tables[p.id] = TableScorer({2: 1.0}, pair)
    w = infer.tune_w_rel(problems, infer.TableModels(tables), InferenceConfig())
    assert w >= 1e2
    assert infer.accuracy(problems, infer.TableModels(tables), InferenceConfig(w_rel=w)) == 1.0
