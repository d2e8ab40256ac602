import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from monotree import corpus, experiment, learn, synth
from monotree.errors import EmptyClass, UnknownLabel, VersionMismatch
from monotree.expr import LcaLabel
from monotree.learn import IRRELEVANT, RELEVANT, LinearModel, TrainerConfig

POINTS = [({"x": 1.0, "y": 2.0}, "A"), ({"x": 2.0, "y": 3.0}, "A"),
          ({"x": -1.0, "y": -1.5}, "B"), ({"x": -2.0, "y": -0.5}, "B")]


@pytest.fixture(scope="module")
def bundled():
    return corpus.load_bundled()


@pytest.fixture(scope="module")
def rel_data(bundled):
    return experiment.relevance_examples(bundled)


@pytest.fixture(scope="module")
def lca_data(bundled):
    return experiment.lca_examples(bundled)


def acc(model, data):
    return sum(model.predict(f) == y for f, y in data) / len(data)


def test_separable_points():
    m = learn.train(POINTS)
    assert acc(m, POINTS) == 1.0


def test_mini_corpus_relevance_training_accuracy(rel_data):
    m = learn.train(rel_data, classes=learn.REL_CLASSES)
    assert acc(m, rel_data) >= 0.95


def test_determinism(rel_data):
    a = learn.train(rel_data, classes=learn.REL_CLASSES)
    b = learn.train(rel_data, classes=learn.REL_CLASSES)
    assert a.weights == b.weights and a.bias == b.bias
    c = learn.train(rel_data, TrainerConfig(seed=99), classes=learn.REL_CLASSES)
    assert c.weights != a.weights


def test_empty_class():
    with pytest.raises(EmptyClass):
        learn.train(POINTS, classes=("A", "B", "C"))
    with pytest.raises(EmptyClass):
        learn.train([])


def test_every_class_has_a_weight_map():
    m = learn.train(POINTS)
    assert set(m.weights) == set(m.classes) == {"A", "B"}


def test_score_rel_signs():
    zero = learn.zero_model(learn.REL_CLASSES)
    assert learn.score_rel(zero, {"f": 1.0}) == 0
    m = LinearModel(learn.REL_CLASSES, {IRRELEVANT: {"f": 2.0}, RELEVANT: {"f": -1.0}},
                    {IRRELEVANT: 0.0, RELEVANT: 0.0})
    assert learn.score_rel(m, {"f": 1.0}) > 0


def test_example3_eleven_scores_more_irrelevant(bundled):
    models = experiment.train_models(bundled)
    p = synth.example3_problem()
    sc = models.scorer(p)
    assert [q.value for q in p.quantities] == [8, 11, 5]
    assert sc.rel(1) > sc.rel(0)


def test_score_pair_zero_and_unknown():
    zero = learn.zero_model([l.name for l in LcaLabel])
    for lab in LcaLabel:
        assert learn.score_pair(zero, {"f": 1.0}, lab) == 0
    with pytest.raises(UnknownLabel):
        learn.score_pair(zero, {}, "MODULO")


def test_score_pair_argmax_reproduces_training_labels(lca_data):
    m = learn.train(lca_data)
    assert acc(m, lca_data) == 1.0
    for fv, y in lca_data:
        best = max(LcaLabel, key=lambda lab: learn.score_pair(m, fv, lab))
        assert best.name == y


def test_softmax_normalisation(lca_data):
    m = learn.train(lca_data)
    for fv, _ in lca_data[:20]:
        total = sum(learn.score_pair(m, fv, lab, normalized=True) for lab in LcaLabel)
        assert math.isclose(total, 1.0, rel_tol=1e-12)


def test_save_load_round_trip(tmp_path, lca_data):
    m = learn.train(lca_data)
    path = tmp_path / "m.model"
    learn.save_model(m, path)
    assert path.read_text().splitlines()[0] == "monotree-model v1"
    back = learn.load_model(path)
    assert back == m
    rng = random.Random(5)
    names = sorted({k for fv, _ in lca_data for k in fv})
    for _ in range(100):
        fv = {k: rng.uniform(-3, 3) for k in rng.sample(names, 6)}
        assert back.margins(fv) == m.margins(fv)


def test_unknown_version(tmp_path):
    path = tmp_path / "m.model"
    path.write_text("monotree-model v9\n")
    with pytest.raises(VersionMismatch):
        learn.load_model(path)


def test_missing_file(tmp_path):
    with pytest.raises(OSError):
        learn.load_model(tmp_path / "nope")


@settings(max_examples=100, deadline=None)
@given(st.dictionaries(st.sampled_from("abcdef"), st.floats(-5, 5), max_size=6), st.floats(0, 10))
def test_margin_linearity(fv, a):
    m = learn.train(POINTS + [({"a": 1.0, "c": -1.0}, "A"), ({"b": 1.0, "e": 2.0}, "B")])
    for c in m.classes:
        m.bias[c] = 0.0
    scaled = {k: a * v for k, v in fv.items()}
    for c in m.classes:
        assert math.isclose(m.margin(scaled, c), a * m.margin(fv, c), rel_tol=1e-9, abs_tol=1e-9)


def test_duplicate_example_keeps_separability():
    dup = POINTS + [POINTS[0]]
    assert acc(learn.train(dup), POINTS) == acc(learn.train(POINTS), POINTS) == 1.0
