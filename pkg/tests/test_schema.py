import dataclasses

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from monotree import corpus, schema, synth
from monotree.errors import CyclicHeads, NoQuestion
from monotree.schema import WhKind

Q_HOW_MANY = "How/WRB/B-NP/1/advmod many/JJ/I-NP/2/amod things/NNS/I-NP/3/dobj are/VBP/B-VP/-1/root ?/./O/3/punct"


def mk(*sentences, pid="t"):
    return synth.build_problem(pid, list(sentences), None, answer="0")


def words(p, idx):
    return {p.tokens[i].text for i in idx}


def text(p, span):
    return schema.span_text(p, span)


# -- verbs / subjects ---------------------------------------------------------------

def test_example2_schema():
    p = synth.example2_problem()
    s = schema.extract_schema(p, p.quantities[0])
    assert p.tokens[s.verb].text == "had"
    assert text(p, s.subject) == "Tom"
    assert words(p, s.unit_tokens) == {"$"}
    assert s.rate is None


def test_verb_free_fragment():
    p = mk("7/CD/B-NP/1/nummod apples/NNS/I-NP/-1/root ././O/1/punct", Q_HOW_MANY)
    s = schema.extract_schema(p, p.quantities[0])
    assert s.verb is None and s.subject is None


def test_quantity_headed_by_verb():
    p = mk("Sam/NNP/B-NP/1/nsubj ran/VBD/B-VP/-1/root/run 5/CD/B-NP/1/dobj ././O/1/punct", Q_HOW_MANY)
    assert schema.associated_verb(p, p.quantities[0]) == 1


def test_cyclic_heads():
    p = mk("5/CD/B-NP/1/nummod apples/NNS/I-NP/2/dep here/RB/O/1/dep ././O/1/punct", Q_HOW_MANY)
    with pytest.raises(CyclicHeads):
        schema.associated_verb(p, p.quantities[0])


# -- units ---------------------------------------------------------------------------

def test_units_with_of_extension():
    p = synth.figure3_problem()
    q = next(q for q in p.quantities if q.value == 3)
    assert words(p, schema.unit_tokens(p, q)) == {"shelves", "mystery", "books"}


def test_unit_fallback_to_neighbour():
    p = mk("Sam/NNP/B-NP/1/nsubj had/VBD/B-VP/-1/root/have 8/CD/B-NP/3/nummod apples/NNS/I-NP/1/dobj "
           "and/CC/O/1/cc got/VBD/B-VP/1/conj/get 5/CD/B-NP/5/dobj more/JJR/B-ADJP/6/amod ././O/1/punct",
           Q_HOW_MANY)
    five = p.quantities[1]
    assert words(p, schema.unit_tokens(p, five)) == {"apples"}
    assert five.token_position not in schema.unit_tokens(p, five)


def test_unit_fallback_tie_goes_to_earlier():
    # 4 sits two tokens from both 2 (cats) and 3 (dogs)
    p = mk("cats/NNS/B-NP/-1/root 2/CD/I-NP/0/nummod ,/,/O/0/punct 4/CD/B-NP/0/dep ,/,/O/0/punct "
           "3/CD/B-NP/6/nummod dogs/NNS/I-NP/0/dep ././O/0/punct", Q_HOW_MANY)
    assert words(p, schema.unit_tokens(p, p.quantities[1])) == {"cats"}


# -- related noun phrases ----------------------------------------------------------

def test_example3_related_nps():
    p = synth.example3_problem()
    s0 = schema.extract_schema(p, p.quantities[0])
    assert {text(p, sp) for sp in s0.related_nps} == {"a pile", "the desk"}
    s2 = schema.extract_schema(p, p.quantities[2])
    assert "the pile" in {text(p, sp) for sp in s2.related_nps}


def test_no_pp_and_two_quantities_gives_nothing():
    p = mk("Sam/NNP/B-NP/1/nsubj had/VBD/B-VP/-1/root/have 8/CD/B-NP/3/nummod apples/NNS/I-NP/1/dobj "
           "and/CC/O/1/cc 3/CD/B-NP/6/nummod pears/NNS/I-NP/1/conj ././O/1/punct", Q_HOW_MANY)
    assert schema.related_nps(p, p.quantities[0]) == ()


# -- rates ----------------------------------------------------------------------------

def test_rate_per():
    p = mk("He/PRP/B-NP/1/nsubj drove/VBD/B-VP/-1/root/drive 7/CD/B-NP/3/nummod kilometers/NNS/I-NP/1/dobj "
           "per/IN/B-PP/3/prep hour/NN/B-NP/4/pobj ././O/1/punct", Q_HOW_MANY)
    a, b = schema.detect_rate(p, p.quantities[0])
    assert (text(p, a), text(p, b)) == ("kilometers", "hour")


def test_rate_each_cost():
    p = mk("Each/DT/B-NP/1/det egg/NN/I-NP/2/nsubj costs/VBZ/B-VP/-1/root/cost 2/CD/B-NP/4/nummod "
           "dollars/NNS/I-NP/2/dobj ././O/2/punct", Q_HOW_MANY)
    a, b = schema.detect_rate(p, p.quantities[0])
    assert (text(p, a), text(p, b)) == ("dollars", "egg")


def test_rate_hyphen():
    p = mk("Tom/NNP/B-NP/1/nsubj bought/VBD/B-VP/-1/root/buy 4/CD/B-NP/4/nummod -/HYPH/I-NP/4/punct "
           "dollar/NN/I-NP/5/compound toys/NNS/I-NP/1/dobj ././O/1/punct", Q_HOW_MANY)
    a, b = schema.detect_rate(p, p.quantities[0])
    assert (text(p, a), text(p, b)) == ("dollar", "toys")


def test_rate_a_day():
    p = mk("She/PRP/B-NP/1/nsubj walks/VBZ/B-VP/-1/root/walk 3/CD/B-NP/3/nummod miles/NNS/I-NP/1/dobj "
           "a/DT/B-NP/5/det day/NN/I-NP/1/npadvmod ././O/1/punct", Q_HOW_MANY)
    a, b = schema.detect_rate(p, p.quantities[0])
    assert (text(p, a), text(p, b)) == ("miles", "day")


def test_no_rate_example2():
    p = synth.example2_problem()
    assert schema.detect_rate(p, p.quantities[0]) is None


def test_figure3_rate():
    p = synth.figure3_problem()
    s = schema.extract_schema(p, p.quantities[0])  # the 9
    assert (text(p, s.rate[0]), text(p, s.rate[1])) == ("books", "shelves")


# -- question ------------------------------------------------------------------------

def test_question_trims_conditional():
    p = mk("Oranges/NNS/B-NP/1/nsubj cost/VBP/B-VP/-1/root/cost 2/CD/B-NP/3/nummod dollars/NNS/I-NP/1/dobj "
           "each/DT/B-NP/1/advmod ././O/1/punct",
           "How/WRB/B-ADVP/1/advmod much/JJ/I-ADVP/3/dobj will/MD/B-VP/3/aux John/NNP/B-NP/4/nsubj "
           "have/VB/B-VP/-1/root to/TO/I-VP/6/aux pay/VB/I-VP/4/xcomp if/IN/O/9/mark he/PRP/B-NP/9/nsubj "
           "wants/VBZ/B-VP/4/advcl to/TO/I-VP/11/aux buy/VB/I-VP/9/xcomp 7/CD/B-NP/13/nummod "
           "oranges/NNS/I-NP/11/dobj ?/./O/4/punct")
    q = schema.extract_question(p)
    assert text(p, q.span) == "How much will John have to pay"
    assert q.wh_kind is WhKind.HOW_MUCH


def test_question_figure3():
    p = synth.figure3_problem()
    q = schema.extract_question(p)
    assert q.wh_kind is WhKind.HOW_MANY
    assert text(p, q.span) == "how many books did she have in total"
    assert p.tokens[q.span[1]].text == "?" or p.tokens[q.span[1] - 1].sentence_id == p.tokens[-1].sentence_id


def test_no_question():
    p = mk("Sam/NNP/B-NP/1/nsubj ran/VBD/B-VP/-1/root/run 5/CD/B-NP/3/nummod miles/NNS/I-NP/1/dobj ././O/1/punct")
    with pytest.raises(NoQuestion):
        schema.extract_question(p)
    assert schema.question_or_none(p) is None


# -- properties ------------------------------------------------------------------------------

BUNDLED = corpus.load_bundled()


def test_bounds_and_determinism():
    for p in BUNDLED:
        a = {q.index: schema.extract_schema(p, q) for q in p.quantities}
        assert a == {q.index: schema.extract_schema(p, q) for q in p.quantities}
        for s in a.values():
            q = p.quantity(s.quantity_index)
            assert q.token_position not in s.unit_tokens
        qs = schema.extract_question(p)
        last = qs.span[1] - 1
        sid = p.tokens[last].sentence_id
        assert p.tokens[schema.sentence_span(p, sid)[1] - 1].text == "?"


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(BUNDLED), st.data())
def test_locality(p, data):
    qsent = p.tokens[schema.extract_question(p).span[0]].sentence_id
    q = data.draw(st.sampled_from(p.quantities))
    qsid = p.tokens[q.token_position].sentence_id
    others = [i for i, t in enumerate(p.tokens)
              if t.sentence_id not in (qsid, qsent) and t.pos not in ("CD",)]
    if not others:
        return
    i = data.draw(st.sampled_from(others))
    new_word = data.draw(st.sampled_from(["zebra", "Quux", "per", "each", "of"]))
    toks = list(p.tokens)
    toks[i] = dataclasses.replace(toks[i], text=new_word)
    edited = dataclasses.replace(p, tokens=tuple(toks))
    before, after = schema.extract_schema(p, q), schema.extract_schema(edited, q)
    if before.unit_tokens != after.unit_tokens:
        # only the neighbour fallback may reach across sentences
        assert not schema._own_units(p, q)
        before = dataclasses.replace(before, unit_tokens=after.unit_tokens)
    assert before == after


def test_describe_lines():
    p = synth.figure3_problem()
    lines = schema.describe(p)
    assert len(lines) == len(p.quantities) + 1
    assert "rate=books per shelves" in lines[0]
