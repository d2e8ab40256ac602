"""Sparse named features for the relevance and LCA-operation classifiers.

A feature vector is a plain ``dict`` mapping feature name to value.  Every
emitted feature here is an indicator (value 1.0); pairwise conjunctions are
added as ``"f&g"`` with the two names in sorted order.
"""
from __future__ import annotations

import itertools
import string
from typing import Iterable, Optional

from .corpus import Problem, Quantity
from .errors import OrderViolation, UnknownGroup
from .schema import QuantitySchema, QuestionSpan

REL_GROUPS = {
    "unit": ("UNIT_IN_QUESTION", "OTHER_UNIT_BETTER", "NUM_MAX_MATCH_QUANTITIES"),
    "np": ("NP_IN_QUESTION", "OTHER_NP_BETTER"),
    "misc": ("NUM_QUANTITIES",),
}
LCA_GROUPS = {
    "individual": ("VERB_", "IS_RATE_", "RATE_UNIT_IN_QUESTION_", "NEIGHBOR_"),
    "pair": ("SAME_VERB", "SAME_UNIT", "RATE_COMPONENT_MATCH_", "VALUE_I_GREATER"),
    "question": ("QUESTION_",),
}

# adverbs and comparative/superlative adjectives
NEIGHBOR_TAGS = {"RB", "RBR", "RBS", "JJR", "JJS"}
NEIGHBOR_WINDOW = 5
COMPARE_WORDS = {"more", "less", "than"}
RATE_WORDS = {"each", "one"}


def norm(text: str) -> str:
    t = text.lower().strip(string.punctuation)
    return t or text.lower()


def question_tokens(p: Problem, question: Optional[QuestionSpan]) -> set:
    if question is None:
        return set()
    return {norm(p.tokens[i].text) for i in range(*question.span)}


def _words(p, indices):
    return {norm(p.tokens[i].text) for i in indices}


def _span_words(p, span):
    return _words(p, range(*span)) if span else set()


def lemma(p: Problem, i: int) -> str:
    t = p.tokens[i]
    return (t.lemma or t.text).lower()


def _drop_prefixes(groups, table):
    out = []
    for g in groups:
        if g not in table:
            raise UnknownGroup(f"unknown feature group {g!r}; expected one of {sorted(table)}")
        out.extend(table[g])
    return tuple(out)


def conjoin(features: dict) -> dict:
    """Add ``f&g`` for every pair of emitted indicators."""
    out = dict(features)
    names = sorted(n for n, v in features.items() if v)
    for a, b in itertools.combinations(names, 2):
        out[f"{a}&{b}"] = min(features[a], features[b])
    return out


def _finish(feats, drop):
    if drop:
        feats = {k: v for k, v in feats.items() if not k.startswith(drop)}
    return conjoin(feats)


def relevance_features(p: Problem, schemas: dict, question: Optional[QuestionSpan], q: Quantity,
                       drop: Iterable[str] = ()) -> dict:
    qtoks = question_tokens(p, question)
    unit_hits = {k: len(_words(p, s.unit_tokens) & qtoks) for k, s in schemas.items()}
    np_hits = {k: len({norm(p.tokens[e - 1].text) for _, e in s.related_nps} & qtoks)
               for k, s in schemas.items()}
    mine_u, mine_n = unit_hits[q.index], np_hits[q.index]
    f = {}
    if mine_u > 0:
        f["UNIT_IN_QUESTION"] = 1.0
    if any(v > mine_u for k, v in unit_hits.items() if k != q.index):
        f["OTHER_UNIT_BETTER"] = 1.0
    best = max(unit_hits.values())
    if best > 0:
        tied = sum(1 for v in unit_hits.values() if v == best)
        f[f"NUM_MAX_MATCH_QUANTITIES={min(tied, 4)}"] = 1.0
    if mine_n > 0:
        f["NP_IN_QUESTION"] = 1.0
    if any(v > mine_n for k, v in np_hits.items() if k != q.index):
        f["OTHER_NP_BETTER"] = 1.0
    n = len(p.quantities)
    f[f"NUM_QUANTITIES={n if n < 4 else '4+'}"] = 1.0
    return _finish(f, _drop_prefixes(drop, REL_GROUPS))


def _noun_units(p, schema):
    nouns = {norm(p.tokens[i].text) for i in schema.unit_tokens
             if p.tokens[i].pos.startswith("NN") or p.tokens[i].pos == "$"}
    return nouns or _words(p, schema.unit_tokens)


def lca_features(p: Problem, schemas: dict, question: Optional[QuestionSpan], qi: Quantity, qj: Quantity,
                 drop: Iterable[str] = ()) -> dict:
    if qi.token_position >= qj.token_position:
        raise OrderViolation(f"q{qi.index} must precede q{qj.index}")
    qtoks = question_tokens(p, question)
    si, sj = schemas[qi.index], schemas[qj.index]
    f = {}
    for tag, q, s in (("i", qi, si), ("j", qj, sj)):
        if s.verb is not None:
            f[f"VERB_{tag}={lemma(p, s.verb)}"] = 1.0
        if s.rate is not None:
            f[f"IS_RATE_{tag}"] = 1.0
            if (_span_words(p, s.rate[0]) | _span_words(p, s.rate[1])) & qtoks:
                f[f"RATE_UNIT_IN_QUESTION_{tag}"] = 1.0
        sid = p.tokens[q.token_position].sentence_id
        lo = max(0, q.token_position - NEIGHBOR_WINDOW)
        hi = min(len(p.tokens), q.token_position + NEIGHBOR_WINDOW + 1)
        for k in range(lo, hi):
            t = p.tokens[k]
            if k != q.token_position and t.sentence_id == sid and t.pos in NEIGHBOR_TAGS:
                f[f"NEIGHBOR_{tag}={norm(t.text)}"] = 1.0

    if si.verb is not None and sj.verb is not None:
        if lemma(p, si.verb) == lemma(p, sj.verb):
            f["SAME_VERB"] = 1.0
        if si.verb == sj.verb:
            f["SAME_VERB_MENTION"] = 1.0
    ui, uj = _noun_units(p, si), _noun_units(p, sj)
    if ui and ui == uj:
        f["SAME_UNIT"] = 1.0
    for rate_s, other_units in ((si, _words(p, sj.unit_tokens)), (sj, _words(p, si.unit_tokens))):
        if rate_s.rate is None:
            continue
        if _span_words(p, rate_s.rate[0]) & other_units:
            f["RATE_COMPONENT_MATCH_a"] = 1.0
        if _span_words(p, rate_s.rate[1]) & other_units:
            f["RATE_COMPONENT_MATCH_b"] = 1.0
    if qi.value > qj.value:
        f["VALUE_I_GREATER"] = 1.0

    if qtoks & COMPARE_WORDS:
        f["QUESTION_COMPARE"] = 1.0
    if qtoks & RATE_WORDS:
        f["QUESTION_RATE"] = 1.0
    return _finish(f, _drop_prefixes(drop, LCA_GROUPS))


def dump(fv: dict) -> str:
    """Sorted ``name<TAB>value`` lines, for diffing."""
    return "\n".join(f"{k}\t{fv[k]:g}" for k in sorted(fv))
