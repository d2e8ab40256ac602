"""Quantity schemas: verb, subject, unit, related noun phrases and rate for
each quantity mention, plus the question phrase.

All positions are problem-global token indices; spans are half-open
``(start, end)`` pairs.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

from .corpus import Problem, Quantity
from .errors import CyclicHeads, NoQuestion

WH_WORDS = {"how", "what", "which", "who", "whom", "whose", "where"}
CONDITIONAL = {"if", "when"}
EACH_WORDS = {"each", "every"}
PRONOUN_TAGS = {"PRP", "PRP$", "EX", "WP", "WDT"}


class WhKind(enum.Enum):
    HOW_MANY = "how many"
    HOW_MUCH = "how much"
    OTHER = "other"


@dataclass(frozen=True)
class QuestionSpan:
    span: tuple
    wh_kind: WhKind


@dataclass(frozen=True)
class QuantitySchema:
    quantity_index: int
    verb: Optional[int]
    subject: Optional[tuple]
    unit_tokens: tuple
    related_nps: tuple
    rate: Optional[tuple]  # (unit_a span, unit_b span)


@dataclass(frozen=True)
class Chunk:
    start: int
    end: int
    kind: str
    sentence_id: int


def is_verb(pos: str) -> bool:
    return pos.startswith("VB")


def is_numeric(p: Problem, i: int) -> bool:
    return p.tokens[i].pos == "CD"


@lru_cache(maxsize=4096)
def chunks(p: Problem) -> tuple:
    """Chunks decoded from BIO tags; an I- tag without a matching open chunk
    starts a new one."""
    out = []
    cur = None
    for i, t in enumerate(p.tokens):
        tag = t.chunk
        if tag == "O" or "-" not in tag:
            if cur:
                out.append(Chunk(*cur))
            cur = None
            continue
        bio, kind = tag.split("-", 1)
        if bio == "B" or cur is None or cur[2] != kind or cur[3] != t.sentence_id:
            if cur:
                out.append(Chunk(*cur))
            cur = [i, i + 1, kind, t.sentence_id]
        else:
            cur[1] = i + 1
    if cur:
        out.append(Chunk(*cur))
    return tuple(out)


def chunk_index(p: Problem, token: int) -> Optional[int]:
    for k, c in enumerate(chunks(p)):
        if c.start <= token < c.end:
            return k
    return None


def sentence_span(p: Problem, sid: int) -> tuple:
    idx = [i for i, t in enumerate(p.tokens) if t.sentence_id == sid]
    return (idx[0], idx[-1] + 1)


def _next_adjacent(cs, k, kind):
    if k + 1 < len(cs) and cs[k + 1].start == cs[k].end and cs[k + 1].kind == kind \
            and cs[k + 1].sentence_id == cs[k].sentence_id:
        return k + 1
    return None


def _content(p, start, end):
    """Indices in [start, end) without numbers and leading determiners."""
    idx = [i for i in range(start, end) if not is_numeric(p, i)]
    while idx and p.tokens[idx[0]].pos in ("DT", "PDT"):
        idx.pop(0)
    return idx


def _as_span(idx):
    return (idx[0], idx[-1] + 1) if idx else None


# ---------------------------------------------------------------------------


def associated_verb(p: Problem, q: Quantity) -> Optional[int]:
    seen = {q.token_position}
    cur = p.tokens[q.token_position].head
    while cur != -1:
        if cur in seen:
            raise CyclicHeads(f"{p.id}: head cycle through token {cur}")
        seen.add(cur)
        if is_verb(p.tokens[cur].pos):
            return cur
        cur = p.tokens[cur].head
    return None


def subject_of(p: Problem, verb: int) -> Optional[tuple]:
    for i, t in enumerate(p.tokens):
        if t.head == verb and t.deprel.startswith("nsubj"):
            k = chunk_index(p, i)
            if k is not None and chunks(p)[k].kind == "NP":
                c = chunks(p)[k]
                return (c.start, c.end)
            return (i, i + 1)
    return None


def _own_units(p: Problem, q: Quantity) -> list:
    k = chunk_index(p, q.token_position)
    if k is None:
        return []
    cs = chunks(p)
    c = cs[k]
    units = [i for i in range(c.start, c.end) if not is_numeric(p, i)]
    pp = _next_adjacent(cs, k, "PP")
    if pp is not None and p.tokens[cs[pp].start].text.lower() == "of" and cs[pp].end - cs[pp].start == 1:
        np_ = _next_adjacent(cs, pp, "NP")
        if np_ is not None:
            units += [i for i in range(cs[np_].start, cs[np_].end) if not is_numeric(p, i)]
    return units


def unit_tokens(p: Problem, q: Quantity) -> tuple:
    units = _own_units(p, q)
    if units:
        return tuple(units)
    best = None
    for other in p.quantities:
        if other.index == q.index:
            continue
        cand = _own_units(p, other)
        if not cand:
            continue
        dist = abs(other.token_position - q.token_position)
        if best is None or dist < best[0] or (dist == best[0] and other.token_position < best[1]):
            best = (dist, other.token_position, cand)
    return tuple(best[2]) if best else ()


def related_nps(p: Problem, q: Quantity) -> tuple:
    cs = chunks(p)
    k = chunk_index(p, q.token_position)
    sid = p.tokens[q.token_position].sentence_id
    found = []
    if k is not None:
        cur = k
        while True:
            pp = _next_adjacent(cs, cur, "PP")
            np_ = _next_adjacent(cs, pp, "NP") if pp is not None else None
            if np_ is None:
                break
            found.append(np_)
            cur = np_
    sole = sum(1 for o in p.quantities if p.tokens[o.token_position].sentence_id == sid) == 1
    if sole:
        found += [j for j, c in enumerate(cs) if c.kind == "NP" and c.sentence_id == sid]
    spans = []
    for j in sorted(set(found)):
        c = cs[j]
        if j == k or all(p.tokens[i].pos in PRONOUN_TAGS | {"DT"} for i in range(c.start, c.end)):
            continue
        spans.append((c.start, c.end))
    return tuple(spans)


def detect_rate(p: Problem, q: Quantity) -> Optional[tuple]:
    cs = chunks(p)
    toks = p.tokens
    pos = q.token_position
    sid = toks[pos].sentence_id
    k = chunk_index(p, pos)
    own_end = cs[k].end if k is not None else pos + 1
    unit_a = _as_span(_content(p, pos + 1, own_end))

    # "<q> <unit_a> per <unit_b>"
    for i in range(pos + 1, min(own_end + 1, len(toks))):
        if toks[i].sentence_id == sid and toks[i].text.lower() == "per":
            a = _as_span(_content(p, pos + 1, i))
            kb = chunk_index(p, i + 1) if i + 1 < len(toks) else None
            if a and kb is not None and cs[kb].kind == "NP" and cs[kb].sentence_id == sid:
                b = _as_span(_content(p, cs[kb].start, cs[kb].end))
                if b:
                    return (a, b)

    # "<q>-<unit_a> <unit_b>"
    if pos + 2 < len(toks) and toks[pos + 1].text == "-" and toks[pos + 2].sentence_id == sid:
        kh = chunk_index(p, pos + 2)
        if kh is not None and cs[kh].end - 1 > pos + 2:
            return ((pos + 2, pos + 3), (cs[kh].end - 1, cs[kh].end))

    if unit_a is None:
        return None

    # "<q> <unit_a> a <unit_b>"  (miles a day)
    if k is not None:
        nk = _next_adjacent(cs, k, "NP")
        if nk is not None and toks[cs[nk].start].text.lower() in ("a", "an"):
            b = _as_span(_content(p, cs[nk].start, cs[nk].end))
            if b:
                return (unit_a, b)

    # "each/every <unit_b>" anywhere in the same sentence
    candidates = []
    for j, c in enumerate(cs):
        if j == k or c.kind != "NP" or c.sentence_id != sid:
            continue
        if toks[c.start].text.lower() not in EACH_WORDS:
            continue
        b = _as_span(_content(p, c.start + 1, c.end))
        if b is None:
            pp = _next_adjacent(cs, j, "PP")
            np_ = _next_adjacent(cs, pp, "NP") if pp is not None else None
            if np_ is not None and toks[cs[pp].start].text.lower() == "of":
                b = _as_span(_content(p, cs[np_].start, cs[np_].end))
        if b:
            candidates.append((0 if c.start < pos else 1, abs(c.start - pos), b))
    if candidates:
        return (unit_a, min(candidates)[2])
    return None


def extract_question(p: Problem) -> QuestionSpan:
    toks = p.tokens
    sids = sorted({t.sentence_id for t in toks})
    for sid in reversed(sids):
        start, end = sentence_span(p, sid)
        if toks[end - 1].text != "?":
            continue
        qs = start
        for i in range(start, end):
            if toks[i].text.lower() in WH_WORDS:
                qs = i
                break
        qe = end - 1
        for i in range(qs + 1, end - 1):
            if toks[i].text.lower() in CONDITIONAL:
                qe = i
                break
        while qe > qs and toks[qe - 1].pos in (",", ".", ":"):
            qe -= 1
        words = [toks[i].text.lower() for i in range(qs, min(qs + 2, qe))]
        if words == ["how", "many"]:
            kind = WhKind.HOW_MANY
        elif words == ["how", "much"]:
            kind = WhKind.HOW_MUCH
        else:
            kind = WhKind.OTHER
        return QuestionSpan((qs, qe), kind)
    raise NoQuestion(f"{p.id}: no sentence ends in '?'")


def question_or_none(p: Problem) -> Optional[QuestionSpan]:
    try:
        return extract_question(p)
    except NoQuestion:
        return None


def _check_bounds(p, schema):
    n = len(p.tokens)
    spans = list(schema.related_nps)
    if schema.subject:
        spans.append(schema.subject)
    if schema.rate:
        spans += list(schema.rate)
    for s, e in spans:
        assert 0 <= s < e <= n, (p.id, schema)
    for i in schema.unit_tokens + ((schema.verb,) if schema.verb is not None else ()):
        assert 0 <= i < n, (p.id, schema)


def extract_schema(p: Problem, q: Quantity) -> QuantitySchema:
    verb = associated_verb(p, q)
    schema = QuantitySchema(
        quantity_index=q.index,
        verb=verb,
        subject=subject_of(p, verb) if verb is not None else None,
        unit_tokens=unit_tokens(p, q),
        related_nps=related_nps(p, q),
        rate=detect_rate(p, q),
    )
    _check_bounds(p, schema)
    return schema


@lru_cache(maxsize=4096)
def extract_all(p: Problem) -> dict:
    """Schemas for every quantity of ``p``, keyed by quantity index."""
    return {q.index: extract_schema(p, q) for q in p.quantities}


def span_text(p: Problem, span) -> str:
    if span is None:
        return "-"
    return " ".join(p.tokens[i].text for i in range(*span))


def describe(p: Problem) -> list:
    """One human-readable line per quantity, plus the question line."""
    lines = []
    for q in p.quantities:
        s = extract_schema(p, q)
        verb = p.tokens[s.verb].text if s.verb is not None else "-"
        units = " ".join(p.tokens[i].text for i in s.unit_tokens) or "-"
        nps = "; ".join(span_text(p, sp) for sp in s.related_nps) or "-"
        rate = f"{span_text(p, s.rate[0])} per {span_text(p, s.rate[1])}" if s.rate else "-"
        lines.append(f"q{q.index}={p.tokens[q.token_position].text}\tverb={verb}\tsubject={span_text(p, s.subject)}"
                     f"\tunit={units}\tnps={nps}\trate={rate}")
    qs = question_or_none(p)
    if qs is None:
        lines.append("question=-")
    else:
        lines.append(f"question={span_text(p, qs.span)}\twh={qs.wh_kind.value}")
    return lines
