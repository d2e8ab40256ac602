"""Annotated problems, corpus files and gold label derivation.

A corpus file holds one JSON object per line::

    {"id": ..., "text": ..., "tokens": [{"text", "pos", "head", "deprel",
     "chunk", "sentence_id"}, ...], "quantities": [{"index", "value",
     "token"}, ...], "answer": "72", "gold_tree": "(* (+ q2 q3) q0)",
     "fold": 0}

Token heads are problem-global token indices (-1 for a sentence root).
An optional ``lemma`` key on a token is kept and used for verb matching.
"""
from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from decimal import Decimal
from fractions import Fraction
from pathlib import Path
from typing import Optional

from . import expr
from .errors import CorpusErrors, FormatError, GoldMismatch, InvalidGold, TreeSyntaxError
from .expr import DivByZero, LcaLabel, Tree

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Token:
    text: str
    pos: str
    head: int
    deprel: str
    chunk: str
    sentence_id: int
    lemma: Optional[str] = None


@dataclass(frozen=True)
class Quantity:
    index: int
    value: Fraction
    token_position: int


@dataclass(frozen=True)
class Problem:
    id: str
    text: str
    tokens: tuple
    quantities: tuple
    answer: Fraction
    gold_tree: Optional[Tree] = None
    fold: int = 0

    @property
    def values(self) -> dict:
        return {q.index: q.value for q in self.quantities}

    def quantity(self, index: int) -> Quantity:
        for q in self.quantities:
            if q.index == index:
                return q
        raise KeyError(index)


@dataclass(frozen=True)
class GoldLabels:
    relevance: dict = field(default_factory=dict)
    lca: dict = field(default_factory=dict)


def parse_number(text: str) -> Fraction:
    """Exact value of a decimal (or ``n/d``) string."""
    try:
        return Fraction(str(text).strip().replace(",", ""))
    except (ValueError, ZeroDivisionError):
        raise FormatError(f"not a number: {text!r}") from None


def format_number(value: Fraction) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    d = value.denominator
    while d % 2 == 0:
        d //= 2
    while d % 5 == 0:
        d //= 5
    if d != 1:
        return f"{value.numerator}/{value.denominator}"
    dec = Decimal(value.numerator) / Decimal(value.denominator)
    return format(dec.normalize(), "f")


def _require(record, key, kind):
    if key not in record:
        raise FormatError(f"missing field {key!r}")
    val = record[key]
    if kind is int and isinstance(val, bool) or not isinstance(val, kind):
        raise FormatError(f"field {key!r} must be {getattr(kind, '__name__', kind)}")
    return val


def _parse_tokens(raw):
    tokens = []
    for i, t in enumerate(raw):
        if not isinstance(t, dict):
            raise FormatError(f"token {i} is not an object")
        try:
            tok = Token(
                text=str(t["text"]), pos=str(t["pos"]), head=int(t["head"]),
                deprel=str(t["deprel"]), chunk=str(t["chunk"]),
                sentence_id=int(t["sentence_id"]), lemma=t.get("lemma"),
            )
        except (KeyError, TypeError, ValueError) as e:
            raise FormatError(f"token {i}: bad or missing field {e}") from None
        tokens.append(tok)
    for i, tok in enumerate(tokens):
        if tok.head == -1:
            continue
        if tok.head == i:
            raise FormatError(f"token {i} is its own head")
        if not 0 <= tok.head < len(tokens):
            raise FormatError(f"token {i} head {tok.head} out of range")
        if tokens[tok.head].sentence_id != tok.sentence_id:
            raise FormatError(f"token {i} head crosses sentences")
    return tuple(tokens)


def parse_problem(record) -> Problem:
    """Validate one corpus record (a dict or a JSON string)."""
    if isinstance(record, str):
        try:
            record = json.loads(record)
        except json.JSONDecodeError as e:
            raise FormatError(f"invalid JSON: {e}") from None
    if not isinstance(record, dict):
        raise FormatError("record must be a JSON object")

    pid = _require(record, "id", str)
    text = _require(record, "text", str)
    tokens = _parse_tokens(_require(record, "tokens", list))
    fold = _require(record, "fold", int)

    quantities = []
    for i, q in enumerate(_require(record, "quantities", list)):
        try:
            index, value, pos = int(q["index"]), q["value"], int(q["token"])
        except (KeyError, TypeError, ValueError) as e:
            raise FormatError(f"quantity {i}: bad or missing field {e}") from None
        if not 0 <= pos < len(tokens):
            raise FormatError(f"quantity {index} token {pos} out of range")
        try:
            parse_number(tokens[pos].text)
        except FormatError:
            raise FormatError(f"quantity {index} points at non-numeric token {tokens[pos].text!r}") from None
        quantities.append(Quantity(index, parse_number(value), pos))
    if len({q.index for q in quantities}) != len(quantities):
        raise FormatError("duplicate quantity index")
    if [q.token_position for q in quantities] != sorted(q.token_position for q in quantities):
        raise FormatError("quantities must be ordered by token position")

    answer = parse_number(_require(record, "answer", str))

    gold = None
    if record.get("gold_tree") is not None:
        try:
            gold = expr.parse_tree(_require(record, "gold_tree", str))
        except TreeSyntaxError as e:
            raise FormatError(str(e)) from None
        if not expr.is_valid(gold):
            raise InvalidGold(f"gold tree {record['gold_tree']!r} uses a quantity twice")
        known = {q.index for q in quantities}
        if not set(expr.leaves(gold)) <= known:
            raise FormatError(f"gold tree refers to unknown quantities {set(expr.leaves(gold)) - known}")
        values = {q.index: q.value for q in quantities}
        try:
            got = expr.evaluate(gold, values)
        except DivByZero:
            raise GoldMismatch("gold tree divides by zero") from None
        if got != answer:
            raise GoldMismatch(f"gold tree evaluates to {format_number(got)}, answer is {format_number(answer)}")
        gold = expr.monotonize(gold)

    return Problem(pid, text, tokens, tuple(quantities), answer, gold, fold)


def to_record(p: Problem) -> dict:
    tokens = []
    for t in p.tokens:
        d = {"text": t.text, "pos": t.pos, "head": t.head, "deprel": t.deprel,
             "chunk": t.chunk, "sentence_id": t.sentence_id}
        if t.lemma is not None:
            d["lemma"] = t.lemma
        tokens.append(d)
    rec = {
        "id": p.id,
        "text": p.text,
        "tokens": tokens,
        "quantities": [{"index": q.index, "value": format_number(q.value), "token": q.token_position}
                       for q in p.quantities],
        "answer": format_number(p.answer),
        "fold": p.fold,
    }
    if p.gold_tree is not None:
        rec["gold_tree"] = expr.format_tree(p.gold_tree)
    return rec


def dumps(p: Problem) -> str:
    return json.dumps(to_record(p), ensure_ascii=False)


def read_corpus(path) -> tuple:
    """Parse every record of a corpus file; returns ``(problems, errors)``."""
    problems, errors = [], []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                problems.append(parse_problem(line))
            except FormatError as e:
                errors.append(type(e)(str(e), line=lineno))
    return problems, errors


def load_corpus(path, strict: bool = True) -> list:
    problems, errors = read_corpus(path)
    if errors:
        if strict:
            raise CorpusErrors(errors)
        for e in errors:
            log.warning("%s: skipped record, %s", path, e)
    return problems


def save_corpus(problems, path) -> None:
    Path(path).write_text("".join(dumps(p) + "\n" for p in problems), encoding="utf-8")


def derive_labels(p: Problem) -> GoldLabels:
    if p.gold_tree is None:
        raise ValueError(f"problem {p.id} has no gold tree")
    used = set(expr.leaves(p.gold_tree))
    relevance = {q.index: q.index in used for q in p.quantities}
    lca = expr.lca_map(expr.monotonize(p.gold_tree))
    return GoldLabels(relevance, lca)


def bundled_corpus_path() -> Path:
    return Path(__file__).parent / "data" / "mini_corpus.jsonl"


def load_bundled() -> list:
    return load_corpus(bundled_corpus_path())


__all__ = [
    "Token", "Quantity", "Problem", "GoldLabels", "LcaLabel", "parse_problem", "to_record", "dumps",
    "read_corpus", "load_corpus", "save_corpus", "derive_labels", "parse_number", "format_number",
    "bundled_corpus_path", "load_bundled",
]
