"""Hand-annotated problem templates and a compact annotation notation.

Each sentence is written as space-separated tokens of the form
``text/POS/CHUNK/HEAD/DEPREL[/LEMMA]`` where HEAD is the index of the head
token inside the same sentence (-1 for the root).  Slots such as ``{N}`` or
``{a}`` are filled before parsing.  Every CD token becomes a quantity mention.

This is the tooling used to author ``data/mini_corpus.jsonl`` and the small
synthetic corpora used by the tests; it is not a parser.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, Optional

from . import expr
from .corpus import Problem, Quantity, Token, parse_number, parse_problem, to_record


def _tokens_from_dsl(sentences):
    tokens = []
    for sid, sent in enumerate(sentences):
        offset = len(tokens)
        for raw in sent.split():
            parts = raw.split("/")
            if len(parts) not in (5, 6):
                raise ValueError(f"bad token spec {raw!r} in sentence {sid}")
            text, pos, chunk, head, deprel = parts[:5]
            lemma = parts[5] if len(parts) == 6 else None
            h = int(head)
            tokens.append(Token(text, pos, -1 if h < 0 else offset + h, deprel, chunk, sid, lemma))
    return tuple(tokens)


def detokenize(tokens) -> str:
    out = ""
    for i, t in enumerate(tokens):
        if i == 0:
            out = t.text
        elif t.text in {".", ",", "?", "!", ";", ":"} or tokens[i - 1].text == "$":
            out += t.text
        else:
            out += " " + t.text
    return out


def build_problem(pid: str, sentences, gold: Optional[str], fold: int = 0, answer=None) -> Problem:
    """Assemble and validate a problem from annotated sentences.

    ``answer`` defaults to the value of ``gold``; passing it explicitly makes the
    corpus validator check the gold tree against it.
    """
    tokens = _tokens_from_dsl(sentences)
    quantities = []
    for i, t in enumerate(tokens):
        if t.pos == "CD":
            quantities.append(Quantity(len(quantities), parse_number(t.text), i))
    values = {q.index: q.value for q in quantities}
    if answer is None:
        answer = expr.evaluate(expr.parse_tree(gold), values)
    p = Problem(pid, detokenize(tokens), tokens, tuple(quantities), parse_number(str(answer)), None, fold)
    rec = to_record(p)
    if gold is not None:
        rec["gold_tree"] = gold
    return parse_problem(rec)


NAMES = ["Tom", "Sara", "Mike", "Lisa", "Dan", "Amy", "Joan", "Fred", "Mary", "Sam", "Nick", "Beth"]
OBJECTS = [("apple", "apples"), ("marble", "marbles"), ("book", "books"), ("pencil", "pencils"),
           ("card", "cards"), ("cookie", "cookies"), ("stamp", "stamps"), ("shell", "shells"),
           ("sticker", "stickers"), ("egg", "eggs")]
CONTAINERS = [("box", "boxes"), ("bag", "bags"), ("jar", "jars"), ("shelf", "shelves"),
              ("basket", "baskets"), ("tray", "trays")]
OTHERS = ["balloons", "kites", "crayons", "buttons"]


@dataclass(frozen=True)
class Template:
    name: str
    sentences: tuple
    gold: str
    numbers: Callable  # rng -> dict of number slots

    def instantiate(self, pid: str, fold: int, rng: random.Random, **fixed) -> Problem:
        names = rng.sample(NAMES, 3)
        o, os_ = rng.choice(OBJECTS)
        c, cs = rng.choice(CONTAINERS)
        slots = {"N": names[0], "M": names[1], "K": names[2], "o": o, "os": os_, "c": c, "cs": cs,
                 "xs": rng.choice(OTHERS)}
        slots.update({k: str(v) for k, v in self.numbers(rng).items()})
        slots.update({k: str(v) for k, v in fixed.items()})
        sents = [s.format(**slots) for s in self.sentences]
        return build_problem(pid, sents, self.gold, fold)


def _r(rng, lo, hi):
    return rng.randint(lo, hi)


def _sub_numbers(rng):
    b = _r(rng, 2, 30)
    return {"a": b + _r(rng, 3, 40), "b": b}


def _two(rng):
    return {"a": _r(rng, 2, 40), "b": _r(rng, 2, 40)}


def _mul(rng):
    return {"a": _r(rng, 2, 9), "b": _r(rng, 2, 12)}


def _div(rng):
    b, k = _r(rng, 2, 9), _r(rng, 2, 12)
    return {"a": b * k, "b": b}


def _divr(rng):
    a, k = _r(rng, 2, 9), _r(rng, 2, 12)
    return {"a": a, "b": a * k}


HAD = "{N}/NNP/B-NP/1/nsubj had/VBD/B-VP/-1/root/have {a}/CD/B-NP/3/nummod {os}/NNS/I-NP/1/dobj ././O/1/punct"
HAS = "{N}/NNP/B-NP/1/nsubj has/VBZ/B-VP/-1/root/have {a}/CD/B-NP/3/nummod {os}/NNS/I-NP/1/dobj ././O/1/punct"
GAVE_MORE = ("{M}/NNP/B-NP/1/nsubj gave/VBD/B-VP/-1/root/give {N}/NNP/B-NP/1/iobj {b}/CD/B-NP/5/nummod "
             "more/JJR/I-NP/5/amod {os}/NNS/I-NP/1/dobj ././O/1/punct")
GAVE_AWAY = ("{N}/NNP/B-NP/1/nsubj gave/VBD/B-VP/-1/root/give {b}/CD/B-NP/3/nummod {os}/NNS/I-NP/1/dobj "
             "to/TO/B-PP/1/prep {M}/NNP/B-NP/4/pobj ././O/1/punct")
EACH_HOLDS = ("Each/DT/B-NP/1/det {c}/NN/I-NP/2/nsubj holds/VBZ/B-VP/-1/root/hold {b}/CD/B-NP/4/nummod "
              "{os}/NNS/I-NP/2/dobj ././O/2/punct")
Q_HAVE_NOW = ("How/WRB/B-NP/1/advmod many/JJ/I-NP/2/amod {os}/NNS/I-NP/5/dobj does/VBZ/B-VP/5/aux/do "
              "{N}/NNP/B-NP/5/nsubj have/VB/B-VP/-1/root/have now/RB/B-ADVP/5/advmod ?/./O/5/punct")
Q_HAVE_LEFT = ("How/WRB/B-NP/1/advmod many/JJ/I-NP/2/amod {os}/NNS/I-NP/5/dobj does/VBZ/B-VP/5/aux/do "
               "{N}/NNP/B-NP/5/nsubj have/VB/B-VP/-1/root/have left/VBN/B-VP/5/dep ?/./O/5/punct")
Q_HAVE = ("How/WRB/B-NP/1/advmod many/JJ/I-NP/2/amod {os}/NNS/I-NP/5/dobj does/VBZ/B-VP/5/aux/do "
          "{N}/NNP/B-NP/5/nsubj have/VB/B-VP/-1/root/have ?/./O/5/punct")
Q_IN_EACH = ("How/WRB/B-NP/1/advmod many/JJ/I-NP/2/amod {os}/NNS/I-NP/3/nsubj are/VBP/B-VP/-1/root/be "
             "in/IN/B-PP/3/prep each/DT/B-NP/6/det {c}/NN/I-NP/4/pobj ?/./O/3/punct")

FIG3_S1 = ("{N}/NNP/B-NP/2/nsubj was/VBD/B-VP/2/aux/be organizing/VBG/I-VP/-1/root/organize "
           "her/PRP$/B-NP/5/poss book/NN/I-NP/5/compound case/NN/I-NP/2/dobj making/VBG/B-VP/2/xcomp/make "
           "sure/JJ/B-ADJP/6/acomp each/DT/B-NP/12/nsubj of/IN/B-PP/8/prep the/DT/B-NP/11/det "
           "{cs}/NNS/I-NP/9/pobj had/VBD/B-VP/7/ccomp/have exactly/RB/B-ADVP/14/advmod "
           "{a}/CD/B-NP/15/nummod {os}/NNS/I-NP/12/dobj on/IN/B-PP/12/prep it/PRP/B-NP/16/pobj ././O/2/punct")
FIG3_S2 = ("She/PRP/B-NP/1/nsubj has/VBZ/B-VP/-1/root/have {x}/CD/B-NP/3/nummod types/NNS/I-NP/1/dobj "
           "of/IN/B-PP/3/prep {os}/NNS/B-NP/4/pobj -/:/O/3/punct mystery/NN/B-NP/8/compound "
           "{os}/NNS/I-NP/3/appos and/CC/O/8/cc picture/NN/B-NP/11/compound {os}/NNS/I-NP/8/conj ././O/1/punct")
FIG3_S3 = ("If/IN/B-SBAR/2/mark she/PRP/B-NP/2/nsubj had/VBD/B-VP/20/advcl/have {b}/CD/B-NP/4/nummod "
           "{cs}/NNS/I-NP/2/dobj of/IN/B-PP/4/prep mystery/NN/B-NP/7/compound {os}/NNS/I-NP/5/pobj "
           "and/CC/O/4/cc {d}/CD/B-NP/10/nummod {cs}/NNS/I-NP/4/conj of/IN/B-PP/10/prep "
           "picture/NN/B-NP/13/compound {os}/NNS/I-NP/11/pobj ,/,/O/20/punct how/WRB/B-NP/16/advmod "
           "many/JJ/I-NP/17/amod {os}/NNS/I-NP/20/dobj did/VBD/B-VP/20/aux/do she/PRP/B-NP/20/nsubj "
           "have/VB/B-VP/-1/root/have in/IN/B-PP/20/prep total/NN/B-NP/21/pobj ?/./O/20/punct")

PILE_S1 = ("There/EX/B-NP/1/expl are/VBP/B-VP/-1/root/be {a}/CD/B-NP/3/nummod {os}/NNS/I-NP/1/nsubj "
           "in/IN/B-PP/3/prep a/DT/B-NP/6/det pile/NN/I-NP/4/pobj on/IN/B-PP/6/prep the/DT/B-NP/9/det "
           "desk/NN/I-NP/7/pobj ././O/1/punct")
PILE_S2 = ("Each/DT/B-NP/1/det {o}/NN/I-NP/2/nsubj comes/VBZ/B-VP/-1/root/come in/IN/B-PP/2/prep "
           "a/DT/B-NP/5/det package/NN/I-NP/3/pobj of/IN/B-PP/5/prep {x}/CD/B-NP/6/pobj ././O/2/punct")
PILE_S3 = ("{b}/CD/B-NP/1/nummod {os}/NNS/I-NP/3/nsubjpass are/VBP/B-VP/3/auxpass added/VBN/I-VP/-1/root/add "
           "to/TO/B-PP/3/prep the/DT/B-NP/6/det pile/NN/I-NP/4/pobj ././O/3/punct")
PILE_Q = ("How/WRB/B-NP/1/advmod many/JJ/I-NP/2/amod {os}/NNS/I-NP/3/nsubj are/VBP/B-VP/-1/root/be "
          "there/EX/B-NP/3/expl in/IN/B-PP/3/prep the/DT/B-NP/7/det pile/NN/I-NP/5/pobj ?/./O/3/punct")


TEMPLATES = {
    "add_gave_more": Template("add_gave_more", (HAD, GAVE_MORE, Q_HAVE_NOW), "(+ q0 q1)", _two),
    "add_found": Template("add_found", (
        "{N}/NNP/B-NP/1/nsubj found/VBD/B-VP/-1/root/find {a}/CD/B-NP/3/nummod {os}/NNS/I-NP/1/dobj "
        "on/IN/B-PP/1/prep Monday/NNP/B-NP/4/pobj ././O/1/punct",
        "{N}/NNP/B-NP/2/nsubj also/RB/B-ADVP/2/advmod found/VBD/B-VP/-1/root/find {b}/CD/B-NP/4/nummod "
        "{os}/NNS/I-NP/2/dobj on/IN/B-PP/2/prep Tuesday/NNP/B-NP/5/pobj ././O/2/punct",
        "How/WRB/B-NP/1/advmod many/JJ/I-NP/2/amod {os}/NNS/I-NP/5/dobj did/VBD/B-VP/5/aux/do "
        "{N}/NNP/B-NP/5/nsubj find/VB/B-VP/-1/root/find in/IN/B-PP/5/prep all/DT/B-NP/6/pobj ?/./O/5/punct",
    ), "(+ q0 q1)", _two),
    "sub_gave": Template("sub_gave", (HAD, GAVE_AWAY, Q_HAVE_LEFT), "(- q0 q1)", _sub_numbers),
    "sub_ate": Template("sub_ate", (
        "{N}/NNP/B-NP/1/nsubj bought/VBD/B-VP/-1/root/buy {a}/CD/B-NP/3/nummod {os}/NNS/I-NP/1/dobj ././O/1/punct",
        "{N}/NNP/B-NP/1/nsubj ate/VBD/B-VP/-1/root/eat {b}/CD/B-NP/1/dobj ././O/1/punct",
        Q_HAVE_LEFT,
    ), "(- q0 q1)", _sub_numbers),
    "subr_money": Template("subr_money", (
        "Last/JJ/B-NP/1/amod week/NN/I-NP/3/npadvmod {N}/NNP/B-NP/3/nsubj had/VBD/B-VP/-1/root/have "
        "$/$/B-NP/3/dobj {b}/CD/I-NP/4/nummod ././O/3/punct",
        "{N}/NNP/B-NP/2/nsubj now/RB/B-ADVP/2/advmod has/VBZ/B-VP/-1/root/have $/$/B-NP/2/dobj "
        "{a}/CD/I-NP/3/nummod ././O/2/punct",
        "How/WRB/B-NP/1/advmod much/JJ/I-NP/2/amod money/NN/I-NP/5/dobj did/VBD/B-VP/5/aux/do "
        "{N}/NNP/B-NP/5/nsubj make/VB/B-VP/-1/root/make ?/./O/5/punct",
    ), "(- q1 q0)", _sub_numbers),
    "mul_holds": Template("mul_holds", (
        "{N}/NNP/B-NP/1/nsubj has/VBZ/B-VP/-1/root/have {a}/CD/B-NP/3/nummod {cs}/NNS/I-NP/1/dobj ././O/1/punct",
        EACH_HOLDS, Q_HAVE,
    ), "(* q0 q1)", _mul),
    "mul_cost": Template("mul_cost", (
        "{N}/NNP/B-NP/1/nsubj bought/VBD/B-VP/-1/root/buy {a}/CD/B-NP/3/nummod {os}/NNS/I-NP/1/dobj ././O/1/punct",
        "Each/DT/B-NP/1/det {o}/NN/I-NP/2/nsubj costs/VBZ/B-VP/-1/root/cost {b}/CD/B-NP/4/nummod "
        "dollars/NNS/I-NP/2/dobj ././O/2/punct",
        "How/WRB/B-NP/1/advmod much/JJ/I-NP/2/amod money/NN/I-NP/5/dobj did/VBD/B-VP/5/aux/do "
        "{N}/NNP/B-NP/5/nsubj spend/VB/B-VP/-1/root/spend ?/./O/5/punct",
    ), "(* q0 q1)", _mul),
    "div_share": Template("div_share", (
        HAS,
        "{N}/NNP/B-NP/1/nsubj puts/VBZ/B-VP/-1/root/put them/PRP/B-NP/1/dobj equally/RB/B-ADVP/1/advmod "
        "into/IN/B-PP/1/prep {b}/CD/B-NP/6/nummod {cs}/NNS/I-NP/4/pobj ././O/1/punct",
        Q_IN_EACH,
    ), "(/ q0 q1)", _div),
    "divr_fill": Template("divr_fill", (
        "Each/DT/B-NP/1/det {c}/NN/I-NP/2/nsubj holds/VBZ/B-VP/-1/root/hold {a}/CD/B-NP/4/nummod "
        "{os}/NNS/I-NP/2/dobj ././O/2/punct",
        "{N}/NNP/B-NP/1/nsubj has/VBZ/B-VP/-1/root/have {b}/CD/B-NP/3/nummod {os}/NNS/I-NP/1/dobj ././O/1/punct",
        "How/WRB/B-NP/1/advmod many/JJ/I-NP/2/amod {cs}/NNS/I-NP/5/dobj can/MD/B-VP/5/aux "
        "{N}/NNP/B-NP/5/nsubj fill/VB/B-VP/-1/root/fill ?/./O/5/punct",
    ), "(/ q1 q0)", _divr),
    "rel_age": Template("rel_age", (
        "{N}/NNP/B-NP/1/nsubj is/VBZ/B-VP/-1/root/be {x}/CD/B-NP/3/nummod years/NNS/I-NP/4/npadvmod "
        "old/JJ/B-ADJP/1/acomp ././O/1/punct",
        HAD,
        "{N}/NNP/B-NP/1/nsubj ate/VBD/B-VP/-1/root/eat {b}/CD/B-NP/3/nummod {os}/NNS/I-NP/1/dobj ././O/1/punct",
        Q_HAVE_LEFT,
    ), "(- q1 q2)", lambda rng: {**_sub_numbers(rng), "x": _r(rng, 5, 14)}),
    "rel_color": Template("rel_color", (
        "{N}/NNP/B-NP/1/nsubj has/VBZ/B-VP/-1/root/have {a}/CD/B-NP/3/nummod {os}/NNS/I-NP/1/dobj "
        "and/CC/O/3/cc {x}/CD/B-NP/6/nummod {xs}/NNS/I-NP/3/conj ././O/1/punct",
        GAVE_MORE, Q_HAVE_NOW,
    ), "(+ q0 q2)", lambda rng: {**_two(rng), "x": _r(rng, 2, 40)}),
    "rel_pile": Template("rel_pile", (PILE_S1, PILE_S2, PILE_S3, PILE_Q), "(+ q0 q2)",
                         lambda rng: {**_two(rng), "x": _r(rng, 6, 12)}),
    "fig3_shelves": Template("fig3_shelves", (FIG3_S1, FIG3_S2, FIG3_S3), "(* (+ q2 q3) q0)",
                             lambda rng: {"a": _r(rng, 3, 12), "x": _r(rng, 2, 4),
                                          "b": _r(rng, 2, 9), "d": _r(rng, 2, 9)}),
    "addsub": Template("addsub", (
        HAD, GAVE_MORE,
        "Then/RB/B-ADVP/2/advmod {N}/NNP/B-NP/2/nsubj gave/VBD/B-VP/-1/root/give {e}/CD/B-NP/4/nummod "
        "{os}/NNS/I-NP/2/dobj to/TO/B-PP/2/prep {K}/NNP/B-NP/5/pobj ././O/2/punct",
        Q_HAVE_NOW,
    ), "(- (+ q0 q1) q2)", lambda rng: (lambda a, b: {"a": a, "b": b, "e": _r(rng, 2, a + b - 1)})(
        _r(rng, 5, 40), _r(rng, 2, 30))),
    "subadd": Template("subadd", (
        HAD, GAVE_AWAY,
        "Then/RB/B-ADVP/2/advmod {K}/NNP/B-NP/2/nsubj gave/VBD/B-VP/-1/root/give {N}/NNP/B-NP/2/iobj "
        "{e}/CD/B-NP/6/nummod more/JJR/I-NP/6/amod {os}/NNS/I-NP/2/dobj ././O/2/punct",
        Q_HAVE_NOW,
    ), "(+ (- q0 q1) q2)", lambda rng: {**_sub_numbers(rng), "e": _r(rng, 2, 30)}),
    "addmul": Template("addmul", (
        "{N}/NNP/B-NP/1/nsubj has/VBZ/B-VP/-1/root/have {a}/CD/B-NP/4/nummod red/JJ/I-NP/4/amod "
        "{cs}/NNS/I-NP/1/dobj and/CC/O/4/cc {b}/CD/B-NP/8/nummod blue/JJ/I-NP/8/amod {cs}/NNS/I-NP/4/conj "
        "././O/1/punct",
        "Each/DT/B-NP/1/det {c}/NN/I-NP/2/nsubj holds/VBZ/B-VP/-1/root/hold {x}/CD/B-NP/4/nummod "
        "{os}/NNS/I-NP/2/dobj ././O/2/punct",
        Q_HAVE,
    ), "(* (+ q0 q1) q2)", lambda rng: {"a": _r(rng, 2, 9), "b": _r(rng, 2, 9), "x": _r(rng, 2, 12)}),
    "subdiv": Template("subdiv", (
        HAD,
        "{N}/NNP/B-NP/1/nsubj ate/VBD/B-VP/-1/root/eat {b}/CD/B-NP/3/nummod {os}/NNS/I-NP/1/dobj ././O/1/punct",
        "{N}/NNP/B-NP/1/nsubj put/VBD/B-VP/-1/root/put the/DT/B-NP/3/det rest/NN/I-NP/1/dobj "
        "equally/RB/B-ADVP/1/advmod into/IN/B-PP/1/prep {e}/CD/B-NP/7/nummod {cs}/NNS/I-NP/5/pobj ././O/1/punct",
        Q_IN_EACH,
    ), "(/ (- q0 q1) q2)", lambda rng: (lambda e, k, b: {"a": e * k + b, "b": b, "e": e})(
        _r(rng, 2, 6), _r(rng, 2, 8), _r(rng, 2, 15))),
    "mulsub": Template("mulsub", (
        "{N}/NNP/B-NP/1/nsubj bought/VBD/B-VP/-1/root/buy {a}/CD/B-NP/3/nummod {cs}/NNS/I-NP/1/dobj "
        "of/IN/B-PP/3/prep {os}/NNS/B-NP/4/pobj ././O/1/punct",
        EACH_HOLDS,
        "{N}/NNP/B-NP/1/nsubj gave/VBD/B-VP/-1/root/give {x}/CD/B-NP/3/nummod {os}/NNS/I-NP/1/dobj "
        "to/TO/B-PP/1/prep {M}/NNP/B-NP/4/pobj ././O/1/punct",
        Q_HAVE_LEFT,
    ), "(- (* q0 q1) q2)", lambda rng: (lambda a, b: {"a": a, "b": b, "x": _r(rng, 1, a * b - 1)})(
        _r(rng, 2, 8), _r(rng, 2, 10))),
}

EXAMPLE2 = (
    "Last/JJ/B-NP/1/amod week/NN/I-NP/3/npadvmod Tom/NNP/B-NP/3/nsubj had/VBD/B-VP/-1/root/have "
    "$/$/B-NP/3/dobj 74/CD/I-NP/4/nummod ././O/3/punct",
    "He/PRP/B-NP/1/nsubj washed/VBD/B-VP/-1/root/wash cars/NNS/B-NP/1/dobj over/IN/B-PP/1/prep "
    "the/DT/B-NP/5/det weekend/NN/I-NP/3/pobj and/CC/O/1/cc now/RB/B-ADVP/8/advmod "
    "has/VBZ/B-VP/1/conj/have $/$/B-NP/8/dobj 86/CD/I-NP/9/nummod ././O/1/punct",
    "How/WRB/B-NP/1/advmod much/JJ/I-NP/2/amod money/NN/I-NP/5/dobj did/VBD/B-VP/5/aux/do "
    "he/PRP/B-NP/5/nsubj make/VB/B-VP/-1/root/make from/IN/B-PP/5/prep the/DT/B-NP/8/det "
    "job/NN/I-NP/6/pobj ?/./O/5/punct",
)


def figure3_problem(fold: int = 0) -> Problem:
    slots = {"N": "Gwen", "cs": "shelves", "os": "books", "a": "9", "x": "2", "b": "3", "d": "5"}
    sents = [s.format(**slots) for s in (FIG3_S1, FIG3_S2, FIG3_S3)]
    return build_problem("fig3", sents, "(* (+ q2 q3) q0)", fold, answer="72")


def example2_problem(fold: int = 1) -> Problem:
    return build_problem("example2", EXAMPLE2, "(- q1 q0)", fold, answer="12")


def example3_problem(fold: int = 2) -> Problem:
    slots = {"os": "apples", "o": "apple", "a": "8", "x": "11", "b": "5"}
    sents = [s.format(**slots) for s in (PILE_S1, PILE_S2, PILE_S3, PILE_Q)]
    return build_problem("example3", sents, "(+ q0 q2)", fold, answer="13")


def mini_corpus(seed: int = 7, folds: int = 3) -> list:
    """The bundled corpus: the three worked problems plus one instance of each
    template per fold."""
    rng = random.Random(seed)
    problems = [figure3_problem(0), example2_problem(1 % folds), example3_problem(2 % folds)]
    for fold in range(folds):
        for name, tpl in TEMPLATES.items():
            problems.append(tpl.instantiate(f"{name}-{fold}", fold, rng))
    return problems


def template_corpus(names, per_fold: int, folds: int = 3, seed: int = 0) -> list:
    rng = random.Random(seed)
    out = []
    for fold in range(folds):
        for k in range(per_fold):
            for name in names:
                out.append(TEMPLATES[name].instantiate(f"{name}-{fold}-{k}", fold, rng))
    return out
