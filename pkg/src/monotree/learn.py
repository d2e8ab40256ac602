"""One-vs-all linear margin classifiers over sparse named features.

Training is L2-regularised hinge loss minimised by stochastic subgradient
descent.  The step size at update ``t`` is ``lr / (1 + lr * reg * t)`` and
shuffling is seeded, so (data, config) fully determine the weights.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional, Sequence

from .errors import EmptyClass, UnknownLabel, VersionMismatch

RELEVANT = "RELEVANT"
IRRELEVANT = "IRRELEVANT"
REL_CLASSES = (IRRELEVANT, RELEVANT)

MODEL_HEADER = "monotree-model v1"


@dataclass(frozen=True)
class TrainerConfig:
    epochs: int = 50
    learning_rate: float = 0.1
    regularization: float = 1e-4
    seed: int = 13


@dataclass
class LinearModel:
    classes: tuple
    weights: dict  # class -> {feature: weight}
    bias: dict  # class -> float
    config: TrainerConfig = field(default_factory=TrainerConfig)

    def margin(self, fv: dict, cls: str) -> float:
        if cls not in self.weights:
            raise UnknownLabel(cls)
        w = self.weights[cls]
        return sum(w.get(k, 0.0) * v for k, v in fv.items()) + self.bias[cls]

    def margins(self, fv: dict) -> dict:
        return {c: self.margin(fv, c) for c in self.classes}

    def predict(self, fv: dict) -> str:
        m = self.margins(fv)
        return max(self.classes, key=lambda c: m[c])


def zero_model(classes: Sequence[str], config: TrainerConfig = TrainerConfig()) -> LinearModel:
    return LinearModel(tuple(classes), {c: {} for c in classes}, {c: 0.0 for c in classes}, config)


def train(examples: Iterable, config: TrainerConfig = TrainerConfig(),
          classes: Optional[Sequence[str]] = None) -> LinearModel:
    """Fit one hinge-loss scorer per class on ``(features, label)`` pairs."""
    data = [(dict(fv), str(label)) for fv, label in examples]
    present = {y for _, y in data}
    classes = tuple(classes) if classes is not None else tuple(sorted(present))
    missing = [c for c in classes if c not in present]
    if missing or not classes:
        raise EmptyClass(f"no training examples for {missing or 'any class'}")
    unknown = present - set(classes)
    if unknown:
        raise UnknownLabel(f"labels outside the class set: {sorted(unknown)}")

    # w_c = scale_c * v_c keeps the L2 shrink O(1) per step
    v = {c: {} for c in classes}
    scale = {c: 1.0 for c in classes}
    bias = {c: 0.0 for c in classes}
    rng = random.Random(config.seed)
    order = list(range(len(data)))
    t = 0
    for epoch in range(1, config.epochs + 1):
        rng.shuffle(order)
        for i in order:
            fv, label = data[i]
            eta = config.learning_rate / (1.0 + config.learning_rate * config.regularization * t)
            shrink = 1.0 - eta * config.regularization
            t += 1
            for c in classes:
                y = 1.0 if label == c else -1.0
                vc = v[c]
                m = y * (scale[c] * sum(vc.get(k, 0.0) * x for k, x in fv.items()) + bias[c])
                scale[c] *= shrink
                if m < 1.0:
                    step = eta * y / scale[c]
                    for k, x in fv.items():
                        vc[k] = vc.get(k, 0.0) + step * x
                    bias[c] += eta * y
        for c in classes:
            if scale[c] < 1e-6:
                v[c] = {k: w * scale[c] for k, w in v[c].items()}
                scale[c] = 1.0
    weights = {c: {k: w * scale[c] for k, w in v[c].items() if w != 0.0} for c in classes}
    return LinearModel(classes, weights, bias, config)


def score_rel(model: LinearModel, fv: dict) -> float:
    """Irrelevance score: positive when the quantity looks unused."""
    return model.margin(fv, IRRELEVANT) - model.margin(fv, RELEVANT)


def score_pair(model: LinearModel, fv: dict, op, normalized: bool = False) -> float:
    name = getattr(op, "name", op)
    if name not in model.weights:
        raise UnknownLabel(name)
    if not normalized:
        return model.margin(fv, name)
    m = model.margins(fv)
    top = max(m.values())
    z = sum(math.exp(x - top) for x in m.values())
    return math.exp(m[name] - top) / z


# ---------------------------------------------------------------------------
# persistence


def save_model(model: LinearModel, path) -> None:
    c = model.config
    lines = [
        MODEL_HEADER,
        f"config\tepochs={c.epochs}\tlearning_rate={c.learning_rate!r}\tregularization={c.regularization!r}"
        f"\tseed={c.seed}",
        "classes\t" + "\t".join(model.classes),
    ]
    for cls in model.classes:
        lines.append(f"bias\t{cls}\t{model.bias[cls]!r}")
    for cls in model.classes:
        for feat in sorted(model.weights[cls]):
            lines.append(f"w\t{cls}\t{feat}\t{model.weights[cls][feat]!r}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_model(path) -> LinearModel:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines or lines[0].strip() != MODEL_HEADER:
        got = lines[0].strip() if lines else "<empty>"
        raise VersionMismatch(f"{path}: expected {MODEL_HEADER!r}, found {got!r}")
    config = TrainerConfig()
    classes, weights, bias = (), {}, {}
    for n, line in enumerate(lines[1:], 2):
        if not line:
            continue
        parts = line.split("\t")
        kind = parts[0]
        try:
            if kind == "config":
                kv = dict(p.split("=", 1) for p in parts[1:])
                config = TrainerConfig(int(kv["epochs"]), float(kv["learning_rate"]),
                                       float(kv["regularization"]), int(kv["seed"]))
            elif kind == "classes":
                classes = tuple(parts[1:])
                weights = {c: {} for c in classes}
            elif kind == "bias":
                bias[parts[1]] = float(parts[2])
            elif kind == "w":
                weights[parts[1]][parts[2]] = float(parts[3])
            else:
                raise ValueError(f"unknown record {kind!r}")
        except (KeyError, IndexError, ValueError) as e:
            raise ValueError(f"{path}:{n}: malformed model line ({e})") from None
    for c in classes:
        bias.setdefault(c, 0.0)
    return LinearModel(classes, weights, bias, config)
