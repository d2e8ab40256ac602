"""Exception types raised across the package."""


class MonotreeError(Exception):
    pass


# expression trees
class DivByZero(MonotreeError, ZeroDivisionError):
    pass


class TooManyQuantities(MonotreeError):
    pass


class MissingQuantity(MonotreeError, KeyError):
    pass


class LeafSetMismatch(MonotreeError):
    pass


class TreeSyntaxError(MonotreeError, ValueError):
    pass


# corpus
class FormatError(MonotreeError, ValueError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class CorpusErrors(FormatError):
    """Aggregate of per-record failures from one corpus file."""

    def __init__(self, errors):
        self.errors = list(errors)
        lines = "; ".join(str(e) for e in self.errors[:5])
        more = f" (+{len(self.errors) - 5} more)" if len(self.errors) > 5 else ""
        super().__init__(f"{len(self.errors)} bad record(s): {lines}{more}")


class GoldMismatch(FormatError):
    pass


class InvalidGold(FormatError):
    pass


# schema extraction
class CyclicHeads(MonotreeError):
    pass


class NoQuestion(MonotreeError):
    pass


# features / learning
class OrderViolation(MonotreeError, ValueError):
    pass


class EmptyClass(MonotreeError, ValueError):
    pass


class UnknownLabel(MonotreeError, KeyError):
    pass


class VersionMismatch(MonotreeError):
    pass


# inference
class TooFewQuantities(MonotreeError):
    pass


class NoEvaluableCandidate(MonotreeError):
    pass


# evaluation
class MissingFolds(MonotreeError):
    pass


class UnknownGroup(MonotreeError, ValueError):
    pass
