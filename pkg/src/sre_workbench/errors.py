"""Shared error types for resource guards and solver verdicts."""

import os


class ExplosionGuard(Exception):
    """Raised when an intermediate object count exceeds a configured cap."""

    def __init__(self, what: str, count: int, cap: int):
        super().__init__(f"{what}: reached {count} objects, cap is {cap}")
        self.what = what
        self.count = count
        self.cap = cap


class GenerationFailed(Exception):
    """Raised when a randomized graph generator exhausts its retry budget."""


class ExtractionError(Exception):
    """A constructive solution transformation received an invalid input."""


class HallViolatorMissing(ExtractionError):
    """No deficient color set exists at some node; the input was not a
    valid lifted solution."""


class OrderingStuck(ExtractionError):
    """The degeneracy-style elimination ordering has no admissible next
    node; the input was not a valid solution."""


class TypeClassificationImpossible(ExtractionError):
    """A peeling step could not rewrite the solution consistently."""


class Indeterminate(Exception):
    """A search ran out of budget; distinct from a definitive absence."""

    def __init__(self, what: str, stats: dict | None = None):
        super().__init__(f"budget exhausted during {what}")
        self.what = what
        self.stats = stats or {}


def guard_labels(default: int = 12) -> int:
    return int(os.environ.get("SRE_GUARD_LABELS", default))


def guard_nodes(default: int = 40) -> int:
    return int(os.environ.get("SRE_GUARD_NODES", default))


def budget_ms(default: int = 600_000) -> int:
    return int(os.environ.get("SRE_BUDGET_MS", default))
