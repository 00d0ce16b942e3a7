"""Budgets, cancellation and check results shared by the engines."""

from __future__ import annotations

import threading
import time
from dataclasses import dataclass


class Budget:
    """Wall-clock deadline plus a cooperative cancellation flag.

    Engines poll :meth:`expired` at iteration boundaries and give up
    quietly when it returns true.
    """

    def __init__(self, seconds: float | None = None, cancel: threading.Event | None = None):
        self.deadline = None if seconds is None else time.monotonic() + seconds
        self.cancel = cancel if cancel is not None else threading.Event()

    def expired(self) -> bool:
        if self.cancel.is_set():
            return True
        return self.deadline is not None and time.monotonic() >= self.deadline

    def remaining(self) -> float | None:
        if self.deadline is None:
            return None
        return max(0.0, self.deadline - time.monotonic())

    def child(self, seconds: float | None) -> "Budget":
        """A budget ending at the earlier of ``seconds`` from now and our deadline."""
        b = Budget(seconds, self.cancel)
        if self.deadline is not None and (b.deadline is None or b.deadline > self.deadline):
            b.deadline = self.deadline
        return b


UNLIMITED = None  # pass ``budget=None`` for no limit


class Exhausted(Exception):
    """Raised inside an engine when its budget runs out."""


@dataclass(frozen=True)
class CheckResult:
    valid: bool
    reason: str | None = None
    witness: object = None

    def __bool__(self) -> bool:
        return self.valid

    def __str__(self) -> str:
        return "VALID" if self.valid else f"INVALID({self.reason})"


VALID = CheckResult(True)


def invalid(reason: str, witness=None) -> CheckResult:
    return CheckResult(False, reason, witness)
