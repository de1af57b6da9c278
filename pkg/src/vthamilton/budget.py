from __future__ import annotations

import time


class BudgetExhausted(RuntimeError):
    """A search ran out of time; its answer is unknown, not negative."""


class CapabilityError(RuntimeError):
    """Input is beyond a configured search bound."""


class Deadline:
    """Wall-clock budget shared by nested searches.

    ``check()`` is cheap enough to call from inner loops: the clock is only
    read every ``stride`` calls.
    """

    def __init__(self, seconds: float | None = None, stride: int = 256):
        self.seconds = seconds
        self.expires = None if seconds is None else time.monotonic() + seconds
        self.stride = stride
        self._ticks = 0

    @classmethod
    def coerce(cls, budget: Deadline | float | None) -> Deadline:
        if isinstance(budget, Deadline):
            return budget
        return cls(budget)

    def expired(self) -> bool:
        return self.expires is not None and time.monotonic() >= self.expires

    def check(self):
        if self.expires is None:
            return
        self._ticks += 1
        if self._ticks >= self.stride:
            self._ticks = 0
            if time.monotonic() >= self.expires:
                raise BudgetExhausted(f"search exceeded its {self.seconds:g} s budget")

    def sub(self, seconds: float | None) -> Deadline:
        """A child deadline that never outlives this one."""
        if seconds is None:
            child = Deadline(None, self.stride)
            child.expires, child.seconds = self.expires, self.seconds
            return child
        child = Deadline(seconds, self.stride)
        if self.expires is not None and self.expires < child.expires:
            child.expires = self.expires
        return child
