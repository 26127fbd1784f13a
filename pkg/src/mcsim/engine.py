"""Deterministic discrete-event core: event queue, clock, seeded random streams."""

from __future__ import annotations

import hashlib
import heapq
import random

_PENDING = 0
_FIRED = 1
_CANCELLED = 2


class EventHandle:
    """Ticket for a scheduled event; pass back to :meth:`Simulator.cancel`."""

    __slots__ = ("fire_time", "order", "fn", "state")

    def __init__(self, fire_time, order, fn):
        self.fire_time = fire_time
        self.order = order
        self.fn = fn
        self.state = _PENDING

    @property
    def pending(self):
        return self.state == _PENDING


def stream_seed(base_seed: int, label: tuple) -> int:
    """Derive a 64-bit seed from (base_seed, label), stable across processes.

    Python's built-in hash() is salted per process, so we hash the textual
    label with blake2s instead.
    """
    text = str(base_seed) + "|" + "/".join(str(part) for part in label)
    return int.from_bytes(hashlib.blake2s(text.encode()).digest()[:8], "big")


class Simulator:
    """Single-threaded event loop with a monotone clock.

    Events fire in (fire_time, insertion order) lexicographic order, never by
    payload content, so replaying the same schedule reproduces the identical
    dispatch sequence.
    """

    def __init__(self, seed: int = 0):
        self.now = 0.0
        self.seed = seed
        self._heap: list[tuple[float, int, EventHandle]] = []
        self._order = 0
        self._streams: dict[tuple, random.Random] = {}

    def stream(self, *label) -> random.Random:
        """Named random stream, one per (entity, purpose).

        The same (seed, label) pair always yields the identical sequence, and
        distinct labels are independent, so adding a consumer of one stream
        cannot perturb draws seen by another.
        """
        rng = self._streams.get(label)
        if rng is None:
            rng = random.Random(stream_seed(self.seed, label))
            self._streams[label] = rng
        return rng

    def schedule(self, fire_time: float, fn) -> EventHandle:
        """Schedule fn() at fire_time. fire_time < now is a logic bug."""
        if fire_time < self.now:
            raise ValueError(
                f"cannot schedule event at t={fire_time!r} before now={self.now!r}"
            )
        handle = EventHandle(fire_time, self._order, fn)
        self._order += 1
        heapq.heappush(self._heap, (fire_time, handle.order, handle))
        return handle

    def schedule_in(self, delay: float, fn) -> EventHandle:
        return self.schedule(self.now + delay, fn)

    def cancel(self, handle: EventHandle) -> bool:
        """Returns True iff the event had not fired (nor been cancelled) yet."""
        if handle.state != _PENDING:
            return False
        handle.state = _CANCELLED
        return True

    def run_until(self, t_end: float) -> None:
        """Dispatch every event with fire_time <= t_end; leave clock at t_end."""
        if t_end < self.now:
            raise ValueError(f"run_until({t_end!r}) before now={self.now!r}")
        heap = self._heap
        while heap and heap[0][0] <= t_end:
            fire_time, _, handle = heapq.heappop(heap)
            if handle.state != _PENDING:
                continue
            self.now = fire_time
            handle.state = _FIRED
            handle.fn()
        self.now = t_end

    def pending_count(self) -> int:
        return sum(1 for _, _, h in self._heap if h.state == _PENDING)
