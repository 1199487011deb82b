"""
Truncation schedule parsing.
Handles comma lists ("5,10,25"), ranges ("10:50:10") and dyadic checkpoints.
"""

import re
from typing import List, Optional, Sequence

from operators.operator_models import MAX_TRUNCATION, TruncationSchedule
from utils.errors import ScheduleError


class ScheduleParser:
    """Parse schedule strings into strictly increasing truncation schedules."""

    RANGE_RE = re.compile(r'^(\d+):(\d+)(?::(\d+))?$')

    @classmethod
    def parse(cls, text: Optional[str], cap: int = MAX_TRUNCATION) -> TruncationSchedule:
        """
        Parse a schedule string.

        Args:
            text: "5,10,25" or "start:stop[:step]" (stop inclusive), or a mix of both
            cap: Largest allowed n

        Returns:
            TruncationSchedule

        Raises:
            ScheduleError: empty, malformed, unordered or over the cap
        """
        if text is None or not text.strip():
            raise ScheduleError("Truncation schedule is empty")

        ns: List[int] = []
        for part in text.split(','):
            part = part.strip()
            if not part:
                raise ScheduleError(f"Empty entry in schedule {text!r}")
            ns.extend(cls._parse_range(part) or cls._parse_int(part))

        return TruncationSchedule(tuple(ns), cap)

    @classmethod
    def _parse_range(cls, part: str) -> Optional[List[int]]:
        """Parse 'start:stop[:step]' with stop included."""
        match = cls.RANGE_RE.match(part)
        if not match:
            return None
        start, stop, step = match.groups()
        step = int(step) if step else 1
        if step < 1:
            raise ScheduleError(f"Range step must be positive in {part!r}")
        return list(range(int(start), int(stop) + 1, step))

    @staticmethod
    def _parse_int(part: str) -> List[int]:
        if not re.match(r'^\d+$', part):
            raise ScheduleError(f"Not a positive integer: {part!r}")
        return [int(part)]

    @staticmethod
    def from_list(ns: Sequence[int], cap: int = MAX_TRUNCATION) -> TruncationSchedule:
        return TruncationSchedule(tuple(int(n) for n in ns), cap)

    @staticmethod
    def dyadic(start: int, cap: int) -> List[int]:
        """
        Dyadic checkpoints start, 2*start, ... up to cap.

        Args:
            start: First checkpoint (>= 1)
            cap: Last allowed checkpoint

        Returns:
            Checkpoint list (nonempty when start <= cap)
        """
        if start < 1 or cap < start:
            raise ScheduleError(f"Bad dyadic range: start={start}, cap={cap}")
        points = []
        n = start
        while n <= cap:
            points.append(n)
            n *= 2
        return points
