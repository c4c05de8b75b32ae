"""
Timer module for KID Verifier.
Implements per-suite wall-clock timing for log output.
"""

import time


class Timer:
    """
    Measures how long each suite takes.

    Responsibility: Track elapsed time per labelled lap

    OOP Principles Applied:
    - Single Responsibility: Only manages time tracking
    - Encapsulation: Timer state is private

    Timings are logged only; reports stay free of them so reruns compare equal.

    Attributes:
        _started: Start time of each running lap
        _laps: Finished laps in completion order
    """

    def __init__(self):
        """Initialize Timer with no laps."""
        self._started: dict[str, float] = {}
        self._laps: list[tuple[str, float]] = []

    def start(self, label: str) -> None:
        """Start (or restart) the lap called label."""
        self._started[label] = time.perf_counter()

    def stop(self, label: str) -> float:
        """
        Finish a lap.

        Returns:
            float: Seconds since start(label), or 0.0 if it was never started
        """
        begin = self._started.pop(label, None)
        if begin is None:
            return 0.0
        elapsed = time.perf_counter() - begin
        self._laps.append((label, elapsed))
        return elapsed

    @property
    def laps(self) -> list[tuple[str, float]]:
        return list(self._laps)

    def total(self) -> float:
        return sum(elapsed for _, elapsed in self._laps)

    def get_summary(self) -> str:
        """
        Get formatted timing summary.

        Returns:
            str: One "label: seconds" line per lap
        """
        return "\n".join(f"{label}: {elapsed:.2f}s" for label, elapsed in self._laps)

    @property
    def is_running(self) -> bool:
        return bool(self._started)
