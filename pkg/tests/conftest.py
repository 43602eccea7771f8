import pytest

from splitvote.modmath import FIXTURE_FIELD


@pytest.fixture
def field():
    return FIXTURE_FIELD


class ScriptedRandom:
    """Feeds predetermined draws to code expecting a Random."""

    def __init__(self, values):
        self.values = list(values)

    def randrange(self, start, stop=None):
        value = self.values.pop(0)
        lo, hi = (0, start) if stop is None else (start, stop)
        assert lo <= value < hi, f"scripted value {value} outside [{lo}, {hi})"
        return value
