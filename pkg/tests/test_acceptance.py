"""Every shipped guarantee, one test per criterion.

``pytest -v`` prints a pass/fail line per criterion; the same registry backs
``egr selftest``.
"""

import pytest

from excessgrowth.acceptance import CRITERIA


@pytest.mark.parametrize(
    ("number", "check"),
    [(number, fn) for number, _, fn in CRITERIA],
    ids=[f"{number:02d}-{slug}" for number, slug, _ in CRITERIA],
)
def test_criterion(number, check):
    check()


def test_registry_is_complete_and_ordered():
    assert [number for number, _, _ in CRITERIA] == list(range(1, 15))
    assert len({slug for _, slug, _ in CRITERIA}) == len(CRITERIA)
