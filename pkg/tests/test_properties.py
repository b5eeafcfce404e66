"""Fast randomized sanity runs of the shared law suites (the full
1000-case acceptance gate lives in test_acceptance)."""

import pytest

from law_suites import LAW_SUITES


@pytest.mark.parametrize("name,runner", LAW_SUITES,
                         ids=[name for name, _ in LAW_SUITES])
def test_law_suite_sample(name, runner):
    assert runner(60) == 60
