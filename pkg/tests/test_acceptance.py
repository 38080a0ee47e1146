"""Acceptance criteria, one test per criterion.

Each check prints a ``[PASS]``/``[FAIL]`` line; under pytest the lines are
collected and repeated in the terminal summary. Run this file directly to
get the lines without pytest.
"""

import pytest

from contextual_qsd import acceptance

ORDER = [
    "check_interval_equal_prior_c06",
    "check_interval_unequal_prior",
    "check_interval_confusability_scan",
    "check_theorem1_oracle",
    "check_quantum_oracle",
    "check_regional_formulas",
    "check_theorem2_oracle",
    "check_mixed_shrinking",
    "check_balanced_emergence",
    "check_structural_invariants",
]

RESULTS = []


@pytest.mark.parametrize("name", ORDER, ids=[f"criterion{i + 1}" for i in range(len(ORDER))])
def test_criterion(name):
    res = getattr(acceptance, name)()
    line = res.line()
    RESULTS.append(line)
    print(line)
    assert res.passed, line


if __name__ == "__main__":
    for name in ORDER:
        print(getattr(acceptance, name)().line(), flush=True)
