"""Exit criteria: one PASS/FAIL line per criterion (run with -s to see them)."""
import pytest

from mwave.acceptance import CRITERIA
from mwave.spectral_core import mexican
from mwave.transform import localization_report


@pytest.mark.parametrize("criterion", CRITERIA, ids=[c.__name__ for c in CRITERIA])
def test_criterion(criterion):
    result = criterion()
    print(result.line())
    assert result.passed, result.line()
    assert result.within_budget, result.line()


def test_report_literal_torus_symbol():
    """f(s) = s e^{-s} taken literally on the unit torus; reported, not gated."""
    import numpy as np

    rep = localization_report(mexican(1), "torus2", np.geomspace(0.05, 1.0, 12), 3, resolution=256)
    print(f"[INFO] torus2 mexican:1 (unit-torus eigenvalues) localization ratio {rep.ratio:.3g}")
    assert rep.ratio > 0
