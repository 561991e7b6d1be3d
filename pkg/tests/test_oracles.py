from __future__ import annotations

import pytest

from nippas.oracles import SUITES, Check


def test_check_below():
    assert Check.below("x", 1e-9, 1e-8).passed
    assert not Check.below("x", float("nan"), 1e-8).passed


@pytest.mark.parametrize("suite", ["greville", "theorem1", "quadrature"])
def test_suite_passes(suite):
    checks = SUITES[suite]()
    assert checks and all(c.passed for c in checks), checks
