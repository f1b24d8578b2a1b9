from __future__ import annotations

import pytest

from stringyk.acceptance import CRITERIA, run_criterion


@pytest.mark.parametrize("n", sorted(CRITERIA))
def test_criterion(n, request):
    r = run_criterion(n, seed=0)
    print(r.line())
    request.config._acceptance_lines = getattr(request.config, "_acceptance_lines", []) + [(n, r.line())]
    assert r.passed, r.detail
