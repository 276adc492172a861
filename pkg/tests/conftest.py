from __future__ import annotations

import os

import pytest
from hypothesis import HealthCheck, settings

from reebscope.polytope import del_pezzo, family_cfo, family_gmsw, family_qpq

settings.register_profile(
    "default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.register_profile("thorough", max_examples=400, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

ACCEPTANCE_LINES: list[str] = []


def corpus():
    """Named diagrams shared by the cross-route and brute-force checks."""
    out = {f"Q{k}": del_pezzo(k) for k in range(1, 6)}
    for r in (1, 2):
        for s in (2, 3, 4):
            out[f"P{r},{s}"] = family_cfo(r, s)
    for p in range(2, 6):
        for q in range(1, p):
            out[f"Y{p},{q}"] = family_gmsw(p, q)
    out["Q21a"] = family_qpq(2, 1, "q1-segment")
    out["Q21b"] = family_qpq(2, 1, "odd-segment")
    return out


CORPUS = corpus()


@pytest.fixture(params=sorted(CORPUS), ids=sorted(CORPUS))
def corpus_diagram(request):
    return CORPUS[request.param]


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
