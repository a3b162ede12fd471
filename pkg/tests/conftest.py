import sys

import pytest

from pnsurf.surface_models import SurfaceModel


@pytest.fixture
def elliptic_e0():
    """Bl_3 of the P^1-bundle over an elliptic curve with e = 0, with its degree-9 polarization."""
    m = SurfaceModel("ruled", 3, e=0, q=1)
    return m, m.pullback(2, 3, mults=1)


@pytest.fixture
def elliptic_e1():
    """Bl_3 of the indecomposable elliptic P^1-bundle with e = -1, L = 2C0 + 2f - sum E_i."""
    m = SurfaceModel("ruled", 3, e=-1, q=1)
    return m, m.pullback(2, 2, mults=1)


def conic_bundle(e):
    m = SurfaceModel("hirzebruch", 15, e=e)
    return m, m.pullback(2, 6 + e, mults=1)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        ok, detail = results[n]
        terminalreporter.write_line(f"criterion {n:>2}: {'PASS' if ok else 'FAIL'} ({detail})")
