import numpy as np
import pytest
from hypothesis import settings, strategies as st

from cmcuts.graph import MultiGraph

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


def cycle(n):
    return MultiGraph(n, [(i, (i + 1) % n) for i in range(n)])


def path(n):
    return MultiGraph(n, [(i, i + 1) for i in range(n - 1)])


def complete(n):
    return MultiGraph(n, [(a, b) for a in range(n) for b in range(a + 1, n)])


@st.composite
def multigraphs(draw, max_n=9, max_m=14, min_n=1):
    n = draw(st.integers(min_n, max_n))
    edges = draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=max_m))
    return MultiGraph(n, edges)


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


KERNEL_NAMES = ("peel_core", "bfs_levels", "two_color", "count_cycles", "maxcut_flip",
                "bisect_swap", "maxcut_exhaustive")


@pytest.fixture(params=["python", "cython"])
def backend(request, monkeypatch):
    """Route cmcuts.kernels through one backend for the duration of a test."""
    from cmcuts import kernels

    mod = kernels.available_backends().get(request.param)
    if mod is None:
        pytest.skip(f"{request.param} backend not built")
    for name in KERNEL_NAMES:
        monkeypatch.setattr(kernels, name, getattr(mod, name))
    return request.param


ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        ok, line = ACCEPTANCE[num]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} criterion {num:>2}: {line}")
