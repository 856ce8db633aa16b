import importlib
import os
import sys

import numpy as np
import pytest
from hypothesis import HealthCheck, settings, strategies as st

sys.path.insert(0, os.path.dirname(__file__))

from bbqmis import _pykernels, kernels  # noqa: E402
from bbqmis.graph import Graph, from_edges  # noqa: E402

# the backend fixtures only hand out modules, so sharing them across examples is safe
settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.function_scoped_fixture])
settings.load_profile("default")

try:
    _compiled = importlib.import_module("bbqmis._kernels")
except ImportError:
    _compiled = None

BACKENDS = [pytest.param(_pykernels, id="python")]
BACKENDS.append(pytest.param(_compiled, id="cython",
                             marks=pytest.mark.skipif(_compiled is None, reason="extension not built")))


@pytest.fixture(params=BACKENDS)
def backend(request):
    return request.param


@pytest.fixture(params=BACKENDS)
def forced_backend(request, monkeypatch):
    """Route the dispatching ``kernels`` module through one backend."""
    monkeypatch.setattr(kernels, "_fast", request.param)
    return request.param


@st.composite
def graphs(draw, min_n=0, max_n=10):
    n = draw(st.integers(min_n, max_n))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    mask = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return from_edges(n, [p for p, keep in zip(pairs, mask) if keep])


def random_graph(rng, n, p):
    iu = np.triu_indices(n, 1)
    keep = rng.random(iu[0].size) < p
    return from_edges(n, zip(iu[0][keep].tolist(), iu[1][keep].tolist()))


def relabel(g: Graph, perm):
    """Isomorphic copy with vertex ``i`` moved to ``perm[i]``."""
    return from_edges(g.n, [(perm[i], perm[j]) for i, j in g.edges()])


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.RESULTS:
        terminalreporter.write_line(line)
