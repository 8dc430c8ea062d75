import numpy as np
import pytest

import graphbiharm as gb


@pytest.fixture
def p3():
    """Path a-b-c with unit weights and unit measure."""
    return gb.build_graph([("a", "b", 1.0), ("b", "c", 1.0)],
                          {"a": 1.0, "b": 1.0, "c": 1.0})


@pytest.fixture
def p3_well_potential(p3):
    """Potential (1, 0, 1): the well is the middle vertex."""
    return gb.make_potential(p3, {"a": 1.0, "b": 0.0, "c": 1.0})


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_graph_and_fields(rng, n_max=50):
    g = gb.random_graph(rng, n_max=n_max)
    u = gb.vertex_function(g, rng.standard_normal(g.n_vertices))
    v = gb.vertex_function(g, rng.standard_normal(g.n_vertices))
    return g, u, v
