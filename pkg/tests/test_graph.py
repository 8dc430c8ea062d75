import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import graphbiharm as gb
import _oracles


class TestBuildGraph:
    def test_p3(self, p3):
        assert p3.n_vertices == 3
        assert p3.n_edges == 2
        assert p3.mu_min == 1.0
        assert p3.max_weight_sum == 2.0

    def test_duplicate_edge(self):
        with pytest.raises(gb.DuplicateEdgeError):
            gb.build_graph([("a", "b", 1.0), ("a", "b", 2.0)], {"a": 1, "b": 1})

    def test_asymmetric_restatement(self):
        with pytest.raises(gb.AsymmetricWeightError):
            gb.build_graph([("a", "b", 1.0), ("b", "a", 2.0)], {"a": 1, "b": 1})

    def test_symmetric_restatement_collapses(self):
        g = gb.build_graph([("a", "b", 1.5), ("b", "a", 1.5)], {"a": 1, "b": 1})
        assert g.n_edges == 1

    def test_self_loop(self):
        with pytest.raises(gb.SelfLoopError):
            gb.build_graph([("a", "a", 1.0)], {"a": 1})

    def test_nonpositive_weight(self):
        with pytest.raises(gb.NonpositiveWeightError):
            gb.build_graph([("a", "b", 0.0)], {"a": 1, "b": 1})

    def test_nonpositive_measure(self):
        with pytest.raises(gb.NonpositiveMeasureError):
            gb.build_graph([("a", "b", 1.0)], {"a": 1.0, "b": 0.0})

    def test_unknown_endpoint(self):
        with pytest.raises(gb.UnknownVertexError):
            gb.build_graph([("a", "z", 1.0)], {"a": 1, "b": 1})

    def test_disconnected(self):
        with pytest.raises(gb.DisconnectedGraphError):
            gb.build_graph([("a", "b", 1.0)], {"a": 1, "b": 1, "c": 1})

    def test_single_vertex_no_edges(self):
        g = gb.build_graph([], {"x": 2.0})
        assert g.n_vertices == 1
        assert g.n_edges == 0
        assert g.max_weight_sum == 0.0

    def test_grid_counts(self):
        # lattice edge count by formula: 2 * 15 * 14
        g = gb.grid_graph(15, 15)
        assert g.n_vertices == 225
        assert g.n_edges == 2 * 15 * 14 == 420

    def test_arrays_immutable(self, p3):
        with pytest.raises(ValueError):
            p3.mu[0] = 5.0


class TestDistance:
    def test_p3_endpoints(self, p3):
        assert gb.distance(p3, "a", "c") == 2

    def test_identity(self, p3):
        assert gb.distance(p3, "a", "a") == 0

    def test_grid_corners_manhattan(self):
        g = gb.grid_graph(15, 15)
        # oracle: BFS distance on the lattice is the Manhattan distance
        assert gb.distance(g, "0_0", "14_14") == abs(14 - 0) + abs(14 - 0) == 28

    def test_unknown(self, p3):
        with pytest.raises(gb.UnknownVertexError):
            gb.distance(p3, "a", "zzz")

    @settings(max_examples=40, deadline=None)
    @given(seed=st.integers(0, 10**9))
    def test_triangle_inequality(self, seed):
        rng = np.random.default_rng(seed)
        g = gb.random_graph(rng, n_max=50)
        idx = rng.integers(0, g.n_vertices, size=3)
        x, y, z = (g.labels[i] for i in idx)
        assert gb.distance(g, x, z) <= gb.distance(g, x, y) + gb.distance(g, y, z)


class TestDomain:
    def test_p3_middle(self, p3):
        dom = gb.make_domain(p3, ["b"])
        assert set(dom.boundary_labels) == {"a", "c"}
        assert set(dom.interior_labels) == {"b"}

    def test_whole_graph_empty_boundary(self, p3):
        dom = gb.make_domain(p3, ["a", "b", "c"])
        assert dom.boundary.size == 0
        assert dom.closure.size == 3

    def test_grid_center_block(self):
        g = gb.grid_graph(15, 15)
        block = [f"{i}_{j}" for i in range(6, 9) for j in range(6, 9)]
        dom = gb.make_domain(g, block)
        oracle = _oracles.boundary_set(g, g.indices_of(block))
        assert set(dom.boundary.tolist()) == oracle
        assert dom.boundary.size == 12

    def test_empty_interior(self, p3):
        with pytest.raises(gb.EmptyInteriorError):
            gb.make_domain(p3, [])

    def test_boundary_idempotent(self, p3):
        dom1 = gb.make_domain(p3, ["b"])
        dom2 = gb.make_domain(p3, dom1.interior_labels)
        assert np.array_equal(dom1.boundary, dom2.boundary)
        assert np.array_equal(dom1.closure, dom2.closure)

    def test_interior_disjoint_from_boundary(self, p3):
        dom = gb.make_domain(p3, ["b"])
        assert not set(dom.interior.tolist()) & set(dom.boundary.tolist())


class TestPotential:
    def test_negative_rejected(self, p3):
        with pytest.raises(gb.NegativePotentialError):
            gb.make_potential(p3, {"a": -1.0, "b": 0.0, "c": 0.0})

    def test_well_indices(self, p3, p3_well_potential):
        assert [p3.labels[i] for i in p3_well_potential.well] == ["b"]

    def test_missing_vertex(self, p3):
        with pytest.raises(gb.UnknownVertexError):
            gb.make_potential(p3, {"a": 1.0, "b": 0.0})


class TestValidateAssumptions:
    def test_connected_well(self, p3, p3_well_potential):
        rep = gb.validate_assumptions(p3, p3_well_potential)
        assert rep.well == ("b",)
        assert rep.well_connected
        assert rep.well_bounded
        assert rep.min_outside_well == 1.0
        assert rep.ok

    def test_disconnected_well_flagged(self, p3):
        a = gb.make_potential(p3, {"a": 0.0, "b": 1.0, "c": 0.0})
        rep = gb.validate_assumptions(p3, a)
        assert set(rep.well) == {"a", "c"}
        assert not rep.well_connected
        assert not rep.ok
        assert any("not connected" in w for w in rep.warnings)

    def test_growth_proxy_on_grid(self):
        g = gb.grid_graph(9, 9)
        d = gb.distances_from(g, "4_4")
        a = gb.make_potential(g, (d.astype(float)) ** 2)
        rep = gb.validate_assumptions(g, a)
        assert rep.well == ("4_4",)
        # a = d^2 grows strictly along BFS rings around the well
        assert rep.ring_min == tuple(float(k * k) for k in range(1, len(rep.ring_min) + 1))
        assert rep.growth_monotone

    def test_wrong_graph(self, p3, p3_well_potential):
        other = gb.path_graph(3)
        with pytest.raises(gb.GraphMismatchError):
            gb.validate_assumptions(other, p3_well_potential)
