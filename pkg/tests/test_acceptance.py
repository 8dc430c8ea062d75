"""Acceptance suite: one test per release criterion, each printing a
pass/fail line (visible with ``pytest -v -s tests/test_acceptance.py``).

Expected values come from hand-derived one-dimensional reductions and
from the identities being exact on finite graphs; nothing here trusts
the solver's own arithmetic as its oracle.
"""

import math
import time
import warnings
from contextlib import contextmanager
from dataclasses import dataclass

import numpy as np
import pytest

import graphbiharm as gb
from graphbiharm.spaces import SpaceSpec

IBP_TOL = 1e-10


@contextmanager
def criterion(n, name):
    try:
        yield
    except BaseException:
        print(f"[acceptance] criterion {n} ({name}): FAIL")
        raise
    print(f"[acceptance] criterion {n} ({name}): PASS")


@dataclass
class Timed:
    value: object
    elapsed: float


def _timed(fn):
    t0 = time.perf_counter()
    value = fn()
    return Timed(value=value, elapsed=time.perf_counter() - t0)


# ---------------------------------------------------------------- fixtures

@pytest.fixture(scope="module")
def p3():
    return gb.build_graph([("a", "b", 1.0), ("b", "c", 1.0)],
                          {"a": 1.0, "b": 1.0, "c": 1.0})


@pytest.fixture(scope="module")
def p3_potential(p3):
    return gb.make_potential(p3, {"a": 1.0, "b": 0.0, "c": 1.0})


@pytest.fixture(scope="module")
def dirichlet_solutions(p3):
    dom = gb.make_domain(p3, ["b"])

    def run():
        return (gb.solve_dirichlet(p3, dom, 4.0), gb.solve_dirichlet(p3, dom, 3.0))

    return _timed(run)


@pytest.fixture(scope="module")
def p3_sweep(p3, p3_potential):
    ladder = [10.0, 1e2, 1e3, 1e4, 1e5, 1e6]
    return _timed(lambda: gb.sweep(p3, p3_potential, 4.0, ladder, keep_solutions=True))


@pytest.fixture(scope="module")
def lattice():
    g = gb.grid_graph(15, 15)
    block = {f"{i}_{j}" for i in range(6, 9) for j in range(6, 9)}
    a = gb.make_potential(g, {l: (0.0 if l in block else 1.0) for l in g.labels})
    return g, a


@pytest.fixture(scope="module")
def lattice_sweep(lattice):
    g, a = lattice

    def run():
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", gb.ParameterRangeWarning)
            return gb.sweep(g, a, 4.0, [1.0, 10.0, 1e2, 1e3, 1e4], keep_solutions=True)

    return _timed(run)


# ---------------------------------------------------------------- criteria

def test_criterion_1_integration_by_parts_suite():
    with criterion(1, "integration-by-parts residuals on 200 random graphs"):
        rng = np.random.default_rng(2024)
        t0 = time.perf_counter()
        for _ in range(200):
            g = gb.random_graph(rng, n_max=50, weight_range=(0.5, 2.0),
                                mu_range=(0.5, 2.0))
            u = gb.vertex_function(g, rng.standard_normal(g.n_vertices))
            v = gb.vertex_function(g, rng.standard_normal(g.n_vertices))
            size = int(rng.integers(1, g.n_vertices + 1))
            interior = rng.choice(g.n_vertices, size=size, replace=False)
            dom = gb.make_domain(g, interior.astype(np.intp))
            v_dom = gb.vertex_function(g, v.values * dom.interior_mask)
            for res in (gb.check_ibp(g, u, v), gb.check_ibp(g, u, v_dom, dom)):
                for name, r, scale in res.pairs():
                    assert abs(r) <= IBP_TOL * scale, (name, r, scale)
        elapsed = time.perf_counter() - t0
        assert elapsed < 5.0, f"suite took {elapsed:.2f}s"


def test_criterion_2_p3_dirichlet_closed_form(dirichlet_solutions):
    with criterion(2, "P3 Dirichlet closed forms"):
        sol4, sol3 = dirichlet_solutions.value
        # p = 4: 9 s^2 = s^4 at s = 3, energy (9/2)*9 - 81/4 = 20.25
        assert sol4.converged
        assert sol4.energy == pytest.approx(20.25, abs=1e-8)
        field = sol4.u.values
        target = np.array([0.0, 3.0, 0.0])
        assert min(np.max(np.abs(s * field - target)) for s in (1.0, -1.0)) <= 1e-6
        # p = 3: 9 s^2 = s^3 at s = 9, energy (1/2 - 1/3) * 9 * 81 = 121.5
        assert sol3.converged
        assert sol3.energy == pytest.approx(121.5, abs=1e-8)
        assert abs(sol3.u["b"]) == pytest.approx(9.0, abs=1e-6)
        assert dirichlet_solutions.elapsed < 1.0


def test_criterion_3_p3_coupling_sweep(p3_sweep):
    with criterion(3, "P3 coupling sweep toward the Dirichlet limit"):
        report = p3_sweep.value
        rows = report.rows
        assert all(r.converged for r in rows)
        ms = [r.m_lambda for r in rows]
        # (i) nondecreasing
        assert all(m2 >= m1 - 1e-9 for m1, m2 in zip(ms, ms[1:]))
        # (ii) never above the Dirichlet level
        assert all(m <= report.m_omega + 1e-9 for m in ms)
        # (iii) within 1% at the top of the ladder
        assert abs(ms[-1] - 20.25) <= 0.01 * 20.25
        # (iv) concentration metrics shrink across the ladder
        assert rows[-1].tail < rows[0].tail
        assert rows[-1].exterior_mass < rows[0].exterior_mass
        # (v) field close to the limit state after sign alignment
        assert rows[-1].diff_w22 <= 0.15
        assert p3_sweep.elapsed < 10.0


def test_criterion_4_lattice_concentration(lattice_sweep):
    with criterion(4, "15x15 lattice concentration"):
        report = lattice_sweep.value
        rows = report.rows
        assert all(r.converged for r in rows)
        exts = [r.exterior_mass for r in rows]
        assert all(e2 < e1 for e1, e2 in zip(exts, exts[1:]))
        assert exts[-1] < 0.05
        ms = [r.m_lambda for r in rows]
        assert all(m2 >= m1 - 1e-9 for m1, m2 in zip(ms, ms[1:]))
        assert all(m <= report.m_omega + 1e-9 for m in ms)
        assert lattice_sweep.elapsed < 60.0


def test_criterion_5_embedding_and_lower_bounds(p3, dirichlet_solutions,
                                                p3_sweep, lattice, lattice_sweep):
    with criterion(5, "embedding inequality and ground-state lower bounds"):
        rng = np.random.default_rng(77)
        qs = [2.0, 3.0, 4.0, 7.0, math.inf]
        violations = 0
        for _ in range(500):
            g = gb.random_graph(rng, n_max=30)
            u = gb.vertex_function(g, rng.standard_normal(g.n_vertices))
            a = gb.make_potential(g, rng.uniform(0.0, 3.0, g.n_vertices))
            lam = float(10.0 ** rng.uniform(0.0, 6.0))
            q = qs[int(rng.integers(0, len(qs)))]
            lq = gb.norm(g, u, SpaceSpec.lebesgue(q))
            en = gb.norm(g, u, SpaceSpec.energy(a, lam))
            if lq > gb.embedding_constant(g, q) * en * (1.0 + 1e-12):
                violations += 1
        assert violations == 0

        # lower bounds on every converged solution produced by criteria 2-4
        sol4, sol3 = dirichlet_solutions.value
        lattice_g, _ = lattice
        witnesses = [(p3, 4.0, sol4), (p3, 3.0, sol3),
                     (p3, 4.0, p3_sweep.value.dirichlet),
                     (lattice_g, 4.0, lattice_sweep.value.dirichlet)]
        witnesses += [(p3, 4.0, r.solution) for r in p3_sweep.value.rows]
        witnesses += [(lattice_g, 4.0, r.solution) for r in lattice_sweep.value.rows]
        for g, p, sol in witnesses:
            assert sol is not None and sol.converged
            eta = gb.embedding_constant(g, p)
            nu = (1.0 / eta) ** (p / (p - 2.0))
            floor = (0.5 - 1.0 / p) * (1.0 / eta) ** (2.0 * p / (p - 2.0))
            assert sol.energy_norm >= nu * (1.0 - 1e-9), (p, sol.energy_norm, nu)
            assert sol.energy >= floor * (1.0 - 1e-9), (p, sol.energy, floor)


def test_criterion_6_gradient_and_projection_consistency():
    with criterion(6, "gradient and Nehari-projection consistency"):
        rng = np.random.default_rng(123)
        h = 1e-5
        for _ in range(100):
            g = gb.random_graph(rng, n_max=20)
            a = gb.make_potential(g, rng.uniform(0.0, 2.0, g.n_vertices))
            p = float(rng.uniform(2.5, 6.0))
            params = gb.ProblemParams(a=a, lam=float(rng.uniform(1.5, 50.0)), p=p)
            u = gb.vertex_function(g, rng.standard_normal(g.n_vertices))
            v = gb.vertex_function(g, rng.standard_normal(g.n_vertices))

            # directional derivative vs central finite differences
            r = gb.energy_gradient(g, u, params)
            pairing = gb.integrate(g, gb.vertex_function(g, r.values * v.values))
            fd = (gb.energy(g, u + h * v, params) - gb.energy(g, u + (-h) * v, params)) / (2 * h)
            assert pairing == pytest.approx(fd, rel=1e-6, abs=1e-7 * max(1.0, abs(fd)))

            # closed-form Nehari identity at 1e-10 relative
            spec = SpaceSpec.energy(a, params.lam)
            quotient = gb.norm(g, u, spec) ** 2 / gb.norm(g, u, SpaceSpec.lebesgue(p)) ** 2
            t, proj = gb.nehari_project(g, u, params)
            expected = (0.5 - 1.0 / p) * quotient ** (p / (p - 2.0))
            assert gb.energy(g, proj, params) == pytest.approx(expected, rel=1e-10)

            # the projected point sits on the manifold
            e2 = gb.norm(g, proj, spec) ** 2
            pp = gb.norm(g, proj, SpaceSpec.lebesgue(p)) ** p
            assert abs(e2 - pp) / e2 <= 1e-10


def test_criterion_7_cutoff_density():
    with criterion(7, "cutoff density on a 200-vertex path"):
        g = gb.path_graph(200)
        d = gb.distances_from(g, "0").astype(np.float64)
        u = gb.vertex_function(g, np.exp2(-d))
        radius = int(d.max())
        norms = []
        for k in range(1, 111):
            eta = gb.cutoff(g, "0", k)
            diff = gb.vertex_function(g, u.values * eta.values - u.values)
            norms.append(gb.norm(g, diff, SpaceSpec.w22()))
        for n1, n2 in zip(norms, norms[1:]):
            assert n2 <= n1 * (1.0 + 1e-12) + 1e-300
        for k in range(1, 111):
            if 2 * k > radius:
                assert norms[k - 1] < 1e-6
