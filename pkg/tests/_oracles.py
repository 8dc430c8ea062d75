"""Brute-force reference implementations used to compute expected values.

Everything here works on plain Python dicts and loops, independently of the
package's CSR kernels, so tests can check the fast path against a slow one
that transcribes the defining formulas directly.
"""

import math


def adjacency(g):
    """vertex index -> list of (neighbor index, weight)."""
    adj = {x: [] for x in range(g.n_vertices)}
    for i, j, w in g.edge_list():
        adj[i].append((j, w))
        adj[j].append((i, w))
    return adj


def laplacian(g, vals):
    adj = adjacency(g)
    out = []
    for x in range(g.n_vertices):
        s = sum(w * (vals[y] - vals[x]) for y, w in adj[x])
        out.append(s / g.mu[x])
    return out


def gamma(g, uvals, vvals):
    adj = adjacency(g)
    out = []
    for x in range(g.n_vertices):
        s = sum(w * (uvals[y] - uvals[x]) * (vvals[y] - vvals[x]) for y, w in adj[x])
        out.append(s / (2.0 * g.mu[x]))
    return out


def integral(g, vals, subset=None):
    idx = range(g.n_vertices) if subset is None else subset
    return sum(g.mu[x] * vals[x] for x in idx)


def boundary_set(g, interior_indices):
    interior = set(int(i) for i in interior_indices)
    adj = adjacency(g)
    out = set()
    for x in interior:
        for y, _ in adj[x]:
            if y not in interior:
                out.add(y)
    return out


def lq_norm(g, vals, q, subset=None):
    idx = range(g.n_vertices) if subset is None else subset
    if math.isinf(q):
        return max((abs(vals[x]) for x in idx), default=0.0)
    return sum(g.mu[x] * abs(vals[x]) ** q for x in idx) ** (1.0 / q)


def energy_quadratic(g, vals, weight):
    """int (|Lu|^2 + |grad u|^2 + weight*u^2) dmu by the defining sums."""
    lap_u = laplacian(g, vals)
    gam_u = gamma(g, vals, vals)
    return sum(
        g.mu[x] * (lap_u[x] ** 2 + gam_u[x] + weight[x] * vals[x] ** 2)
        for x in range(g.n_vertices)
    )


def coupled_energy(g, vals, avals, lam, p):
    weight = [lam * avals[x] + 1.0 for x in range(g.n_vertices)]
    quad = energy_quadratic(g, vals, weight)
    return 0.5 * quad - sum(g.mu[x] * abs(vals[x]) ** p for x in range(g.n_vertices)) / p
