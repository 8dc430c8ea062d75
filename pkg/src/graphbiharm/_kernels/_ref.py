"""Pure-numpy kernels; same contracts as the compiled module.

Per-edge contributions are accumulated with ``np.bincount``, which adds in
input order, i.e. ascending (vertex, neighbor) just like the compiled loop.
"""

import numpy as np


def laplacian(indptr, indices, weights, row, mu, u, out=None):
    # (Lu)(x) = (1/mu(x)) * sum_y w_xy (u(y) - u(x))
    contrib = weights * (u[indices] - u[row])
    acc = np.bincount(row, weights=contrib, minlength=mu.shape[0])
    if out is None:
        return acc / mu
    np.divide(acc, mu, out=out)
    return out


def gradient_form(indptr, indices, weights, row, mu, u, v, out=None):
    # Gamma(u,v)(x) = (1/(2 mu(x))) * sum_y w_xy (u(y)-u(x)) (v(y)-v(x));
    # the difference product is formed first so the result is bit-symmetric in (u, v)
    contrib = weights * ((u[indices] - u[row]) * (v[indices] - v[row]))
    acc = np.bincount(row, weights=contrib, minlength=mu.shape[0])
    if out is None:
        return acc / (2.0 * mu)
    np.divide(acc, 2.0 * mu, out=out)
    return out
