"""Sobolev and Lebesgue norms on the graph, and the explicit embedding
constants guaranteed by the uniformly positive measure."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .calculus import VertexFunction, _check_bound, _gamma, _lap
from .errors import (
    ConfigError,
    GraphMismatchError,
    NonzeroOutsideDomainError,
    ParameterRangeWarning,
    QOutOfRangeError,
)
from .graph import Domain, Graph, Potential


@dataclass(frozen=True, eq=False)
class SpaceSpec:
    """Which norm to evaluate.

    Use the classmethod constructors; ``kind`` is one of ``w12``, ``w22``,
    ``energy`` (the potential-coupled second-order norm), ``dirichlet``
    (second-order norm of functions vanishing outside a domain),
    ``w12_zero``, and ``lebesgue``.
    """

    kind: str
    a: Potential | None = None
    lam: float | None = None
    domain: Domain | None = None
    q: float | None = None
    subset: np.ndarray | None = None

    @classmethod
    def w12(cls) -> "SpaceSpec":
        return cls(kind="w12")

    @classmethod
    def w22(cls) -> "SpaceSpec":
        return cls(kind="w22")

    @classmethod
    def energy(cls, a: Potential, lam: float) -> "SpaceSpec":
        """Norm with density |Lu|^2 + |grad u|^2 + (lam*a + 1) u^2."""
        lam = float(lam)
        if lam <= 0.0:
            raise ConfigError("coupling lambda must be > 0")
        if lam < 1.0:
            warnings.warn(
                "coupling lambda < 1 is admissible but outside the assumed regime",
                ParameterRangeWarning,
                stacklevel=2,
            )
        return cls(kind="energy", a=a, lam=lam)

    @classmethod
    def dirichlet(cls, domain: Domain) -> "SpaceSpec":
        """Second-order norm over the closure plus L2 over the interior,
        for functions vanishing outside the interior."""
        return cls(kind="dirichlet", domain=domain)

    @classmethod
    def w12_zero(cls, domain: Domain) -> "SpaceSpec":
        return cls(kind="w12_zero", domain=domain)

    @classmethod
    def lebesgue(cls, q: float, subset=None) -> "SpaceSpec":
        q = float(q)
        if not (q >= 1.0 or math.isinf(q)):
            raise QOutOfRangeError("Lebesgue exponent must satisfy q >= 1 (or inf)")
        return cls(kind="lebesgue", q=q, subset=subset)


def _enforce_supported(g: Graph, vals: np.ndarray, domain: Domain) -> None:
    if domain.graph is not g:
        raise GraphMismatchError("domain built on a different graph")
    if np.any((vals != 0.0) & ~domain.interior_mask):
        raise NonzeroOutsideDomainError(
            "function must vanish outside the domain interior for this norm"
        )


def _resolve_subset(g: Graph, spec: SpaceSpec) -> np.ndarray | None:
    if spec.subset is None:
        return None
    return g.indices_of(spec.subset)


def inner_product(g: Graph, u: VertexFunction, v: VertexFunction, spec: SpaceSpec) -> float:
    """Bilinear form of the requested Hilbert norm (Lebesgue only for q=2)."""
    uvals = _check_bound(g, u)
    vvals = _check_bound(g, v)
    kind = spec.kind
    if kind == "lebesgue":
        if spec.q != 2.0:
            raise ConfigError("inner product requires q = 2")
        idx = _resolve_subset(g, spec)
        if idx is None:
            return float(np.sum(g.mu * uvals * vvals))
        return float(np.sum(g.mu[idx] * uvals[idx] * vvals[idx]))
    if kind == "w12":
        gam = _gamma(g, uvals, vvals)
        return float(np.sum(g.mu * (gam + uvals * vvals)))
    if kind == "w22":
        gam = _gamma(g, uvals, vvals)
        lu, lv = _lap(g, uvals), _lap(g, vvals)
        return float(np.sum(g.mu * (lu * lv + gam + uvals * vvals)))
    if kind == "energy":
        if spec.a.graph is not g:
            raise GraphMismatchError("potential bound to a different graph")
        gam = _gamma(g, uvals, vvals)
        lu, lv = _lap(g, uvals), _lap(g, vvals)
        w = spec.lam * spec.a.values + 1.0
        return float(np.sum(g.mu * (lu * lv + gam + w * uvals * vvals)))
    if kind in ("dirichlet", "w12_zero"):
        dom = spec.domain
        _enforce_supported(g, uvals, dom)
        _enforce_supported(g, vvals, dom)
        gam = _gamma(g, uvals, vvals)
        cl, it = dom.closure, dom.interior
        second = float(np.sum(g.mu[cl] * gam[cl]))
        if kind == "dirichlet":
            lu, lv = _lap(g, uvals), _lap(g, vvals)
            second += float(np.sum(g.mu[cl] * (lu * lv)[cl]))
        return second + float(np.sum(g.mu[it] * (uvals * vvals)[it]))
    raise ConfigError(f"unknown space kind {kind!r}")


def norm(g: Graph, u: VertexFunction, spec: SpaceSpec) -> float:
    """Evaluate the requested norm by its defining finite sum."""
    if spec.kind == "lebesgue":
        uvals = _check_bound(g, u)
        idx = _resolve_subset(g, spec)
        vals = uvals if idx is None else uvals[idx]
        if math.isinf(spec.q):
            return float(np.max(np.abs(vals))) if vals.size else 0.0
        mu = g.mu if idx is None else g.mu[idx]
        return float(np.sum(mu * np.abs(vals) ** spec.q) ** (1.0 / spec.q))
    return math.sqrt(max(inner_product(g, u, u, spec), 0.0))


def embedding_constant(g: Graph, q: float) -> float:
    """Constant eta_q with ||u||_q <= eta_q * ||u||_energy for every u and
    every admissible coupling, derived from the minimum vertex measure:
    eta_q = mu_min^((2-q)/(2q)) for finite q >= 2 and mu_min^(-1/2) for q = inf.
    """
    q = float(q)
    if math.isinf(q):
        return g.mu_min ** (-0.5)
    if q < 2.0:
        raise QOutOfRangeError("embedding constant defined for q in [2, inf]")
    return g.mu_min ** ((2.0 - q) / (2.0 * q))
