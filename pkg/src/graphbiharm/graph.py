"""Finite weighted measured graphs, domains, potentials, and validity checks.

A graph here is always finite, connected, undirected, with symmetric positive
edge weights and a uniformly positive vertex measure. Vertices carry arbitrary
hashable labels externally and are mapped to a dense index 0..n-1 internally;
all arrays are indexed by that dense index.
"""

from __future__ import annotations

from collections import deque
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    AsymmetricWeightError,
    DisconnectedGraphError,
    DuplicateEdgeError,
    EmptyInteriorError,
    GraphConstructionError,
    GraphMismatchError,
    NegativePotentialError,
    NonpositiveMeasureError,
    NonpositiveWeightError,
    SelfLoopError,
    UnknownVertexError,
)


def _frozen(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class Graph:
    """Immutable weighted measured graph in CSR adjacency form.

    Attributes
    ----------
    labels : tuple
        External label of each vertex, position = dense index.
    indptr, indices, weights : ndarray
        CSR adjacency: the neighbors of vertex ``x`` are
        ``indices[indptr[x]:indptr[x+1]]`` with matching ``weights``,
        sorted by neighbor index. Every undirected edge appears twice.
    row : ndarray
        Source vertex of each CSR entry (used by the numpy kernels).
    mu : ndarray
        Vertex measure, strictly positive.
    weight_sums : ndarray
        Per-vertex sum of incident edge weights.
    """

    labels: tuple
    indptr: np.ndarray
    indices: np.ndarray
    weights: np.ndarray
    row: np.ndarray
    mu: np.ndarray
    weight_sums: np.ndarray
    mu_min: float
    max_weight_sum: float
    n_edges: int
    _index: dict = field(repr=False)

    @property
    def n_vertices(self) -> int:
        return len(self.labels)

    def index(self, label) -> int:
        """Dense index of a vertex label."""
        try:
            return self._index[label]
        except KeyError:
            raise UnknownVertexError(f"unknown vertex {label!r}") from None

    def indices_of(self, labels: Iterable) -> np.ndarray:
        """Dense indices of an iterable of labels (or pass an index array through)."""
        if isinstance(labels, np.ndarray) and labels.dtype != object:
            idx = labels.astype(np.intp)
            if idx.size and (idx.min() < 0 or idx.max() >= self.n_vertices):
                raise UnknownVertexError("vertex index out of range")
            return idx
        return np.array([self.index(l) for l in labels], dtype=np.intp)

    def neighbors(self, x: int) -> tuple[np.ndarray, np.ndarray]:
        lo, hi = self.indptr[x], self.indptr[x + 1]
        return self.indices[lo:hi], self.weights[lo:hi]

    def edge_list(self) -> list[tuple[int, int, float]]:
        """Undirected edges as (i, j, weight) with i < j, ascending."""
        out = []
        for x in range(self.n_vertices):
            nbrs, ws = self.neighbors(x)
            for y, w in zip(nbrs, ws):
                if x < y:
                    out.append((x, int(y), float(w)))
        return out

    def __repr__(self) -> str:  # keep array dumps out of test output
        return f"Graph(n_vertices={self.n_vertices}, n_edges={self.n_edges})"


def build_graph(edges: Iterable[tuple], measure) -> Graph:
    """Validate and assemble a Graph.

    Parameters
    ----------
    edges : iterable of (x, y, weight)
        Undirected edges by vertex label. Listing an edge in both
        orientations is allowed only with bit-equal weights.
    measure : mapping label -> mu, or sequence of mu
        Defines the vertex set and its measure. With a sequence, labels are
        0..n-1. Order fixes the dense index.

    Raises
    ------
    SelfLoopError, DuplicateEdgeError, AsymmetricWeightError,
    NonpositiveWeightError, NonpositiveMeasureError, UnknownVertexError,
    DisconnectedGraphError, GraphConstructionError
    """
    if isinstance(measure, Mapping):
        labels = tuple(measure.keys())
        mu = np.array([float(measure[l]) for l in labels], dtype=np.float64)
    elif isinstance(measure, (Sequence, np.ndarray)):
        mu = np.asarray(measure, dtype=np.float64).copy()
        labels = tuple(range(mu.shape[0]))
    else:
        raise GraphConstructionError("measure must be a mapping or a sequence")
    n = len(labels)
    if n == 0:
        raise GraphConstructionError("graph needs at least one vertex")
    if not np.all(np.isfinite(mu)) or np.any(mu <= 0.0):
        raise NonpositiveMeasureError("vertex measure must be finite and > 0")
    index = {l: i for i, l in enumerate(labels)}
    if len(index) != n:
        raise GraphConstructionError("duplicate vertex label in measure")

    seen: dict[tuple[int, int], tuple[float, set]] = {}
    for x, y, w in edges:
        try:
            i, j = index[x], index[y]
        except KeyError as exc:
            raise UnknownVertexError(f"edge endpoint {exc.args[0]!r} not a vertex") from None
        if i == j:
            raise SelfLoopError(f"self loop at vertex {x!r}")
        w = float(w)
        if not np.isfinite(w) or w <= 0.0:
            raise NonpositiveWeightError(f"edge ({x!r}, {y!r}) has weight {w}")
        key = (i, j) if i < j else (j, i)
        if key in seen:
            w0, orients = seen[key]
            if (i, j) in orients:
                raise DuplicateEdgeError(f"edge ({x!r}, {y!r}) given twice")
            if w != w0:
                raise AsymmetricWeightError(
                    f"edge ({x!r}, {y!r}): weights {w} and {w0} for the two orientations"
                )
            orients.add((i, j))
        else:
            seen[key] = (w, {(i, j)})

    nnz = 2 * len(seen)
    adj: list[list[tuple[int, float]]] = [[] for _ in range(n)]
    for (i, j), (w, _) in seen.items():
        adj[i].append((j, w))
        adj[j].append((i, w))
    indptr = np.zeros(n + 1, dtype=np.intp)
    indices = np.empty(nnz, dtype=np.intp)
    weights = np.empty(nnz, dtype=np.float64)
    row = np.empty(nnz, dtype=np.intp)
    pos = 0
    for x in range(n):
        adj[x].sort()
        for y, w in adj[x]:
            indices[pos] = y
            weights[pos] = w
            row[pos] = x
            pos += 1
        indptr[x + 1] = pos

    # connectivity (BFS from vertex 0); a single vertex is connected
    if n > 1:
        dist = _bfs(indptr, indices, np.array([0], dtype=np.intp))
        if np.any(dist < 0):
            k = int(np.sum(dist < 0))
            raise DisconnectedGraphError(f"graph is disconnected ({k} unreachable vertices)")

    wsums = np.bincount(row, weights=weights, minlength=n) if nnz else np.zeros(n)
    return Graph(
        labels=labels,
        indptr=_frozen(indptr),
        indices=_frozen(indices),
        weights=_frozen(weights),
        row=_frozen(row),
        mu=_frozen(mu),
        weight_sums=_frozen(wsums),
        mu_min=float(mu.min()),
        max_weight_sum=float(wsums.max()) if n else 0.0,
        n_edges=len(seen),
        _index=index,
    )


def _bfs(indptr: np.ndarray, indices: np.ndarray, sources: np.ndarray) -> np.ndarray:
    """Edge-count distances from a source set; -1 where unreachable."""
    n = indptr.shape[0] - 1
    dist = np.full(n, -1, dtype=np.intp)
    q = deque()
    for s in sources:
        dist[s] = 0
        q.append(int(s))
    while q:
        x = q.popleft()
        dx = dist[x]
        for e in range(indptr[x], indptr[x + 1]):
            y = indices[e]
            if dist[y] < 0:
                dist[y] = dx + 1
                q.append(int(y))
    return dist


def distances_from(g: Graph, x) -> np.ndarray:
    """BFS distances (edge counts) from vertex ``x`` to every vertex."""
    src = np.array([g.index(x)], dtype=np.intp)
    return _bfs(g.indptr, g.indices, src)


def distance(g: Graph, x, y) -> int:
    """Minimal number of edges connecting two vertices."""
    ix, iy = g.index(x), g.index(y)
    if ix == iy:
        return 0
    return int(_bfs(g.indptr, g.indices, np.array([ix], dtype=np.intp))[iy])


@dataclass(frozen=True, eq=False)
class Domain:
    """A vertex subset with its derived boundary.

    ``interior`` is the given set Omega, ``boundary`` the vertices outside
    Omega adjacent to it, ``closure`` their union; all sorted ascending by
    dense index.
    """

    graph: Graph
    interior: np.ndarray
    boundary: np.ndarray
    closure: np.ndarray
    interior_mask: np.ndarray
    closure_mask: np.ndarray
    interior_connected: bool

    @property
    def interior_labels(self) -> tuple:
        return tuple(self.graph.labels[i] for i in self.interior)

    @property
    def boundary_labels(self) -> tuple:
        return tuple(self.graph.labels[i] for i in self.boundary)

    def __repr__(self) -> str:
        return f"Domain(|interior|={self.interior.size}, |boundary|={self.boundary.size})"


def _induced_connected(g: Graph, mask: np.ndarray) -> bool:
    sub = np.flatnonzero(mask)
    if sub.size <= 1:
        return sub.size == 1
    dist = np.full(g.n_vertices, -1, dtype=np.intp)
    start = int(sub[0])
    dist[start] = 0
    q = deque([start])
    seen = 1
    while q:
        x = q.popleft()
        for e in range(g.indptr[x], g.indptr[x + 1]):
            y = int(g.indices[e])
            if mask[y] and dist[y] < 0:
                dist[y] = dist[x] + 1
                q.append(y)
                seen += 1
    return seen == sub.size


def make_domain(g: Graph, interior: Iterable) -> Domain:
    """Build a Domain from an interior vertex set; derives the boundary.

    The boundary is exactly the set of vertices outside the interior with a
    neighbor inside it.
    """
    idx = np.unique(g.indices_of(interior))
    if idx.size == 0:
        raise EmptyInteriorError("domain interior is empty")
    imask = np.zeros(g.n_vertices, dtype=bool)
    imask[idx] = True
    bmask = np.zeros(g.n_vertices, dtype=bool)
    # neighbors of interior vertices that are not interior themselves
    for x in idx:
        lo, hi = g.indptr[x], g.indptr[x + 1]
        bmask[g.indices[lo:hi]] = True
    bmask &= ~imask
    boundary = np.flatnonzero(bmask).astype(np.intp)
    closure = np.flatnonzero(imask | bmask).astype(np.intp)
    cmask = imask | bmask
    return Domain(
        graph=g,
        interior=_frozen(idx.astype(np.intp)),
        boundary=_frozen(boundary),
        closure=_frozen(closure),
        interior_mask=_frozen(imask),
        closure_mask=_frozen(cmask),
        interior_connected=_induced_connected(g, imask),
    )


@dataclass(frozen=True, eq=False)
class Potential:
    """Nonnegative per-vertex potential; the zero set is the well."""

    graph: Graph
    values: np.ndarray
    well: np.ndarray  # indices where the potential vanishes exactly

    def __repr__(self) -> str:
        return f"Potential(|well|={self.well.size})"


def make_potential(g: Graph, values) -> Potential:
    """Build a Potential from a mapping, sequence, or scalar.

    A mapping must cover every vertex. Values must be nonnegative.
    """
    if isinstance(values, Mapping):
        missing = [l for l in g.labels if l not in values]
        if missing:
            raise UnknownVertexError(f"potential missing at {missing[:3]!r}...")
        a = np.array([float(values[l]) for l in g.labels], dtype=np.float64)
    elif np.isscalar(values):
        a = np.full(g.n_vertices, float(values), dtype=np.float64)
    else:
        a = np.asarray(values, dtype=np.float64).copy()
        if a.shape != (g.n_vertices,):
            raise GraphConstructionError("potential length does not match vertex count")
    if not np.all(np.isfinite(a)) or np.any(a < 0.0):
        raise NegativePotentialError("potential must be finite and >= 0")
    well = np.flatnonzero(a == 0.0).astype(np.intp)
    return Potential(graph=g, values=_frozen(a), well=_frozen(well))


@dataclass(frozen=True)
class AssumptionReport:
    """Result of checking the standing assumptions on (graph, potential).

    Well boundedness is trivially true on a finite graph and recorded as
    such; the growth condition at infinity cannot be verified on a finite
    truncation, so ``ring_min``/``growth_monotone`` report a proxy: the
    minimum of the potential on each BFS ring around the well.
    """

    well: tuple
    well_connected: bool
    well_bounded: bool
    min_outside_well: float | None
    ring_min: tuple[float, ...]
    growth_monotone: bool
    warnings: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return bool(self.well) and self.well_connected


def validate_assumptions(g: Graph, a: Potential) -> AssumptionReport:
    """Check the potential-well assumptions on a finite graph."""
    if a.graph is not g:
        raise GraphMismatchError("potential bound to a different graph")
    warnings: list[str] = []
    well = a.well
    if well.size == 0:
        warnings.append("potential well is empty")
        return AssumptionReport(
            well=(),
            well_connected=False,
            well_bounded=True,
            min_outside_well=float(a.values.min()),
            ring_min=(),
            growth_monotone=False,
            warnings=tuple(warnings),
        )
    wmask = np.zeros(g.n_vertices, dtype=bool)
    wmask[well] = True
    connected = _induced_connected(g, wmask)
    if not connected:
        warnings.append("potential well is not connected")
    outside = a.values[~wmask]
    min_outside = float(outside.min()) if outside.size else None
    dist = _bfs(g.indptr, g.indices, well)
    rings: list[float] = []
    for d in range(1, int(dist.max()) + 1 if dist.size else 1):
        on_ring = a.values[dist == d]
        if on_ring.size:
            rings.append(float(on_ring.min()))
    monotone = all(rings[i + 1] >= rings[i] for i in range(len(rings) - 1))
    if rings and not monotone:
        warnings.append("potential growth proxy is not monotone along BFS rings")
    return AssumptionReport(
        well=tuple(g.labels[i] for i in well),
        well_connected=connected,
        well_bounded=True,
        min_outside_well=min_outside,
        ring_min=tuple(rings),
        growth_monotone=monotone,
        warnings=tuple(warnings),
    )


def path_graph(n: int, weight: float = 1.0, mu: float = 1.0) -> Graph:
    """Path on n vertices labeled '0'..'n-1', uniform weight and measure."""
    labels = [str(i) for i in range(n)]
    edges = [(labels[i], labels[i + 1], weight) for i in range(n - 1)]
    return build_graph(edges, {l: mu for l in labels})


def grid_graph(nx: int, ny: int, weight: float = 1.0, mu: float = 1.0) -> Graph:
    """nx-by-ny lattice with labels 'i_j', uniform weight and measure."""
    labels = [f"{i}_{j}" for i in range(nx) for j in range(ny)]
    edges = []
    for i in range(nx):
        for j in range(ny):
            if i + 1 < nx:
                edges.append((f"{i}_{j}", f"{i + 1}_{j}", weight))
            if j + 1 < ny:
                edges.append((f"{i}_{j}", f"{i}_{j + 1}", weight))
    return build_graph(edges, {l: mu for l in labels})


def random_graph(rng: np.random.Generator, n_max: int = 50,
                 weight_range: tuple[float, float] = (0.5, 2.0),
                 mu_range: tuple[float, float] = (0.5, 2.0),
                 extra_edge_factor: float = 1.0) -> Graph:
    """Random connected graph: a random spanning tree plus extra edges.

    Used by the identity-verification suite and the property tests.
    """
    n = int(rng.integers(1, n_max + 1))
    mu = rng.uniform(*mu_range, size=n)
    edges: dict[tuple[int, int], float] = {}
    for i in range(1, n):
        j = int(rng.integers(0, i))
        edges[(j, i)] = float(rng.uniform(*weight_range))
    n_extra = int(rng.integers(0, max(1, int(extra_edge_factor * n))))
    for _ in range(n_extra):
        i, j = rng.integers(0, n, size=2)
        if i == j:
            continue
        key = (min(int(i), int(j)), max(int(i), int(j)))
        if key not in edges:
            edges[key] = float(rng.uniform(*weight_range))
    return build_graph([(i, j, w) for (i, j), w in edges.items()], list(mu))
