"""Intersection data, homology and splice-diagram extraction for plumbings.

Matrices are stored as ``A`` (diagonal = Euler weights, 1 per edge), the
orbifold matrix ``A(M)`` being ``A`` with the column of each vertex
multiplied by its arrow degree.  Orders and splice weights are reported as
absolute values of determinants.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, prod

from .diagrams import ARROW_SUFFIX, PlumbingGraph, SpliceDiagram
from .exact import SnfResult, cf_expand, determinant, inverse, smith_normal_form

__all__ = [
    "SingularPlumbingError",
    "DegenerateShapeError",
    "IntersectionData",
    "Homology",
    "SpliceStructure",
    "SeifertData",
    "intersection_data",
    "homology",
    "orbifold_solid_torus_homology",
    "splice_edge_weight",
    "node_sign",
    "classify_shape",
    "splice_structure",
    "extract_splice",
    "underlying",
    "underlying_keeping_leaves",
    "star_plumbing",
    "seifert_homology_order",
]


class SingularPlumbingError(ValueError):
    """The intersection matrix (or a needed minor) is singular."""


class DegenerateShapeError(ValueError):
    def __init__(self, message: str, kind: str):
        super().__init__(message)
        self.kind = kind


@dataclass(frozen=True)
class IntersectionData:
    labels: tuple[str, ...]
    matrix: tuple[tuple[int, ...], ...]
    det: int
    inverse: tuple[tuple[Fraction, ...], ...] | None
    snf: SnfResult
    orbifold: bool

    def entry(self, v: str, u: str) -> Fraction:
        """``(A^-1)[v][u]``."""
        if self.inverse is None:
            raise SingularPlumbingError("intersection matrix is singular")
        i, j = self.labels.index(v), self.labels.index(u)
        return self.inverse[i][j]


def intersection_data(p: PlumbingGraph, orbifold: bool = False) -> IntersectionData:
    labels = tuple(p.vertices)
    m = p.matrix(labels, orbifold=orbifold)
    det = determinant(m)
    inv = inverse(m) if det else None
    return IntersectionData(
        labels=labels,
        matrix=tuple(tuple(r) for r in m),
        det=det,
        inverse=None if inv is None else tuple(tuple(r) for r in inv),
        snf=smith_normal_form(m),
        orbifold=orbifold,
    )


@dataclass(frozen=True)
class Homology:
    order: int | None  # None: infinite
    factors: tuple[int, ...]  # torsion invariant factors > 1
    free_rank: int = 0


def homology(p: PlumbingGraph, orbifold: bool = False) -> Homology:
    """First (orbifold) homology read off the cokernel of ``A`` or ``A(M)``."""
    data = intersection_data(p, orbifold)
    order = abs(data.det) if data.det else None
    return Homology(order, data.snf.torsion, data.snf.rank_deficiency)


def orbifold_solid_torus_homology(alpha: int, beta: int) -> tuple[int, int]:
    """``(free rank, torsion order)`` of the orbifold solid torus ``T(alpha, beta)``."""
    if alpha < 1:
        raise ValueError("alpha must be positive")
    return 1, gcd(alpha, beta)


def _subdet(p: PlumbingGraph, vertices) -> int:
    vs = sorted(vertices)
    return abs(determinant(p.matrix(vs))) if vs else 1


def _arrow_tip(v: str) -> str:
    return v + ARROW_SUFFIX


def splice_edge_weight(p: PlumbingGraph, v: str, toward: str) -> int:
    """``|det(-A(M))|`` of the part of the plumbing beyond ``v`` in direction ``toward``.

    ``toward`` is a neighbouring vertex, or ``v + '^'`` for the arrow at ``v``.
    """
    if toward == _arrow_tip(v):
        if v not in p.arrows:
            raise KeyError(f"no arrow at {v}")
        return p.arrows[v]
    if toward not in p.neighbors(v):
        raise KeyError(f"{toward} is not adjacent to {v}")
    side = p.component(v, toward)
    det = _subdet(p, side)
    if det == 0:
        raise SingularPlumbingError(f"far side of {v} towards {toward} is singular")
    return det * prod(p.degree(x) for x in side)


def node_sign(p: PlumbingGraph, v: str) -> int:
    """``-sign`` of the diagonal entry of ``A(M)^-1`` at ``v``.

    Computed by Cramer's rule from the manifold matrix; the orbifold entry
    only differs by the positive factor ``1/o_v``.
    """
    det = determinant(p.matrix())
    if det == 0:
        raise SingularPlumbingError("intersection matrix is singular")
    minor = determinant(p.matrix([x for x in p.vertices if x != v]))
    if minor == 0:
        raise SingularPlumbingError(f"diagonal inverse entry at {v} vanishes; sign undefined")
    return -1 if (minor > 0) == (det > 0) else 1


def _augmented(p: PlumbingGraph) -> dict[str, list[str]]:
    adj = {v: list(p.neighbors(v)) for v in p.vertices}
    for v in sorted(p.arrows):
        tip = _arrow_tip(v)
        adj[v].append(tip)
        adj[tip] = [v]
    return adj


def classify_shape(p: PlumbingGraph) -> str:
    """``'lens'`` (no nodes), ``'seifert'`` (one node) or ``'graph'``."""
    adj = _augmented(p)
    nodes = [v for v in p.vertices if len(adj[v]) >= 3]
    return {0: "lens", 1: "seifert"}.get(len(nodes), "graph")


@dataclass(frozen=True)
class SpliceStructure:
    """A splice diagram together with where its pieces sit in the plumbing.

    ``branches[(v, u)]`` lists the plumbing vertices strictly between node
    ``v`` and splice neighbour ``u``, read outward from ``v`` (for a leaf
    this is its string, ending at the leaf vertex).  ``leaf_vertex`` maps
    each leaf to the plumbing vertex carrying it.
    """

    diagram: SpliceDiagram
    leaf_vertex: dict[str, str]
    branches: dict[tuple[str, str], list[str]] = field(default_factory=dict)

    def string(self, p: PlumbingGraph, v: str, u: str) -> list[int]:
        """Positive string weights ``b_i`` from node ``v`` towards ``u``."""
        return [-p.euler[x] for x in self.branches[(v, u)]]


def splice_structure(p: PlumbingGraph) -> SpliceStructure:
    """Suppress valence-2 vertices and compute weights, signs and degrees."""
    adj = _augmented(p)
    nodes = [v for v in p.vertices if len(adj[v]) >= 3]
    if not nodes:
        raise DegenerateShapeError("plumbing has no nodes (lens space / string)", "lens")
    det = determinant(p.matrix())
    if det == 0:
        raise SingularPlumbingError("intersection matrix is singular; not a rational homology sphere")
    node_set = set(nodes)
    signs = {v: node_sign(p, v) for v in nodes}
    weights: dict[tuple[str, str], int] = {}
    degrees: dict[str, int] = {}
    leaf_vertex: dict[str, str] = {}
    branches: dict[tuple[str, str], list[str]] = {}
    for v in nodes:
        for u in adj[v]:
            prev, cur, path = v, u, []
            while cur not in node_set and len(adj[cur]) == 2:
                path.append(cur)
                prev, cur = cur, next(x for x in adj[cur] if x != prev)
            if cur in node_set:
                end = cur
            elif cur.endswith(ARROW_SUFFIX):
                owner = cur[: -len(ARROW_SUFFIX)]
                end = owner if owner not in node_set else cur
                leaf_vertex[end] = owner
            else:
                path.append(cur)
                end = cur
                leaf_vertex[end] = cur
            weight = splice_edge_weight(p, v, u)
            weights[(v, end)] = weight
            branches[(v, end)] = path
            if end not in node_set:
                if u.endswith(ARROW_SUFFIX):
                    degrees[end] = p.arrows[v]
                else:
                    degrees[end] = prod(p.degree(x) for x in p.component(v, u))
    return SpliceStructure(SpliceDiagram(signs, weights, degrees), leaf_vertex, branches)


def extract_splice(p: PlumbingGraph) -> SpliceDiagram:
    return splice_structure(p).diagram


def underlying(p: PlumbingGraph) -> PlumbingGraph:
    """The underlying manifold's plumbing: same graph, arrows dropped."""
    return p.without_arrows()


@dataclass(frozen=True)
class SeifertData:
    """Seifert invariants ``(1, -b), (alpha_1, beta_1), ...``."""

    b: int
    pairs: tuple[tuple[int, int], ...]

    def closed_form_order(self) -> int:
        alphas = [a for a, _ in self.pairs]
        total = self.b * prod(alphas)
        for i, (_, beta) in enumerate(self.pairs):
            total -= beta * prod(a for j, a in enumerate(alphas) if j != i)
        return abs(total)


def star_plumbing(s: SeifertData, center: str = "c") -> PlumbingGraph:
    """Star plumbing of ``s``.

    Convention: the central vertex has Euler weight ``-b`` and the arm for
    ``(alpha, beta)`` is the string of ``alpha/beta`` read outward from the
    centre, so ``|det| = |alpha_1...alpha_k (b - sum beta_i/alpha_i)|``.
    Pairs with ``beta`` outside ``[0, alpha)`` are normalised by moving
    ``floor(beta/alpha)`` into the central weight.
    """
    b = s.b
    euler = {}
    edges = []
    for i, (alpha, beta) in enumerate(s.pairs):
        if alpha < 1:
            raise ValueError(f"alpha must be positive, got {alpha}")
        q, r = divmod(beta, alpha)
        b -= q
        prev = center
        for k, w in enumerate(cf_expand(alpha, r), start=1):
            x = f"s{i}.{k}"
            euler[x] = -w
            edges.append((prev, x))
            prev = x
    euler[center] = -b
    return PlumbingGraph(euler, tuple(edges))


def seifert_homology_order(s: SeifertData) -> int:
    """``|H_1|`` of the Seifert manifold (0 when infinite)."""
    return abs(determinant(star_plumbing(s).matrix()))


def underlying_keeping_leaves(p: PlumbingGraph) -> tuple[PlumbingGraph, dict[str, str]]:
    """Underlying plumbing in which every arrow-tip leaf survives.

    An arrow on a vertex of valence at least 2 is its own leaf of the
    splice diagram; dropping it would suppress that leaf.  Instead the
    arrow is replaced by a blow-up: a new ``-1`` vertex attached to the
    carrier, whose Euler weight drops by one.  This does not change the
    underlying manifold and gives the leaf weight 1.  Returns the plumbing
    and the map from old arrow-tip leaf ids to the new vertex ids.
    """
    euler = dict(p.euler)
    edges = list(p.edges)
    rename = {}
    for v in sorted(p.arrows):
        if p.valence(v) >= 2:
            x = f"{v}.blowup"
            if x in euler:
                raise ValueError(f"vertex id {x} already in use")
            euler[x] = -1
            euler[v] -= 1
            edges.append((v, x))
            rename[_arrow_tip(v)] = x
    return PlumbingGraph(euler, tuple(edges)), rename
