"""Invariants and conditions computed directly on a splice diagram."""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd, prod

from .diagrams import DiagramValidationError, SpliceDiagram
from .exact import gcd_all
from .plumbing import DegenerateShapeError
from .semigroup import representations

__all__ = [
    "LinkingData",
    "EndReport",
    "ConditionReport",
    "InconsistentOrbifoldError",
    "linking_number",
    "linking_numbers",
    "edge_determinant",
    "ideal_generator",
    "semigroup_generators",
    "check_conditions",
    "underlying_splice",
    "reduce_splice",
]

DEFAULT_CAP = 64


class InconsistentOrbifoldError(ValueError):
    pass


def _off_path_weights(g: SpliceDiagram, path: list[str], skip_ends: bool) -> int:
    on_path = set(zip(path, path[1:])) | set(zip(path[1:], path))
    out = 1
    for i, x in enumerate(path):
        if not g.is_node(x):
            continue
        if skip_ends and (i == 0 or i == len(path) - 1):
            continue
        for y in g.neighbors(x):
            if (x, y) not in on_path:
                out *= g.weight(x, y)
    return out


def linking_number(g: SpliceDiagram, v: str, w: str, prime: bool = False) -> int:
    """``l_vw`` (or ``l'_vw`` with ``prime=True``); 1 when ``v == w``."""
    if v == w:
        return 1
    return _off_path_weights(g, g.path(v, w), skip_ends=prime)


@dataclass(frozen=True)
class LinkingData:
    l: dict[tuple[str, str], int]
    l_prime: dict[tuple[str, str], int]


def linking_numbers(g: SpliceDiagram) -> LinkingData:
    vs = g.vertices
    l = {}
    lp = {}
    for v in vs:
        for w in vs:
            l[(v, w)] = linking_number(g, v, w)
            lp[(v, w)] = linking_number(g, v, w, prime=True)
    return LinkingData(l, lp)


def edge_determinant(g: SpliceDiagram, a: str, b: str) -> int:
    """``r0 r1 - eps0 eps1 * (other weights at a) * (other weights at b)``."""
    if not (g.is_node(a) and g.is_node(b)) or b not in g.neighbors(a):
        raise DiagramValidationError(f"{a}-{b} is not an edge between two nodes", (a, b))
    others_a = prod(g.weight(a, u) for u in g.neighbors(a) if u != b)
    others_b = prod(g.weight(b, u) for u in g.neighbors(b) if u != a)
    return g.weight(a, b) * g.weight(b, a) - g.sign(a) * g.sign(b) * others_a * others_b


def semigroup_generators(g: SpliceDiagram, v: str, u: str) -> tuple[list[str], list[int]]:
    """Leaves of the far side of ``v`` towards ``u`` and their ``l'_vw``."""
    leaves = g.far_leaves(v, u)
    return leaves, [linking_number(g, v, w, prime=True) for w in leaves]


def ideal_generator(g: SpliceDiagram, v: str, u: str) -> int:
    """Positive generator of the ideal spanned by ``l'_vw`` over far leaves ``w``."""
    _, gens = semigroup_generators(g, v, u)
    if not gens:
        raise ValueError(f"no leaves beyond {v} towards {u}")
    return gcd_all(gens)


@dataclass
class EndReport:
    """Data at one end (vertex ``v``, towards ``u``) of an edge."""

    vertex: str
    toward: str
    ideal_generator: int
    weight: int | None = None  # d_ve, only at nodes
    divisible: bool | None = None
    semigroup: bool | None = None
    leaves: list[str] = field(default_factory=list)
    generators: list[int] = field(default_factory=list)
    witnesses: list[tuple[int, ...]] = field(default_factory=list)


@dataclass
class ConditionReport:
    edge_determinants: dict[tuple[str, str], int]
    ends: list[EndReport]
    ideal_condition: bool
    semigroup_condition: bool
    singularity_link: bool
    realizability_screen: bool
    screen_failures: list[str]
    cap: int
    notes: list[str] = field(default_factory=list)

    def end(self, v: str, u: str) -> EndReport:
        return next(e for e in self.ends if e.vertex == v and e.toward == u)


def check_conditions(g: SpliceDiagram, cap: int = DEFAULT_CAP) -> ConditionReport:
    dets = {(a, b): edge_determinant(g, a, b) for a, b in g.node_edges}
    negative = [v for v in g.nodes if g.sign(v) < 0]
    notes = []
    if negative:
        notes.append("negative node signs (" + ", ".join(negative) + "): semigroup condition not checked")

    ends = []
    for v in g.vertices:
        for u in g.neighbors(v):
            leaves, gens = semigroup_generators(g, v, u)
            end = EndReport(v, u, gcd_all(gens), leaves=leaves, generators=gens)
            if g.is_node(v):
                d = g.weight(v, u)
                end.weight = d
                end.divisible = d % end.ideal_generator == 0
                if not negative:
                    end.witnesses = representations(d, gens, cap)
                    end.semigroup = bool(end.witnesses)
                else:
                    end.semigroup = False
            ends.append(end)

    node_ends = [e for e in ends if e.weight is not None]
    ideal = all(e.divisible for e in node_ends)
    semigroup = not negative and all(e.semigroup for e in node_ends)
    link = not negative and all(D > 0 for D in dets.values())

    det_gcd = gcd_all(dets.values())
    failures = []
    if dets:
        for a, b in g.edges:
            # at a leaf end the generator is taken towards the rest of the tree
            product = ideal_generator(g, a, b) * ideal_generator(g, b, a)
            if any(D % product for D in dets.values()):
                failures.append(
                    f"edge {a}-{b}: ideal generators {ideal_generator(g, a, b)} * "
                    f"{ideal_generator(g, b, a)} = {product} does not divide all edge determinants ("
                    + ", ".join(str(D) for D in dets.values()) + f"; gcd {det_gcd})")
    return ConditionReport(
        edge_determinants=dets,
        ends=ends,
        ideal_condition=ideal,
        semigroup_condition=semigroup,
        singularity_link=link,
        realizability_screen=not failures,
        screen_failures=failures,
        cap=cap,
        notes=notes,
    )


def underlying_splice(g: SpliceDiagram) -> SpliceDiagram:
    """Divide every weight by the orbifold degrees on its far side; degrees become 1."""
    weights = {}
    for (v, u), d in g.weights.items():
        q = prod(g.degree(w) for w in g.far_leaves(v, u))
        if d % q:
            raise InconsistentOrbifoldError(
                f"weight {d} at {v} towards {u} is not divisible by far-side degree product {q}")
        weights[(v, u)] = d // q
    return SpliceDiagram(g.signs, weights, {w: 1 for w in g.leaves})


def reduce_splice(g: SpliceDiagram) -> SpliceDiagram:
    """Drop weight-1 leaves and suppress the valence-2 vertices this creates."""
    signs = dict(g.signs)
    weights = dict(g.weights)
    degrees = dict(g.degrees)
    adj = {v: set(g.neighbors(v)) for v in g.vertices}

    def drop_leaf(w):
        (v,) = adj.pop(w)
        adj[v].discard(w)
        del weights[(v, w)]
        degrees.pop(w, None)

    changed = True
    while changed:
        changed = False
        for w in sorted(degrees):
            v = next(iter(adj[w]))
            if weights[(v, w)] == 1:
                drop_leaf(w)
                changed = True
        for v in sorted(signs):
            if v not in adj:
                continue
            ns = sorted(adj[v])
            if len(ns) == 2:
                a, b = ns
                # the weights at a and b on the merged edge are kept
                if a not in signs and b not in signs:
                    raise DegenerateShapeError("reduction leaves no nodes", "lens")
                for x in (a, b):
                    adj[x].discard(v)
                adj[a].add(b)
                adj[b].add(a)
                if a in signs:
                    weights[(a, b)] = weights.pop((a, v))
                if b in signs:
                    weights[(b, a)] = weights.pop((b, v))
                weights.pop((v, a), None)
                weights.pop((v, b), None)
                del adj[v], signs[v]
                changed = True
            elif len(ns) == 1:
                (a,) = ns
                # the node has become a leaf of the tree
                weights.pop((v, a), None)
                del signs[v]
                degrees[v] = 1
                if (a, v) not in weights:
                    raise DegenerateShapeError("reduction leaves no nodes", "lens")
                changed = True
            elif len(ns) == 0:
                raise DegenerateShapeError("reduction leaves no nodes", "lens")
    if not signs:
        raise DegenerateShapeError("reduction leaves no nodes", "lens")
    return SpliceDiagram(signs, weights, degrees)
