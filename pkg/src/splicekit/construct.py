"""Orbifold plumbings realizing a two-node splice diagram.

Leaves hang off node ``v_j`` with weights ``n_ji``; ``N_j`` is their
product and ``r_j`` is the weight of ``v_j`` on the central edge.  A
construction choice is a set of integers ``alpha_ji`` with
``r_{1-j} = sum_i alpha_ji N_j / n_ji``.  From it each leaf gets a string
of slope ``(n_ji/o_ji) / p_ji`` with an arrow of degree
``o_ji = gcd(n_ji, alpha_ji)`` at its far end, and the two node vertices
are joined directly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product as cartesian
from math import gcd, prod

from .diagrams import ARROW_SUFFIX, PlumbingGraph, SpliceDiagram
from .discriminant import (
    check_orbifold_congruence,
    check_two_node_congruence,
    is_reducible,
    two_node_string_data,
)
from .exact import cf_expand, determinant, solve_linear_diophantine
from .plumbing import homology, splice_structure
from .splice import DEFAULT_CAP, edge_determinant
from .equations import admissible_monomials

__all__ = [
    "ConstructionError",
    "ConstructionChoice",
    "BranchData",
    "ConstructedPlumbing",
    "VerificationReport",
    "choose_coefficients",
    "construct",
    "verify_construction",
    "manifold_plumbings",
]


class ConstructionError(ValueError):
    pass


def _two_nodes(g: SpliceDiagram) -> tuple[str, str]:
    if len(g.nodes) != 2:
        raise ConstructionError(f"construction needs exactly two nodes, found {len(g.nodes)}")
    for w in g.leaves:
        if g.leaf_weight(w) == 1:
            raise ConstructionError(f"leaf {w} has weight 1; reduce the diagram first")
    return g.nodes[0], g.nodes[1]


def _identical(a: SpliceDiagram, b: SpliceDiagram) -> bool:
    """Equal including vertex ids, not merely isomorphic."""
    return a.signs == b.signs and a.weights == b.weights and a.degrees == b.degrees


def _leaves_at(g: SpliceDiagram, v: str) -> list[str]:
    return sorted(u for u in g.neighbors(v) if not g.is_node(u))


@dataclass(frozen=True)
class ConstructionChoice:
    alpha: dict[str, int]  # leaf -> alpha
    semigroup_mode: bool = True


def choose_coefficients(g: SpliceDiagram, mode: str = "semigroup",
                        cap: int | None = DEFAULT_CAP) -> list[ConstructionChoice]:
    """All coefficient choices (``mode='semigroup'``) or one signed choice (``'ideal'``).

    Semigroup choices combine, in lexicographic order, the non-negative
    solutions for both central edge ends, each side enumerated up to
    ``cap``.  An empty list means the condition fails.
    """
    v0, v1 = _two_nodes(g)
    if mode == "semigroup":
        # alpha_0 expresses r_1 = d(v1 -> v0) through the leaves at v0
        sides = [admissible_monomials(g, v1, v0, cap), admissible_monomials(g, v0, v1, cap)]
        return [ConstructionChoice({**a, **b}, True) for a, b in cartesian(*sides)]
    if mode == "ideal":
        alpha = {}
        for v, other in ((v0, v1), (v1, v0)):
            leaves = _leaves_at(g, v)
            N = prod(g.weight(v, w) for w in leaves)
            sol = solve_linear_diophantine(g.weight(other, v), [N // g.weight(v, w) for w in leaves])
            if sol is None:
                return []
            alpha.update(zip(leaves, sol))
        return [ConstructionChoice(alpha, False)]
    raise ValueError(f"unknown mode {mode!r}")


@dataclass(frozen=True)
class BranchData:
    leaf: str
    side: int
    n: int
    alpha: int
    o: int
    lam: int
    p: int
    string: list[int]
    vertex: str  # plumbing vertex that carries the leaf


@dataclass
class ConstructedPlumbing:
    plumbing: PlumbingGraph
    nodes: tuple[str, str]
    branches: list[BranchData]
    b: tuple[int, int]
    edge_determinant: int
    choice: ConstructionChoice
    leaf_map: dict[str, str] = field(default_factory=dict)  # extracted leaf id -> input leaf id

    @property
    def degrees(self) -> dict[str, int]:
        return {br.leaf: br.o for br in self.branches}


def construct(g: SpliceDiagram, c: ConstructionChoice) -> ConstructedPlumbing:
    v0, v1 = _two_nodes(g)
    D = edge_determinant(g, v0, v1)
    if D == 0:
        raise ConstructionError("edge determinant is zero")
    for v, other in ((v0, v1), (v1, v0)):
        leaves = _leaves_at(g, v)
        N = prod(g.weight(v, w) for w in leaves)
        if any(w not in c.alpha for w in leaves):
            raise ConstructionError(f"missing coefficient for a leaf at {v}")
        total = sum(c.alpha[w] * (N // g.weight(v, w)) for w in leaves)
        if total != g.weight(other, v):
            raise ConstructionError(f"coefficients at {v} give {total}, expected {g.weight(other, v)}")
        if c.semigroup_mode and any(c.alpha[w] < 0 for w in leaves):
            raise ConstructionError("semigroup mode needs non-negative coefficients")

    euler: dict[str, int] = {}
    edges = [(v0, v1)]
    arrows: dict[str, int] = {}
    branches = []
    leaf_map = {}
    b = []
    for j, v in enumerate((v0, v1)):
        eps = g.sign(v)
        lam_total = 0
        for w in _leaves_at(g, v):
            n, a = g.weight(v, w), c.alpha[w]
            s = eps * a if D > 0 else -eps * a
            lam = -((-s) // n)  # smallest integer with lam * n >= s
            o = gcd(n, a)
            p = (lam * n - s) // o
            string = cf_expand(n // o, p)
            lam_total += lam
            prev = v
            for k, weight in enumerate(string, start=1):
                x = w if k == len(string) else f"{w}.{k}"
                if x in euler or x in (v0, v1):
                    raise ConstructionError(f"vertex id {x} clashes")
                euler[x] = -weight
                edges.append((prev, x))
                prev = x
            carrier = prev
            if o > 1:
                if carrier in arrows:
                    raise ConstructionError(
                        f"two arrows on node {carrier}; a blow-up would be needed")
                arrows[carrier] = o
            leaf_map[carrier if string else carrier + ARROW_SUFFIX] = w
            branches.append(BranchData(w, j, n, a, o, lam, p, string, carrier))
        b.append(lam_total)
        euler[v] = -lam_total
    plumbing = PlumbingGraph(euler, tuple(edges), arrows)
    return ConstructedPlumbing(plumbing, (v0, v1), branches, tuple(b), D, c, leaf_map)


@dataclass
class VerificationReport:
    splice_matches: bool
    homology_order: int | None
    edge_determinant: int
    order_matches: bool
    coprime_strings: bool
    reducible: bool | None = None
    two_node_congruence: bool | None = None
    orbifold_congruence: bool | None = None
    notes: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        checks = [self.splice_matches, self.order_matches, self.coprime_strings]
        checks += [x for x in (self.reducible, self.two_node_congruence, self.orbifold_congruence)
                   if x is not None]
        return all(checks)


def verify_construction(g: SpliceDiagram, out: ConstructedPlumbing) -> VerificationReport:
    """Check a construction; problems become report entries, never exceptions.

    When ``g`` carries no orbifold degrees the comparison is made against
    ``g`` decorated with the degrees the construction produced, since a
    splice diagram alone does not fix them.
    """
    notes = []
    target = g if any(g.degree(w) != 1 for w in g.leaves) else g.with_degrees(out.degrees)
    try:
        structure = splice_structure(out.plumbing)
        extracted = structure.diagram.relabel(out.leaf_map)
        matches = _identical(extracted, target)
        if not matches:
            notes.append("extracted splice diagram differs from the input")
    except ValueError as exc:  # singular or degenerate output
        matches = False
        notes.append(f"extraction failed: {exc}")
    order = homology(out.plumbing, orbifold=True).order
    order_ok = order == abs(out.edge_determinant)
    if not order_ok:
        notes.append(f"orbifold homology order {order} differs from |D(e)| = {abs(out.edge_determinant)}")
    coprime = all(gcd(br.n // br.o, br.p) == 1 for br in out.branches)
    report = VerificationReport(matches, order, out.edge_determinant, order_ok, coprime, notes=notes)
    link_setting = all(g.sign(v) > 0 for v in g.nodes) and out.edge_determinant > 0
    if out.choice.semigroup_mode and matches and not link_setting:
        notes.append("congruence not checked: it is only defined without negative signs "
                     "and with a positive edge determinant")
    if out.choice.semigroup_mode and matches and link_setting:
        report.reducible = is_reducible(out.choice.alpha, out.degrees)
        t = two_node_string_data(out.plumbing)
        inverse_map = {v: k for k, v in out.leaf_map.items()}
        alpha = {inverse_map[w]: a for w, a in out.choice.alpha.items()}
        report.two_node_congruence = all(r.passed for r in check_two_node_congruence(t, alpha))
        v0, v1 = out.nodes
        witnesses = {}
        for v, other in ((v0, v1), (v1, v0)):
            far = {inverse_map[w]: out.choice.alpha[w] for w in _leaves_at(g, other)}
            witnesses[(v, other)] = [far]
        report.orbifold_congruence = check_orbifold_congruence(out.plumbing, witnesses).passed
    return report


def _string_slopes(n: int) -> list[int]:
    return [p for p in range(n) if gcd(n, p) == 1] if n > 1 else [0]


def _affine_solve(f, target: int) -> list[int]:
    """Integer ``x`` with ``|f(x)| = target`` for affine ``f``."""
    f0 = f(0)
    slope = f(1) - f0
    out = []
    for t in {target, -target}:
        if slope == 0:
            continue
        q, r = divmod(t - f0, slope)
        if r == 0:
            out.append(q)
    return sorted(set(out))


def _two_node_plumbing(v0, v1, central, strings, b0, b1):
    euler = {v0: -b0, v1: -b1}
    edges = []
    prev = v0
    for k, x in enumerate(central, start=1):
        name = f"{v0}-{v1}.{k}"
        euler[name] = -x
        edges.append((prev, name))
        prev = name
    edges.append((prev, v1))
    for (v, w), s in strings.items():
        prev = v
        for k, x in enumerate(s, start=1):
            name = w if k == len(s) else f"{w}.{k}"
            if name in euler:
                raise ConstructionError(f"vertex id {name} clashes")
            euler[name] = -x
            edges.append((prev, name))
            prev = name
    return PlumbingGraph(euler, tuple(edges))


def manifold_plumbings(g: SpliceDiagram) -> list[PlumbingGraph]:
    """Every plumbing (minimal strings, no arrows) whose splice diagram is ``g``.

    Enumerates central strings ``n/p`` with ``n | D(e)``, every leaf string
    of determinant ``n_w``, and solves for the node weights, which enter
    the relevant determinants affinely.
    """
    v0, v1 = _two_nodes(g)
    if any(g.degree(w) != 1 for w in g.leaves):
        raise ConstructionError("manifold plumbings need orbifold degrees 1")
    D = abs(edge_determinant(g, v0, v1))
    leaf_keys = [(v, w) for v in (v0, v1) for w in _leaves_at(g, v)]
    out = []
    for n in (k for k in range(1, D + 1) if D % k == 0):
        for pc in _string_slopes(n):
            central = cf_expand(n, pc)
            for slopes in cartesian(*[_string_slopes(g.weight(v, w)) for v, w in leaf_keys]):
                strings = {key: cf_expand(g.weight(*key), p) for key, p in zip(leaf_keys, slopes)}

                def far_det(b1, _c=central, _s=strings):
                    # determinant beyond v0 towards v1; affine in b1
                    q = _two_node_plumbing(v0, v1, _c, _s, 0, b1)
                    return determinant(q.matrix(sorted(q.component(v0, q.path(v0, v1)[1]))))

                def near_det(b0, _c=central, _s=strings):
                    q = _two_node_plumbing(v0, v1, _c, _s, b0, 0)
                    return determinant(q.matrix(sorted(q.component(v1, q.path(v1, v0)[1]))))

                for b1 in _affine_solve(far_det, g.weight(v0, v1)):
                    for b0 in _affine_solve(near_det, g.weight(v1, v0)):
                        p = _two_node_plumbing(v0, v1, central, strings, b0, b1)
                        try:
                            got = splice_structure(p).diagram
                        except ValueError:
                            continue
                        if _identical(got, g):
                            out.append(p)
    return out

