"""Discriminant group of an orbifold plumbing and the congruence condition.

The discriminant group is ``E*/E`` for the lattice ``E`` spanned by the
vertices, with the rational pairing given by ``A(M)^-1``.  It is generated
by the dual classes ``e_w`` of the leaf vertices, and it acts on the leaf
coordinates ``z_w`` through the rows of the pairing, read mod 1.

Index convention: ``e_v . e_u`` is ``A(M)^-1[u][v]``.  Because ``A(M)`` is
``A`` with column ``u`` scaled by ``o_u`` this equals ``A^-1[v][u] / o_u``,
which is the form the closed formulas below are stated in.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from math import prod

from .diagrams import PlumbingGraph, SpliceDiagram
from .equations import SemigroupConditionError, admissible_monomials, incident_edges
from .exact import mod1, string_invariants
from .plumbing import intersection_data, splice_structure
from .splice import DEFAULT_CAP, edge_determinant, linking_number, underlying_splice

__all__ = [
    "DiscriminantData",
    "NodeCongruence",
    "CongruenceWitness",
    "TwoNodeBranch",
    "TwoNodeStringData",
    "BranchResidue",
    "NotTwoNodeError",
    "IrreducibleCoefficientsError",
    "discriminant_data",
    "monomial_character",
    "generated_subgroup",
    "check_orbifold_congruence",
    "two_node_string_data",
    "check_two_node_congruence",
    "is_reducible",
    "descend_coefficients",
]


class NotTwoNodeError(ValueError):
    pass


class IrreducibleCoefficientsError(ValueError):
    pass


@dataclass(frozen=True)
class DiscriminantData:
    det: int  # |det A(M)|
    leaves: list[str]
    leaf_vertices: dict[str, str]
    degrees: dict[str, int]
    pairing: list[list[Fraction]]  # pairing[i][j] = e_{w_i} . e_{w_j}
    rows: list[list[Fraction]]  # pairing rows mod 1
    off_diagonal_mismatches: list[tuple[str, str]] = field(default_factory=list)
    diagonal_mismatches: list[str] = field(default_factory=list)
    diagram: SpliceDiagram | None = None

    @property
    def order(self) -> int:
        return self.det

    def index(self, w: str) -> int:
        return self.leaves.index(w)


def _pairing(p: PlumbingGraph, vertices: list[str]) -> tuple[int, list[list[Fraction]]]:
    data = intersection_data(p, orbifold=True)
    if data.det == 0:
        from .plumbing import SingularPlumbingError

        raise SingularPlumbingError("orbifold intersection matrix is singular")
    return abs(data.det), [[data.entry(u, v) for u in vertices] for v in vertices]


def off_diagonal_closed_form(g: SpliceDiagram, det: int, v: str, u: str) -> Fraction:
    """``-o_v l_vu / det``."""
    return Fraction(-g.degree(v) * linking_number(g, v, u), det)


def diagonal_closed_form(g: SpliceDiagram, det: int, w: str, reversed_residue: int) -> Fraction:
    """``-o_w N / (det n_w) - p' / n_w`` with ``N`` the other weights at the node."""
    v = g.node_of(w)
    n = g.weight(v, w)
    others = prod(g.weight(v, u) for u in g.neighbors(v) if u != w)
    return Fraction(-g.degree(w) * others, det * n) - Fraction(reversed_residue, n)


def discriminant_data(p: PlumbingGraph) -> DiscriminantData:
    structure = splice_structure(p)
    g = structure.diagram
    leaves = g.leaves
    verts = [structure.leaf_vertex[w] for w in leaves]
    det, pairing = _pairing(p, verts)
    rows = [[mod1(x) for x in r] for r in pairing]

    off, diag = [], []
    for i, v in enumerate(leaves):
        for j, u in enumerate(leaves):
            if i != j and pairing[i][j] != off_diagonal_closed_form(g, det, v, u):
                off.append((v, u))
        node = g.node_of(v)
        # p' is the residue of the string read from the leaf end
        inv = string_invariants(structure.string(p, node, v))
        if pairing[i][i] != diagonal_closed_form(g, det, v, inv.p_rev):
            diag.append(v)
    return DiscriminantData(det, leaves, dict(zip(leaves, verts)), dict(g.degrees),
                            pairing, rows, off, diag, g)


def monomial_character(d: DiscriminantData, exponents: dict[str, int]) -> tuple[Fraction, ...]:
    """How each generator ``e_{w_i}`` scales ``prod z_w^a_w``, as a vector mod 1.

    Entry ``i`` is ``-sum_j (e_{w_i} . e_{w_j}) a_{w_j}`` reduced into [0, 1).
    """
    unknown = set(exponents) - set(d.leaves)
    if unknown:
        raise KeyError(f"unknown leaves: {', '.join(sorted(unknown))}")
    a = [exponents.get(w, 0) for w in d.leaves]
    return tuple(mod1(-sum(x * e for x, e in zip(row, a))) for row in d.pairing)


def generated_subgroup(vectors, modulus: int) -> set[tuple[int, ...]]:
    """Subgroup of ``(Z/modulus)^n`` generated by ``vectors`` (integer tuples)."""
    vectors = [tuple(x % modulus for x in v) for v in vectors]
    if not vectors:
        return set()
    zero = tuple(0 for _ in vectors[0])
    seen = {zero}
    queue = deque([zero])
    while queue:
        x = queue.popleft()
        for v in vectors:
            y = tuple((a + b) % modulus for a, b in zip(x, v))
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return seen


def scaled_rows(d: DiscriminantData) -> list[tuple[int, ...]]:
    """Rows multiplied by ``det``; all entries are then integers mod ``det``."""
    out = []
    for r in d.rows:
        scaled = [x * d.det for x in r]
        if any(s.denominator != 1 for s in scaled):
            raise ValueError("pairing denominator does not divide det")
        out.append(tuple(int(s) for s in scaled))
    return out


@dataclass
class NodeCongruence:
    node: str
    passed: bool
    edges: list[str]
    chosen: dict[str, dict[str, int]]  # edge -> exponents (empty on failure)
    character: tuple[Fraction, ...] | None
    per_leaf_passed: bool
    candidates: dict[str, int]  # edge -> number of admissible monomials searched


@dataclass
class CongruenceWitness:
    passed: bool
    nodes: list[NodeCongruence]
    det: int
    cap: int | None
    criteria_agree: bool | None  # None outside the singularity-link setting

    def node(self, v: str) -> NodeCongruence:
        return next(n for n in self.nodes if n.node == v)


def _per_leaf_ok(g: SpliceDiagram, det: int, d: DiscriminantData, v: str, exps: dict[str, int]) -> bool:
    """Root-of-unity form of the congruence for one monomial at node ``v``."""
    for wp in g.leaves:
        o = g.degree(wp)
        lhs = sum(Fraction(a * o * linking_number(g, w, wp), det) for w, a in exps.items() if w != wp)
        i = d.index(wp)
        lhs -= exps.get(wp, 0) * d.pairing[i][i]
        if mod1(lhs) != mod1(Fraction(o * linking_number(g, v, wp), det)):
            return False
    return True


def check_orbifold_congruence(p: PlumbingGraph, witnesses: dict | None = None,
                              cap: int | None = DEFAULT_CAP) -> CongruenceWitness:
    """Search, per node, for admissible monomials sharing one character.

    ``witnesses`` maps ``(node, neighbour)`` to a list of exponent dicts;
    missing entries are enumerated up to ``cap``.  The witness reported is
    the lexicographically least passing choice (edges in
    :func:`incident_edges` order, candidates in enumeration order).  The
    per-leaf formula is evaluated independently and must agree.
    """
    d = discriminant_data(p)
    g = d.diagram
    if any(g.sign(v) < 0 for v in g.nodes):
        raise SemigroupConditionError("negative node signs: admissible monomials are not defined")
    # the closed forms behind the per-leaf test need positive edge determinants
    link_setting = all(edge_determinant(g, a, b) > 0 for a, b in g.node_edges)
    witnesses = witnesses or {}
    nodes = []
    agree = True
    for v in g.nodes:
        edges = incident_edges(g, v)
        cands = {}
        for u in edges:
            ms = witnesses.get((v, u))
            if ms is None:
                ms = admissible_monomials(g, v, u, cap)
            if not ms:
                raise SemigroupConditionError(
                    f"no admissible monomial at node {v} towards {u}: semigroup condition fails")
            cands[u] = [dict(m) for m in ms]

        chars = {u: [monomial_character(d, m) for m in cands[u]] for u in edges}
        chosen, character = {}, None
        first = edges[0]
        for i, c in enumerate(chars[first]):
            picks = {first: cands[first][i]}
            for u in edges[1:]:
                k = next((k for k, c2 in enumerate(chars[u]) if c2 == c), None)
                if k is None:
                    break
                picks[u] = cands[u][k]
            else:
                chosen, character = picks, c
                break
        passed = character is not None

        per_leaf = all(any(_per_leaf_ok(g, d.det, d, v, m) for m in cands[u]) for u in edges)
        if per_leaf != passed:
            agree = False
        nodes.append(NodeCongruence(v, passed, edges, chosen, character, per_leaf,
                                    {u: len(cands[u]) for u in edges}))
    return CongruenceWitness(all(n.passed for n in nodes), nodes, d.det, cap,
                             agree if link_setting else None)


@dataclass(frozen=True)
class TwoNodeBranch:
    leaf: str
    side: int  # 0 or 1, which node the leaf hangs on
    n: int  # leaf weight
    o: int  # orbifold degree
    p: int
    p_rev: int

    @property
    def modulus(self) -> int:
        return self.n // self.o


@dataclass(frozen=True)
class TwoNodeStringData:
    nodes: tuple[str, str]
    n: int  # central string determinant
    p: int
    b: tuple[int, int]  # node vertices carry Euler weight -b_j
    N: tuple[int, int]  # product of leaf weights at each node
    branches: tuple[TwoNodeBranch, ...]

    def branch(self, leaf: str) -> TwoNodeBranch:
        return next(br for br in self.branches if br.leaf == leaf)


def two_node_string_data(p: PlumbingGraph) -> TwoNodeStringData:
    s = splice_structure(p)
    g = s.diagram
    if len(g.nodes) != 2:
        raise NotTwoNodeError(f"expected two nodes, found {len(g.nodes)}")
    v0, v1 = g.nodes
    central = string_invariants(s.string(p, v0, v1))
    branches = []
    for j, v in enumerate((v0, v1)):
        for w in g.neighbors(v):
            if g.is_node(w):
                continue
            inv = string_invariants(s.string(p, v, w))
            branches.append(TwoNodeBranch(w, j, g.weight(v, w), g.degree(w), inv.p, inv.p_rev))
    N = tuple(prod(br.n for br in branches if br.side == j) for j in (0, 1))
    return TwoNodeStringData((v0, v1), central.n, central.p, (-p.euler[v0], -p.euler[v1]), N,
                             tuple(branches))


@dataclass(frozen=True)
class BranchResidue:
    leaf: str
    alpha: int
    modulus: int
    reducible: bool
    lhs: int  # alpha / o mod modulus (alpha mod modulus when not reducible)
    rhs: int  # -n p mod modulus
    passed: bool


def check_two_node_congruence(t: TwoNodeStringData, coefficients: dict[str, int]) -> list[BranchResidue]:
    """Per-leaf residue test ``alpha/o = -n p (mod n_w/o_w)``.

    ``coefficients`` holds the central-edge semigroup coefficient of every
    leaf (each leaf lies beyond exactly one central edge end).  If
    ``o`` does not divide ``alpha`` the undivided congruence
    ``o n + alpha p' = 0 (mod n_w)`` is evaluated instead; both forms are
    equivalent whenever the division is possible.
    """
    out = []
    for br in t.branches:
        if br.leaf not in coefficients:
            raise KeyError(f"no coefficient for leaf {br.leaf}")
        a = coefficients[br.leaf]
        m = br.modulus
        rhs = (-t.n * br.p) % m
        if a % br.o == 0:
            lhs = (a // br.o) % m
            ok = lhs == rhs
            out.append(BranchResidue(br.leaf, a, m, True, lhs, rhs, ok))
        else:
            ok = (br.o * t.n + a * br.p_rev) % br.n == 0
            out.append(BranchResidue(br.leaf, a, m, False, a % m, rhs, ok))
    return out


def is_reducible(coefficients: dict[str, int], degrees: dict[str, int]) -> bool:
    return all(a % degrees.get(w, 1) == 0 for w, a in coefficients.items())


def descend_coefficients(coefficients: dict, degrees: dict[str, int], g: SpliceDiagram,
                         underlying_plumbing: PlumbingGraph | None = None,
                         rename: dict[str, str] | None = None) -> dict:
    """Divide semigroup coefficients by orbifold degrees.

    ``coefficients`` maps ``(node, neighbour)`` to an exponent dict.  The
    result uses the same keys and is checked to be a set of semigroup
    coefficients of the underlying diagram.  With ``underlying_plumbing``
    (and the leaf ``rename`` from
    :func:`~splicekit.plumbing.underlying_keeping_leaves`) the descended
    coefficients must also satisfy the congruence condition there.
    """
    gbar = underlying_splice(g.with_degrees(degrees))
    out = {}
    for (v, u), exps in coefficients.items():
        if not is_reducible(exps, degrees):
            raise IrreducibleCoefficientsError(f"coefficients at {v} towards {u} are not reducible")
        bar = {w: a // degrees.get(w, 1) for w, a in exps.items()}
        total = sum(a * linking_number(gbar, v, w, prime=True) for w, a in bar.items())
        if total != gbar.weight(v, u):
            raise AssertionError(
                f"descended coefficients give {total}, underlying weight is {gbar.weight(v, u)}")
        out[(v, u)] = bar
    if underlying_plumbing is not None:
        rename = rename or {}
        moved = {(rename.get(v, v), rename.get(u, u)): {rename.get(w, w): a for w, a in e.items()}
                 for (v, u), e in out.items()}
        result = check_orbifold_congruence(underlying_plumbing, {k: [e] for k, e in moved.items()})
        if not result.passed:
            raise AssertionError("descended coefficients fail the congruence on the underlying plumbing")
    return out
