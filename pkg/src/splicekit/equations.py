"""Splice diagram equation systems.

For every node ``v`` of valence ``delta`` the system has ``delta - 2``
equations ``sum_e a[i][e] * M_ve = 0``, one admissible monomial ``M_ve`` per
incident edge.  Coefficient rows are Vandermonde rows over distinct positive
integers, so every maximal minor is nonzero.  No higher order terms are
added.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from .diagrams import SpliceDiagram
from .exact import determinant
from .semigroup import representations
from .splice import DEFAULT_CAP, linking_number, semigroup_generators

__all__ = [
    "Monomial",
    "EquationSystem",
    "HomogeneityReport",
    "SemigroupConditionError",
    "v_weights",
    "incident_edges",
    "admissible_monomials",
    "default_choices",
    "generate_equations",
    "check_homogeneity",
]

Monomial = dict  # leaf id -> exponent


class SemigroupConditionError(ValueError):
    pass


def v_weights(g: SpliceDiagram, v: str) -> dict[str, int]:
    """Weight ``l_vw`` of each leaf variable ``z_w`` in the ``v``-filtration."""
    return {w: linking_number(g, v, w) for w in g.leaves}


def monomial_weight(weights: dict[str, int], m: Monomial) -> int:
    return sum(weights[w] * e for w, e in m.items())


def incident_edges(g: SpliceDiagram, v: str) -> list[str]:
    """Neighbours of ``v``: leaves first, then nodes, each sorted by id."""
    return sorted(g.neighbors(v), key=lambda u: (g.is_node(u), u))


def admissible_monomials(g: SpliceDiagram, v: str, u: str, cap: int | None = DEFAULT_CAP) -> list[Monomial]:
    """Exponent vectors of semigroup coefficients of ``d_vu``, lexicographic order."""
    leaves, gens = semigroup_generators(g, v, u)
    return [dict(zip(leaves, c)) for c in representations(g.weight(v, u), gens, cap)]


def default_choices(g: SpliceDiagram, cap: int | None = DEFAULT_CAP) -> dict[tuple[str, str], Monomial]:
    """First admissible monomial for every (node, edge)."""
    out = {}
    for v in g.nodes:
        for u in incident_edges(g, v):
            ms = admissible_monomials(g, v, u, cap=1)
            if not ms:
                raise SemigroupConditionError(f"weight {g.weight(v, u)} at {v} towards {u} "
                                              "is not in the semigroup")
            out[(v, u)] = ms[0]
    return out


@dataclass
class NodeEquations:
    node: str
    edges: list[str]
    monomials: list[Monomial]
    coefficients: list[list[int]]  # (delta - 2) x delta
    higher_order: list = field(default_factory=list)  # always zero series


@dataclass
class EquationSystem:
    variables: list[str]
    nodes: list[NodeEquations]
    seed: int = 0

    @property
    def equation_count(self) -> int:
        return sum(len(n.coefficients) for n in self.nodes)

    def render(self) -> str:
        lines = []
        for ne in self.nodes:
            for row in ne.coefficients:
                terms = []
                for a, m in zip(row, ne.monomials):
                    mono = "*".join(w if e == 1 else f"{w}^{e}" for w, e in sorted(m.items()) if e) or "1"
                    terms.append(mono if a == 1 else f"{a}*{mono}")
                lines.append(" + ".join(terms) + " = 0")
        return "\n".join(lines) + ("\n" if lines else "")

    def to_dict(self) -> dict:
        return {
            "variables": list(self.variables),
            "seed": self.seed,
            "nodes": [
                {
                    "node": ne.node,
                    "edges": list(ne.edges),
                    "monomials": [{w: e for w, e in sorted(m.items()) if e} for m in ne.monomials],
                    "coefficients": ne.coefficients,
                }
                for ne in self.nodes
            ],
        }


def _vandermonde(rows: int, cols: int, seed: int) -> list[list[int]]:
    bases = [seed + j + 1 for j in range(cols)]
    return [[b ** i for b in bases] for i in range(rows)]


def generate_equations(g: SpliceDiagram, choices: dict[tuple[str, str], Monomial] | None = None,
                       seed: int = 0) -> EquationSystem:
    """Splice diagram equations for ``g`` with the given monomial choices.

    ``choices`` maps ``(node, neighbour)`` to an exponent dict; missing
    entries are an error.  ``None`` takes :func:`default_choices`.
    """
    if seed < 0:
        raise ValueError("seed must be non-negative")
    if choices is None:
        choices = default_choices(g)
    nodes = []
    for v in g.nodes:
        edges = incident_edges(g, v)
        monomials = []
        for u in edges:
            if (v, u) not in choices:
                raise KeyError(f"no monomial chosen for node {v} towards {u}")
            monomials.append({w: e for w, e in choices[(v, u)].items()})
        coeffs = _vandermonde(len(edges) - 2, len(edges), seed)
        nodes.append(NodeEquations(v, edges, monomials, coeffs))
    return EquationSystem(g.leaves, nodes, seed)


def maximal_minors(matrix: list[list[int]]) -> list[int]:
    rows = len(matrix)
    cols = len(matrix[0]) if rows else 0
    return [determinant([[r[j] for j in cs] for r in matrix]) for cs in combinations(range(cols), rows)]


@dataclass
class HomogeneityReport:
    ok: bool
    violations: list[str]
    node_weights: dict[str, int]


def check_homogeneity(s: EquationSystem, g: SpliceDiagram) -> HomogeneityReport:
    """Every monomial in node ``v``'s equations must have ``v``-weight ``d_v``."""
    violations = []
    dv = {}
    for ne in s.nodes:
        weights = v_weights(g, ne.node)
        d = g.node_weight_product(ne.node)
        dv[ne.node] = d
        for u, m in zip(ne.edges, ne.monomials):
            wt = monomial_weight(weights, m)
            if wt != d:
                violations.append(f"node {ne.node}, edge to {u}: v-weight {wt} != d_v = {d}")
        for minor in maximal_minors(ne.coefficients):
            if minor == 0:
                violations.append(f"node {ne.node}: coefficient matrix has a vanishing maximal minor")
                break
    return HomogeneityReport(not violations, violations, dv)
