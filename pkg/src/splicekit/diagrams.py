"""Splice diagrams, orbifold plumbing graphs, and their text format.

The on-disk format is line oriented.  A splice diagram::

    splice
    node v0 sign=+
    leaf a orb=3
    edge v0 a 6            # leaf edge: one weight, at the node end
    edge v0 v1 4330 78     # node-node edge: weight at v0, weight at v1

and a plumbing graph::

    plumbing
    vertex x euler=-2
    vertex y euler=-1
    edge x y
    arrow y degree=5

``#`` starts a comment.  Signs default to ``+``, orbifold degrees to 1.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Union

__all__ = [
    "DiagramError",
    "DiagramSyntaxError",
    "DiagramValidationError",
    "SpliceDiagram",
    "PlumbingGraph",
    "DiagramDocument",
    "parse",
    "parse_splice",
    "parse_plumbing",
    "serialize",
    "canonical_key",
    "same_diagram",
]

ARROW_SUFFIX = "^"


class DiagramError(ValueError):
    pass


class DiagramSyntaxError(DiagramError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class DiagramValidationError(DiagramError):
    def __init__(self, message: str, element=None):
        super().__init__(message)
        self.element = element


def _components(vertices: Iterable[str], adjacency: Mapping[str, Iterable[str]]) -> int:
    seen: set[str] = set()
    count = 0
    for v in vertices:
        if v in seen:
            continue
        count += 1
        queue = deque([v])
        seen.add(v)
        while queue:
            x = queue.popleft()
            for y in adjacency[x]:
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
    return count


@dataclass(frozen=True)
class SpliceDiagram:
    """Decorated tree: node signs, end weights at nodes, leaf orbifold degrees.

    ``weights[(v, u)]`` is the weight at node ``v`` on the edge towards ``u``.
    A node-node edge has two entries, a leaf edge one (keyed at the node).
    """

    signs: Mapping[str, int]
    weights: Mapping[tuple[str, str], int]
    degrees: Mapping[str, int] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "signs", dict(self.signs))
        object.__setattr__(self, "weights", dict(self.weights))
        leaves = {u for (_, u) in self.weights if u not in self.signs}
        degrees = {w: 1 for w in leaves}
        degrees.update(self.degrees)
        object.__setattr__(self, "degrees", degrees)
        adjacency: dict[str, set[str]] = {v: set() for v in self.vertices}
        for v, u in self.weights:
            adjacency[v].add(u)
            adjacency[u].add(v)
        object.__setattr__(self, "_adjacency",
                           {v: tuple(sorted(ns)) for v, ns in adjacency.items()})
        self._validate()

    def _validate(self):
        if not self.signs:
            raise DiagramValidationError("splice diagram has no nodes")
        for v, s in self.signs.items():
            if s not in (1, -1):
                raise DiagramValidationError(f"node {v}: sign must be +1 or -1", v)
        for w in self.degrees:
            if w in self.signs:
                raise DiagramValidationError(f"{w} is declared both node and leaf", w)
        for (v, u), d in self.weights.items():
            if v not in self.signs:
                raise DiagramValidationError(f"edge {v}-{u}: weight placed at non-node {v}", (v, u))
            if not isinstance(d, int) or d < 1:
                raise DiagramValidationError(f"edge {v}-{u}: weight {d!r} is not a positive integer", (v, u))
            if u in self.signs and (u, v) not in self.weights:
                raise DiagramValidationError(f"edge {v}-{u}: missing weight at node {u}", (u, v))
        adjacency = self._adjacency
        for w in self.degrees:
            if w not in adjacency:
                raise DiagramValidationError(f"leaf {w} has valence 0", w)
        n_edges = sum(len(ns) for ns in adjacency.values()) // 2
        if n_edges != len(adjacency) - 1 or _components(adjacency, adjacency) != 1:
            raise DiagramValidationError("splice diagram is not a tree")
        for v, ns in adjacency.items():
            if len(ns) == 2:
                raise DiagramValidationError(f"vertex {v} has valence 2", v)
            if v in self.signs and len(ns) < 3:
                raise DiagramValidationError(f"node {v} has valence {len(ns)}", v)
            if v in self.degrees and len(ns) != 1:
                raise DiagramValidationError(f"leaf {v} has valence {len(ns)}", v)
        for w, o in self.degrees.items():
            if not isinstance(o, int) or o < 1:
                raise DiagramValidationError(f"leaf {w}: orbifold degree {o!r} is not positive", w)
            n_w = self.leaf_weight(w)
            if n_w % o:
                raise DiagramValidationError(
                    f"leaf {w}: orbifold degree {o} does not divide weight {n_w}", w)

    # -- structure -----------------------------------------------------

    @property
    def nodes(self) -> list[str]:
        return sorted(self.signs)

    @property
    def leaves(self) -> list[str]:
        return sorted(self.degrees)

    @property
    def vertices(self) -> list[str]:
        vs = set(self.signs)
        for v, u in self.weights:
            vs.add(v)
            vs.add(u)
        return sorted(vs)

    def is_node(self, v: str) -> bool:
        return v in self.signs

    def neighbors(self, v: str) -> tuple[str, ...]:
        return self._adjacency[v]

    def weight(self, v: str, u: str) -> int:
        return self.weights[(v, u)]

    def sign(self, v: str) -> int:
        return self.signs[v]

    def degree(self, w: str) -> int:
        return self.degrees[w]

    def node_of(self, w: str) -> str:
        (v,) = self._adjacency[w]
        return v

    def leaf_weight(self, w: str) -> int:
        return self.weights[(self.node_of(w), w)]

    @property
    def edges(self) -> list[tuple[str, str]]:
        out = set()
        for v, u in self.weights:
            out.add((v, u) if (v < u or u not in self.signs) else (u, v))
        return sorted(out)

    @property
    def node_edges(self) -> list[tuple[str, str]]:
        return [(a, b) for a, b in self.edges if a in self.signs and b in self.signs]

    def far_side(self, v: str, u: str) -> set[str]:
        """Vertices of the component of ``Gamma - v`` containing ``u``."""
        seen = {v, u}
        queue = deque([u])
        while queue:
            x = queue.popleft()
            for y in self._adjacency[x]:
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        seen.discard(v)
        return seen

    def far_leaves(self, v: str, u: str) -> list[str]:
        return sorted(w for w in self.far_side(v, u) if w in self.degrees)

    def path(self, v: str, w: str) -> list[str]:
        parent = {v: None}
        queue = deque([v])
        while queue:
            x = queue.popleft()
            if x == w:
                break
            for y in self._adjacency[x]:
                if y not in parent:
                    parent[y] = x
                    queue.append(y)
        out = [w]
        while out[-1] != v:
            out.append(parent[out[-1]])
        return out[::-1]

    def node_weight_product(self, v: str) -> int:
        """``d_v``: product of all weights at node ``v``."""
        out = 1
        for u in self._adjacency[v]:
            out *= self.weights[(v, u)]
        return out

    def with_degrees(self, degrees: Mapping[str, int]) -> "SpliceDiagram":
        new = dict(self.degrees)
        new.update(degrees)
        return SpliceDiagram(self.signs, self.weights, new)

    def without_degrees(self) -> "SpliceDiagram":
        return SpliceDiagram(self.signs, self.weights, {w: 1 for w in self.degrees})

    def relabel(self, mapping: Mapping[str, str]) -> "SpliceDiagram":
        m = lambda x: mapping.get(x, x)  # noqa: E731
        return SpliceDiagram(
            {m(v): s for v, s in self.signs.items()},
            {(m(v), m(u)): d for (v, u), d in self.weights.items()},
            {m(w): o for w, o in self.degrees.items()},
        )


@dataclass(frozen=True)
class PlumbingGraph:
    """Tree plumbing with Euler weights and orbifold-degree arrows (genus 0)."""

    euler: Mapping[str, int]
    edges: tuple[tuple[str, str], ...] = ()
    arrows: Mapping[str, int] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "euler", dict(self.euler))
        object.__setattr__(self, "arrows", dict(self.arrows))
        norm = []
        for a, b in self.edges:
            if a == b:
                raise DiagramValidationError(f"loop edge at {a}", (a, b))
            norm.append((a, b) if a < b else (b, a))
        if len(set(norm)) != len(norm):
            raise DiagramValidationError("duplicate edge; cycle detected")
        object.__setattr__(self, "edges", tuple(sorted(norm)))
        adjacency: dict[str, set[str]] = {v: set() for v in self.euler}
        for a, b in norm:
            for x in (a, b):
                if x not in adjacency:
                    raise DiagramValidationError(f"edge {a}-{b}: unknown vertex {x}", x)
            adjacency[a].add(b)
            adjacency[b].add(a)
        object.__setattr__(self, "_adjacency",
                           {v: tuple(sorted(ns)) for v, ns in adjacency.items()})
        self._validate()

    def _validate(self):
        if not self.euler:
            raise DiagramValidationError("plumbing graph has no vertices")
        for v in self.euler:
            if v.endswith(ARROW_SUFFIX):
                raise DiagramValidationError(f"vertex id {v!r} may not end with '^'", v)
        if len(self.edges) != len(self.euler) - 1 or _components(self.euler, self._adjacency) != 1:
            raise DiagramValidationError("plumbing graph is not a tree (cycle detected or disconnected)")
        for v, o in self.arrows.items():
            if v not in self.euler:
                raise DiagramValidationError(f"arrow on unknown vertex {v}", v)
            if not isinstance(o, int) or o < 2:
                raise DiagramValidationError(f"arrow at {v}: degree must be >= 2", v)

    @property
    def vertices(self) -> list[str]:
        return sorted(self.euler)

    def neighbors(self, v: str) -> tuple[str, ...]:
        return self._adjacency[v]

    def valence(self, v: str) -> int:
        return len(self._adjacency[v])

    def degree(self, v: str) -> int:
        """Orbifold degree ``o_v`` (1 when no arrow)."""
        return self.arrows.get(v, 1)

    def component(self, v: str, u: str) -> set[str]:
        """Vertices of the component of ``Delta - v`` containing ``u``."""
        seen = {v, u}
        queue = deque([u])
        while queue:
            x = queue.popleft()
            for y in self._adjacency[x]:
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        seen.discard(v)
        return seen

    def path(self, v: str, w: str) -> list[str]:
        parent = {v: None}
        queue = deque([v])
        while queue:
            x = queue.popleft()
            for y in self._adjacency[x]:
                if y not in parent:
                    parent[y] = x
                    queue.append(y)
        out = [w]
        while out[-1] != v:
            out.append(parent[out[-1]])
        return out[::-1]

    def matrix(self, vertices=None, orbifold: bool = False) -> list[list[int]]:
        """Intersection matrix on ``vertices`` (default: all, sorted).

        With ``orbifold=True`` the column of each vertex is multiplied by its
        orbifold degree.
        """
        order = self.vertices if vertices is None else list(vertices)
        index = {v: i for i, v in enumerate(order)}
        m = [[0] * len(order) for _ in order]
        for v, i in index.items():
            m[i][i] = self.euler[v]
            for u in self._adjacency[v]:
                if u in index:
                    m[i][index[u]] = 1
        if orbifold:
            for v, j in index.items():
                o = self.degree(v)
                for i in range(len(order)):
                    m[i][j] *= o
        return m

    def without_arrows(self) -> "PlumbingGraph":
        return PlumbingGraph(self.euler, self.edges, {})


Diagram = Union[SpliceDiagram, PlumbingGraph]


@dataclass(frozen=True)
class DiagramDocument:
    kind: str
    payload: Diagram
    source: str | None = None

    def __post_init__(self):
        expected = {"splice": SpliceDiagram, "plumbing": PlumbingGraph}
        if self.kind not in expected or not isinstance(self.payload, expected[self.kind]):
            raise DiagramValidationError(f"document kind {self.kind!r} does not match payload")


# ---------------------------------------------------------------------------
# Parsing

_TOKEN = re.compile(r"\S+")
_ID = re.compile(r"[^\s#=]+")


def _tokens(text: str):
    """Yield ``(line_no, [(column, token), ...])`` for non-empty lines."""
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        toks = [(m.start() + 1, m.group()) for m in _TOKEN.finditer(line)]
        if toks:
            yield line_no, toks


def _int(tok: str, line: int, col: int, what: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise DiagramSyntaxError(f"expected integer {what}, got {tok!r}", line, col) from None


def _ident(tok: str, line: int, col: int) -> str:
    if not _ID.fullmatch(tok):
        raise DiagramSyntaxError(f"invalid identifier {tok!r}", line, col)
    return tok


def _option(tok: str, key: str, line: int, col: int) -> str:
    prefix = key + "="
    if not tok.startswith(prefix):
        raise DiagramSyntaxError(f"expected {key}=..., got {tok!r}", line, col)
    return tok[len(prefix):]


def _split_header(text: str):
    lines = list(_tokens(text))
    if not lines:
        raise DiagramSyntaxError("empty document", 1, 1)
    line, toks = lines[0]
    col, head = toks[0]
    if head not in ("splice", "plumbing") or len(toks) != 1:
        raise DiagramSyntaxError("expected header 'splice' or 'plumbing'", line, col)
    return head, lines[1:]


def parse(text: str, source: str | None = None) -> DiagramDocument:
    kind, _ = _split_header(text)
    payload = parse_splice(text) if kind == "splice" else parse_plumbing(text)
    return DiagramDocument(kind, payload, source)


def parse_splice(text: str) -> SpliceDiagram:
    kind, lines = _split_header(text)
    if kind != "splice":
        raise DiagramSyntaxError("expected a splice document", lines[0][0] if lines else 1, 1)
    signs: dict[str, int] = {}
    degrees: dict[str, int] = {}
    declared: dict[str, int] = {}
    edges = []
    for line, toks in lines:
        col, key = toks[0]
        args = toks[1:]
        if key == "node":
            if not 1 <= len(args) <= 2:
                raise DiagramSyntaxError("usage: node <id> [sign=+|-]", line, col)
            v = _ident(args[0][1], line, args[0][0])
            sign = 1
            if len(args) == 2:
                c, tok = args[1]
                value = _option(tok, "sign", line, c)
                if value not in ("+", "-", "+1", "-1"):
                    raise DiagramSyntaxError(f"sign must be + or -, got {value!r}", line, c)
                sign = -1 if value.startswith("-") else 1
            if v in declared:
                raise DiagramValidationError(f"vertex {v} declared twice (line {line})", v)
            declared[v] = line
            signs[v] = sign
        elif key == "leaf":
            if not 1 <= len(args) <= 2:
                raise DiagramSyntaxError("usage: leaf <id> [orb=<k>]", line, col)
            w = _ident(args[0][1], line, args[0][0])
            orb = 1
            if len(args) == 2:
                c, tok = args[1]
                orb = _int(_option(tok, "orb", line, c), line, c, "orbifold degree")
            if w in declared:
                raise DiagramValidationError(f"vertex {w} declared twice (line {line})", w)
            declared[w] = line
            degrees[w] = orb
        elif key == "edge":
            if not 3 <= len(args) <= 4:
                raise DiagramSyntaxError("usage: edge <idA> <idB> <weightA> [<weightB>]", line, col)
            a = _ident(args[0][1], line, args[0][0])
            b = _ident(args[1][1], line, args[1][0])
            ws = [_int(t, line, c, "edge weight") for c, t in args[2:]]
            edges.append((line, col, a, b, ws))
        else:
            raise DiagramSyntaxError(f"unknown keyword {key!r}", line, col)

    weights: dict[tuple[str, str], int] = {}
    for line, col, a, b, ws in edges:
        for x in (a, b):
            if x not in declared:
                raise DiagramValidationError(f"line {line}: edge uses undeclared vertex {x}", x)
        if (a, b) in weights or (b, a) in weights:
            raise DiagramValidationError(f"line {line}: duplicate edge {a}-{b}", (a, b))
        if a in signs and b in signs:
            if len(ws) != 2:
                raise DiagramValidationError(
                    f"line {line}: node-node edge {a}-{b} needs two weights (missing weight)", (a, b))
            weights[(a, b)], weights[(b, a)] = ws
        elif a in signs or b in signs:
            if len(ws) != 1:
                raise DiagramValidationError(
                    f"line {line}: leaf edge {a}-{b} takes exactly one weight", (a, b))
            node, leaf = (a, b) if a in signs else (b, a)
            weights[(node, leaf)] = ws[0]
        else:
            raise DiagramValidationError(f"line {line}: edge {a}-{b} joins two leaves", (a, b))
    for w in degrees:
        if not any(u == w for (_, u) in weights):
            raise DiagramValidationError(f"leaf {w} has valence 0", w)
    return SpliceDiagram(signs, weights, degrees)


def parse_plumbing(text: str) -> PlumbingGraph:
    kind, lines = _split_header(text)
    if kind != "plumbing":
        raise DiagramSyntaxError("expected a plumbing document", lines[0][0] if lines else 1, 1)
    euler: dict[str, int] = {}
    arrows: dict[str, int] = {}
    edges = []
    for line, toks in lines:
        col, key = toks[0]
        args = toks[1:]
        if key == "vertex":
            if len(args) != 2:
                raise DiagramSyntaxError("usage: vertex <id> euler=<int>", line, col)
            v = _ident(args[0][1], line, args[0][0])
            c, tok = args[1]
            e = _int(_option(tok, "euler", line, c), line, c, "Euler weight")
            if v in euler:
                raise DiagramValidationError(f"vertex {v} declared twice (line {line})", v)
            euler[v] = e
        elif key == "edge":
            if len(args) != 2:
                raise DiagramSyntaxError("usage: edge <idA> <idB>", line, col)
            edges.append((_ident(args[0][1], line, args[0][0]), _ident(args[1][1], line, args[1][0])))
        elif key == "arrow":
            if len(args) != 2:
                raise DiagramSyntaxError("usage: arrow <id> degree=<k>", line, col)
            v = _ident(args[0][1], line, args[0][0])
            c, tok = args[1]
            k = _int(_option(tok, "degree", line, c), line, c, "arrow degree")
            if v in arrows:
                raise DiagramValidationError(f"line {line}: two arrows on vertex {v}", v)
            arrows[v] = k
        else:
            raise DiagramSyntaxError(f"unknown keyword {key!r}", line, col)
    return PlumbingGraph(euler, tuple(edges), arrows)


# ---------------------------------------------------------------------------
# Serialization and comparison


def serialize(d) -> str:
    """Canonical text for a document, splice diagram or plumbing graph."""
    if isinstance(d, DiagramDocument):
        d = d.payload
    if isinstance(d, SpliceDiagram):
        out = ["splice"]
        for v in d.nodes:
            out.append(f"node {v} sign={'+' if d.sign(v) > 0 else '-'}")
        for w in d.leaves:
            o = d.degree(w)
            out.append(f"leaf {w}" + (f" orb={o}" if o != 1 else ""))
        for a, b in d.edges:
            if d.is_node(b):
                out.append(f"edge {a} {b} {d.weight(a, b)} {d.weight(b, a)}")
            else:
                out.append(f"edge {a} {b} {d.weight(a, b)}")
        return "\n".join(out) + "\n"
    if isinstance(d, PlumbingGraph):
        out = ["plumbing"]
        for v in d.vertices:
            out.append(f"vertex {v} euler={d.euler[v]}")
        for a, b in d.edges:
            out.append(f"edge {a} {b}")
        for v in sorted(d.arrows):
            out.append(f"arrow {v} degree={d.arrows[v]}")
        return "\n".join(out) + "\n"
    raise TypeError(f"cannot serialize {type(d).__name__}")


def _rooted(adjacency, label, edge_label, v, parent):
    kids = sorted((edge_label(v, c), _rooted(adjacency, label, edge_label, c, v))
                  for c in adjacency[v] if c != parent)
    return (label(v), tuple(kids))


def canonical_key(d):
    """Isomorphism invariant: equal keys iff equal up to vertex renaming."""
    if isinstance(d, DiagramDocument):
        d = d.payload
    if isinstance(d, SpliceDiagram):
        adjacency = {v: d.neighbors(v) for v in d.vertices}

        def label(v):
            return (0, d.sign(v)) if d.is_node(v) else (1, d.degree(v))

        def edge_label(v, c):
            return (d.weights.get((v, c), 0), d.weights.get((c, v), 0))
    else:
        adjacency = {v: d.neighbors(v) for v in d.vertices}

        def label(v):
            return (d.euler[v], d.degree(v))

        def edge_label(v, c):
            return ()
    return min(_rooted(adjacency, label, edge_label, r, None) for r in adjacency)


def same_diagram(a, b) -> bool:
    return type(a) is type(b) and canonical_key(a) == canonical_key(b)
