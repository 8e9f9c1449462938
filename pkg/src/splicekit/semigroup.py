"""Non-negative integer representations ``target = sum(c_i * g_i)``.

This is the coin problem: a reachability table is filled by dynamic
programming and the representations are then walked in lexicographic
order, so the output is deterministic and exhaustive up to ``cap``.
"""

from __future__ import annotations


def _reach_tables(target: int, generators: list[int]) -> list[list[bool]]:
    # tables[i][t]: t is representable using generators[i:]
    k = len(generators)
    tables = [[False] * (target + 1) for _ in range(k + 1)]
    tables[k][0] = True
    for i in range(k - 1, -1, -1):
        g = generators[i]
        nxt = tables[i + 1]
        cur = tables[i]
        for t in range(target + 1):
            if nxt[t] or (g > 0 and t >= g and cur[t - g]):
                cur[t] = True
    return tables


def is_representable(target: int, generators: list[int]) -> bool:
    if target < 0:
        return False
    return _reach_tables(target, list(generators))[0][target]


def representations(target: int, generators, cap: int | None = None) -> list[tuple[int, ...]]:
    """All coefficient vectors, lexicographically ascending, at most ``cap``.

    Zero generators are given coefficient 0 (otherwise there would be
    infinitely many solutions).

    >>> representations(23, [3, 2])
    [(1, 10), (3, 7), (5, 4), (7, 1)]
    """
    generators = list(generators)
    if any(g < 0 for g in generators):
        raise ValueError("generators must be non-negative")
    if target < 0:
        return []
    tables = _reach_tables(target, generators)
    out: list[tuple[int, ...]] = []
    prefix: list[int] = []

    def walk(i: int, remaining: int) -> bool:
        if cap is not None and len(out) >= cap:
            return False
        if i == len(generators):
            if remaining == 0:
                out.append(tuple(prefix))
            return True
        g = generators[i]
        top = remaining // g if g > 0 else 0
        for c in range(top + 1):
            rest = remaining - c * g
            if tables[i + 1][rest]:
                prefix.append(c)
                ok = walk(i + 1, rest)
                prefix.pop()
                if not ok:
                    return False
        return True

    if tables[0][target]:
        walk(0, target)
    return out
