"""Acceptance criteria 1-8, one printed PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py`` (the lines appear in the
terminal summary) or directly with ``python3 tests/test_acceptance.py``.
All comparisons are exact.
"""

from __future__ import annotations

import sys
from itertools import product
from math import gcd
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from conftest import FIXTURES, load, plumbing_fixtures  # noqa: E402

from splicekit.construct import (  # noqa: E402
    choose_coefficients,
    construct,
    manifold_plumbings,
    verify_construction,
)
from splicekit.diagrams import SpliceDiagram  # noqa: E402
from splicekit.discriminant import (  # noqa: E402
    discriminant_data,
    generated_subgroup,
    is_reducible,
    scaled_rows,
)
from splicekit.equations import (  # noqa: E402
    check_homogeneity,
    default_choices,
    generate_equations,
    maximal_minors,
)
from splicekit.exact import cf_evaluate, cf_expand, string_invariants  # noqa: E402
from splicekit.plumbing import (  # noqa: E402
    DegenerateShapeError,
    SeifertData,
    extract_splice,
    homology,
    intersection_data,
    seifert_homology_order,
)
from splicekit.splice import (  # noqa: E402
    check_conditions,
    edge_determinant,
    ideal_generator,
    reduce_splice,
    underlying_splice,
)

RESULTS: dict[int, tuple[bool, str]] = {}


def record(number: int, ok: bool, detail: str) -> bool:
    RESULTS[number] = (ok, detail)
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'} - {detail}"
    print(line)
    return ok


def criterion_1():
    g = load("orbifold_three_node.splice")
    u = underlying_splice(g)
    pairs = [("A", "B"), ("B", "A"), ("C", "B"), ("B", "C"), ("A", "w1"), ("B", "w3"), ("C", "w2")]
    got = {f"{v}->{u}": u_w for (v, u), u_w in zip(pairs, (u.weight(*e) for e in pairs))}
    want = {"A->B": 433, "B->A": 26, "C->B": 317, "B->C": 51, "A->w1": 2, "B->w3": 1, "C->w2": 3}
    r = reduce_splice(u)
    central = (r.weight("A", "C"), r.weight("C", "A"))
    ok = got == want and r.nodes == ["A", "C"] and central == (433, 317)
    return record(1, ok, f"underlying weights {got}; reduced central weights {central} "
                         "(B->C is 102 / 2 = 51)")


def criterion_2():
    g = load("three_node_obstructed.splice")
    r = check_conditions(g)
    dets = sorted(r.edge_determinants.values())
    gen = ideal_generator(g, "w", "C")
    ok = dets == [20, 26] and gen == 4 and not r.realizability_screen and r.semigroup_condition
    return record(2, ok, f"edge determinants {dets}, ideal generator at w = {gen}, "
                         f"screen {'fails' if not r.realizability_screen else 'passes'}, "
                         f"semigroup {'holds' if r.semigroup_condition else 'fails'}")


def criterion_3():
    g = load("four_node_obstructed.splice")
    dets = sorted(edge_determinant(g, a, b) for a, b in g.node_edges)
    g30 = gcd(*dets)
    alphas = (6, 21, 10)
    hits = []
    checked = 0
    for b in range(-10, 11):
        betas = [[x for x in range(1, a) if gcd(a, x) == 1] for a in alphas]
        for bs in product(*betas):
            s = SeifertData(b, tuple(zip(alphas, bs)))
            order = seifert_homology_order(s)
            assert order == s.closed_form_order()
            checked += 1
            if order == 60:
                hits.append((b, bs))
    ok = dets == [180, 300, 630] and g30 == 30 and not hits
    return record(3, ok, f"edge determinants {dets}, gcd {g30}; {checked} Seifert manifolds "
                         f"(6,21,10) with b in [-10,10] checked, {len(hits)} with |H1| = 60")


def criterion_4():
    details = []
    ok = True
    for name, expected in (("two_node_21.splice", 21), ("two_node_75.splice", 75)):
        g = load(name)
        choices = choose_coefficients(g, cap=64)
        count = 0
        for c in choices:
            out = construct(g, c)
            r = verify_construction(g, out)
            good = (r.splice_matches and r.homology_order == expected == out.edge_determinant
                    and r.reducible and is_reducible(c.alpha, out.degrees)
                    and r.two_node_congruence and r.orbifold_congruence)
            count += good
            ok &= bool(good)
        ok &= bool(choices)
        details.append(f"{name}: {count}/{len(choices)} choices verified, order {expected}")
    return record(4, ok, "; ".join(details))


SKIPPED_SHAPES: list[str] = []


def _discriminant_plumbings():
    out = []
    SKIPPED_SHAPES.clear()
    for name in plumbing_fixtures():
        p = load(name)
        try:
            extract_splice(p)
        except DegenerateShapeError:
            SKIPPED_SHAPES.append(name)
            continue
        out.append((name, p))
    for i, p in enumerate(manifold_plumbings(load("two_node_21.splice"))):
        out.append((f"manifold plumbing {i} of two_node_21", p))
    return out


def criterion_5():
    failures = []
    counted = 0
    outside_link = []
    for name, p in _discriminant_plumbings():
        d = discriminant_data(p)
        if d.det > 200:
            continue
        counted += 1
        g = d.diagram
        # pairing = leaf block of A(M)^-1, read with the transposed index
        inv = intersection_data(p, orbifold=True)
        for w, v in d.leaf_vertices.items():
            for u, x in d.leaf_vertices.items():
                if d.pairing[d.index(w)][d.index(u)] != inv.entry(x, v):
                    failures.append(f"{name}: pairing entry {w},{u}")
        link = all(g.sign(v) > 0 for v in g.nodes) and all(
            edge_determinant(g, a, b) > 0 for a, b in g.node_edges)
        if not link:
            # the closed forms are stated for singularity links only
            outside_link.append(name)
        elif d.off_diagonal_mismatches or d.diagonal_mismatches:
            failures.append(f"{name}: closed forms")
        rows = scaled_rows(d)
        group = generated_subgroup(rows, d.det)
        if len(group) != d.det:
            failures.append(f"{name}: order {len(group)} != {d.det}")
        single = sum(1 for x in group if sum(1 for c in x if c) == 1)
        if single:
            failures.append(f"{name}: {single} nontrivial elements with one nonzero coordinate")
        for i in range(len(rows)):
            sub = generated_subgroup(rows[:i] + rows[i + 1:], d.det)
            if len(sub) != d.det:
                failures.append(f"{name}: dropping row {d.leaves[i]} generates order {len(sub)}")
    ok = not failures
    detail = f"{counted} plumbings with det <= 200"
    if outside_link:
        detail += " (closed forms not compared on " + ", ".join(outside_link) + ")"
    if failures:
        detail += "; " + "; ".join(failures)
    return record(5, ok, detail)


def criterion_6():
    bad = []
    pairs = 0
    for n in range(1, 201):
        for p in range(n):
            if gcd(n, p) != 1:
                continue
            pairs += 1
            s = cf_expand(n, p)
            inv = string_invariants(s)
            if cf_evaluate(s) != (n, p) or not all(b >= 2 for b in s) or (inv.p * inv.p_rev - 1) % n:
                bad.append((n, p))
    return record(6, not bad, f"{pairs} coprime pairs (n, p) with n <= 200, {len(bad)} failures")


def criterion_7():
    problems = []
    for path in sorted(FIXTURES.glob("*.splice")):
        g = load(path.name)
        if not check_conditions(g).semigroup_condition:
            continue
        s = generate_equations(g)
        rep = check_homogeneity(s, g)
        problems += [f"{path.name}: {v}" for v in rep.violations]
    g = load("two_node_75.splice")
    choices = default_choices(g)
    choices[("L", "R")] = {"c": 1, "d": 10}
    choices[("R", "L")] = {"a": 1, "b": 0}
    s = generate_equations(g, choices)
    shapes = [[{w: e for w, e in m.items() if e} for m in ne.monomials] for ne in s.nodes]
    want = [[{"a": 3}, {"b": 15}, {"c": 1, "d": 10}], [{"c": 2}, {"d": 3}, {"a": 1}]]
    if shapes != want:
        problems.append(f"two-node system shapes {shapes}")
    if not check_homogeneity(s, g).ok:
        problems.append("two-node system not homogeneous")
    for k in range(3, 9):
        primes = [2, 3, 5, 7, 11, 13, 17, 19][:k]
        gk = SpliceDiagram({"v": 1}, {("v", f"x{i}"): q for i, q in enumerate(primes)}, {})
        coeffs = generate_equations(gk).nodes[0].coefficients
        if any(m == 0 for m in maximal_minors(coeffs)):
            problems.append(f"valence {k}: vanishing minor")
    return record(7, not problems, "homogeneity, two-node shapes {z1^3, z2^15, z3 z4^10} / "
                                   "{z3^2, z4^3, z1}, minors for valence 3..8"
                  + ("" if not problems else "; " + "; ".join(problems)))


def criterion_8():
    problems = []
    count = 0
    for name, p in _discriminant_plumbings():
        order = homology(p, orbifold=True).order
        if order is None:
            continue
        count += 1
        g = extract_splice(p)
        for a, b in g.node_edges:
            D = edge_determinant(g, a, b)
            if D % order:
                problems.append(f"{name}: {order} does not divide D({a}-{b}) = {D}")
        r = check_conditions(g)
        if not r.ideal_condition:
            problems.append(f"{name}: ideal condition fails")
    return record(8, not problems, f"{count} rational homology sphere plumbings"
                  + (" (no splice diagram: " + ", ".join(SKIPPED_SHAPES) + ")" if SKIPPED_SHAPES else "")
                  + ("" if not problems else "; " + "; ".join(problems)))


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6,
            criterion_7, criterion_8]


@pytest.mark.parametrize("criterion", CRITERIA, ids=[f"criterion_{i}" for i in range(1, 9)])
def test_acceptance(criterion):
    assert criterion(), RESULTS[CRITERIA.index(criterion) + 1][1]


if __name__ == "__main__":
    results = [c() for c in CRITERIA]
    sys.exit(0 if all(results) else 1)
