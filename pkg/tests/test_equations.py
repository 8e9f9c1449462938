from itertools import combinations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from splicekit.diagrams import SpliceDiagram
from splicekit.equations import (
    admissible_monomials,
    check_homogeneity,
    default_choices,
    generate_equations,
    maximal_minors,
    v_weights,
)

from conftest import FIXTURES, load


def test_v_weights(gamma_75):
    assert v_weights(gamma_75, "L") == {"a": 345, "b": 69, "c": 135, "d": 90}
    b = load("brieskorn_235.splice")
    assert v_weights(b, "v") == {"x": 15, "y": 10, "z": 6}


def test_admissible_monomials(gamma_75):
    assert {"c": 1, "d": 10} in admissible_monomials(gamma_75, "L", "R")
    assert admissible_monomials(gamma_75, "L", "a") == [{"a": 3}]
    right = admissible_monomials(gamma_75, "R", "L")
    assert {"a": 1, "b": 0} in right and {"a": 0, "b": 5} in right


def test_brieskorn_equation():
    s = generate_equations(load("brieskorn_235.splice"))
    assert s.render() == "x^2 + y^3 + z^5 = 0\n"
    assert check_homogeneity(s, load("brieskorn_235.splice")).node_weights == {"v": 30}


def test_construction_choices_give_the_expected_system(gamma_75):
    choices = default_choices(gamma_75)
    choices[("L", "R")] = {"c": 1, "d": 10}
    choices[("R", "L")] = {"a": 1, "b": 0}
    s = generate_equations(gamma_75, choices)
    shapes = [[{w: e for w, e in m.items() if e} for m in ne.monomials] for ne in s.nodes]
    assert shapes == [[{"a": 3}, {"b": 15}, {"c": 1, "d": 10}], [{"c": 2}, {"d": 3}, {"a": 1}]]
    assert check_homogeneity(s, gamma_75).ok


def test_perturbed_exponent_is_reported(gamma_75):
    s = generate_equations(gamma_75)
    s.nodes[0].monomials[0] = {"a": 4}
    report = check_homogeneity(s, gamma_75)
    assert not report.ok
    assert "node L" in report.violations[0]


def test_missing_choice(gamma_75):
    choices = default_choices(gamma_75)
    del choices[("L", "R")]
    with pytest.raises(KeyError):
        generate_equations(gamma_75, choices)


def star(k):
    primes = [2, 3, 5, 7, 11, 13, 17, 19][:k]
    return SpliceDiagram({"v": 1}, {("v", f"x{i}"): p for i, p in enumerate(primes)}, {})


@given(st.integers(3, 8), st.integers(0, 5))
def test_all_maximal_minors_nonzero(k, seed):
    s = generate_equations(star(k), seed=seed)
    (ne,) = s.nodes
    assert len(ne.coefficients) == k - 2
    assert all(m != 0 for m in maximal_minors(ne.coefficients))


def test_valence_four_minors():
    s = generate_equations(star(4))
    assert len(maximal_minors(s.nodes[0].coefficients)) == len(list(combinations(range(4), 2)))


def test_equation_count_on_fixtures():
    for path in sorted(FIXTURES.glob("*.splice")):
        g = load(path.name)
        s = generate_equations(g)
        assert s.equation_count == len(g.leaves) - 2
        assert check_homogeneity(s, g).ok, path.name
