"""Label-family generation, ordering, join laws, emitted declarations."""

from __future__ import annotations

import itertools
from pathlib import Path

import pytest
from hypothesis import given, strategies as st

from labelflow.errors import LatticeError
from labelflow.lattice import (PolicyTag, canonical_label_name,
                               generate_lattice, render_declarations)

ABC = generate_lattice(["a", "b", "c"])
AB = generate_lattice(["a", "b"])


def test_two_policy_family_shape():
    assert sorted(AB.labels) == ["Label_A", "Label_AB", "Label_B",
                                 "Label_Empty"]
    top = AB.label("Label_AB")
    for name in AB.labels:
        assert AB.at_least_as_secret(top, AB.label(name))
    bottom = AB.label("Label_Empty")
    above_bottom = [n for n in AB.labels
                    if AB.at_least_as_secret(AB.label(n), bottom)]
    assert sorted(above_bottom) == sorted(AB.labels)
    below_bottom = [n for n in AB.labels if n != "Label_Empty"
                    and AB.at_least_as_secret(bottom, AB.label(n))]
    assert below_bottom == []


def test_empty_family():
    family = generate_lattice([])
    assert list(family.labels) == ["Label_Empty"]
    assert family.order == frozenset({("Label_Empty", "Label_Empty")})


def test_three_policy_pair_count():
    # Brute-force enumeration of subset pairs as the independent oracle.
    subsets = [frozenset(c) for r in range(4)
               for c in itertools.combinations("abc", r)]
    oracle = sum(1 for hi in subsets for lo in subsets if lo <= hi)
    assert len(ABC.labels) == 8
    assert len(ABC.order) == oracle == 27


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_order_matches_subset_oracle_exhaustively(n):
    policies = list("wxyz"[:n])
    family = generate_lattice(policies)
    for l1 in family.labels.values():
        for l2 in family.labels.values():
            assert family.at_least_as_secret(l1, l2) == (
                l2.policies <= l1.policies)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_partial_order_laws(n):
    family = generate_lattice(list("pqrs"[:n]))
    labels = list(family.labels.values())
    for l1 in labels:
        assert family.at_least_as_secret(l1, l1)
        for l2 in labels:
            if (family.at_least_as_secret(l1, l2)
                    and family.at_least_as_secret(l2, l1)):
                assert l1 == l2
            for l3 in labels:
                if (family.at_least_as_secret(l1, l2)
                        and family.at_least_as_secret(l2, l3)):
                    assert family.at_least_as_secret(l1, l3)


@given(st.sets(st.sampled_from("abc")), st.sets(st.sampled_from("abc")))
def test_join_is_least_upper_bound(p1, p2):
    l1 = ABC.label(canonical_label_name(frozenset(p1)))
    l2 = ABC.label(canonical_label_name(frozenset(p2)))
    joined = ABC.join(l1, l2)
    assert joined.policies == l1.policies | l2.policies
    assert ABC.at_least_as_secret(joined, l1)
    assert ABC.at_least_as_secret(joined, l2)
    for candidate in ABC.labels.values():
        if (ABC.at_least_as_secret(candidate, l1)
                and ABC.at_least_as_secret(candidate, l2)):
            assert ABC.at_least_as_secret(candidate, joined)


@given(st.sets(st.sampled_from("abc")), st.sets(st.sampled_from("abc")),
       st.sets(st.sampled_from("abc")))
def test_join_laws(p1, p2, p3):
    l1 = ABC.label(canonical_label_name(frozenset(p1)))
    l2 = ABC.label(canonical_label_name(frozenset(p2)))
    l3 = ABC.label(canonical_label_name(frozenset(p3)))
    assert ABC.join(l1, l2) == ABC.join(l2, l1)
    assert ABC.join(l1, ABC.join(l2, l3)) == ABC.join(ABC.join(l1, l2), l3)
    assert ABC.join(l1, l1) == l1
    assert ABC.join(l1, ABC.label("Label_Empty")) == l1


def test_union_example():
    fam = generate_lattice(["a", "b", "c"])
    lab = fam.join(fam.label("Label_AB"), fam.label("Label_BC"))
    assert lab.canonical_name == "Label_ABC"


def test_duplicate_policy_rejected():
    with pytest.raises(LatticeError):
        generate_lattice(["a", "a"])


def test_size_cap_rejected_with_guidance():
    with pytest.raises(LatticeError, match="maximum"):
        generate_lattice(list("abcdef"))


def test_bad_policy_name_rejected():
    with pytest.raises(LatticeError):
        generate_lattice(["ok", ""])
    with pytest.raises(LatticeError):
        PolicyTag("not an identifier")


def test_cross_family_labels_rejected():
    other = generate_lattice(["a", "x"])
    with pytest.raises(LatticeError):
        AB.at_least_as_secret(other.label("Label_X"), AB.label("Label_A"))
    with pytest.raises(LatticeError):
        AB.join(AB.label("Label_A"), other.label("Label_X"))


def test_canonical_name_collision_rejected():
    with pytest.raises(LatticeError, match="collision"):
        generate_lattice(["ab", "a", "b"])


def test_render_is_deterministic(tmp_path):
    text1 = render_declarations(generate_lattice(["a", "b"]))
    text2 = render_declarations(generate_lattice(["a", "b"]))
    assert text1 == text2


def test_shipped_demo_lattice_matches_regeneration():
    shipped = (Path(__file__).parent.parent / "src" / "labelflow"
               / "demo_lattice.py").read_text(encoding="utf-8")
    assert shipped == render_declarations(generate_lattice(["a", "b"]))


def test_generated_module_relation_consumable(tmp_path):
    from labelflow.cli import lattice_gen_main

    out = tmp_path / "lat.py"
    assert lattice_gen_main(["--policies", "a,b", "--out", str(out)]) == 0
    namespace: dict = {}
    exec(compile(out.read_text(), str(out), "exec"), namespace)
    assert ("Label_AB", "Label_A") in namespace["MORE_SECRET_THAN"]
    assert ("Label_A", "Label_B") not in namespace["MORE_SECRET_THAN"]
    assert namespace["FAMILY"].at_least_by_name("Label_AB", "Label_B")
