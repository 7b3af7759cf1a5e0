"""Check-function identities, safe operators, derive, allowlist registry."""

from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from labelflow import MutCell, invisible_side_effect_free, is_allowlisted
from labelflow.capabilities import (STD_SIGNATURES, allowlist, check_ISEF,
                                    check_ISEF_ref, check_not_mut_secret,
                                    parse_allowlist, safe_add, safe_bitxor,
                                    safe_div, safe_eq, safe_index, safe_lt,
                                    safe_mul, safe_neg, safe_sub)
from labelflow.errors import CapabilityError
from labelflow import std


def test_check_functions_are_aliasing_identities():
    value = [1, 2, 3]
    assert check_ISEF(value) is value
    assert check_ISEF_ref(value) is value
    assert check_not_mut_secret(value) is value


@given(st.integers(), st.integers())
def test_safe_add_matches_builtin(x, y):
    assert safe_add(x, y) == x + y


@given(st.integers(), st.integers())
def test_safe_sub_mul_match_builtin(x, y):
    assert safe_sub(x, y) == x - y
    assert safe_mul(x, y) == x * y


@given(st.floats(allow_nan=False, allow_infinity=False),
       st.floats(allow_nan=False, allow_infinity=False))
def test_safe_comparisons_match_builtin(x, y):
    assert safe_lt(x, y) == (x < y)
    assert safe_eq(x, y) == (x == y)


@given(st.integers(min_value=-10**9, max_value=10**9),
       st.integers(min_value=1, max_value=10**6))
def test_safe_div_matches_builtin(x, y):
    assert safe_div(x, y) == x / y


@given(st.integers(), st.integers())
def test_safe_bitxor_and_neg_match_builtin(x, y):
    assert safe_bitxor(x, y) == x ^ y
    assert safe_neg(x) == -x


def test_safe_add_example():
    assert safe_add(2, 3) == 5


def test_safe_operators_reject_application_types():
    class Custom:
        def __add__(self, other):
            return 0

    with pytest.raises(CapabilityError):
        safe_add(Custom(), Custom())
    with pytest.raises(CapabilityError):
        safe_neg(Custom())
    with pytest.raises(CapabilityError):
        safe_index(Custom(), 0)


def test_safe_operators_reject_subclasses_of_builtins():
    class EvilInt(int):
        def __add__(self, other):
            return 666

    with pytest.raises(CapabilityError):
        safe_add(EvilInt(1), 2)


def test_safe_index_matches_builtin():
    assert safe_index([10, 20], 1) == 20
    assert safe_index({"k": 5}, "k") == 5
    assert safe_index("abc", 2) == "c"


def test_derive_accepts_plain_record():
    @invisible_side_effect_free
    class Point:
        x: int = 0
        y: int = 0

    assert Point().x == 0


def test_derive_accepts_empty_record():
    @invisible_side_effect_free
    class Nothing:
        pass

    assert Nothing() is not None


def test_derive_rejects_destructor():
    with pytest.raises(CapabilityError, match="destructor"):
        @invisible_side_effect_free
        class Leaky:
            def __del__(self):
                pass


def test_derive_rejects_attribute_hooks():
    with pytest.raises(CapabilityError):
        @invisible_side_effect_free
        class Hooked:
            def __getattr__(self, name):
                return 0


def test_derive_rejects_properties():
    with pytest.raises(CapabilityError, match="property"):
        @invisible_side_effect_free
        class Propd:
            @property
            def sneaky(self):
                return 0


def test_mutcell_roundtrip():
    cell = MutCell(3)
    cell.set(4)
    assert cell.get() == 4


def test_allowlist_membership_is_exact_string():
    assert is_allowlisted("std.str.len")
    assert is_allowlisted("std.map.get")
    assert not is_allowlisted("len")
    assert not is_allowlisted("str.len")
    assert not is_allowlisted("std.str.len ")
    # Sorting takes a caller-supplied comparison; excluded by policy.
    assert not is_allowlisted("std.list.sort")


def test_allowlist_entries_have_notes_arity_and_implementations():
    entries = allowlist()
    assert len(entries) >= 20
    for name, entry in entries.items():
        assert entry.note.strip(), name
        assert entry.arity >= 1, name
        assert name in STD_SIGNATURES, name
        namespace_name, fn_name = name.split(".")[1:]
        namespace = getattr(std, namespace_name)
        fn = getattr(namespace, fn_name)
        assert callable(fn), name


def test_allowlist_parse_rejects_duplicates():
    with pytest.raises(ValueError):
        parse_allowlist("std.x.y 1 one\nstd.x.y 1 two\n")


def test_std_shim_behavior():
    assert std.str.len("abcd") == 4
    assert std.str.chars("ab") == ["a", "b"]
    assert std.char.is_digit("f", 16)
    assert not std.char.is_digit("g", 16)
    assert std.option.unwrap(5) == 5
    with pytest.raises(ValueError):
        std.option.unwrap(None)
    assert std.map.get({"k": 1}, "k") == 1
    assert std.map.get({"k": 1}, "z") is None
    grid = std.grid.fill(2, 3, False)
    grid[0][0] = True
    assert grid[1][0] is False  # rows are not aliased
    xs = std.list.repeat(0, 2)
    std.list.push(xs, 9)
    assert xs == [0, 0, 9]
    assert std.math.min(2, 1) == 1
    assert std.math.max(2, 1) == 2
    assert std.math.sqrt(9.0) == 3.0
    assert std.int.to_str(12) == "12"
    assert std.float.to_int(2.9) == 2


@given(st.one_of(st.integers(), st.text(), st.booleans(),
                 st.lists(st.integers()),
                 st.dictionaries(st.text(), st.integers()),
                 st.tuples(st.integers(), st.floats(allow_nan=False))))
def test_check_identities_over_generated_values(value):
    assert check_ISEF(value) is value
    assert check_ISEF_ref(value) is value
    assert check_not_mut_secret(value) is value
