"""Module-wide rules, policy declarations, loader, and import hook."""

from __future__ import annotations

import subprocess
import sys
import textwrap

import pytest

from labelflow import load_secret_module
from labelflow.errors import Rejection
from labelflow.transform import (compile_secret_source, install_import_hook,
                                 uninstall_import_hook)
from helpers import program, rejection_category


def test_missing_policy_declaration_rejected():
    source = textwrap.dedent("""
        from labelflow import secret_block, wrap_secret
        from labelflow.demo_lattice import Label_A

        @secret_block(Label_A)
        def x():
            return wrap_secret(0)
    """)
    with pytest.raises(Rejection) as err:
        compile_secret_source(source, "<nopolicies>")
    assert err.value.category == "E-BAD-LABEL"


def test_policy_declaration_must_be_literal():
    source = "__secrecy_policies__ = make_policies()\n"
    with pytest.raises(Rejection):
        compile_secret_source(source, "<badpolicies>")


def test_policy_errors_surface_with_guidance():
    with pytest.raises(Rejection) as err:
        compile_secret_source('__secrecy_policies__ = ["a", "a"]\n', "<dup>")
    assert "duplicate" in str(err.value)


def test_reserved_prefix_rejected_everywhere():
    assert rejection_category("_lf_thing = 3") == "E-RESERVED-NAME"
    assert rejection_category("""
def outer(_lf_param: int) -> int:
    return _lf_param
""") == "E-RESERVED-NAME"


def test_surface_names_cannot_be_rebound():
    assert rejection_category("std = 3") == "E-RESERVED-NAME"
    assert rejection_category("Secret = dict") == "E-RESERVED-NAME"
    assert rejection_category("import os as declassify") == "E-RESERVED-NAME"


def test_runtime_module_not_importable_from_application_code():
    assert rejection_category(
        "from labelflow import _rt") == "E-VETTED-FORGERY"
    assert rejection_category(
        "import labelflow._rt") == "E-VETTED-FORGERY"


def test_restricted_constructor_access_rejected():
    assert rejection_category("v = Secret._new(1, 'Label_A')") == \
        "E-PAYLOAD-ACCESS"
    assert rejection_category("v = Vetted._wrap(1)") == "E-VETTED-FORGERY"


def test_payload_slot_access_rejected():
    assert rejection_category("""
x: Secret[int, Label_A] = None
v = x._Secret__payload
""") == "E-PAYLOAD-ACCESS"


def test_unsafe_region_exempts_contents():
    # The audited escape admits otherwise-rejected calls; greppable.
    assert rejection_category("""
@side_effect_free
def f(n: int) -> int:
    return n

v = unsafe_region(f(1))
""") is None


def test_non_decorator_secret_block_rejected():
    assert rejection_category("v = secret_block(Label_A)") is not None


def test_loader_runs_transformed_module(tmp_path):
    mod = tmp_path / "sealed_mod.py"
    mod.write_text(program("""
@secret_block(Label_A)
def value():
    return wrap_secret(40)

answer = declassify(value) + 2
"""), encoding="utf-8")
    loaded = load_secret_module(mod, "sealed_mod_test")
    assert loaded.answer == 42


def test_loader_propagates_rejections(tmp_path):
    mod = tmp_path / "bad_mod.py"
    mod.write_text(program("""
@secret_block(Label_A)
def value():
    print("leak")
"""), encoding="utf-8")
    with pytest.raises(Rejection):
        load_secret_module(mod, "bad_mod_test")


def test_import_hook_transforms_marked_modules(tmp_path):
    pkg_file = tmp_path / "hooked_example.py"
    pkg_file.write_text(program("""
@secret_block(Label_AB)
def sealed():
    return wrap_secret(11)

answer = declassify(sealed)
"""), encoding="utf-8")
    sys.path.insert(0, str(tmp_path))
    install_import_hook()
    try:
        import hooked_example  # noqa: F401
        assert hooked_example.answer == 11
    finally:
        uninstall_import_hook()
        sys.path.remove(str(tmp_path))
        sys.modules.pop("hooked_example", None)


def test_import_hook_rejects_bad_marked_modules(tmp_path):
    pkg_file = tmp_path / "hooked_bad.py"
    pkg_file.write_text(program("""
x: Secret[int, Label_AB] = None

@secret_block(Label_A)
def sealed():
    return wrap_secret(unwrap_secret(x))
"""), encoding="utf-8")
    sys.path.insert(0, str(tmp_path))
    install_import_hook()
    try:
        with pytest.raises(Rejection):
            import hooked_bad  # noqa: F401
    finally:
        uninstall_import_hook()
        sys.path.remove(str(tmp_path))
        sys.modules.pop("hooked_bad", None)


def test_unmarked_modules_untouched_by_hook(tmp_path):
    pkg_file = tmp_path / "plain_example_mod.py"
    pkg_file.write_text("value = 5\n", encoding="utf-8")
    sys.path.insert(0, str(tmp_path))
    install_import_hook()
    try:
        import plain_example_mod  # noqa: F401
        assert plain_example_mod.value == 5
    finally:
        uninstall_import_hook()
        sys.path.remove(str(tmp_path))
        sys.modules.pop("plain_example_mod", None)


def test_untransformed_execution_fails_loudly(tmp_path):
    # Importing a secret module without the transform pass must not run the
    # block silently.
    mod = tmp_path / "raw_mod.py"
    mod.write_text(program("""
@secret_block(Label_A)
def value():
    return wrap_secret(5)
"""), encoding="utf-8")
    proc = subprocess.run(
        [sys.executable, str(mod)], capture_output=True, text=True)
    assert proc.returncode != 0
    assert "transform" in proc.stderr


def test_diagnostics_carry_category_and_location():
    try:
        compile_secret_source(program("""
x: Secret[int, Label_AB] = None

@secret_block(Label_A)
def leak():
    return wrap_secret(unwrap_secret(x))
"""), "diag.py")
    except Rejection as rej:
        assert str(rej).startswith("E-READ-UP:")
        assert "diag.py" in str(rej)
    else:
        raise AssertionError("expected a rejection")


def test_double_transform_rejected():
    # Transformed output carries reserved generated names, so feeding it
    # back through the pass fails loudly instead of double-expanding.
    from labelflow.transform import transform_source

    src = program("""
@secret_block(Label_A)
def value():
    return wrap_secret(1)
""")
    once = transform_source(src, "once.py")
    with pytest.raises(Rejection) as err:
        transform_source(once, "twice.py")
    # The injected runtime import trips the forgery rule before the
    # reserved-name scan would; either way the pass refuses its own output.
    assert err.value.category in ("E-VETTED-FORGERY", "E-RESERVED-NAME")
