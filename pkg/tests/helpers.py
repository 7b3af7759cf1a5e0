"""Shared test helpers: compilation shorthands and tree normalization."""

from __future__ import annotations

import ast
import re
import textwrap

from labelflow.errors import Rejection
from labelflow.transform import compile_secret_source, transform_module

POLICY_HEADER = '__secrecy_policies__ = ["a", "b"]\n'

COMMON_IMPORTS = textwrap.dedent("""\
    from labelflow import (Secret, MutCell, declassify, declassify_ref,
                           declassify_ref_mut, declassify_transmute,
                           invisible_side_effect_free, secret_block,
                           side_effect_free, std, unsafe_region,
                           unwrap_secret, unwrap_secret_mut_ref,
                           unwrap_secret_ref, wrap_secret)
    from labelflow.demo_lattice import Label_A, Label_AB, Label_B, Label_Empty
    """)


def program(body: str) -> str:
    return COMMON_IMPORTS + POLICY_HEADER + textwrap.dedent(body)


def compiles(body: str, filename: str = "<test>"):
    return compile_secret_source(program(body), filename)


def rejection_category(body: str, filename: str = "<test>") -> str | None:
    try:
        compile_secret_source(program(body), filename)
        return None
    except Rejection as rej:
        return rej.category


def run_program(body: str, filename: str = "<test>") -> dict:
    import sys
    import types

    code = compiles(body, filename)
    module = types.ModuleType(f"_test_mod_{abs(hash(body)) % 10 ** 8}")
    sys.modules[module.__name__] = module
    try:
        exec(code, module.__dict__)
    finally:
        sys.modules.pop(module.__name__, None)
    return module.__dict__


_HYGIENE = re.compile(r"^_lf_(tmp|blk_exec|blk_chk|sef)\d+$")


class _HygieneEraser(ast.NodeTransformer):
    """Rename generated identifiers to stable placeholders, in visit order."""

    def __init__(self):
        self.mapping: dict[str, str] = {}

    def _canon(self, name: str) -> str:
        if not _HYGIENE.match(name):
            return name
        if name not in self.mapping:
            stem = name.rstrip("0123456789")
            self.mapping[name] = f"{stem}N{len(self.mapping)}"
        return self.mapping[name]

    def visit_Name(self, node: ast.Name):
        node.id = self._canon(node.id)
        return node

    def visit_FunctionDef(self, node: ast.FunctionDef):
        node.name = self._canon(node.name)
        self.generic_visit(node)
        return node


def normalized_dump(tree: ast.Module) -> str:
    tree = _HygieneEraser().visit(tree)
    return ast.dump(tree, annotate_fields=True, include_attributes=False)


def normalized_source_dump(source: str) -> str:
    return normalized_dump(ast.parse(source))


def normalized_transform(source: str, filename: str = "<test>") -> str:
    return normalized_dump(transform_module(source, filename))
