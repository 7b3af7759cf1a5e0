"""Expansion of secret blocks into the dual-variant closure form.

A secret block is written as a zero-argument function decorated with
``@secret_block(Label_X)``; after expansion the decorated name is bound to
the block's value.  The emitted shape is a constant-true conditional whose
taken branch runs the executed variant under panic containment inside
``call_closure`` at the block's label, and whose untaken branch holds the
checked variant inside an identical ``call_closure``.
"""

from __future__ import annotations

import ast

from . import errors as E
from .rewrite import Context, Rewriter, _const, _name, _rt_call
from .typesys import (
    ModuleEnv, SecretT, SType, parse_annotation, tail_identifier,
)


def is_secret_block_def(node) -> bool:
    if not isinstance(node, ast.FunctionDef):
        return False
    for dec in node.decorator_list:
        if (isinstance(dec, ast.Call) and isinstance(dec.func, ast.Name)
                and dec.func.id == "secret_block"):
            return True
    return False


def block_label_name(node: ast.FunctionDef, env: ModuleEnv,
                     filename: str) -> str:
    decs = node.decorator_list
    if len(decs) != 1:
        E.reject(E.MACRO_OPACITY,
                 "secret blocks accept no other decorators; a wrapping "
                 "decorator could observe or rewrite the expansion",
                 node, filename)
    dec = decs[0]
    if not (isinstance(dec, ast.Call) and len(dec.args) == 1
            and not dec.keywords):
        E.reject(E.BAD_LABEL, "secret_block takes exactly one label",
                 node, filename)
    label = tail_identifier(dec.args[0])
    if label is None:
        E.reject(E.BAD_LABEL, "the block label must be a label name",
                 dec, filename)
    if env.family is None:
        E.reject(E.BAD_LABEL,
                 "no secrecy policies declared; add "
                 "__secrecy_policies__ = [...] to the module", node, filename)
    if not env.family.has_label(label):
        E.reject(E.BAD_LABEL,
                 f"label {label} is not in the declared family "
                 f"(policies {sorted(t.name for t in env.family.base_policies)})",
                 dec, filename)
    return label


def expand_secret_block(node: ast.FunctionDef, env: ModuleEnv,
                        enclosing: list[dict[str, SType]], fresh,
                        filename: str) -> tuple[list[ast.stmt], SType]:
    """Rewrite one block def into (exec def, checked def, result binding)."""
    label = block_label_name(node, env, filename)
    args = node.args
    if (args.args or args.posonlyargs or args.kwonlyargs or args.vararg
            or args.kwarg or args.defaults or args.kw_defaults):
        E.reject(E.UNSUPPORTED, "secret blocks take no parameters",
                 node, filename)

    ctx = Context(env=env, mode="block", label=label, enclosing=enclosing,
                  fresh=fresh, filename=filename)
    rewriter = Rewriter(ctx)
    result = rewriter.run_block(node.body)

    if node.returns is not None:
        declared = parse_annotation(node.returns, env)
        if isinstance(declared, SecretT) and declared.label != label:
            E.reject(E.RETURN_LABEL,
                     f"declared result label {declared.label} differs from "
                     f"the block label {label}", node, filename)

    exec_name = fresh("blk_exec")
    chk_name = fresh("blk_chk")

    decls: list[ast.stmt] = []
    for var, kind in sorted(result.scope_decls.items()):
        decls.append(ast.Global(names=[var]) if kind == "global"
                     else ast.Nonlocal(names=[var]))

    default_value = ast.parse(result.default_src, mode="eval").body
    handler = ast.ExceptHandler(
        type=_name("Exception"), name=None,
        body=[ast.Return(value=default_value)])
    try_stmt = ast.Try(body=result.exec_stmts, handlers=[handler],
                       orelse=[], finalbody=[])
    exec_def = ast.FunctionDef(
        name=exec_name,
        args=ast.arguments(posonlyargs=[], args=[], vararg=None,
                           kwonlyargs=[], kw_defaults=[], kwarg=None,
                           defaults=[]),
        body=decls + [try_stmt], decorator_list=[], returns=None)

    chk_def = ast.FunctionDef(
        name=chk_name,
        args=ast.arguments(posonlyargs=[], args=[], vararg=None,
                           kwonlyargs=[], kw_defaults=[], kwarg=None,
                           defaults=[]),
        body=result.checked_stmts, decorator_list=[], returns=None)

    value = ast.IfExp(
        test=_const(True),
        body=_rt_call("call_closure", _const(label), _name(exec_name)),
        orelse=_rt_call("call_closure", _const(label), _name(chk_name)))
    binding = ast.Assign(targets=[_name(node.name, ast.Store())], value=value)

    return [exec_def, chk_def, binding], result.result_type
