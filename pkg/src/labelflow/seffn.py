"""Expansion of side-effect-free functions into the three-definition form.

An annotated function becomes:

* an unchecked trampoline holding the executed body (this is what runs);
* a checked trampoline holding the instrumented body, never called, whose
  construction forces the secret-context rules onto the body;
* a dispatch definition under the original name that returns the unchecked
  trampoline's result coerced through the vetted-return wrapper, so only
  transformed callees type-check at secret-context call sites.
"""

from __future__ import annotations

import ast

from . import errors as E
from .capabilities import allowlist
from .rewrite import Context, Rewriter, _name
from .typesys import ModuleEnv, SType, parse_annotation

TRAMPOLINE_FMT = "__{name}_secret_trampoline_{variant}"


def is_sef_def(node) -> bool:
    if not isinstance(node, ast.FunctionDef):
        return False
    return any(isinstance(d, ast.Name) and d.id == "side_effect_free"
               for d in node.decorator_list)


def sef_signature(node: ast.FunctionDef, env: ModuleEnv,
                  filename: str) -> tuple[list[str], list[SType], SType]:
    args = node.args
    if (args.posonlyargs or args.kwonlyargs or args.vararg or args.kwarg
            or args.defaults or args.kw_defaults):
        E.reject(E.UNSUPPORTED,
                 "side-effect-free functions take plain positional "
                 "parameters without defaults", node, filename)
    names, types = [], []
    for a in args.args:
        if a.annotation is None:
            E.reject(E.UNSUPPORTED,
                     f"parameter {a.arg} of side-effect-free function "
                     f"{node.name} needs a type annotation", node, filename)
        names.append(a.arg)
        types.append(parse_annotation(a.annotation, env))
    if node.returns is None:
        E.reject(E.UNSUPPORTED,
                 f"side-effect-free function {node.name} needs a return "
                 f"annotation", node, filename)
    ret = parse_annotation(node.returns, env)
    return names, types, ret


def expand_sef_fn(node: ast.FunctionDef, env: ModuleEnv,
                  enclosing: list[dict[str, SType]], fresh,
                  filename: str) -> list[ast.stmt]:
    if len(node.decorator_list) != 1:
        E.reject(E.MACRO_OPACITY,
                 "side-effect-free functions accept no other decorators",
                 node, filename)
    short_names = {fqn.rsplit(".", 1)[-1] for fqn in allowlist()}
    if node.name in short_names or node.name in allowlist():
        E.reject(E.RESERVED_NAME,
                 f"{node.name} collides with an allowlist entry name",
                 node, filename)

    param_names, param_types, _ret = sef_signature(node, env, filename)
    params = dict(zip(param_names, param_types))

    ctx = Context(env=env, mode="sef", label=None, enclosing=enclosing,
                  fresh=fresh, filename=filename)
    rewriter = Rewriter(ctx, params=params)
    exec_body, checked_body = rewriter.run_sef(node.body)

    def plain_args() -> ast.arguments:
        return ast.arguments(
            posonlyargs=[],
            args=[ast.arg(arg=n, annotation=None) for n in param_names],
            vararg=None, kwonlyargs=[], kw_defaults=[], kwarg=None,
            defaults=[])

    unchecked_name = TRAMPOLINE_FMT.format(name=node.name, variant="unchecked")
    checked_name = TRAMPOLINE_FMT.format(name=node.name, variant="checked")

    unchecked = ast.FunctionDef(name=unchecked_name, args=plain_args(),
                                body=exec_body, decorator_list=[],
                                returns=None)
    checked = ast.FunctionDef(name=checked_name, args=plain_args(),
                              body=checked_body, decorator_list=[],
                              returns=None)

    forward = ast.Call(func=_name(unchecked_name),
                       args=[_name(n) for n in param_names], keywords=[])
    vetted_wrap = ast.Attribute(
        value=ast.Attribute(value=_name("_lf_rt"), attr="Vetted",
                            ctx=ast.Load()),
        attr="_wrap", ctx=ast.Load())
    dispatch_body = [ast.Return(value=ast.Call(func=vetted_wrap,
                                               args=[forward], keywords=[]))]
    dispatch = ast.FunctionDef(name=node.name, args=plain_args(),
                               body=dispatch_body, decorator_list=[],
                               returns=None)
    return [unchecked, checked, dispatch]
