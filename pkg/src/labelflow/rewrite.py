"""Syntax-directed rewriting of secret-context bodies.

Every secret block and side-effect-free function body is expanded twice:

* the *executed* variant preserves source semantics exactly (operators kept,
  no check calls) while still expanding the wrap/unwrap forms;
* the *checked* variant carries the enforcement scaffolding (identity check
  calls, safe-operator replacements, guarded assignments) and is emitted as
  dead code behind a constant-true guard.

The rules a checked expansion would need to type-check are enforced here,
during the checked pass, with categorized rejections.  The checked pass runs
first and records routing facts (call dispatch, secret write sites) that the
executed pass then consumes.
"""

from __future__ import annotations

import ast
from dataclasses import dataclass, field

from . import errors as E
from .capabilities import (
    AUG_SAFE_NAMES, BINOP_SAFE_NAMES, CMP_SAFE_NAMES, STD_SIGNATURES,
    UNARY_SAFE_NAMES, default_expr_src, is_allowlisted, allowlist,
    is_builtin_operand, isef_violation, mutable_type,
    secret_value_safe_violation, contains_secret,
)
from .core import SECRET_TUPLE_MAX
from .typesys import (
    AppT, BOOL, BYTES, DictT, FLOAT, INT, ListT, ModuleEnv, NONE,
    Scalar, SecretT, SetT, SType, STR, TupleT, UNKNOWN, Unknown,
    dotted_path, parse_annotation,
)

UNWRAP_FORMS = {
    "unwrap_secret": "_unwrap",
    "unwrap_secret_ref": "_unwrap_ref",
    "unwrap_secret_mut_ref": "_unwrap_mut_ref",
}
DECLASSIFY_NAMES = {"declassify", "declassify_ref", "declassify_ref_mut",
                    "declassify_transmute"}
MACRO_NAMES = {"eval", "exec", "compile", "__import__"}


def _name(ident: str, ctx=None) -> ast.Name:
    return ast.Name(id=ident, ctx=ctx or ast.Load())


def _const(value) -> ast.Constant:
    return ast.Constant(value=value)


def _rt(attr: str) -> ast.Attribute:
    return ast.Attribute(value=_name("_lf_rt"), attr=attr, ctx=ast.Load())


def _rt_call(fname: str, *args) -> ast.Call:
    return ast.Call(func=_rt(fname), args=list(args), keywords=[])


def _secret_op(op: str, *args) -> ast.Call:
    secret = ast.Attribute(value=_rt("Secret"), attr=op, ctx=ast.Load())
    return ast.Call(func=secret, args=list(args), keywords=[])


def _vetted_project(inner) -> ast.Call:
    vetted = ast.Attribute(value=_rt("Vetted"), attr="_project", ctx=ast.Load())
    return ast.Call(func=vetted, args=[inner], keywords=[])


def _walrus(tmp: str, value) -> ast.NamedExpr:
    return ast.NamedExpr(target=_name(tmp, ast.Store()), value=value)


def _definitely_returns(stmt) -> bool:
    """Whether control cannot flow past this statement without returning."""
    if isinstance(stmt, ast.Return):
        return True
    if isinstance(stmt, ast.If):
        return (bool(stmt.orelse)
                and _definitely_returns(stmt.body[-1])
                and _definitely_returns(stmt.orelse[-1]))
    if isinstance(stmt, ast.Match):
        has_wildcard = any(
            isinstance(c.pattern, ast.MatchAs) and c.pattern.pattern is None
            for c in stmt.cases)
        return has_wildcard and all(
            _definitely_returns(c.body[-1]) for c in stmt.cases)
    return False


@dataclass
class ExprInfo:
    node: ast.expr
    stype: SType
    readonly: bool = False


@dataclass
class Local:
    stype: SType
    kind: str = "plain"  # plain | param | ro_view | rw_view


@dataclass
class Context:
    env: ModuleEnv
    mode: str                      # "block" | "sef"
    label: str | None              # block label, canonical name
    enclosing: list[dict[str, SType]]  # module scope first, inner scopes last
    fresh: object                  # callable prefix -> unique identifier
    filename: str = "<secret>"


@dataclass
class BlockResult:
    exec_stmts: list
    checked_stmts: list
    shape: str                     # "unit" | "single" | "tuple"
    result_type: SType
    default_src: str | None
    scope_decls: dict[str, str] = field(default_factory=dict)


class Rewriter:
    """One secret context's dual expansion."""

    def __init__(self, ctx: Context, params: dict[str, SType] | None = None):
        self.ctx = ctx
        self.env = ctx.env
        self.locals: dict[str, Local] = {
            name: Local(stype, "param") for name, stype in (params or {}).items()
        }
        self.facts: dict[int, dict] = {}
        self.scope_decls: dict[str, str] = {}
        self.loop_depth = 0
        self.return_shape: tuple | None = None

    # -- helpers -----------------------------------------------------------

    def reject(self, category, message, node):
        E.reject(category, message, node, self.ctx.filename)

    def fresh(self, prefix="tmp"):
        return self.ctx.fresh(prefix)

    def lookup_enclosing(self, name: str) -> SType | None:
        for scope in reversed(self.ctx.enclosing):
            if name in scope:
                return scope[name]
        return None

    def scope_decl_kind(self, name: str) -> str:
        # Module scope is enclosing[0]; writes there need `global`.
        for scope in reversed(self.ctx.enclosing[1:]):
            if name in scope:
                return "nonlocal"
        return "global"

    def require_isef(self, stype: SType, node):
        bad = isef_violation(stype, self.env)
        if bad:
            self.reject(bad[0], bad[1], node)

    def label_ok_read(self, value_label: str) -> bool:
        return self.env.family.at_least_by_name(self.ctx.label, value_label)

    # -- entry points ------------------------------------------------------

    def run_block(self, body: list) -> BlockResult:
        checked = self.check_stmts(body)
        exec_stmts = self.exec_stmts_of(body)
        shape, rtype, default_src = self.finish_result(body)
        if shape != "unit" and not _definitely_returns(body[-1]):
            self.reject(E.RETURN_LABEL,
                        "a value-producing block must end on a statement "
                        "that always returns its result", body[-1])
        return BlockResult(exec_stmts, checked, shape, rtype, default_src,
                           dict(self.scope_decls))

    def run_sef(self, body: list) -> tuple[list, list]:
        checked = self.check_stmts(body)
        exec_stmts = self.exec_stmts_of(body)
        return exec_stmts, checked

    def finish_result(self, body):
        if self.return_shape is None:
            return "unit", NONE, "None"
        kind = self.return_shape[0]
        if kind == "single":
            stype = self.return_shape[1]
            src = default_expr_src(stype, self.env)
            if src is None:
                self.reject(E.NO_DEFAULT,
                            f"block result {stype!r} provides no default "
                            f"value for panic containment", body[-1])
            return "single", stype, src
        stypes = self.return_shape[1]
        srcs = [default_expr_src(t, self.env) for t in stypes]
        if any(s is None for s in srcs):
            self.reject(E.NO_DEFAULT, "block result tuple provides no "
                                      "default value for panic containment",
                        body[-1])
        return "tuple", TupleT(tuple(stypes)), "(" + ", ".join(srcs) + ")"

    # ======================================================================
    # Checked pass (the R function): enforces every rule while rewriting

    def check_stmts(self, stmts: list) -> list:
        out = []
        for s in stmts:
            out.extend(self.check_stmt(s))
        return out or [ast.Pass()]

    def check_stmt(self, s) -> list:
        if isinstance(s, ast.Expr):
            if isinstance(s.value, ast.Constant) and isinstance(s.value.value, str):
                return []  # docstring position
            return [ast.Expr(value=self.r(s.value).node)]
        if isinstance(s, ast.Assign):
            return self.check_assign(s)
        if isinstance(s, ast.AnnAssign):
            return self.check_annassign(s)
        if isinstance(s, ast.AugAssign):
            return self.check_augassign(s)
        if isinstance(s, ast.Return):
            return self.check_return(s)
        if isinstance(s, ast.If):
            test = self.r(s.test)
            self.require_bool(test, s.test)
            body, body_env = self._branch(s.body)
            if s.orelse:
                orelse, orelse_env = self._branch(s.orelse)
                self._merge_envs([body_env, orelse_env], include_base=False)
            else:
                orelse = []
                self._merge_envs([body_env], include_base=True)
            return [ast.If(test=test.node, body=body, orelse=orelse)]
        if isinstance(s, ast.While):
            if s.orelse:
                self.reject(E.UNSUPPORTED, "while/else is outside the "
                                           "supported surface", s)
            test = self.r(s.test)
            self.require_bool(test, s.test)
            self.loop_depth += 1
            body, body_env = self._branch(s.body)
            self.loop_depth -= 1
            self._merge_envs([body_env], include_base=True)
            return [ast.While(test=test.node, body=body, orelse=[])]
        if isinstance(s, ast.For):
            return self.check_for(s)
        if isinstance(s, ast.Match):
            return self.check_match(s)
        if isinstance(s, ast.Pass):
            return [ast.Pass()]
        if isinstance(s, (ast.Break, ast.Continue)):
            if self.loop_depth == 0:
                self.reject(E.UNSUPPORTED,
                            "break/continue need an enclosing loop inside "
                            "the secret context", s)
            return [type(s)()]
        if isinstance(s, (ast.FunctionDef, ast.AsyncFunctionDef, ast.Lambda)):
            decorators = getattr(s, "decorator_list", [])
            for dec in decorators:
                if (isinstance(dec, ast.Call) and isinstance(dec.func, ast.Name)
                        and dec.func.id == "secret_block"):
                    self.reject(E.NESTED_BLOCK,
                                "secret blocks cannot nest inside secret "
                                "contexts", s)
            self.reject(E.CLOSURE_IN_BLOCK,
                        "nested functions are not allowed in secret contexts", s)
        if isinstance(s, ast.ClassDef):
            self.reject(E.CLOSURE_IN_BLOCK,
                        "class definitions are not allowed in secret contexts", s)
        if isinstance(s, (ast.Import, ast.ImportFrom)):
            self.reject(E.MACRO_IN_BLOCK,
                        "imports inside secret contexts are opaque to the "
                        "checks", s)
        if isinstance(s, (ast.Global, ast.Nonlocal)):
            self.reject(E.MUT_CAPTURE,
                        "declaring outward writes is a visible side effect", s)
        self.reject(E.UNSUPPORTED,
                    f"{type(s).__name__} statements are outside the "
                    f"supported surface", s)

    def require_bool(self, info: ExprInfo, node):
        if info.stype != BOOL:
            self.reject(E.OPERATOR_OVERLOAD,
                        "conditions in secret contexts must be built-in "
                        "booleans (truthiness of other types dispatches "
                        "hidden calls)", node)

    # -- branch environments -------------------------------------------------

    def _branch(self, stmts) -> tuple[list, dict]:
        """Check a branch body on a copy of the environment."""
        saved = {k: Local(v.stype, v.kind) for k, v in self.locals.items()}
        out = self.check_stmts(stmts)
        branch_env = self.locals
        self.locals = saved
        return out, branch_env

    def _merge_envs(self, branch_envs: list[dict], include_base: bool):
        """Join environments at a control-flow merge point.

        A binding stays writable only if every path that can reach the merge
        agrees it is; diverging types degrade to Unknown.  ``include_base``
        covers constructs whose body may not run at all.
        """
        envs = list(branch_envs)
        if include_base:
            envs.append(self.locals)
        names = set()
        for env in envs:
            names |= set(env)
        merged: dict[str, Local] = {}
        for name in names:
            variants = [env[name] for env in envs if name in env]
            stypes = {v.stype for v in variants}
            stype = variants[0].stype if len(stypes) == 1 else UNKNOWN
            kinds = {v.kind for v in variants}
            if "ro_view" in kinds:
                kind = "ro_view"
            elif len(kinds) == 1:
                kind = variants[0].kind
            else:
                kind = "plain"
            merged[name] = Local(stype, kind)
        self.locals = merged

    # -- assignments -------------------------------------------------------

    def _bind_local(self, name: str, stype: SType, node, kind="plain"):
        if name.startswith("_lf_") or "_secret_trampoline" in name:
            self.reject(E.RESERVED_NAME, f"{name} uses a reserved prefix", node)
        if name in ("std", "Secret", "Vetted", "MutCell"):
            self.reject(E.RESERVED_NAME, f"rebinding {name} would defeat the "
                                         f"qualified-call checks", node)
        self.locals[name] = Local(stype, kind)

    def check_assign(self, s: ast.Assign) -> list:
        if len(s.targets) != 1:
            self.reject(E.UNSUPPORTED, "chained assignment is outside the "
                                       "supported surface", s)
        target = s.targets[0]
        value = self.r(s.value)
        if isinstance(target, ast.Name):
            return self._assign_name(target, value, s)
        if isinstance(target, ast.Tuple):
            return self._assign_tuple(target, value, s)
        if isinstance(target, (ast.Subscript, ast.Attribute)):
            return self._assign_place(target, value, s)
        self.reject(E.UNSUPPORTED, "unsupported assignment target", s)

    def check_annassign(self, s: ast.AnnAssign) -> list:
        if s.value is None or not isinstance(s.target, ast.Name):
            self.reject(E.UNSUPPORTED, "bare annotations are outside the "
                                       "supported surface here", s)
        declared = parse_annotation(s.annotation, self.env)
        value = self.r(s.value)
        stype = declared if not isinstance(declared, Unknown) else value.stype
        info = ExprInfo(value.node, stype, value.readonly)
        return self._assign_name(s.target, info, s)

    def _assign_name(self, target: ast.Name, value: ExprInfo, s) -> list:
        name = target.id
        if name in self.locals:
            existing = self.locals[name]
            if isinstance(existing.stype, SecretT):
                self.reject(E.ASSIGN_SECRET,
                            f"assignment to secret variable {name} must go "
                            f"through unwrap_secret_mut_ref", s)
            self._bind_local(name, value.stype, s,
                             "ro_view" if value.readonly else "plain")
            guard = ast.Expr(value=_rt_call("check_not_mut_secret", _name(name)))
            assign = ast.Assign(targets=[_name(name, ast.Store())],
                                value=value.node)
            return [guard, assign]
        outer = self.lookup_enclosing(name)
        if outer is not None:
            if isinstance(outer, SecretT):
                self.reject(E.ASSIGN_SECRET,
                            f"assignment to secret variable {name} must go "
                            f"through unwrap_secret_mut_ref", s)
            self.reject(E.MUT_CAPTURE,
                        f"assignment to captured variable {name} is a "
                        f"visible side effect", s)
        self._bind_local(name, value.stype, s,
                         "ro_view" if value.readonly else "plain")
        return [ast.Assign(targets=[_name(name, ast.Store())],
                           value=value.node)]

    def _assign_tuple(self, target: ast.Tuple, value: ExprInfo, s) -> list:
        names = []
        for elt in target.elts:
            if not isinstance(elt, ast.Name):
                self.reject(E.UNSUPPORTED, "only plain names can be "
                                           "destructured", s)
            names.append(elt.id)
        if isinstance(value.stype, TupleT) and len(value.stype.items) == len(names):
            item_types = list(value.stype.items)
        else:
            item_types = [UNKNOWN] * len(names)
        stmts = []
        for name, st in zip(names, item_types):
            if name in self.locals and isinstance(self.locals[name].stype, SecretT):
                self.reject(E.ASSIGN_SECRET,
                            f"assignment to secret variable {name} must go "
                            f"through unwrap_secret_mut_ref", s)
            if name not in self.locals and self.lookup_enclosing(name) is not None:
                self.reject(E.MUT_CAPTURE,
                            f"assignment to captured variable {name} is a "
                            f"visible side effect", s)
            self._bind_local(name, st, s, "ro_view" if value.readonly else "plain")
        new_target = ast.Tuple(
            elts=[_name(n, ast.Store()) for n in names], ctx=ast.Store())
        stmts.append(ast.Assign(targets=[new_target], value=value.node))
        return stmts

    def _place_root(self, target) -> ast.expr:
        node = target
        while isinstance(node, (ast.Subscript, ast.Attribute)):
            node = node.value
        return node

    def _assign_place(self, target, value: ExprInfo, s) -> list:
        root = self._place_root(target)
        if isinstance(root, ast.Call):
            root_info = self.r(root)  # unwrap_secret_mut_ref(...) target base
            if not self.facts.get(id(root), {}).get("mut_unwrap"):
                self.reject(E.UNSUPPORTED,
                            "only unwrap_secret_mut_ref(...) call results "
                            "may anchor a write target", s)
        elif isinstance(root, ast.Name):
            name = root.id
            if name in self.locals:
                local = self.locals[name]
                if local.kind == "ro_view":
                    self.reject(E.WRITE_DOWN,
                                f"{name} is a read-only view of a secret; "
                                f"writable access needs "
                                f"unwrap_secret_mut_ref", s)
                if isinstance(local.stype, SecretT):
                    self.reject(E.ASSIGN_SECRET,
                                f"writes into secret variable {name} must go "
                                f"through unwrap_secret_mut_ref", s)
            else:
                outer = self.lookup_enclosing(name)
                if outer is None:
                    self.reject(E.ISEF, f"unknown name {name}", s)
                if isinstance(outer, SecretT):
                    self.reject(E.ASSIGN_SECRET,
                                f"writes into secret variable {name} must go "
                                f"through unwrap_secret_mut_ref", s)
                self.reject(E.MUT_CAPTURE,
                            f"writing through captured variable {name} is a "
                            f"visible side effect", s)
        else:
            self.reject(E.UNSUPPORTED, "unsupported assignment target", s)
        target_info = self._target_as_load(target)
        if contains_secret(target_info.stype, self.env):
            self.reject(E.ASSIGN_SECRET,
                        "assignment target contains a secret; writes must "
                        "go through unwrap_secret_mut_ref", s)
        guard = ast.Expr(value=_rt_call("check_not_mut_secret",
                                        target_info.node))
        assign = ast.Assign(targets=[self._rebuild_target(target)],
                            value=value.node)
        return [guard, assign]

    def _target_as_load(self, target) -> ExprInfo:
        """Type the written place by reading it (no checks duplicated)."""
        load = ast.parse(ast.unparse(target), mode="eval").body
        return self._type_only(load)

    def _rebuild_target(self, target):
        """Store-position twin of the target with index expressions rewritten."""
        if isinstance(target, ast.Subscript):
            return ast.Subscript(value=self._plain_load(target.value),
                                 slice=self.r(target.slice).node,
                                 ctx=ast.Store())
        if isinstance(target, ast.Attribute):
            return ast.Attribute(value=self._plain_load(target.value),
                                 attr=target.attr, ctx=ast.Store())
        return target

    def _plain_load(self, node):
        if isinstance(node, ast.Name):
            return _name(node.id)
        if isinstance(node, ast.Subscript):
            return ast.Subscript(value=self._plain_load(node.value),
                                 slice=self.r(node.slice).node, ctx=ast.Load())
        if isinstance(node, ast.Attribute):
            return ast.Attribute(value=self._plain_load(node.value),
                                 attr=node.attr, ctx=ast.Load())
        if isinstance(node, ast.Call):
            return self.r(node).node
        self.reject(E.UNSUPPORTED, "unsupported place expression", node)

    def check_augassign(self, s: ast.AugAssign) -> list:
        op_type = type(s.op)
        if op_type not in AUG_SAFE_NAMES:
            self.reject(E.UNSUPPORTED, "unsupported compound assignment "
                                       "operator", s)
        target = s.target
        if isinstance(target, ast.Name):
            name = target.id
            stype = (self.locals[name].stype if name in self.locals
                     else self.lookup_enclosing(name))
            if stype is None:
                self.reject(E.ISEF, f"unknown name {name}", s)
            if isinstance(stype, SecretT):
                return self._augassign_secret(s, name, stype)
            if name not in self.locals:
                self.reject(E.MUT_CAPTURE,
                            f"compound assignment to captured variable "
                            f"{name} is a visible side effect", s)
            if self.locals[name].kind == "ro_view":
                self.reject(E.WRITE_DOWN,
                            f"{name} is a read-only view of a secret", s)
            value = self.r(s.value)
            self._require_operator_operands(op_type, stype, value.stype, s)
            call = _rt_call(AUG_SAFE_NAMES[op_type],
                            _rt_call("check_not_mut_secret", _name(name)),
                            value.node)
            return [ast.Expr(value=call)]
        if isinstance(target, (ast.Subscript, ast.Attribute)):
            # Reuse the place rules, then type the element for the operator.
            target_info = self._target_as_load(target)
            place_stmts = self._assign_place(target, ExprInfo(_const(0), UNKNOWN), s)
            value = self.r(s.value)
            self._require_operator_operands(op_type, target_info.stype,
                                            value.stype, s)
            call = _rt_call(AUG_SAFE_NAMES[op_type],
                            _rt_call("check_not_mut_secret", target_info.node),
                            value.node)
            return [place_stmts[0], ast.Expr(value=call)]
        self.reject(E.UNSUPPORTED, "unsupported compound assignment target", s)

    def _augassign_secret(self, s: ast.AugAssign, name: str,
                          stype: SecretT) -> list:
        if self.ctx.mode != "block":
            self.reject(E.OUTSIDE_BLOCK,
                        "secrets are only writable inside secret blocks", s)
        if stype.label != self.ctx.label:
            self.reject(E.WRITE_DOWN,
                        f"writable access to label {stype.label} requires a "
                        f"block labeled exactly {stype.label}, not "
                        f"{self.ctx.label}", s)
        payload = stype.payload
        value = self.r(s.value)
        self._require_operator_operands(type(s.op), payload, value.stype, s)
        decl = None
        if name not in self.locals:
            decl = self.scope_decl_kind(name)
            self.scope_decls[name] = decl
        self.facts[id(s)] = {"secret_aug": True, "label": self.ctx.label,
                             "decl": decl}
        inner = _secret_op("_unwrap_mut_ref",
                           _rt_call("check_ISEF", _name(name)),
                           _const(self.ctx.label))
        call = _rt_call(AUG_SAFE_NAMES[type(s.op)],
                        _rt_call("unsafe_region", inner), value.node)
        return [ast.Expr(value=call)]

    # -- control flow ------------------------------------------------------

    def check_for(self, s: ast.For) -> list:
        if s.orelse:
            self.reject(E.UNSUPPORTED, "for/else is outside the supported "
                                       "surface", s)
        iter_node, elem_type, readonly = self._check_iterable(s.iter)
        saved = {k: Local(v.stype, v.kind) for k, v in self.locals.items()}
        targets = self._bind_loop_target(s.target, elem_type, readonly, s)
        self.loop_depth += 1
        body = self.check_stmts(s.body)
        self.loop_depth -= 1
        body_env = self.locals
        self.locals = saved
        self._merge_envs([body_env], include_base=True)
        return [ast.For(target=targets, iter=iter_node, body=body, orelse=[])]

    def _check_iterable(self, iter_expr) -> tuple[ast.expr, SType, bool]:
        if (isinstance(iter_expr, ast.Call)
                and isinstance(iter_expr.func, ast.Name)
                and iter_expr.func.id == "range"):
            if not 1 <= len(iter_expr.args) <= 3 or iter_expr.keywords:
                self.reject(E.UNSUPPORTED, "range takes one to three "
                                           "positional arguments", iter_expr)
            args = []
            for a in iter_expr.args:
                info = self.r(a)
                if info.stype not in (INT, UNKNOWN) and not isinstance(info.stype, Unknown):
                    self.reject(E.OPERATOR_OVERLOAD,
                                "range bounds must be built-in integers",
                                iter_expr)
                args.append(info.node)
            return (ast.Call(func=_name("range"), args=args, keywords=[]),
                    INT, False)
        info = self.r(iter_expr)
        if isinstance(info.stype, ListT):
            return info.node, info.stype.elem, info.readonly
        if isinstance(info.stype, TupleT) and info.stype.items:
            first = info.stype.items[0]
            if all(i == first for i in info.stype.items):
                return info.node, first, info.readonly
            return info.node, UNKNOWN, info.readonly
        if isinstance(info.stype, SetT):
            return info.node, info.stype.elem, info.readonly
        if info.stype == STR:
            return info.node, STR, False
        self.reject(E.UNSUPPORTED,
                    "secret contexts iterate only over ranges, arrays, "
                    "strings, or tuples", iter_expr)

    def _bind_loop_target(self, target, elem_type, readonly, s):
        # Elements of a read-only view alias the secret; they stay read-only.
        def kind_for(t):
            return ("ro_view" if readonly and mutable_type(t, self.env)
                    else "plain")

        if isinstance(target, ast.Name):
            self._bind_local(target.id, elem_type, s, kind_for(elem_type))
            return _name(target.id, ast.Store())
        if isinstance(target, ast.Tuple):
            names = []
            for elt in target.elts:
                if not isinstance(elt, ast.Name):
                    self.reject(E.UNSUPPORTED, "loop targets must be plain "
                                               "names", s)
                names.append(elt.id)
            if isinstance(elem_type, TupleT) and len(elem_type.items) == len(names):
                types = list(elem_type.items)
            else:
                types = [UNKNOWN] * len(names)
            for n, t in zip(names, types):
                self._bind_local(n, t, s, kind_for(t))
            return ast.Tuple(elts=[_name(n, ast.Store()) for n in names],
                             ctx=ast.Store())
        self.reject(E.UNSUPPORTED, "unsupported loop target", s)

    def check_match(self, s: ast.Match) -> list:
        subject = self.r(s.subject)
        if not isinstance(subject.stype, (Scalar, Unknown)):
            self.reject(E.UNSUPPORTED, "match subjects must be built-in "
                                       "scalars", s)
        cases = []
        case_envs = []
        for case in s.cases:
            if case.guard is not None:
                self.reject(E.UNSUPPORTED, "match guards are outside the "
                                           "supported surface", s)
            pattern = case.pattern
            saved = {k: Local(v.stype, v.kind) for k, v in self.locals.items()}
            if isinstance(pattern, ast.MatchValue):
                if not isinstance(pattern.value, ast.Constant):
                    self.reject(E.UNSUPPORTED, "match patterns must be "
                                               "literals or wildcard", s)
                new_pat = ast.MatchValue(value=_const(pattern.value.value))
            elif isinstance(pattern, ast.MatchAs) and pattern.pattern is None:
                if pattern.name is not None:
                    self._bind_local(pattern.name, subject.stype, s)
                new_pat = ast.MatchAs(pattern=None, name=pattern.name)
            else:
                self.reject(E.UNSUPPORTED, "match patterns must be literals "
                                           "or wildcard", s)
            body = self.check_stmts(case.body)
            case_envs.append(self.locals)
            self.locals = saved
            cases.append(ast.match_case(pattern=new_pat, guard=None, body=body))
        self._merge_envs(case_envs, include_base=True)
        return [ast.Match(subject=subject.node, cases=cases)]

    def check_return(self, s: ast.Return) -> list:
        if self.ctx.mode == "sef":
            if s.value is None:
                return [ast.Return(value=None)]
            info = self.r(s.value)
            return [ast.Return(value=info.node)]
        shape = self._classify_block_return(s)
        if self.return_shape is None:
            self.return_shape = shape
        elif self.return_shape != shape:
            self.reject(E.RETURN_LABEL,
                        "every exit of a secret block must produce the same "
                        "secret collection shape", s)
        if s.value is None:
            return [ast.Return(value=None)]
        return [ast.Return(value=self.r(s.value).node)]

    def _classify_block_return(self, s: ast.Return):
        value = s.value
        if value is None or (isinstance(value, ast.Constant) and value.value is None):
            return ("unit",)
        if isinstance(value, ast.Tuple):
            if not 2 <= len(value.elts) <= SECRET_TUPLE_MAX:
                self.reject(E.UNSUPPORTED,
                            f"secret blocks return at most "
                            f"{SECRET_TUPLE_MAX}-tuples of secrets", s)
            items = tuple(self._classify_secret_component(e) for e in value.elts)
            return ("tuple", items)
        return ("single", self._classify_secret_component(value))

    def _classify_secret_component(self, e) -> SType:
        stype = self._type_only(e).stype
        if not isinstance(stype, SecretT):
            self.reject(E.RETURN_LABEL,
                        "secret blocks return wrap_secret results, secrets "
                        "labeled like the block, or the unit value", e)
        if stype.label != self.ctx.label:
            self.reject(E.RETURN_LABEL,
                        f"block labeled {self.ctx.label} cannot return a "
                        f"secret labeled {stype.label}", e)
        return stype

    def _type_only(self, e) -> ExprInfo:
        # Typing without emission side effects beyond fact recording.
        return self.r(e)

    # -- expressions (checked) ---------------------------------------------

    def r(self, e) -> ExprInfo:
        method = getattr(self, "r_" + type(e).__name__, None)
        if method is None:
            self.reject(E.UNSUPPORTED,
                        f"{type(e).__name__} expressions are outside the "
                        f"supported surface", e)
        return method(e)

    def r_Constant(self, e: ast.Constant) -> ExprInfo:
        v = e.value
        if v is None:
            return ExprInfo(_const(None), NONE)
        if isinstance(v, bool):
            return ExprInfo(_const(v), BOOL)
        if isinstance(v, int):
            return ExprInfo(_const(v), INT)
        if isinstance(v, float):
            return ExprInfo(_const(v), FLOAT)
        if isinstance(v, str):
            return ExprInfo(_const(v), STR)
        if isinstance(v, bytes):
            return ExprInfo(_const(v), BYTES)
        self.reject(E.UNSUPPORTED, f"unsupported literal {v!r}", e)

    def r_Name(self, e: ast.Name) -> ExprInfo:
        name = e.id
        if name in self.locals:
            local = self.locals[name]
            stype, readonly = local.stype, local.kind == "ro_view"
        else:
            stype = self.lookup_enclosing(name)
            if stype is None:
                if name in self.env.classes or name in self.env.sef_returns:
                    self.reject(E.UNSUPPORTED,
                                f"{name} names a function or type; secret "
                                f"contexts cannot treat it as a value", e)
                self.reject(E.ISEF, f"cannot establish the type of {name}", e)
            readonly = mutable_type(stype, self.env)  # captured objects are read-only
        self.require_isef(stype, e)
        tmp = self.fresh()
        node = _rt_call("unsafe_region",
                        _rt_call("check_ISEF_unsafe", _walrus(tmp, _name(name))))
        return ExprInfo(node, stype, readonly)

    def r_Tuple(self, e: ast.Tuple) -> ExprInfo:
        infos = [self.r(elt) for elt in e.elts]
        node = ast.Tuple(elts=[i.node for i in infos], ctx=ast.Load())
        return ExprInfo(node, TupleT(tuple(i.stype for i in infos)),
                        any(i.readonly for i in infos))

    def r_List(self, e: ast.List) -> ExprInfo:
        infos = [self.r(elt) for elt in e.elts]
        elem = infos[0].stype if infos else UNKNOWN
        if any(i.stype != elem for i in infos):
            elem = UNKNOWN
        node = ast.List(elts=[i.node for i in infos], ctx=ast.Load())
        return ExprInfo(node, ListT(elem), any(i.readonly for i in infos))

    def r_Dict(self, e: ast.Dict) -> ExprInfo:
        if any(k is None for k in e.keys):
            self.reject(E.UNSUPPORTED, "dict unpacking is outside the "
                                       "supported surface", e)
        keys = [self.r(k) for k in e.keys]
        values = [self.r(v) for v in e.values]
        kt = keys[0].stype if keys else UNKNOWN
        vt = values[0].stype if values else UNKNOWN
        if any(k.stype != kt for k in keys):
            kt = UNKNOWN
        if any(v.stype != vt for v in values):
            vt = UNKNOWN
        node = ast.Dict(keys=[k.node for k in keys],
                        values=[v.node for v in values])
        return ExprInfo(node, DictT(kt, vt))

    def _resolvable_root(self, e: ast.expr) -> bool:
        node = e
        while isinstance(node, (ast.Attribute, ast.Subscript)):
            node = node.value
        return (isinstance(node, ast.Name)
                and (node.id in self.locals
                     or self.lookup_enclosing(node.id) is not None))

    def r_Attribute(self, e: ast.Attribute) -> ExprInfo:
        # Field access recurses into the base; no extra check needed.  A
        # dotted chain whose root is not a visible variable is a qualified
        # path, which has no meaning outside call position.
        if not self._resolvable_root(e):
            self.reject(E.UNSUPPORTED,
                        "qualified names appear only as call targets inside "
                        "secret contexts", e)
        base = self.r(e.value)
        stype = self._field_type(base.stype, e.attr, e)
        node = ast.Attribute(value=base.node, attr=e.attr, ctx=ast.Load())
        return ExprInfo(node, stype, base.readonly)

    def _field_type(self, base: SType, attr: str, node) -> SType:
        if attr.startswith("_"):
            self.reject(E.PAYLOAD_ACCESS,
                        f"underscored attribute {attr} is reserved", node)
        if isinstance(base, SecretT):
            self.reject(E.UNSUPPORTED,
                        "secrets are opaque; unwrap them before reading "
                        "fields", node)
        if isinstance(base, AppT):
            ci = self.env.classes.get(base.name)
            ft = ci.field_type(attr, base.args) if ci else None
            if ft is None:
                self.reject(E.ISEF,
                            f"unknown field {attr} on {base.name}", node)
            return ft
        self.reject(E.UNSUPPORTED,
                    f"attribute access on {base!r} is outside the supported "
                    f"surface (use qualified std calls)", node)

    def r_Subscript(self, e: ast.Subscript) -> ExprInfo:
        if isinstance(e.slice, ast.Slice):
            self.reject(E.UNSUPPORTED, "slicing is outside the supported "
                                       "surface", e)
        base = self.r(e.value)
        index = self.r(e.slice)
        if isinstance(base.stype, ListT):
            result = base.stype.elem
        elif isinstance(base.stype, TupleT):
            result = UNKNOWN
            if isinstance(e.slice, ast.Constant) and isinstance(e.slice.value, int):
                idx = e.slice.value
                if 0 <= idx < len(base.stype.items):
                    result = base.stype.items[idx]
        elif isinstance(base.stype, DictT):
            result = base.stype.value
        elif base.stype == STR:
            result = STR
        elif base.stype == BYTES:
            result = INT
        else:
            self.reject(E.OPERATOR_OVERLOAD,
                        "indexing is defined only for built-in containers "
                        "in secret contexts", e)
        node = _rt_call("safe_index", base.node, index.node)
        return ExprInfo(node, result, base.readonly)

    def r_BinOp(self, e: ast.BinOp) -> ExprInfo:
        op_type = type(e.op)
        if op_type not in BINOP_SAFE_NAMES:
            self.reject(E.UNSUPPORTED, "unsupported operator", e)
        left = self.r(e.left)
        right = self.r(e.right)
        result = self._require_operator_operands(op_type, left.stype,
                                                 right.stype, e)
        node = _rt_call(BINOP_SAFE_NAMES[op_type], left.node, right.node)
        return ExprInfo(node, result)

    def _require_operator_operands(self, op_type, lt: SType, rt: SType,
                                   node) -> SType:
        for t in (lt, rt):
            if not is_builtin_operand(t):
                self.reject(E.OPERATOR_OVERLOAD,
                            f"operator on operand of type {t!r}; secret "
                            f"contexts allow overloadable operators on "
                            f"built-in types only", node)
        if op_type in CMP_SAFE_NAMES:
            return BOOL
        if op_type is ast.Div:
            return FLOAT
        if lt == rt:
            return lt
        if {lt, rt} == {INT, FLOAT}:
            return FLOAT
        if {lt, rt} <= {INT, BOOL}:
            return INT
        return UNKNOWN

    def r_UnaryOp(self, e: ast.UnaryOp) -> ExprInfo:
        if isinstance(e.op, ast.Not):
            operand = self.r(e.operand)
            self.require_bool(operand, e.operand)
            node = ast.UnaryOp(op=ast.Not(), operand=operand.node)
            return ExprInfo(node, BOOL)
        op_type = type(e.op)
        if op_type not in UNARY_SAFE_NAMES:
            self.reject(E.UNSUPPORTED, "unsupported unary operator", e)
        operand = self.r(e.operand)
        if not is_builtin_operand(operand.stype):
            self.reject(E.OPERATOR_OVERLOAD,
                        "unary operator on a non-built-in operand", e)
        node = _rt_call(UNARY_SAFE_NAMES[op_type], operand.node)
        return ExprInfo(node, operand.stype)

    def r_BoolOp(self, e: ast.BoolOp) -> ExprInfo:
        infos = [self.r(v) for v in e.values]
        for info, src in zip(infos, e.values):
            self.require_bool(info, src)
        node = ast.BoolOp(op=type(e.op)(), values=[i.node for i in infos])
        return ExprInfo(node, BOOL)

    def r_Compare(self, e: ast.Compare) -> ExprInfo:
        if len(e.ops) != 1:
            self.reject(E.UNSUPPORTED, "chained comparisons are outside the "
                                       "supported surface", e)
        op = e.ops[0]
        left = self.r(e.left)
        right = self.r(e.comparators[0])
        if isinstance(op, (ast.Is, ast.IsNot)):
            node = ast.Compare(left=left.node, ops=[type(op)()],
                               comparators=[right.node])
            return ExprInfo(node, BOOL)
        if isinstance(op, (ast.In, ast.NotIn)):
            if not is_builtin_operand(right.stype):
                self.reject(E.OPERATOR_OVERLOAD,
                            "membership tests need a built-in container", e)
            call = _rt_call("safe_contains", left.node, right.node)
            if isinstance(op, ast.NotIn):
                call = ast.UnaryOp(op=ast.Not(), operand=call)
            return ExprInfo(call, BOOL)
        op_type = type(op)
        if op_type not in CMP_SAFE_NAMES:
            self.reject(E.UNSUPPORTED, "unsupported comparison", e)
        self._require_operator_operands(op_type, left.stype, right.stype, e)
        node = _rt_call(CMP_SAFE_NAMES[op_type], left.node, right.node)
        return ExprInfo(node, BOOL)

    def r_IfExp(self, e: ast.IfExp) -> ExprInfo:
        test = self.r(e.test)
        self.require_bool(test, e.test)
        body = self.r(e.body)
        orelse = self.r(e.orelse)
        stype = body.stype if body.stype == orelse.stype else UNKNOWN
        node = ast.IfExp(test=test.node, body=body.node, orelse=orelse.node)
        return ExprInfo(node, stype, body.readonly or orelse.readonly)

    def r_NamedExpr(self, e: ast.NamedExpr) -> ExprInfo:
        self.reject(E.RESERVED_NAME,
                    "walrus bindings are reserved for generated code", e)

    def r_JoinedStr(self, e: ast.JoinedStr) -> ExprInfo:
        self.reject(E.UNSUPPORTED,
                    "f-strings dispatch hidden formatting calls; build "
                    "strings with std.str.concat / std.int.to_str", e)

    def r_Lambda(self, e: ast.Lambda) -> ExprInfo:
        self.reject(E.CLOSURE_IN_BLOCK,
                    "closures are not allowed in secret contexts", e)

    def r_ListComp(self, e) -> ExprInfo:
        self.reject(E.CLOSURE_IN_BLOCK,
                    "comprehensions create closures; use explicit loops", e)

    r_SetComp = r_ListComp
    r_DictComp = r_ListComp
    r_GeneratorExp = r_ListComp

    def r_Await(self, e) -> ExprInfo:
        self.reject(E.UNSUPPORTED, "await is outside the supported surface", e)

    r_Yield = r_Await
    r_YieldFrom = r_Await
    r_Starred = r_Await

    def r_Set(self, e: ast.Set) -> ExprInfo:
        infos = [self.r(elt) for elt in e.elts]
        elem = infos[0].stype if infos else UNKNOWN
        if any(i.stype != elem for i in infos):
            elem = UNKNOWN
        node = ast.Set(elts=[i.node for i in infos])
        return ExprInfo(node, SetT(elem))

    # -- calls ---------------------------------------------------------------

    def r_Call(self, e: ast.Call) -> ExprInfo:
        func = e.func
        if isinstance(func, ast.Name):
            name = func.id
            if name in UNWRAP_FORMS or name == "wrap_secret":
                return self._r_unwrap_wrap(e, name)
            if name == "secret_block":
                self.reject(E.NESTED_BLOCK,
                            "secret blocks cannot nest inside secret "
                            "contexts", e)
            if name in DECLASSIFY_NAMES:
                self.reject(E.UNVETTED_CALL,
                            f"{name} is a trusted operation; call it outside "
                            f"secret contexts", e)
            if name in MACRO_NAMES:
                self.reject(E.MACRO_IN_BLOCK,
                            f"{name} constructs code the checks cannot see", e)
            if name == "unsafe_region":
                return self._r_unsafe(e)
            if name == "range":
                self.reject(E.UNVETTED_CALL,
                            "range appears only as a loop iterator in "
                            "secret contexts", e)
            if name in self.env.sef_returns:
                return self._r_sef_call(e, name)
            if name in self.env.classes:
                return self._r_record_literal(e, name)
            self.reject(E.UNVETTED_CALL,
                        f"call to {name}: neither allowlisted nor marked "
                        f"side effect free (library calls must use their "
                        f"fully qualified std.* names)", e)
        path = dotted_path(func)
        if path is not None and is_allowlisted(path):
            return self._r_allowlisted(e, path)
        if path is not None:
            self.reject(E.UNVETTED_CALL,
                        f"call to {path} is not allowlisted", e)
        if isinstance(func, ast.Attribute):
            self.reject(E.UNVETTED_CALL,
                        "method-call sugar is not available in secret "
                        "contexts; use a fully qualified std.* call or a "
                        "side-effect-free function", e)
        self.reject(E.UNVETTED_CALL, "unsupported call target", e)

    def _no_keywords(self, e: ast.Call):
        if e.keywords:
            self.reject(E.UNSUPPORTED, "keyword arguments are supported only "
                                       "for record construction", e)

    def _r_unwrap_wrap(self, e: ast.Call, name: str) -> ExprInfo:
        if self.ctx.mode != "block":
            self.reject(E.OUTSIDE_BLOCK,
                        f"{name} exists only inside secret blocks", e)
        self._no_keywords(e)
        if len(e.args) != 1:
            self.reject(E.UNSUPPORTED, f"{name} takes exactly one argument", e)
        arg = self.r(e.args[0])
        label = self.ctx.label
        if name == "wrap_secret":
            bad = secret_value_safe_violation(arg.stype, self.env)
            if bad:
                self.reject(bad[0], bad[1], e)
            tmp = self.fresh()
            node = _rt_call(
                "unsafe_region",
                _secret_op("_new", _walrus(tmp, arg.node), _const(label)))
            self.facts[id(e)] = {"label": label}
            return ExprInfo(node, SecretT(arg.stype, label))
        if not isinstance(arg.stype, SecretT):
            self.reject(E.READ_UP,
                        f"{name} needs a secret operand with a statically "
                        f"known label; got {arg.stype!r}", e)
        value_label = arg.stype.label
        if name == "unwrap_secret_mut_ref":
            if value_label != label:
                self.reject(E.WRITE_DOWN,
                            f"writable access to label {value_label} "
                            f"requires a block labeled exactly "
                            f"{value_label}, not {label}", e)
            # Writable capture is admissible only for a secret variable
            # itself; reaching a secret through a captured non-secret
            # aggregate would mutably capture that aggregate.
            src = e.args[0]
            root = src
            while isinstance(root, (ast.Attribute, ast.Subscript)):
                root = root.value
            if (isinstance(root, ast.Name) and root is not src
                    and root.id not in self.locals):
                self.reject(E.MUT_CAPTURE,
                            f"writable unwrap through captured "
                            f"{root.id} mutably captures a non-secret "
                            f"aggregate", e)
        else:
            if not self.label_ok_read(value_label):
                self.reject(E.READ_UP,
                            f"block labeled {label} cannot read a secret "
                            f"labeled {value_label}", e)
        tmp = self.fresh()
        node = _rt_call(
            "unsafe_region",
            _secret_op(UNWRAP_FORMS[name], _walrus(tmp, arg.node),
                       _const(label)))
        payload = arg.stype.payload
        self.facts[id(e)] = {"label": label,
                             "mut_unwrap": name == "unwrap_secret_mut_ref"}
        readonly = (name != "unwrap_secret_mut_ref"
                    and mutable_type(payload, self.env))
        return ExprInfo(node, payload, readonly)

    def _r_unsafe(self, e: ast.Call) -> ExprInfo:
        self._no_keywords(e)
        if len(e.args) != 1:
            self.reject(E.UNSUPPORTED, "unsafe_region takes exactly one "
                                       "expression", e)
        # Audited escape: the contents are not transformed or checked.
        import copy
        node = _rt_call("unsafe_region", copy.deepcopy(e.args[0]))
        return ExprInfo(node, UNKNOWN)

    def _checked_arg(self, a) -> ExprInfo:
        if isinstance(a, ast.Name):
            info_t = self.r_Name(a)  # checks + typing
            node = _rt_call("check_ISEF_ref", _name(a.id))
            return ExprInfo(node, info_t.stype, info_t.readonly)
        return self.r(a)

    def _r_allowlisted(self, e: ast.Call, path: str) -> ExprInfo:
        self._no_keywords(e)
        entry = allowlist()[path]
        if len(e.args) != entry.arity:
            self.reject(E.UNVETTED_CALL,
                        f"{path} takes {entry.arity} argument(s), got "
                        f"{len(e.args)}", e)
        infos = [self._checked_arg(a) for a in e.args]
        sig = STD_SIGNATURES[path]
        err = sig.check([i.stype for i in infos], self.env)
        if err:
            self.reject(E.UNSUPPORTED, f"{path}: {err}", e)
        for pos in sig.mutates:
            self._require_writable_arg(e.args[pos], pos, path)
        ret = sig.result([i.stype for i in infos], self.env)
        func = ast.parse(path, mode="eval").body
        call = ast.Call(func=func, args=[i.node for i in infos], keywords=[])
        # Projections out of a read-only view alias the secret.
        readonly = (any(i.readonly for i in infos)
                    and mutable_type(ret, self.env))
        return ExprInfo(_rt_call("check_ISEF", call), ret, readonly)

    def _require_writable_arg(self, arg, pos, path):
        if not isinstance(arg, ast.Name):
            self.reject(E.UNSUPPORTED,
                        f"{path} mutates argument {pos + 1}; pass a local "
                        f"variable", arg)
        name = arg.id
        if name not in self.locals:
            self.reject(E.MUT_CAPTURE,
                        f"{path} would mutate captured variable {name}", arg)
        if self.locals[name].kind == "ro_view":
            self.reject(E.WRITE_DOWN,
                        f"{path} would mutate read-only secret view {name}",
                        arg)

    def _r_sef_call(self, e: ast.Call, name: str) -> ExprInfo:
        self._no_keywords(e)
        declared = self.env.sef_params[name]
        if len(e.args) != len(declared):
            self.reject(E.UNVETTED_CALL,
                        f"{name} takes {len(declared)} argument(s), got "
                        f"{len(e.args)}", e)
        infos = [self._checked_arg(a) for a in e.args]
        args = [_walrus(self.fresh(), i.node) for i in infos]
        call = ast.Call(func=_name(name), args=args, keywords=[])
        node = _rt_call("unsafe_region", _vetted_project(call))
        ret = self.env.sef_returns[name]
        # The callee may return (a view of) one of its arguments.
        readonly = (any(i.readonly for i in infos)
                    and mutable_type(ret, self.env))
        return ExprInfo(node, ret, readonly)

    def _r_record_literal(self, e: ast.Call, name: str) -> ExprInfo:
        ci = self.env.classes[name]
        if not ci.isef_derived:
            bad = isef_violation(AppT(name), self.env)
            self.reject(bad[0], bad[1], e)
        field_names = list(ci.fields)
        bound: dict[str, ExprInfo] = {}
        for pos, a in enumerate(e.args):
            if pos >= len(field_names):
                self.reject(E.UNSUPPORTED, f"{name} takes "
                                           f"{len(field_names)} fields", e)
            bound[field_names[pos]] = self._checked_arg(a)
        for kw in e.keywords:
            if kw.arg is None or kw.arg not in ci.fields:
                self.reject(E.UNSUPPORTED,
                            f"unknown field {kw.arg!r} for {name}", e)
            bound[kw.arg] = self._checked_arg(kw.value)
        if set(bound) != set(field_names):
            self.reject(E.UNSUPPORTED,
                        f"{name} construction must bind every field", e)
        binding: dict[str, str] = {}
        if ci.label_params:
            for fname, info in bound.items():
                declared = ci.fields[fname]
                self._unify_labels(declared, info.stype, binding)
            missing = [p for p in ci.label_params if p not in binding]
            if missing:
                self.reject(E.RETURN_LABEL,
                            f"cannot infer label parameter(s) "
                            f"{', '.join(missing)} for {name}", e)
        args = [bound[f].node for f in field_names]
        call = ast.Call(func=_name(name), args=args, keywords=[])
        stype = AppT(name, tuple(binding[p] for p in ci.label_params))
        readonly = any(i.readonly for i in bound.values())
        return ExprInfo(_rt_call("check_ISEF", call), stype, readonly)

    def _unify_labels(self, declared: SType, actual: SType,
                      binding: dict[str, str]):
        if isinstance(declared, SecretT) and isinstance(actual, SecretT):
            if (self.env.family is None
                    or not self.env.family.has_label(declared.label)):
                binding.setdefault(declared.label, actual.label)
            self._unify_labels(declared.payload, actual.payload, binding)
            return
        for attr in ("elem", "inner", "payload"):
            if hasattr(declared, attr) and hasattr(actual, attr):
                self._unify_labels(getattr(declared, attr),
                                   getattr(actual, attr), binding)
                return
        if isinstance(declared, DictT) and isinstance(actual, DictT):
            self._unify_labels(declared.key, actual.key, binding)
            self._unify_labels(declared.value, actual.value, binding)
        if isinstance(declared, TupleT) and isinstance(actual, TupleT):
            for d, a in zip(declared.items, actual.items):
                self._unify_labels(d, a, binding)

    # ======================================================================
    # Executed pass (the S function): semantics-preserving expansion

    def exec_stmts_of(self, stmts: list) -> list:
        out = []
        for s in stmts:
            out.extend(self.s_stmt(s))
        return out or [ast.Pass()]

    def s_stmt(self, s) -> list:
        if isinstance(s, ast.Expr):
            if isinstance(s.value, ast.Constant) and isinstance(s.value.value, str):
                return []
            return [ast.Expr(value=self.s(s.value))]
        if isinstance(s, ast.Assign):
            target = s.targets[0]
            if isinstance(target, ast.Name):
                new_target = _name(target.id, ast.Store())
            elif isinstance(target, ast.Tuple):
                new_target = ast.Tuple(
                    elts=[_name(elt.id, ast.Store()) for elt in target.elts],
                    ctx=ast.Store())
            else:
                new_target = self._s_rebuild_target(target)
            return [ast.Assign(targets=[new_target], value=self.s(s.value))]
        if isinstance(s, ast.AnnAssign):
            return [ast.Assign(targets=[_name(s.target.id, ast.Store())],
                               value=self.s(s.value))]
        if isinstance(s, ast.AugAssign):
            fact = self.facts.get(id(s), {})
            if fact.get("secret_aug"):
                return self._s_secret_aug(s, fact)
            if isinstance(s.target, ast.Name):
                new_target = _name(s.target.id, ast.Store())
            else:
                new_target = self._s_rebuild_target(s.target)
            return [ast.AugAssign(target=new_target, op=type(s.op)(),
                                  value=self.s(s.value))]
        if isinstance(s, ast.Return):
            return [ast.Return(value=self.s(s.value) if s.value else None)]
        if isinstance(s, ast.If):
            return [ast.If(test=self.s(s.test),
                           body=self.exec_stmts_of(s.body),
                           orelse=self.exec_stmts_of(s.orelse) if s.orelse else [])]
        if isinstance(s, ast.While):
            return [ast.While(test=self.s(s.test),
                              body=self.exec_stmts_of(s.body), orelse=[])]
        if isinstance(s, ast.For):
            return [ast.For(target=self._s_loop_target(s.target),
                            iter=self.s(s.iter),
                            body=self.exec_stmts_of(s.body), orelse=[])]
        if isinstance(s, ast.Match):
            cases = []
            for case in s.cases:
                if isinstance(case.pattern, ast.MatchValue):
                    pat = ast.MatchValue(value=_const(case.pattern.value.value))
                else:
                    pat = ast.MatchAs(pattern=None, name=case.pattern.name)
                cases.append(ast.match_case(pattern=pat, guard=None,
                                            body=self.exec_stmts_of(case.body)))
            return [ast.Match(subject=self.s(s.subject), cases=cases)]
        if isinstance(s, ast.Pass):
            return [ast.Pass()]
        if isinstance(s, (ast.Break, ast.Continue)):
            return [type(s)()]
        raise AssertionError(f"unreachable statement form {type(s).__name__}")

    def _s_loop_target(self, target):
        if isinstance(target, ast.Name):
            return _name(target.id, ast.Store())
        return ast.Tuple(elts=[_name(e.id, ast.Store()) for e in target.elts],
                         ctx=ast.Store())

    def _s_rebuild_target(self, target):
        if isinstance(target, ast.Subscript):
            return ast.Subscript(value=self._s_place(target.value),
                                 slice=self.s(target.slice), ctx=ast.Store())
        if isinstance(target, ast.Attribute):
            return ast.Attribute(value=self._s_place(target.value),
                                 attr=target.attr, ctx=ast.Store())
        raise AssertionError("unreachable target form")

    def _s_place(self, node):
        if isinstance(node, ast.Name):
            return _name(node.id)
        if isinstance(node, ast.Subscript):
            return ast.Subscript(value=self._s_place(node.value),
                                 slice=self.s(node.slice), ctx=ast.Load())
        if isinstance(node, ast.Attribute):
            return ast.Attribute(value=self._s_place(node.value),
                                 attr=node.attr, ctx=ast.Load())
        if isinstance(node, ast.Call):
            return self.s(node)
        raise AssertionError("unreachable place form")

    def _s_secret_aug(self, s: ast.AugAssign, fact) -> list:
        name = s.target.id
        label = fact["label"]
        tmp = self.fresh()
        unwrapped = _rt_call(
            "unsafe_region",
            _secret_op("_unwrap_mut_ref", _walrus(tmp, _name(name)),
                       _const(label)))
        combined = ast.BinOp(left=unwrapped, op=type(s.op)(),
                             right=self.s(s.value))
        return [ast.Assign(targets=[_name(name, ast.Store())], value=combined)]

    def s(self, e) -> ast.expr:
        if isinstance(e, ast.Constant):
            return _const(e.value)
        if isinstance(e, ast.Name):
            return _name(e.id)
        if isinstance(e, ast.Tuple):
            return ast.Tuple(elts=[self.s(x) for x in e.elts], ctx=ast.Load())
        if isinstance(e, ast.List):
            return ast.List(elts=[self.s(x) for x in e.elts], ctx=ast.Load())
        if isinstance(e, ast.Set):
            return ast.Set(elts=[self.s(x) for x in e.elts])
        if isinstance(e, ast.Dict):
            return ast.Dict(keys=[self.s(k) for k in e.keys],
                            values=[self.s(v) for v in e.values])
        if isinstance(e, ast.Attribute):
            return ast.Attribute(value=self.s(e.value), attr=e.attr,
                                 ctx=ast.Load())
        if isinstance(e, ast.Subscript):
            return ast.Subscript(value=self.s(e.value), slice=self.s(e.slice),
                                 ctx=ast.Load())
        if isinstance(e, ast.BinOp):
            return ast.BinOp(left=self.s(e.left), op=type(e.op)(),
                             right=self.s(e.right))
        if isinstance(e, ast.UnaryOp):
            return ast.UnaryOp(op=type(e.op)(), operand=self.s(e.operand))
        if isinstance(e, ast.BoolOp):
            return ast.BoolOp(op=type(e.op)(),
                              values=[self.s(v) for v in e.values])
        if isinstance(e, ast.Compare):
            return ast.Compare(left=self.s(e.left),
                               ops=[type(op)() for op in e.ops],
                               comparators=[self.s(c) for c in e.comparators])
        if isinstance(e, ast.IfExp):
            return ast.IfExp(test=self.s(e.test), body=self.s(e.body),
                             orelse=self.s(e.orelse))
        if isinstance(e, ast.Call):
            return self._s_call(e)
        raise AssertionError(f"unreachable expression form {type(e).__name__}")

    def _s_call(self, e: ast.Call) -> ast.expr:
        func = e.func
        if isinstance(func, ast.Name):
            name = func.id
            if name == "wrap_secret":
                label = self.facts[id(e)]["label"]
                tmp = self.fresh()
                return _rt_call(
                    "unsafe_region",
                    _secret_op("_new", _walrus(tmp, self.s(e.args[0])),
                               _const(label)))
            if name in UNWRAP_FORMS:
                label = self.facts[id(e)]["label"]
                tmp = self.fresh()
                return _rt_call(
                    "unsafe_region",
                    _secret_op(UNWRAP_FORMS[name],
                               _walrus(tmp, self.s(e.args[0])),
                               _const(label)))
            if name == "unsafe_region":
                import copy
                return _rt_call("unsafe_region", copy.deepcopy(e.args[0]))
            if name in self.env.sef_returns:
                args = [_walrus(self.fresh(), self.s(a)) for a in e.args]
                call = ast.Call(func=_name(name), args=args, keywords=[])
                return _rt_call("unsafe_region", _vetted_project(call))
            if name in self.env.classes:
                bound_args = [self.s(a) for a in e.args]
                ci = self.env.classes[name]
                if e.keywords:
                    by_name = {kw.arg: self.s(kw.value) for kw in e.keywords}
                    field_names = list(ci.fields)
                    positional = dict(zip(field_names, bound_args))
                    positional.update(by_name)
                    bound_args = [positional[f] for f in field_names]
                return ast.Call(func=_name(name), args=bound_args, keywords=[])
        path = dotted_path(func)
        if path is not None:
            new_func = ast.parse(path, mode="eval").body
            return ast.Call(func=new_func, args=[self.s(a) for a in e.args],
                            keywords=[])
        raise AssertionError("unreachable call form")
