"""Whole-module transform pass: the artifact's "compilation" step.

Transforming a module (a) builds the static environment (label family,
record types, side-effect-free signatures, annotated variables), (b)
enforces module-wide rules (reserved names, forgery, payload-slot access,
dispatch calls from ordinary code), (c) expands every secret block and
side-effect-free function into its dual-variant form, and (d) compiles the
result.  A program "compiles" exactly when this pass accepts it.
"""

from __future__ import annotations

import ast
import importlib.abc
import importlib.machinery
import importlib.util
import sys
import types

from . import errors as E
from .blocks import expand_secret_block, is_secret_block_def
from .capabilities import contains_secret, isef_violation
from .lattice import LabelFamily, generate_lattice
from .seffn import expand_sef_fn, is_sef_def, sef_signature
from .typesys import (
    AppT, BOOL, BYTES, CellT, ClassInfo, DictT, FLOAT, INT, ListT,
    ModuleEnv, NONE, OptT, SecretT, SetT, SType, STR, TupleT, UNKNOWN,
    Unknown, parse_annotation, tail_identifier,
)

SURFACE_NAMES = {
    "std", "Secret", "Vetted", "MutCell", "secret_block", "side_effect_free",
    "invisible_side_effect_free", "wrap_secret", "unwrap_secret",
    "unwrap_secret_ref", "unwrap_secret_mut_ref", "declassify",
    "declassify_ref", "declassify_ref_mut", "declassify_transmute",
    "unsafe_region",
}
UNWRAP_SURFACE = {"wrap_secret", "unwrap_secret", "unwrap_secret_ref",
                  "unwrap_secret_mut_ref"}
PAYLOAD_SLOTS = {"_Secret__payload", "__payload"}
DEREF_HOOKS = {"__getattr__", "__getattribute__", "__setattr__",
               "__delattr__", "__get__", "__set__", "__delete__"}


class _Fresh:
    def __init__(self):
        self.counts: dict[str, int] = {}

    def __call__(self, prefix: str = "tmp") -> str:
        n = self.counts.get(prefix, 0)
        self.counts[prefix] = n + 1
        return f"_lf_{prefix}{n}"


# ---------------------------------------------------------------------------
# Phase 1: environment scan

def _detect_policies(tree: ast.Module, filename: str) -> LabelFamily | None:
    for node in tree.body:
        if (isinstance(node, ast.Assign) and len(node.targets) == 1
                and isinstance(node.targets[0], ast.Name)
                and node.targets[0].id == "__secrecy_policies__"):
            value = node.value
            if not (isinstance(value, (ast.List, ast.Tuple))
                    and all(isinstance(e, ast.Constant)
                            and isinstance(e.value, str)
                            for e in value.elts)):
                E.reject(E.BAD_LABEL,
                         "__secrecy_policies__ must be a literal list of "
                         "policy names", node, filename)
            try:
                return generate_lattice([e.value for e in value.elts])
            except Exception as exc:
                E.reject(E.BAD_LABEL, str(exc), node, filename)
    return None


def _class_info(node: ast.ClassDef, env: ModuleEnv,
                filename: str) -> ClassInfo:
    derived = False
    frozen = False
    for dec in node.decorator_list:
        name = tail_identifier(dec.func if isinstance(dec, ast.Call) else dec)
        if name == "invisible_side_effect_free":
            derived = True
        elif name == "dataclass":
            if isinstance(dec, ast.Call):
                for kw in dec.keywords:
                    if (kw.arg == "frozen" and isinstance(kw.value, ast.Constant)
                            and kw.value.value is True):
                        frozen = True
        elif derived:
            E.reject(E.MACRO_OPACITY,
                     f"class {node.name}: only dataclass may accompany the "
                     f"invisible_side_effect_free derivation", node, filename)

    label_params: list[str] = []
    for base in node.bases:
        if (isinstance(base, ast.Subscript)
                and tail_identifier(base.value) == "Generic"):
            args = (base.slice.elts if isinstance(base.slice, ast.Tuple)
                    else [base.slice])
            for a in args:
                name = tail_identifier(a)
                if name:
                    label_params.append(name)

    info = ClassInfo(name=node.name, label_params=tuple(label_params),
                     isef_derived=derived, frozen=frozen, lineno=node.lineno)
    defaulted = True
    for item in node.body:
        if isinstance(item, ast.AnnAssign) and isinstance(item.target, ast.Name):
            ftype = parse_annotation(item.annotation, env,
                                     tuple(label_params))
            info.fields[item.target.id] = ftype
            if item.value is None:
                defaulted = False
        elif isinstance(item, ast.FunctionDef):
            if item.name == "__del__":
                info.custom_drop = True
            elif item.name in DEREF_HOOKS:
                info.custom_deref = True
            for dec in item.decorator_list:
                if tail_identifier(dec) == "property":
                    info.custom_deref = True
    info.has_default = defaulted
    return info


def _validate_derived(info: ClassInfo, node: ast.ClassDef, env: ModuleEnv,
                      filename: str):
    if info.custom_drop:
        E.reject(E.CUSTOM_DROP,
                 f"{info.name} defines a custom destructor and cannot be "
                 f"invisible-side-effect-free", node, filename)
    if info.custom_deref:
        E.reject(E.CUSTOM_DEREF,
                 f"{info.name} customizes attribute access and cannot be "
                 f"invisible-side-effect-free", node, filename)
    for fname, ftype in info.fields.items():
        if isinstance(ftype, CellT) or _mentions_cell(ftype):
            E.reject(E.INTERIOR_MUT,
                     f"field {info.name}.{fname} holds a shared-mutable "
                     f"cell", node, filename)
        bad = _field_isef(ftype, env)
        if bad:
            E.reject(bad[0], f"field {info.name}.{fname}: {bad[1]}",
                     node, filename)


def _mentions_cell(t: SType) -> bool:
    if isinstance(t, CellT):
        return True
    for attr in ("elem", "inner", "payload", "key", "value"):
        inner = getattr(t, attr, None)
        if isinstance(inner, SType) and _mentions_cell(inner):
            return True
    if isinstance(t, TupleT):
        return any(_mentions_cell(i) for i in t.items)
    return False


def _field_isef(t: SType, env: ModuleEnv):
    # Secret-typed fields are fine; the payload must still qualify.
    if isinstance(t, SecretT):
        return _field_isef(t.payload, env)
    return isef_violation(t, env)


def build_env(tree: ast.Module, filename: str,
              family: LabelFamily | None) -> ModuleEnv:
    env = ModuleEnv(family=family or _detect_policies(tree, filename),
                    filename=filename)

    # Class shells first so aliases and fields may reference them.
    for node in tree.body:
        if isinstance(node, ast.ClassDef):
            env.classes[node.name] = ClassInfo(name=node.name)

    for node in tree.body:
        if (isinstance(node, ast.AnnAssign)
                and isinstance(node.target, ast.Name)
                and tail_identifier(node.annotation) == "TypeAlias"
                and node.value is not None):
            env.aliases[node.target.id] = parse_annotation(node.value, env)

    for node in tree.body:
        if isinstance(node, ast.ClassDef):
            info = _class_info(node, env, filename)
            env.classes[node.name] = info
            if info.isef_derived:
                _validate_derived(info, node, env, filename)

    for node in tree.body:
        if is_sef_def(node):
            names, ptypes, ret = sef_signature(node, env, filename)
            env.sef_params[node.name] = ptypes
            env.sef_returns[node.name] = ret

    for node in tree.body:
        if (isinstance(node, ast.AnnAssign)
                and isinstance(node.target, ast.Name)
                and tail_identifier(node.annotation) != "TypeAlias"):
            env.module_scope[node.target.id] = parse_annotation(
                node.annotation, env)
    return env


# ---------------------------------------------------------------------------
# Phase 2: module-wide rules on ordinary (non-secret) code

class _ModuleRules(ast.NodeVisitor):
    def __init__(self, env: ModuleEnv, filename: str):
        self.env = env
        self.filename = filename
        self.block_decorators: set[int] = set()

    def reject(self, category, message, node):
        E.reject(category, message, node, self.filename)

    def visit_FunctionDef(self, node):
        if is_secret_block_def(node) or is_sef_def(node):
            # Interior code is governed by the secret-context rules; only
            # the decorator expressions stay subject to module-wide rules.
            for dec in node.decorator_list:
                if (isinstance(dec, ast.Call)
                        and isinstance(dec.func, ast.Name)
                        and dec.func.id == "secret_block"):
                    self.block_decorators.add(id(dec))
                self.visit(dec)
            return
        self._check_name(node.name, node)
        self.generic_visit(node)

    visit_AsyncFunctionDef = visit_FunctionDef

    def _check_name(self, name: str, node):
        if name.startswith("_lf_") or "_secret_trampoline" in name:
            self.reject(E.RESERVED_NAME,
                        f"{name} uses a reserved generated-name pattern",
                        node)

    def visit_Name(self, node: ast.Name):
        self._check_name(node.id, node)
        if isinstance(node.ctx, ast.Store) and node.id in SURFACE_NAMES:
            self.reject(E.RESERVED_NAME,
                        f"rebinding {node.id} would defeat the checks", node)

    def visit_arg(self, node: ast.arg):
        self._check_name(node.arg, node)
        self.generic_visit(node)

    def visit_Attribute(self, node: ast.Attribute):
        if node.attr in PAYLOAD_SLOTS:
            self.reject(E.PAYLOAD_ACCESS,
                        "the secret payload slot is not part of the "
                        "interface; use declassify or unwrap operations",
                        node)
        self._check_name(node.attr, node)
        base = tail_identifier(node.value)
        if base == "Secret" and node.attr.startswith("_"):
            self.reject(E.PAYLOAD_ACCESS,
                        "restricted secret constructors are reserved for "
                        "generated code", node)
        if base == "Vetted" and node.attr.startswith("_"):
            self.reject(E.VETTED_FORGERY,
                        "vetted values cannot be constructed by hand", node)
        self.generic_visit(node)

    def visit_Import(self, node: ast.Import):
        for alias in node.names:
            if alias.name.startswith("labelflow._") or "._rt" in alias.name:
                self.reject(E.VETTED_FORGERY,
                            "the generated-code runtime is not importable "
                            "from application code", node)
            if alias.asname and alias.asname in SURFACE_NAMES:
                self.reject(E.RESERVED_NAME,
                            f"rebinding {alias.asname} would defeat the "
                            f"checks", node)

    def visit_ImportFrom(self, node: ast.ImportFrom):
        module = node.module or ""
        if module.startswith("labelflow"):
            for alias in node.names:
                if alias.name.startswith("_"):
                    self.reject(E.VETTED_FORGERY,
                                "the generated-code runtime is not "
                                "importable from application code", node)
        for alias in node.names:
            if alias.asname and alias.asname in SURFACE_NAMES:
                self.reject(E.RESERVED_NAME,
                            f"rebinding {alias.asname} would defeat the "
                            f"checks", node)

    def visit_Call(self, node: ast.Call):
        func = node.func
        name = func.id if isinstance(func, ast.Name) else None
        if name == "unsafe_region":
            # Audited escape region: contents exempt from these rules.
            return
        if name == "secret_block" and id(node) not in self.block_decorators:
            self.reject(E.UNSUPPORTED,
                        "secret_block appears only as the decorator of a "
                        "parameterless function", node)
        if name in UNWRAP_SURFACE:
            self.reject(E.OUTSIDE_BLOCK,
                        f"{name} is not a defined function outside secret "
                        f"blocks", node)
        if name == "Vetted":
            self.reject(E.VETTED_FORGERY,
                        "vetted values cannot be constructed by hand", node)
        if name in self.env.sef_returns:
            self.reject(E.DISPATCH_CALL,
                        f"{name} is side-effect-free machinery; call it "
                        f"from a secret context or wrap the call in "
                        f"unsafe_region", node)
        if name == "declassify_transmute" and node.args:
            arg = node.args[0]
            if isinstance(arg, ast.Name):
                stype = self.env.module_scope.get(arg.id)
                if (stype is not None and not isinstance(stype, Unknown)
                        and not isinstance(stype, SecretT)
                        and not contains_secret(stype, self.env)):
                    self.reject(E.UNSUPPORTED,
                                "declassify_transmute reinterprets "
                                "containers of secrets; this value has no "
                                "secret inside", node)
        self.generic_visit(node)


# ---------------------------------------------------------------------------
# Phase 3: expansion walk with scope tracking

class _Expander:
    def __init__(self, env: ModuleEnv, filename: str, fresh: _Fresh):
        self.env = env
        self.filename = filename
        self.fresh = fresh
        self.scopes: list[dict[str, SType]] = [env.module_scope]
        self.plain_returns: dict[str, SType] = {}

    # -- plain-code expression typing (best effort) ------------------------

    def lookup(self, name: str) -> SType | None:
        for scope in reversed(self.scopes):
            if name in scope:
                return scope[name]
        return None

    def infer(self, e: ast.expr | None) -> SType:
        if e is None:
            return UNKNOWN
        if isinstance(e, ast.Constant):
            v = e.value
            if v is None:
                return NONE
            if isinstance(v, bool):
                return BOOL
            if isinstance(v, int):
                return INT
            if isinstance(v, float):
                return FLOAT
            if isinstance(v, str):
                return STR
            if isinstance(v, bytes):
                return BYTES
            return UNKNOWN
        if isinstance(e, ast.Name):
            return self.lookup(e.id) or UNKNOWN
        if isinstance(e, ast.Tuple):
            return TupleT(tuple(self.infer(x) for x in e.elts))
        if isinstance(e, ast.List):
            if not e.elts:
                return ListT(UNKNOWN)
            first = self.infer(e.elts[0])
            return ListT(first if all(self.infer(x) == first
                                      for x in e.elts) else UNKNOWN)
        if isinstance(e, ast.Dict):
            if not e.keys or e.keys[0] is None:
                return DictT(UNKNOWN, UNKNOWN)
            kt = self.infer(e.keys[0])
            vt = self.infer(e.values[0])
            return DictT(kt, vt)
        if isinstance(e, ast.Subscript):
            base = self.infer(e.value)
            if isinstance(base, DictT):
                return base.value
            if isinstance(base, ListT):
                return base.elem
            return UNKNOWN
        if isinstance(e, ast.Attribute):
            base = self.infer(e.value)
            if isinstance(base, AppT):
                ci = self.env.classes.get(base.name)
                if ci:
                    return ci.field_type(e.attr, base.args) or UNKNOWN
            return UNKNOWN
        if isinstance(e, ast.Call):
            func = e.func
            name = func.id if isinstance(func, ast.Name) else None
            if name in ("declassify", "declassify_ref", "declassify_ref_mut"):
                inner = self.infer(e.args[0]) if e.args else UNKNOWN
                return inner.payload if isinstance(inner, SecretT) else inner
            if name == "declassify_transmute" and e.args:
                return _strip_secret(self.infer(e.args[0]))
            if name in self.env.classes:
                return AppT(name)
            if name in self.plain_returns:
                return self.plain_returns[name]
            if name == "len":
                return INT
            return UNKNOWN
        if isinstance(e, ast.BinOp):
            lt, rt = self.infer(e.left), self.infer(e.right)
            if isinstance(e.op, ast.Div):
                return FLOAT
            if lt == rt:
                return lt
            return UNKNOWN
        if isinstance(e, ast.Compare):
            return BOOL
        return UNKNOWN

    def bind(self, name: str, stype: SType):
        self.scopes[-1][name] = stype

    def _bind_target(self, target, stype: SType):
        if isinstance(target, ast.Name):
            self.bind(target.id, stype)
        elif isinstance(target, ast.Tuple):
            items = (list(stype.items) if isinstance(stype, TupleT)
                     and len(stype.items) == len(target.elts)
                     else [UNKNOWN] * len(target.elts))
            for elt, it in zip(target.elts, items):
                self._bind_target(elt, it)

    def _iter_elem(self, iter_expr) -> SType:
        if isinstance(iter_expr, ast.Call):
            func = iter_expr.func
            if isinstance(func, ast.Name) and func.id == "range":
                return INT
            if isinstance(func, ast.Attribute):
                base = self.infer(func.value)
                if isinstance(base, DictT):
                    if func.attr == "items":
                        return TupleT((base.key, base.value))
                    if func.attr == "keys":
                        return base.key
                    if func.attr == "values":
                        return base.value
        base = self.infer(iter_expr)
        if isinstance(base, ListT):
            return base.elem
        if isinstance(base, SetT):
            return base.elem
        if isinstance(base, DictT):
            return base.key
        if isinstance(base, TupleT) and base.items:
            first = base.items[0]
            if all(i == first for i in base.items):
                return first
        return UNKNOWN

    # -- walk ---------------------------------------------------------------

    def expand_module(self, tree: ast.Module) -> ast.Module:
        tree.body = self.expand_stmts(tree.body)
        return tree

    def expand_stmts(self, stmts: list) -> list:
        out = []
        for s in stmts:
            out.extend(self.expand_stmt(s))
        return out

    def expand_stmt(self, s) -> list:
        if is_secret_block_def(s):
            enclosing = [dict(sc) for sc in self.scopes]
            stmts, rtype = expand_secret_block(s, self.env, enclosing,
                                               self.fresh, self.filename)
            self.bind(s.name, rtype)
            return stmts
        if is_sef_def(s):
            if len(self.scopes) > 1:
                E.reject(E.UNSUPPORTED,
                         "side-effect-free functions are declared at module "
                         "level", s, self.filename)
            enclosing = [dict(sc) for sc in self.scopes]
            return expand_sef_fn(s, self.env, enclosing, self.fresh,
                                 self.filename)
        if isinstance(s, ast.FunctionDef):
            params = {}
            for a in s.args.args:
                params[a.arg] = parse_annotation(a.annotation, self.env)
            if s.returns is not None:
                self.plain_returns[s.name] = parse_annotation(
                    s.returns, self.env)
            self.scopes.append(params)
            s.body = self.expand_stmts(s.body)
            self.scopes.pop()
            return [s]
        if isinstance(s, ast.ClassDef):
            self.scopes.append({})  # field annotations are not module names
            s.body = self.expand_stmts(s.body)
            self.scopes.pop()
            return [s]
        if isinstance(s, ast.Assign) and len(s.targets) == 1:
            self._bind_target(s.targets[0], self.infer(s.value))
            return [s]
        if isinstance(s, ast.AnnAssign) and isinstance(s.target, ast.Name):
            if tail_identifier(s.annotation) != "TypeAlias":
                self.bind(s.target.id, parse_annotation(s.annotation, self.env))
            return [s]
        if isinstance(s, ast.For):
            self._bind_target(s.target, self._iter_elem(s.iter))
            s.body = self.expand_stmts(s.body)
            s.orelse = self.expand_stmts(s.orelse)
            return [s]
        if isinstance(s, (ast.If, ast.While)):
            s.body = self.expand_stmts(s.body)
            s.orelse = self.expand_stmts(s.orelse)
            return [s]
        if isinstance(s, ast.With):
            s.body = self.expand_stmts(s.body)
            return [s]
        if isinstance(s, ast.Try):
            s.body = self.expand_stmts(s.body)
            for handler in s.handlers:
                handler.body = self.expand_stmts(handler.body)
            s.orelse = self.expand_stmts(s.orelse)
            s.finalbody = self.expand_stmts(s.finalbody)
            return [s]
        return [s]


def _strip_secret(t: SType) -> SType:
    if isinstance(t, SecretT):
        return t.payload
    if isinstance(t, ListT):
        return ListT(_strip_secret(t.elem))
    if isinstance(t, DictT):
        return DictT(t.key, _strip_secret(t.value))
    if isinstance(t, OptT):
        return OptT(_strip_secret(t.inner))
    if isinstance(t, TupleT):
        return TupleT(tuple(_strip_secret(i) for i in t.items))
    return t


# ---------------------------------------------------------------------------
# Driver

def _inject_imports(tree: ast.Module):
    insert_at = 0
    if (tree.body and isinstance(tree.body[0], ast.Expr)
            and isinstance(tree.body[0].value, ast.Constant)
            and isinstance(tree.body[0].value.value, str)):
        insert_at = 1
    has_future = False
    while insert_at < len(tree.body):
        node = tree.body[insert_at]
        if isinstance(node, ast.ImportFrom) and node.module == "__future__":
            has_future = True
            insert_at += 1
        else:
            break
    injected = []
    if not has_future:
        injected.append(ast.ImportFrom(
            module="__future__",
            names=[ast.alias(name="annotations", asname=None)], level=0))
    injected.append(ast.ImportFrom(
        module="labelflow",
        names=[ast.alias(name="_rt", asname="_lf_rt")], level=0))
    tree.body[insert_at:insert_at] = injected


def transform_module(source: str, filename: str = "<secret>",
                     family: LabelFamily | None = None) -> ast.Module:
    """Parse, check, and expand a module; raises Rejection on any violation."""
    tree = ast.parse(source, filename=filename)
    env = build_env(tree, filename, family)
    _ModuleRules(env, filename).visit(tree)
    expander = _Expander(env, filename, _Fresh())
    tree = expander.expand_module(tree)
    _inject_imports(tree)
    ast.fix_missing_locations(tree)
    return tree


def transform_source(source: str, filename: str = "<secret>",
                     family: LabelFamily | None = None) -> str:
    return ast.unparse(transform_module(source, filename, family))


def compile_secret_source(source: str, filename: str = "<secret>",
                          family: LabelFamily | None = None):
    tree = transform_module(source, filename, family)
    return compile(tree, filename, "exec")


def load_secret_module(path, module_name: str | None = None,
                       family: LabelFamily | None = None) -> types.ModuleType:
    """Transform, compile, and execute a module from a source file."""
    path = str(path)
    with open(path, "r", encoding="utf-8") as fh:
        source = fh.read()
    name = module_name or ("_secret_" + path.replace("/", "_")
                           .replace(".", "_"))
    code = compile_secret_source(source, path, family)
    module = types.ModuleType(name)
    module.__file__ = path
    sys.modules[name] = module
    try:
        exec(code, module.__dict__)
    except BaseException:
        sys.modules.pop(name, None)
        raise
    return module


# ---------------------------------------------------------------------------
# Import hook: transformation triggered by source annotation

_MARKERS = ("secret_block", "__secrecy_policies__")


class _SecretLoader(importlib.machinery.SourceFileLoader):
    def source_to_code(self, data, path, *, _optimize=-1):
        source = data.decode("utf-8") if isinstance(data, bytes) else data
        if any(m in source for m in _MARKERS):
            return compile_secret_source(source, path)
        return super().source_to_code(data, path, _optimize=_optimize)

    def get_code(self, fullname):
        # Bypass pyc caching: the transform must run on every import.
        source = self.get_source(fullname)
        return self.source_to_code(source, self.get_filename(fullname))


class _SecretFinder(importlib.abc.MetaPathFinder):
    def find_spec(self, fullname, path=None, target=None):
        for finder in sys.meta_path:
            if finder is self or not hasattr(finder, "find_spec"):
                continue
            spec = finder.find_spec(fullname, path, target)
            if spec is None or spec.origin is None:
                continue
            if not spec.origin.endswith(".py"):
                return None
            try:
                with open(spec.origin, "r", encoding="utf-8") as fh:
                    source = fh.read()
            except OSError:
                return None
            if not any(m in source for m in _MARKERS):
                return None
            loader = _SecretLoader(fullname, spec.origin)
            return importlib.util.spec_from_file_location(
                fullname, spec.origin, loader=loader)
        return None


_FINDER: _SecretFinder | None = None


def install_import_hook():
    """Transform marked modules automatically at import time."""
    global _FINDER
    if _FINDER is None:
        _FINDER = _SecretFinder()
        sys.meta_path.insert(0, _FINDER)


def uninstall_import_hook():
    global _FINDER
    if _FINDER is not None:
        sys.meta_path.remove(_FINDER)
        _FINDER = None
