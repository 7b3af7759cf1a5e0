"""Capability predicates, identity check functions, safe operators, allowlist.

Three audiences share this module:

* generated code calls the ``check_*`` identities and the ``safe_*``
  operator family at run time (only the executed, semantics-preserving
  variant ever runs; the instrumented variant is dead code);
* the transform pass consults the static predicates and the allowlist
  registry while rewriting secret contexts;
* applications apply ``invisible_side_effect_free`` to record types they
  want to use inside secret contexts.
"""

from __future__ import annotations

import ast
from dataclasses import dataclass
from importlib import resources

from . import errors as E
from .core import register_default
from .typesys import (
    AppT, BOOL, CellT, DictT, FLOAT, INT, ListT, ModuleEnv, NONE, OptT,
    Scalar, SecretT, SetT, SType, STR, TupleT, UNKNOWN, Unknown,
)


class MutCell:
    """Shared-mutable cell: mutation through a read-only handle.

    The one interior-mutability construct the capability predicates know
    about; it is banned from secret payloads, secret-context captures, and
    derived record fields.
    """

    __slots__ = ("_value",)

    def __init__(self, value):
        self._value = value

    def get(self):
        return self._value

    def set(self, value):
        self._value = value


# ---------------------------------------------------------------------------
# Run-time identity checks (attached to generated code)

def check_ISEF(value):
    """Identity; the static half requires the value's type to be ISEF."""
    return value


def check_ISEF_ref(value):
    return value


def check_ISEF_unsafe(value):
    # Appears only in nonexecuted generated code so the checked variant of a
    # plain variable use has something to anchor the static requirement to.
    return value


def check_not_mut_secret(place):
    """Identity guard on assignment targets; statically rejects secrets."""
    return place


# ---------------------------------------------------------------------------
# Safe operator family: default behavior for built-in operands only

_NUM = (int, float, bool)
_EQ_TYPES = (int, float, bool, str, bytes, tuple, list, dict, set, frozenset,
             type(None))
_ORD_TYPES = (int, float, bool, str, bytes, tuple, list)
_SEQ_TYPES = (list, tuple, str, bytes, dict)


def _gate(op_name, values, allowed):
    for v in values:
        if type(v) not in allowed:
            raise E.CapabilityError(
                f"{op_name} is defined only for built-in operand types, "
                f"got {type(v).__name__}")


def safe_add(a, b):
    _gate("safe_add", (a, b), (int, float, bool, str, list, tuple))
    return a + b


def safe_sub(a, b):
    _gate("safe_sub", (a, b), _NUM + (set, frozenset))
    return a - b


def safe_mul(a, b):
    _gate("safe_mul", (a, b), (int, float, bool, str, list, tuple))
    return a * b


def safe_div(a, b):
    _gate("safe_div", (a, b), _NUM)
    return a / b


def safe_floordiv(a, b):
    _gate("safe_floordiv", (a, b), _NUM)
    return a // b


def safe_mod(a, b):
    _gate("safe_mod", (a, b), _NUM)
    return a % b


def safe_pow(a, b):
    _gate("safe_pow", (a, b), _NUM)
    return a ** b


def safe_lshift(a, b):
    _gate("safe_lshift", (a, b), (int, bool))
    return a << b


def safe_rshift(a, b):
    _gate("safe_rshift", (a, b), (int, bool))
    return a >> b


def safe_bitand(a, b):
    _gate("safe_bitand", (a, b), (int, bool, set, frozenset))
    return a & b


def safe_bitor(a, b):
    _gate("safe_bitor", (a, b), (int, bool, set, frozenset))
    return a | b


def safe_bitxor(a, b):
    _gate("safe_bitxor", (a, b), (int, bool, set, frozenset))
    return a ^ b


def safe_neg(a):
    _gate("safe_neg", (a,), _NUM)
    return -a


def safe_pos(a):
    _gate("safe_pos", (a,), _NUM)
    return +a


def safe_invert(a):
    _gate("safe_invert", (a,), (int, bool))
    return ~a


def safe_eq(a, b):
    _gate("safe_eq", (a, b), _EQ_TYPES)
    return a == b


def safe_ne(a, b):
    _gate("safe_ne", (a, b), _EQ_TYPES)
    return a != b


def safe_lt(a, b):
    _gate("safe_lt", (a, b), _ORD_TYPES)
    return a < b


def safe_le(a, b):
    _gate("safe_le", (a, b), _ORD_TYPES)
    return a <= b


def safe_gt(a, b):
    _gate("safe_gt", (a, b), _ORD_TYPES)
    return a > b


def safe_ge(a, b):
    _gate("safe_ge", (a, b), _ORD_TYPES)
    return a >= b


def safe_contains(item, container):
    _gate("safe_contains", (container,), _SEQ_TYPES + (set, frozenset))
    return item in container


def safe_index(container, index):
    _gate("safe_index", (container,), _SEQ_TYPES)
    return container[index]


# Compound-assignment family: dead-code twins of the in-place operators.
# They return the combined value; the executed variant performs the real
# (built-in) in-place operation.

def safe_add_assign(a, b):
    return safe_add(a, b)


def safe_sub_assign(a, b):
    return safe_sub(a, b)


def safe_mul_assign(a, b):
    return safe_mul(a, b)


def safe_div_assign(a, b):
    return safe_div(a, b)


def safe_floordiv_assign(a, b):
    return safe_floordiv(a, b)


def safe_mod_assign(a, b):
    return safe_mod(a, b)


def safe_pow_assign(a, b):
    return safe_pow(a, b)


def safe_lshift_assign(a, b):
    return safe_lshift(a, b)


def safe_rshift_assign(a, b):
    return safe_rshift(a, b)


def safe_bitand_assign(a, b):
    return safe_bitand(a, b)


def safe_bitor_assign(a, b):
    return safe_bitor(a, b)


def safe_bitxor_assign(a, b):
    return safe_bitxor(a, b)


BINOP_SAFE_NAMES = {
    ast.Add: "safe_add", ast.Sub: "safe_sub", ast.Mult: "safe_mul",
    ast.Div: "safe_div", ast.FloorDiv: "safe_floordiv", ast.Mod: "safe_mod",
    ast.Pow: "safe_pow", ast.LShift: "safe_lshift", ast.RShift: "safe_rshift",
    ast.BitAnd: "safe_bitand", ast.BitOr: "safe_bitor",
    ast.BitXor: "safe_bitxor",
}
UNARY_SAFE_NAMES = {ast.USub: "safe_neg", ast.UAdd: "safe_pos",
                    ast.Invert: "safe_invert"}
CMP_SAFE_NAMES = {ast.Eq: "safe_eq", ast.NotEq: "safe_ne", ast.Lt: "safe_lt",
                  ast.LtE: "safe_le", ast.Gt: "safe_gt", ast.GtE: "safe_ge"}
AUG_SAFE_NAMES = {k: v + "_assign" for k, v in BINOP_SAFE_NAMES.items()}


# ---------------------------------------------------------------------------
# Derive: allow an application record type inside secret contexts

_FORBIDDEN_HOOKS = ("__del__",)
_DEREF_HOOKS = ("__getattr__", "__getattribute__", "__setattr__",
                "__delattr__", "__get__", "__set__", "__delete__")

_ISEF_RUNTIME_CLASSES: set[type] = set()


def invisible_side_effect_free(cls):
    """Class decorator admitting a record type into secret contexts.

    The transform pass performs the full static validation (field types,
    interior mutability); this run-time half re-checks the structural
    exclusions (no custom destructor, no attribute-access hooks, no
    properties) and registers the class and its default.
    """
    params = getattr(cls, "__dataclass_params__", None)
    frozen_machinery = {"__setattr__", "__delattr__"} if (
        params is not None and params.frozen) else set()
    for hook in _FORBIDDEN_HOOKS:
        if hook in cls.__dict__:
            raise E.CapabilityError(
                f"{cls.__name__} defines {hook}; custom destructors are not "
                f"invisible-side-effect-free")
    for hook in _DEREF_HOOKS:
        if hook in cls.__dict__ and hook not in frozen_machinery:
            raise E.CapabilityError(
                f"{cls.__name__} defines {hook}; custom attribute access is "
                f"not invisible-side-effect-free")
    for name, attr in cls.__dict__.items():
        if isinstance(attr, property):
            raise E.CapabilityError(
                f"{cls.__name__}.{name} is a property; hidden getters are "
                f"not invisible-side-effect-free")
    _ISEF_RUNTIME_CLASSES.add(cls)
    try:
        register_default(cls, cls)
    except Exception:
        pass
    return cls


def is_isef_class(cls) -> bool:
    return cls in _ISEF_RUNTIME_CLASSES


# ---------------------------------------------------------------------------
# Static capability predicates over the checker's type algebra

def isef_violation(t: SType, env: ModuleEnv) -> tuple[str, str] | None:
    """Why a type may not be used in a secret context, or None if it may."""
    if isinstance(t, Scalar):
        return None
    if isinstance(t, (ListT, SetT)):
        return isef_violation(t.elem, env)
    if isinstance(t, DictT):
        return isef_violation(t.key, env) or isef_violation(t.value, env)
    if isinstance(t, TupleT):
        for item in t.items:
            bad = isef_violation(item, env)
            if bad:
                return bad
        return None
    if isinstance(t, OptT):
        return isef_violation(t.inner, env)
    if isinstance(t, SecretT):
        return isef_violation(t.payload, env)
    if isinstance(t, CellT):
        return (E.INTERIOR_MUT, "shared-mutable cell in a secret context")
    if isinstance(t, AppT):
        ci = env.classes.get(t.name)
        if ci is None:
            return (E.ISEF, f"type {t.name} is not known to be "
                            f"invisible-side-effect-free")
        if ci.custom_drop:
            return (E.CUSTOM_DROP, f"{t.name} defines a custom destructor")
        if ci.custom_deref:
            return (E.CUSTOM_DEREF, f"{t.name} customizes attribute access")
        if not ci.isef_derived:
            return (E.ISEF, f"{t.name} lacks the invisible_side_effect_free "
                            f"derivation")
        return None
    return (E.ISEF, "type of this expression cannot be established")


def secret_value_safe_violation(t: SType, env: ModuleEnv) -> tuple[str, str] | None:
    """Why a type may not be wrapped as a secret payload.

    Payloads must be invisible-side-effect-free, free of shared-mutable
    cells, and default-constructible (panic containment substitutes the
    default); the last bound lives here so every wrap site reports it.
    """
    if isinstance(t, SecretT):
        return (E.ISEF, "secrets cannot be nested inside secrets")
    if contains_cell(t, env):
        return (E.INTERIOR_MUT, "secret payloads must not contain "
                                "shared-mutable cells")
    bad = isef_violation(t, env)
    if bad:
        return bad
    if default_expr_src(t, env) is None:
        return (E.NO_DEFAULT, f"secret payload {t!r} provides no default "
                              f"value for panic containment")
    return None


def contains_secret(t: SType, env: ModuleEnv, _seen=None) -> bool:
    if isinstance(t, SecretT):
        return True
    if isinstance(t, (ListT, SetT)):
        return contains_secret(t.elem, env, _seen)
    if isinstance(t, DictT):
        return (contains_secret(t.key, env, _seen)
                or contains_secret(t.value, env, _seen))
    if isinstance(t, TupleT):
        return any(contains_secret(i, env, _seen) for i in t.items)
    if isinstance(t, OptT):
        return contains_secret(t.inner, env, _seen)
    if isinstance(t, CellT):
        return contains_secret(t.inner, env, _seen)
    if isinstance(t, AppT):
        seen = _seen or set()
        if t.name in seen:
            return False
        ci = env.classes.get(t.name)
        if ci is None:
            return False
        seen = seen | {t.name}
        return any(
            contains_secret(ci.field_type(f, t.args) or UNKNOWN, env, seen)
            for f in ci.fields)
    return False


def contains_cell(t: SType, env: ModuleEnv, _seen=None) -> bool:
    if isinstance(t, CellT):
        return True
    if isinstance(t, (ListT, SetT)):
        return contains_cell(t.elem, env, _seen)
    if isinstance(t, DictT):
        return contains_cell(t.key, env, _seen) or contains_cell(t.value, env, _seen)
    if isinstance(t, TupleT):
        return any(contains_cell(i, env, _seen) for i in t.items)
    if isinstance(t, OptT):
        return contains_cell(t.inner, env, _seen)
    if isinstance(t, SecretT):
        return contains_cell(t.payload, env, _seen)
    if isinstance(t, AppT):
        seen = _seen or set()
        if t.name in seen:
            return False
        ci = env.classes.get(t.name)
        if ci is None:
            return False
        seen = seen | {t.name}
        return any(
            contains_cell(ci.field_type(f, t.args) or UNKNOWN, env, seen)
            for f in ci.fields)
    return False


def is_builtin_operand(t: SType) -> bool:
    return isinstance(t, (Scalar, ListT, SetT, DictT, TupleT, OptT))


def mutable_type(t: SType, env: ModuleEnv) -> bool:
    """Whether write-through aliasing of a value of this type is observable."""
    if isinstance(t, (ListT, DictT, CellT)):
        return True
    if isinstance(t, SetT):
        return not t.frozen
    if isinstance(t, AppT):
        ci = env.classes.get(t.name)
        return ci is None or not ci.frozen
    if isinstance(t, TupleT):
        return any(mutable_type(i, env) for i in t.items)
    if isinstance(t, SecretT):
        return mutable_type(t.payload, env)
    if isinstance(t, Unknown):
        return True
    return False


def default_expr_src(t: SType, env: ModuleEnv) -> str | None:
    """Source of a default-value expression for panic containment."""
    if isinstance(t, Scalar):
        return {"int": "0", "float": "0.0", "bool": "False", "str": "''",
                "bytes": "b''", "none": "None"}[t.name]
    if isinstance(t, ListT):
        return "[]"
    if isinstance(t, DictT):
        return "{}"
    if isinstance(t, SetT):
        return "frozenset()" if t.frozen else "set()"
    if isinstance(t, TupleT):
        inner = [default_expr_src(i, env) for i in t.items]
        if any(i is None for i in inner):
            return None
        return "(" + ", ".join(inner) + ("," if len(inner) == 1 else "") + ")"
    if isinstance(t, OptT):
        return "None"
    if isinstance(t, SecretT):
        return default_expr_src(t.payload, env)
    if isinstance(t, AppT):
        ci = env.classes.get(t.name)
        if ci is not None and ci.has_default:
            return f"_lf_rt.default_for({t.name})"
        return None
    return None


# ---------------------------------------------------------------------------
# Allowlist registry

@dataclass(frozen=True)
class AllowlistEntry:
    fully_qualified_name: str
    arity: int
    note: str


def parse_allowlist(text: str) -> dict[str, AllowlistEntry]:
    entries: dict[str, AllowlistEntry] = {}
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        name, arity, note = line.split(None, 2)
        if name in entries:
            raise ValueError(f"duplicate allowlist entry: {name}")
        entries[name] = AllowlistEntry(name, int(arity), note)
    return entries


def _load_shipped_allowlist() -> dict[str, AllowlistEntry]:
    text = resources.files("labelflow").joinpath("allowlist.txt").read_text()
    return parse_allowlist(text)


_ALLOWLIST: dict[str, AllowlistEntry] | None = None


def allowlist() -> dict[str, AllowlistEntry]:
    global _ALLOWLIST
    if _ALLOWLIST is None:
        _ALLOWLIST = _load_shipped_allowlist()
    return _ALLOWLIST


def is_allowlisted(path: str) -> bool:
    """Exact-string membership; unqualified names never match."""
    return path in allowlist()


# Static signatures for allowlisted functions: argument admissibility and
# result types, plus which argument positions the callee mutates (mutating
# entries require a block-local writable target at call sites).

@dataclass(frozen=True)
class StdSignature:
    name: str
    check: object            # (args: list[SType], env) -> str | None
    result: object           # (args: list[SType], env) -> SType
    mutates: tuple[int, ...] = ()


def _want(t: SType, *shapes) -> bool:
    if isinstance(t, Unknown):
        return True
    return isinstance(t, shapes) or t in shapes


def _sig_table() -> dict[str, StdSignature]:
    def fixed(ret):
        return lambda args, env: ret

    def no_check(args, env):
        return None

    def scalar_only(i, what):
        def chk(args, env):
            if not _want(args[i], Scalar):
                return f"argument {i + 1} must be a {what}"
            return None
        return chk

    table = {}

    def add(name, check, result, mutates=()):
        table[name] = StdSignature(name, check, result, mutates)

    add("std.str.len", scalar_only(0, "string"), fixed(INT))
    add("std.str.from_", scalar_only(0, "string"), fixed(STR))
    add("std.str.chars", scalar_only(0, "string"), fixed(ListT(STR)))
    add("std.str.is_empty", scalar_only(0, "string"), fixed(BOOL))
    add("std.str.concat", no_check, fixed(STR))
    add("std.char.is_digit", no_check, fixed(BOOL))
    add("std.option.unwrap", no_check,
        lambda args, env: args[0].inner if isinstance(args[0], OptT) else args[0])
    add("std.option.is_some", no_check, fixed(BOOL))
    add("std.option.is_none", no_check, fixed(BOOL))
    add("std.map.get", lambda args, env: (
            None if _want(args[0], DictT) else "first argument must be a map"),
        lambda args, env: (OptT(args[0].value)
                           if isinstance(args[0], DictT) else UNKNOWN))
    add("std.map.contains_key", no_check, fixed(BOOL))
    add("std.map.len", no_check, fixed(INT))
    add("std.list.len", no_check, fixed(INT))
    add("std.list.get", lambda args, env: (
            None if _want(args[0], ListT, TupleT) else
            "first argument must be a sequence"),
        lambda args, env: (args[0].elem if isinstance(args[0], ListT)
                           else UNKNOWN))
    add("std.list.push", lambda args, env: (
            None if _want(args[0], ListT) else "first argument must be a list"),
        fixed(NONE), mutates=(0,))
    add("std.list.repeat", lambda args, env: (
            None if _want(args[0], Scalar) else
            "repeated element must be an immutable scalar"),
        lambda args, env: ListT(args[0]))
    add("std.grid.fill", lambda args, env: (
            None if _want(args[2], Scalar) else
            "fill element must be an immutable scalar"),
        lambda args, env: ListT(ListT(args[2])))
    add("std.int.to_str", no_check, fixed(STR))
    add("std.int.to_float", no_check, fixed(FLOAT))
    add("std.int.abs", no_check, fixed(INT))
    add("std.float.to_int", no_check, fixed(INT))
    add("std.math.min", no_check, lambda args, env: args[0])
    add("std.math.max", no_check, lambda args, env: args[0])
    add("std.math.abs", no_check, lambda args, env: args[0])
    add("std.math.sqrt", no_check, fixed(FLOAT))
    return table


STD_SIGNATURES = _sig_table()
