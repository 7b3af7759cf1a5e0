"""Static type model consulted by the transform pass.

The checker needs just enough typing to decide label constraints, operator
legality, and capability membership inside secret contexts: builtin scalars
and containers, secret-wrapped types, application record types (possibly
generic over a label), and the shared-mutable cell marker.
"""

from __future__ import annotations

import ast
from dataclasses import dataclass, field

from .lattice import LabelFamily

SCALARS = {"int", "float", "bool", "str", "bytes", "none"}


class SType:
    """Base of the static type algebra."""

    __slots__ = ()


@dataclass(frozen=True)
class Scalar(SType):
    name: str  # one of SCALARS

    def __repr__(self):
        return self.name


@dataclass(frozen=True)
class ListT(SType):
    elem: SType

    def __repr__(self):
        return f"list[{self.elem!r}]"


@dataclass(frozen=True)
class SetT(SType):
    elem: SType
    frozen: bool = False

    def __repr__(self):
        return f"{'frozenset' if self.frozen else 'set'}[{self.elem!r}]"


@dataclass(frozen=True)
class DictT(SType):
    key: SType
    value: SType

    def __repr__(self):
        return f"dict[{self.key!r}, {self.value!r}]"


@dataclass(frozen=True)
class TupleT(SType):
    items: tuple[SType, ...]

    def __repr__(self):
        return f"tuple[{', '.join(map(repr, self.items))}]"


@dataclass(frozen=True)
class OptT(SType):
    inner: SType

    def __repr__(self):
        return f"({self.inner!r} | None)"


@dataclass(frozen=True)
class SecretT(SType):
    payload: SType
    label: str  # canonical label name, or a type-variable name

    def __repr__(self):
        return f"Secret[{self.payload!r}, {self.label}]"


@dataclass(frozen=True)
class CellT(SType):
    inner: SType

    def __repr__(self):
        return f"MutCell[{self.inner!r}]"


@dataclass(frozen=True)
class AppT(SType):
    name: str
    args: tuple[str, ...] = ()  # label arguments for label-generic records

    def __repr__(self):
        return self.name + (f"[{', '.join(self.args)}]" if self.args else "")


@dataclass(frozen=True)
class Unknown(SType):
    def __repr__(self):
        return "?"


UNKNOWN = Unknown()
INT = Scalar("int")
FLOAT = Scalar("float")
BOOL = Scalar("bool")
STR = Scalar("str")
BYTES = Scalar("bytes")
NONE = Scalar("none")

_SCALAR_BY_NAME = {t.name: t for t in (INT, FLOAT, BOOL, STR, BYTES)}


@dataclass
class ClassInfo:
    """Facts about an application class gathered from its definition."""

    name: str
    fields: dict[str, SType] = field(default_factory=dict)
    label_params: tuple[str, ...] = ()     # generic label parameters, in order
    isef_derived: bool = False
    frozen: bool = False
    custom_drop: bool = False              # __del__
    custom_deref: bool = False             # __getattr__/__getattribute__/descriptors
    has_default: bool = False              # zero-argument construction works
    lineno: int = 0

    def field_type(self, fname: str, args: tuple[str, ...]) -> SType | None:
        t = self.fields.get(fname)
        if t is None:
            return None
        if self.label_params and args:
            return substitute_labels(t, dict(zip(self.label_params, args)))
        return t


def substitute_labels(t: SType, binding: dict[str, str]) -> SType:
    """Replace label type-variables with concrete label names."""
    if isinstance(t, SecretT):
        return SecretT(substitute_labels(t.payload, binding),
                       binding.get(t.label, t.label))
    if isinstance(t, ListT):
        return ListT(substitute_labels(t.elem, binding))
    if isinstance(t, SetT):
        return SetT(substitute_labels(t.elem, binding), t.frozen)
    if isinstance(t, DictT):
        return DictT(substitute_labels(t.key, binding),
                     substitute_labels(t.value, binding))
    if isinstance(t, TupleT):
        return TupleT(tuple(substitute_labels(i, binding) for i in t.items))
    if isinstance(t, OptT):
        return OptT(substitute_labels(t.inner, binding))
    if isinstance(t, CellT):
        return CellT(substitute_labels(t.inner, binding))
    if isinstance(t, AppT):
        return AppT(t.name, tuple(binding.get(a, a) for a in t.args))
    return t


@dataclass
class ModuleEnv:
    """Per-module context assembled before any rewriting happens."""

    family: LabelFamily | None = None
    filename: str = "<secret>"
    aliases: dict[str, SType] = field(default_factory=dict)
    classes: dict[str, ClassInfo] = field(default_factory=dict)
    sef_returns: dict[str, SType] = field(default_factory=dict)
    sef_params: dict[str, list[SType]] = field(default_factory=dict)
    module_scope: dict[str, SType] = field(default_factory=dict)

    def is_label_name(self, name: str) -> bool:
        return self.family is not None and self.family.has_label(name)


def tail_identifier(node: ast.expr) -> str | None:
    if isinstance(node, ast.Attribute):
        return node.attr
    if isinstance(node, ast.Name):
        return node.id
    return None


def dotted_path(node: ast.expr) -> str | None:
    """Render a Name/Attribute chain as 'a.b.c'; None for anything else."""
    parts = []
    while isinstance(node, ast.Attribute):
        parts.append(node.attr)
        node = node.value
    if not isinstance(node, ast.Name):
        return None
    parts.append(node.id)
    return ".".join(reversed(parts))


def parse_annotation(node: ast.expr | None, env: ModuleEnv,
                     label_vars: tuple[str, ...] = ()) -> SType:
    """Interpret an annotation AST as a static type.

    Unknown shapes degrade to Unknown; the checker treats Unknown
    conservatively wherever a rule needs a definite answer.
    """
    if node is None:
        return UNKNOWN
    if isinstance(node, ast.Constant):
        if node.value is None:
            return NONE
        if isinstance(node.value, str):
            try:
                return parse_annotation(ast.parse(node.value, mode="eval").body,
                                        env, label_vars)
            except SyntaxError:
                return UNKNOWN
        return UNKNOWN
    if isinstance(node, ast.Name):
        name = node.id
        if name in _SCALAR_BY_NAME:
            return _SCALAR_BY_NAME[name]
        if name == "None":
            return NONE
        if name in env.aliases:
            return env.aliases[name]
        if name in env.classes:
            return AppT(name)
        if name == "list":
            return ListT(UNKNOWN)
        if name == "dict":
            return DictT(UNKNOWN, UNKNOWN)
        if name == "tuple":
            return TupleT(())
        if name == "set":
            return SetT(UNKNOWN)
        return UNKNOWN
    if isinstance(node, ast.BinOp) and isinstance(node.op, ast.BitOr):
        left = parse_annotation(node.left, env, label_vars)
        right = parse_annotation(node.right, env, label_vars)
        if right == NONE:
            return OptT(left)
        if left == NONE:
            return OptT(right)
        return UNKNOWN
    if isinstance(node, ast.Subscript):
        head = tail_identifier(node.value)
        args = (list(node.slice.elts)
                if isinstance(node.slice, ast.Tuple) else [node.slice])
        if head == "Secret":
            if len(args) != 2:
                return UNKNOWN
            payload = parse_annotation(args[0], env, label_vars)
            label = _label_arg(args[1], env, label_vars)
            return SecretT(payload, label) if label else UNKNOWN
        if head == "MutCell":
            return CellT(parse_annotation(args[0], env, label_vars))
        if head in ("list", "List"):
            return ListT(parse_annotation(args[0], env, label_vars))
        if head in ("set", "Set"):
            return SetT(parse_annotation(args[0], env, label_vars))
        if head in ("frozenset", "FrozenSet"):
            return SetT(parse_annotation(args[0], env, label_vars), frozen=True)
        if head in ("dict", "Dict") and len(args) == 2:
            return DictT(parse_annotation(args[0], env, label_vars),
                         parse_annotation(args[1], env, label_vars))
        if head in ("tuple", "Tuple"):
            return TupleT(tuple(parse_annotation(a, env, label_vars) for a in args))
        if head == "Optional":
            return OptT(parse_annotation(args[0], env, label_vars))
        if head in env.classes:
            labels = tuple(filter(None, (_label_arg(a, env, label_vars) for a in args)))
            return AppT(head, labels)
        if head in env.aliases:
            return env.aliases[head]
        return UNKNOWN
    return UNKNOWN


def _label_arg(node: ast.expr, env: ModuleEnv,
               label_vars: tuple[str, ...]) -> str | None:
    name = tail_identifier(node)
    if name is None:
        return None
    if name in label_vars:
        return name
    if env.is_label_name(name):
        return name
    return None
