"""Block expansion: golden structure, dual variants, containment, exits."""

from __future__ import annotations

import ast
from pathlib import Path

from labelflow.transform import transform_module, transform_source
from helpers import (normalized_dump, normalized_source_dump, program,
                     rejection_category, run_program)

GOLDEN_DIR = Path(__file__).parent / "golden"


def test_golden_calendar_expansion_matches():
    source = (GOLDEN_DIR / "calendar_blocks_src.py").read_text()
    expected = (GOLDEN_DIR / "calendar_blocks_expanded.py").read_text()
    actual = transform_module(source, "calendar_blocks_src.py")
    assert normalized_dump(actual) == normalized_source_dump(expected)


def _block_defs(source_body: str):
    """Transform one block and return (exec def, chk def, binding)."""
    tree = transform_module(program(source_body), "<block>")
    defs = [n for n in ast.walk(tree) if isinstance(n, ast.FunctionDef)
            and n.name.startswith(("_lf_blk_exec", "_lf_blk_chk"))]
    exec_def = next(d for d in defs if d.name.startswith("_lf_blk_exec"))
    chk_def = next(d for d in defs if d.name.startswith("_lf_blk_chk"))
    return exec_def, chk_def, tree


def test_expansion_shape_constant_true_guard():
    _, _, tree = _block_defs("""
@secret_block(Label_AB)
def count():
    return wrap_secret(0)
""")
    binding = next(n for n in ast.walk(tree) if isinstance(n, ast.Assign)
                   and isinstance(n.targets[0], ast.Name)
                   and n.targets[0].id == "count")
    guard = binding.value
    assert isinstance(guard, ast.IfExp)
    assert isinstance(guard.test, ast.Constant) and guard.test.value is True
    for branch in (guard.body, guard.orelse):
        assert isinstance(branch, ast.Call)
        assert branch.func.attr == "call_closure"
        assert branch.args[0].value == "Label_AB"


def test_executed_variant_carries_no_checks():
    exec_def, chk_def, _ = _block_defs("""
x: Secret[int, Label_A] = None

@secret_block(Label_AB)
def out():
    v = unwrap_secret(x) + 1
    return wrap_secret(v)
""")
    exec_src = ast.unparse(exec_def)
    chk_src = ast.unparse(chk_def)
    assert "check_ISEF" not in exec_src
    assert "safe_add" not in exec_src
    assert "+ 1" in exec_src or "+1" in exec_src
    assert "check_ISEF_unsafe" in chk_src
    assert "safe_add" in chk_src


def test_executed_variant_has_panic_wrapper_checked_does_not():
    exec_def, chk_def, _ = _block_defs("""
@secret_block(Label_A)
def out():
    return wrap_secret(1)
""")
    assert any(isinstance(n, ast.Try) for n in exec_def.body)
    assert not any(isinstance(n, ast.Try) for n in ast.walk(chk_def))


_CHECK_WRAPPERS = {"check_ISEF", "check_ISEF_ref", "check_ISEF_unsafe",
                   "check_not_mut_secret", "unsafe_region"}
_SAFE_BINOPS = {
    "safe_add": ast.Add, "safe_sub": ast.Sub, "safe_mul": ast.Mult,
    "safe_div": ast.Div, "safe_floordiv": ast.FloorDiv, "safe_mod": ast.Mod,
    "safe_pow": ast.Pow, "safe_lshift": ast.LShift, "safe_rshift": ast.RShift,
    "safe_bitand": ast.BitAnd, "safe_bitor": ast.BitOr,
    "safe_bitxor": ast.BitXor,
}
_SAFE_CMPS = {"safe_eq": ast.Eq, "safe_ne": ast.NotEq, "safe_lt": ast.Lt,
              "safe_le": ast.LtE, "safe_gt": ast.Gt, "safe_ge": ast.GtE}
_SAFE_UNARY = {"safe_neg": ast.USub, "safe_pos": ast.UAdd,
               "safe_invert": ast.Invert}


class _EraseChecks(ast.NodeTransformer):
    """Strip the R-instrumentation so the S skeleton remains."""

    def _rt_name(self, node):
        if (isinstance(node, ast.Call) and isinstance(node.func, ast.Attribute)
                and isinstance(node.func.value, ast.Name)
                and node.func.value.id == "_lf_rt"):
            return node.func.attr
        return None

    def visit_Call(self, node):
        self.generic_visit(node)
        name = self._rt_name(node)
        if name in _CHECK_WRAPPERS:
            return node.args[0]
        if name in _SAFE_BINOPS:
            return ast.BinOp(left=node.args[0], op=_SAFE_BINOPS[name](),
                             right=node.args[1])
        if name in _SAFE_CMPS:
            return ast.Compare(left=node.args[0], ops=[_SAFE_CMPS[name]()],
                               comparators=[node.args[1]])
        if name in _SAFE_UNARY:
            return ast.UnaryOp(op=_SAFE_UNARY[name](), operand=node.args[0])
        if name == "safe_index":
            return ast.Subscript(value=node.args[0], slice=node.args[1],
                                 ctx=ast.Load())
        return node

    def visit_NamedExpr(self, node):
        self.generic_visit(node)
        return node.value


class _EraseExecScaffolding(ast.NodeTransformer):
    def visit_NamedExpr(self, node):
        self.generic_visit(node)
        return node.value

    def visit_Call(self, node):
        self.generic_visit(node)
        if (isinstance(node.func, ast.Attribute)
                and isinstance(node.func.value, ast.Name)
                and node.func.value.id == "_lf_rt"
                and node.func.attr == "unsafe_region"):
            return node.args[0]
        return node


def test_dual_variants_differ_only_by_checks():
    # Expression-level skeletons must coincide once the R-instrumentation is
    # erased from the checked variant and hygiene temps from the executed one.
    exec_def, chk_def, _ = _block_defs("""
x: Secret[int, Label_AB] = None

@secret_block(Label_AB)
def out():
    v = unwrap_secret(x) * 2 + -1
    flag = v > 3
    return wrap_secret(v if flag else 0)
""")
    try_stmt = next(n for n in exec_def.body if isinstance(n, ast.Try))
    exec_body = [_EraseExecScaffolding().visit(s) for s in try_stmt.body]
    chk_body = [_EraseChecks().visit(s) for s in chk_def.body]

    def skeleton(stmts):
        out = []
        for s in stmts:
            # The checked variant guards rebinding assignments with an extra
            # expression statement; ignore bare _lf_rt expression stmts.
            if (isinstance(s, ast.Expr) and isinstance(s.value, ast.Attribute)):
                continue
            out.append(ast.dump(ast.fix_missing_locations(s),
                                include_attributes=False))
        return out

    assert skeleton(exec_body) == skeleton(chk_body)


def test_literals_unchanged_in_both_variants():
    exec_def, chk_def, _ = _block_defs("""
@secret_block(Label_A)
def out():
    return wrap_secret(0)
""")
    for d in (exec_def, chk_def):
        consts = [n.value for n in ast.walk(d) if isinstance(n, ast.Constant)]
        assert 0 in consts


def test_boolop_preserved_in_both_variants():
    exec_def, chk_def, _ = _block_defs("""
x: Secret[bool, Label_A] = None
y: Secret[bool, Label_A] = None

@secret_block(Label_A)
def out():
    return wrap_secret(unwrap_secret(x) and unwrap_secret(y))
""")
    assert any(isinstance(n, ast.BoolOp) for n in ast.walk(exec_def))
    assert any(isinstance(n, ast.BoolOp) for n in ast.walk(chk_def))


def test_empty_block_returns_unit():
    ns = run_program("""
@secret_block(Label_A)
def nothing():
    pass
""")
    assert ns["nothing"] is None


def test_block_with_return_annotation_checked():
    assert rejection_category("""
@secret_block(Label_AB)
def out() -> Secret[int, Label_A]:
    return wrap_secret(0)
""") == "E-RETURN-LABEL"
    assert rejection_category("""
@secret_block(Label_AB)
def out() -> Secret[int, Label_AB]:
    return wrap_secret(0)
""") is None


def test_single_exit_early_return():
    ns = run_program("""
order: list[str] = []

def run() -> int:
    order.append("before")

    @secret_block(Label_A)
    def result():
        i = 0
        while i < 100:
            if i == 4:
                return wrap_secret(i)
            i += 1
        return wrap_secret(-1)

    order.append("after")
    return declassify(result)
""")
    assert ns["run"]() == 4
    assert ns["order"] == ["before", "after"]


def test_panic_containment_yields_default_and_continues():
    ns = run_program("""
den: int = 0
trace: list[str] = []

def run() -> int:
    @secret_block(Label_A)
    def risky():
        q = 10 // den
        return wrap_secret(q)

    trace.append("continued")
    return declassify(risky)
""")
    assert ns["run"]() == 0
    assert ns["trace"] == ["continued"]


def test_panic_containment_default_shapes():
    ns = run_program("""
den: int = 0

def run_text() -> str:
    @secret_block(Label_A)
    def risky():
        q = 10 // den
        return wrap_secret(std.int.to_str(q))
    return declassify(risky)

def run_pair() -> tuple[int, str]:
    @secret_block(Label_A)
    def risky():
        q = 10 // den
        return (wrap_secret(q), wrap_secret(std.int.to_str(q)))
    return (declassify(risky[0]), declassify(risky[1]))
""")
    assert ns["run_text"]() == ""
    assert ns["run_pair"]() == (0, "")


def test_panic_containment_record_default():
    ns = run_program("""
from dataclasses import dataclass

@invisible_side_effect_free
@dataclass(frozen=True)
class Tally:
    wins: int = 0
    losses: int = 0

den: int = 0

def run() -> int:
    @secret_block(Label_A)
    def risky():
        q = 10 // den
        return wrap_secret(Tally(q, q))
    out = declassify(risky)
    return out.wins
""")
    assert ns["run"]() == 0


def test_blocks_label_must_exist():
    assert rejection_category("""
@secret_block(Label_Q)
def out():
    return wrap_secret(0)
""") == "E-BAD-LABEL"


def test_block_takes_no_parameters():
    assert rejection_category("""
@secret_block(Label_A)
def out(x):
    return wrap_secret(0)
""") == "E-UNSUPPORTED"


def test_transform_output_deterministic():
    src = program("""
x: Secret[int, Label_A] = None

@secret_block(Label_AB)
def out():
    return wrap_secret(unwrap_secret(x) + 1)
""")
    assert transform_source(src, "d.py") == transform_source(src, "d.py")


ALIASING_PROBES = [
    # Reaching writability through aliases of a read-only view must fail.
    ("""
grid_s: Secret[list[list[bool]], Label_AB] = None

@secret_block(Label_AB)
def w():
    view = unwrap_secret_ref(grid_s)
    for row in view:
        row[0] = True
""", "E-WRITE-DOWN"),
    ("""
grid_s: Secret[list[list[bool]], Label_AB] = None

@secret_block(Label_AB)
def w():
    view = unwrap_secret_ref(grid_s)
    row = std.list.get(view, 0)
    row[0] = True
""", "E-WRITE-DOWN"),
    ("""
@side_effect_free
def pick(xs: list[list[bool]]) -> list[list[bool]]:
    return xs

grid_s: Secret[list[list[bool]], Label_AB] = None

@secret_block(Label_AB)
def w():
    row = pick(unwrap_secret_ref(grid_s))
    row[0][0] = True
""", "E-WRITE-DOWN"),
    ("""
grid_s: Secret[list[int], Label_AB] = None

@secret_block(Label_AB)
def w():
    pack = (unwrap_secret_ref(grid_s), 1)
    target = pack[0]
    target[0] = 5
""", "E-WRITE-DOWN"),
    ("""
from dataclasses import dataclass

@invisible_side_effect_free
@dataclass
class Bag:
    data: list[int] = None
    n: int = 0

grid_s: Secret[list[int], Label_AB] = None

@secret_block(Label_AB)
def w():
    bag = Bag(unwrap_secret_ref(grid_s), 1)
    bag.data[0] = 5
""", "E-WRITE-DOWN"),
    # Writable unwrap may not reach a secret through a captured aggregate.
    ("""
from dataclasses import dataclass
from typing import Generic, TypeVar
L = TypeVar("L")

@invisible_side_effect_free
@dataclass
class Holder(Generic[L]):
    inner: Secret[list[int], L] = None
    tag: int = 0

h: Holder[Label_AB] = None

@secret_block(Label_AB)
def w():
    cells = unwrap_secret_mut_ref(h.inner)
    cells[0] = 1
""", "E-MUT-CAPTURE"),
    # The sanctioned paths stay open.
    ("""
@secret_block(Label_AB)
def w():
    grid = std.grid.fill(3, 3, False)
    for row in grid:
        row[0] = True
    return wrap_secret(grid)
""", None),
    ("""
grid_s: Secret[list[list[bool]], Label_AB] = None

@secret_block(Label_AB)
def w():
    view = unwrap_secret_mut_ref(grid_s)
    for row in view:
        row[0] = True
""", None),
]


def test_aliasing_of_readonly_views_cannot_write():
    for body, want in ALIASING_PROBES:
        assert rejection_category(body) == want, body


BRANCH_MERGE_PROBES = [
    # A read-only view must not launder into a writable binding through one
    # arm of a conditional or a maybe-skipped loop body.
    ("""
grid_s: Secret[list[int], Label_AB] = None
cond: bool = True

@secret_block(Label_AB)
def w():
    if cond:
        x = unwrap_secret_ref(grid_s)
    else:
        x = std.list.repeat(0, 3)
    x[0] = 1
""", "E-WRITE-DOWN"),
    ("""
grid_s: Secret[list[int], Label_AB] = None
cond: bool = True

@secret_block(Label_AB)
def w():
    x = unwrap_secret_ref(grid_s)
    if cond:
        x = std.list.repeat(0, 3)
    x[0] = 1
""", "E-WRITE-DOWN"),
    ("""
grid_s: Secret[list[int], Label_AB] = None
cond: bool = True

@secret_block(Label_AB)
def w():
    x = unwrap_secret_ref(grid_s)
    while cond:
        x = std.list.repeat(0, 3)
    x[0] = 1
""", "E-WRITE-DOWN"),
    # Rebinding on every path restores writability.
    ("""
grid_s: Secret[list[int], Label_AB] = None
cond: bool = True

@secret_block(Label_AB)
def w():
    x = unwrap_secret_ref(grid_s)
    if cond:
        x = std.list.repeat(0, 3)
    else:
        x = std.list.repeat(1, 3)
    x[0] = 1
""", None),
    # Type divergence across branches degrades conservatively.
    ("""
cond: bool = True

@secret_block(Label_AB)
def w():
    if cond:
        x = 1
    else:
        x = "s"
    y = x + 1
""", "E-ISEF"),
]


def test_branch_environments_merge_pessimistically():
    for body, want in BRANCH_MERGE_PROBES:
        assert rejection_category(body) == want, body


RESULT_SHAPE_PROBES = [
    # A value-producing block cannot fall through to an implicit unit.
    ("""
cond: bool = True

@secret_block(Label_A)
def w():
    if cond:
        return wrap_secret(1)
""", "E-RETURN-LABEL"),
    ("""
cond: bool = True

@secret_block(Label_A)
def w():
    if cond:
        return wrap_secret(1)
    return
""", "E-RETURN-LABEL"),
    ("""
grade: str = "a"

@secret_block(Label_A)
def w():
    match grade:
        case "a":
            return wrap_secret(1)
""", "E-RETURN-LABEL"),
    # Terminal conditionals and matches with a wildcard are fine.
    ("""
cond: bool = True

@secret_block(Label_A)
def w():
    if cond:
        return wrap_secret(1)
    else:
        return wrap_secret(2)
""", None),
    ("""
grade: str = "a"

@secret_block(Label_A)
def w():
    match grade:
        case "a":
            return wrap_secret(1)
        case _:
            return wrap_secret(0)
""", None),
]


def test_value_blocks_always_return_their_result():
    for body, want in RESULT_SHAPE_PROBES:
        assert rejection_category(body) == want, body
