"""Run-time facade referenced by generated code as ``_lf_rt``.

Every expansion the transformer emits resolves its support operations
through this module.  Application code may not import it; the transform
pass rejects attempts (reserved prefix / forgery rules).
"""

from labelflow.capabilities import (  # noqa: F401
    check_ISEF,
    check_ISEF_ref,
    check_ISEF_unsafe,
    check_not_mut_secret,
    safe_add, safe_sub, safe_mul, safe_div, safe_floordiv, safe_mod,
    safe_pow, safe_lshift, safe_rshift, safe_bitand, safe_bitor, safe_bitxor,
    safe_neg, safe_pos, safe_invert,
    safe_eq, safe_ne, safe_lt, safe_le, safe_gt, safe_ge,
    safe_contains, safe_index,
    safe_add_assign, safe_sub_assign, safe_mul_assign, safe_div_assign,
    safe_floordiv_assign, safe_mod_assign, safe_pow_assign,
    safe_lshift_assign, safe_rshift_assign, safe_bitand_assign,
    safe_bitor_assign, safe_bitxor_assign,
)
from labelflow.core import (  # noqa: F401
    Secret,
    Vetted,
    call_closure,
    default_for,
    unsafe_region,
)
