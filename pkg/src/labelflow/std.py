"""Qualified standard-library shim callable from secret contexts.

Secret contexts may not use method sugar or unqualified calls, so the
allowlisted operations are exposed as free functions under stable dotted
paths (std.str.len, std.map.get, ...).  Call sites must spell the full
path; the transform pass matches it against the allowlist by exact string.

Outside secret contexts these are ordinary functions.
"""

from __future__ import annotations

import math as _math
from types import SimpleNamespace

_len = len
_str = str
_int = int
_float = float
_abs = abs
_list = list


def _str_len(s):
    return _len(s)


def _str_from(s):
    return _str(s)


def _str_chars(s):
    return _list(s)


def _str_is_empty(s):
    return _len(s) == 0


def _str_concat(a, b):
    return a + b


def _char_is_digit(c, base):
    if _len(c) != 1:
        return False
    try:
        _int(c, base)
        return True
    except ValueError:
        return False


def _option_unwrap(x):
    if x is None:
        raise ValueError("unwrapped an empty optional")
    return x


def _option_is_some(x):
    return x is not None


def _option_is_none(x):
    return x is None


def _map_get(d, k):
    return d.get(k)


def _map_contains_key(d, k):
    return k in d


def _map_len(d):
    return _len(d)


def _list_len(xs):
    return _len(xs)


def _list_get(xs, i):
    return xs[i]


def _list_push(xs, v):
    xs.append(v)


def _list_repeat(v, n):
    return [v] * n


def _grid_fill(rows, cols, v):
    grid = []
    for _ in range(rows):
        grid.append([v] * cols)
    return grid


def _int_to_str(i):
    return _str(i)


def _int_to_float(i):
    return _float(i)


def _int_abs(i):
    return _abs(i)


def _float_to_int(f):
    return _int(f)


def _math_min(a, b):
    return a if a <= b else b


def _math_max(a, b):
    return a if a >= b else b


def _math_abs(x):
    return _abs(x)


def _math_sqrt(x):
    return _math.sqrt(x)


str = SimpleNamespace(len=_str_len, from_=_str_from, chars=_str_chars,
                      is_empty=_str_is_empty, concat=_str_concat)
char = SimpleNamespace(is_digit=_char_is_digit)
option = SimpleNamespace(unwrap=_option_unwrap, is_some=_option_is_some,
                         is_none=_option_is_none)
map = SimpleNamespace(get=_map_get, contains_key=_map_contains_key,
                      len=_map_len)
list = SimpleNamespace(len=_list_len, get=_list_get, push=_list_push,
                       repeat=_list_repeat)
grid = SimpleNamespace(fill=_grid_fill)
int = SimpleNamespace(to_str=_int_to_str, to_float=_int_to_float,
                      abs=_int_abs)
float = SimpleNamespace(to_int=_float_to_int)
math = SimpleNamespace(min=_math_min, max=_math_max, abs=_math_abs,
                       sqrt=_math_sqrt)
