"""Build one source file into a cached-bytecode artifact.

Both benchmark modes invoke this same tool, so measured compile times
differ only by the transformation work:

    python -m labelflow._build --mode plain  <src> <out>
    python -m labelflow._build --mode secret <src> <out>
"""

from __future__ import annotations

import argparse
import ast
import importlib.util
import marshal
import sys


def build(src_path: str, out_path: str, mode: str) -> int:
    with open(src_path, "r", encoding="utf-8") as fh:
        source = fh.read()
    if mode == "secret":
        from labelflow.transform import compile_secret_source
        code = compile_secret_source(source, src_path)
    else:
        code = compile(ast.parse(source, filename=src_path), src_path, "exec")
    payload = importlib.util.MAGIC_NUMBER + b"\x00" * 12 + marshal.dumps(code)
    with open(out_path, "wb") as fh:
        fh.write(payload)
    return len(payload)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="labelflow-build")
    parser.add_argument("--mode", choices=("plain", "secret"), required=True)
    parser.add_argument("src")
    parser.add_argument("out")
    args = parser.parse_args(argv)
    build(args.src, args.out, args.mode)
    return 0


if __name__ == "__main__":
    sys.exit(main())
