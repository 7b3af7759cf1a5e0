"""Conformance harness: compile a corpus, assert verdicts and transcripts.

Each corpus entry is a Python file with header directives::

    # expect: accept            | # expect: reject E-READ-UP
    # transcript: <file>        (optional; accepted entries only)
    # notes: free text          (optional)

Accepted entries are compiled and executed with stdout captured; the
transcript must match byte for byte.  Rejected entries must fail with the
stated category.  Harness-level failures (missing files, bad directives)
are reported as errors, distinct from verdict mismatches.
"""

from __future__ import annotations

import contextlib
import fnmatch
import io
import sys
import threading
import types
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from .errors import Rejection
from .transform import compile_secret_source


class HarnessError(RuntimeError):
    """Corpus infrastructure problem, not a verdict mismatch."""


@dataclass(frozen=True)
class CompileExpectation:
    name: str
    program_path: Path
    expected_verdict: str               # "accept" | "reject"
    expected_category: str | None
    transcript_path: Path | None
    notes: str = ""

    @property
    def expected(self) -> str:
        if self.expected_verdict == "accept":
            return "accept"
        return f"reject({self.expected_category})"


@dataclass
class EntryResult:
    name: str
    expected: str
    actual: str
    passed: bool
    detail: str = ""


def read_expectation(path: Path) -> CompileExpectation:
    expected_verdict = None
    expected_category = None
    transcript = None
    notes = ""
    for line in path.read_text(encoding="utf-8").splitlines():
        stripped = line.strip()
        if not stripped.startswith("#"):
            if stripped:
                break
            continue
        directive = stripped.lstrip("#").strip()
        if directive.startswith("expect:"):
            fields = directive[len("expect:"):].split()
            if not fields or fields[0] not in ("accept", "reject"):
                raise HarnessError(f"{path.name}: bad expect directive")
            expected_verdict = fields[0]
            if expected_verdict == "reject":
                if len(fields) != 2:
                    raise HarnessError(
                        f"{path.name}: reject needs a category")
                expected_category = fields[1]
        elif directive.startswith("transcript:"):
            transcript = path.parent / directive[len("transcript:"):].strip()
        elif directive.startswith("notes:"):
            notes = directive[len("notes:"):].strip()
    if expected_verdict is None:
        raise HarnessError(f"{path.name}: missing '# expect:' directive")
    return CompileExpectation(path.stem, path, expected_verdict,
                              expected_category, transcript, notes)


# Entries may compile in parallel, but stdout capture swaps the process-wide
# stream, so execution is serialized.
_EXEC_LOCK = threading.Lock()


def _execute_captured(code, name: str) -> str:
    buffer = io.StringIO()
    with _EXEC_LOCK:
        module = types.ModuleType(name)
        module.__file__ = name
        sys.modules[name] = module
        try:
            with contextlib.redirect_stdout(buffer):
                exec(code, module.__dict__)
        finally:
            sys.modules.pop(name, None)
    return buffer.getvalue()


def run_entry(exp: CompileExpectation) -> EntryResult:
    try:
        source = exp.program_path.read_text(encoding="utf-8")
    except OSError as err:
        raise HarnessError(f"{exp.name}: unreadable program: {err}") from err
    try:
        code = compile_secret_source(source, str(exp.program_path))
        actual_verdict = "accept"
        category = None
    except Rejection as rej:
        actual_verdict = "reject"
        category = rej.category
        code = None
    if exp.expected_verdict == "reject":
        actual = f"reject({category})" if category else "accept"
        passed = (actual_verdict == "reject"
                  and category == exp.expected_category)
        return EntryResult(exp.name, exp.expected, actual, passed)
    if actual_verdict == "reject":
        return EntryResult(exp.name, exp.expected, f"reject({category})",
                           False)
    if exp.transcript_path is None:
        return EntryResult(exp.name, exp.expected, "accept", True)
    try:
        wanted = exp.transcript_path.read_text(encoding="utf-8")
    except OSError as err:
        raise HarnessError(
            f"{exp.name}: unreadable transcript: {err}") from err
    try:
        got = _execute_captured(code, f"_corpus_{exp.name}")
    except Exception as err:
        return EntryResult(exp.name, exp.expected, "accept",
                           False, detail=f"run failed: {err!r}")
    if got != wanted:
        return EntryResult(exp.name, exp.expected, "accept", False,
                           detail=f"transcript mismatch: {got!r}")
    return EntryResult(exp.name, exp.expected, "accept", True)


def collect(corpus_dir, pattern: str | None = None) -> list[CompileExpectation]:
    corpus = Path(corpus_dir)
    if not corpus.is_dir():
        raise HarnessError(f"corpus directory not found: {corpus}")
    expectations = []
    for path in sorted(corpus.glob("*.py")):
        if pattern and not fnmatch.fnmatch(path.stem, pattern):
            continue
        expectations.append(read_expectation(path))
    return expectations


@dataclass
class Report:
    results: list[EntryResult]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def summary_lines(self) -> list[str]:
        return [
            f"{r.name},{r.actual},{r.expected},{'pass' if r.passed else 'fail'}"
            for r in self.results
        ]

    def text_report(self) -> str:
        width = max((len(r.name) for r in self.results), default=4)
        lines = []
        for r in self.results:
            status = "PASS" if r.passed else "FAIL"
            line = f"{status}  {r.name:<{width}}  expected {r.expected}, got {r.actual}"
            if r.detail:
                line += f"  [{r.detail}]"
            lines.append(line)
        total = len(self.results)
        good = sum(r.passed for r in self.results)
        lines.append(f"{good}/{total} expectations met")
        return "\n".join(lines)


def run_corpus(corpus_dir, pattern: str | None = None, jobs: int = 1) -> Report:
    expectations = collect(corpus_dir, pattern)
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(run_entry, expectations))
    else:
        results = [run_entry(e) for e in expectations]
    results.sort(key=lambda r: r.name)
    return Report(results)


def default_corpus_dir() -> Path:
    return Path(__file__).parent / "conformance_corpus"
