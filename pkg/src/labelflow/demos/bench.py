"""Benchmark harness: run-time, compile-time, and artifact-size per mode.

Run-time samples for the two modes are interleaved to cancel slow machine
drift; the report carries the mean and a 95% confidence interval.  Compile
time is the wall-clock time of the shared build tool (transform included in
secret mode) over fresh subprocesses, and size is the built artifact's byte
count.
"""

from __future__ import annotations

import gc
import math
import statistics
import subprocess
import sys
import tempfile
import time
from contextlib import contextmanager
from dataclasses import dataclass
from pathlib import Path

from labelflow.transform import load_secret_module
from . import kernels_plain

_DEMOS_DIR = Path(__file__).parent

# Two-sided 95% t quantiles by degrees of freedom; beyond 30, use z.
_T95 = {1: 12.706, 2: 4.303, 3: 3.182, 4: 2.776, 5: 2.571, 6: 2.447,
        7: 2.365, 8: 2.306, 9: 2.262, 10: 2.228, 11: 2.201, 12: 2.179,
        13: 2.160, 14: 2.145, 15: 2.131, 16: 2.120, 17: 2.110, 18: 2.101,
        19: 2.093, 20: 2.086, 21: 2.080, 22: 2.074, 23: 2.069, 24: 2.064,
        25: 2.060, 26: 2.056, 27: 2.052, 28: 2.048, 29: 2.045, 30: 2.042}

KERNEL_ARGS = {
    "pairwise": ("run_pairwise", (200, 16)),
    "sieve": ("run_sieve", (400000,)),
    "scan": ("run_scan", (kernels_plain.make_scan_input(1200000),)),
}
KERNEL_NAMES = tuple(KERNEL_ARGS)

_SECRET_KERNELS = None


def secret_kernels():
    global _SECRET_KERNELS
    if _SECRET_KERNELS is None:
        _SECRET_KERNELS = load_secret_module(
            _DEMOS_DIR / "kernels_secret.py", "labelflow_kernels_secret")
    return _SECRET_KERNELS


def kernel_callable(name: str, mode: str):
    fn_name, args = KERNEL_ARGS[name]
    module = kernels_plain if mode == "plain" else secret_kernels()
    fn = getattr(module, fn_name)
    return lambda: fn(*args)


@dataclass
class Timing:
    mean_s: float
    ci95_s: float
    samples: list[float]

    @property
    def noisy(self) -> bool:
        return self.mean_s > 0 and self.ci95_s > 0.25 * self.mean_s

    def overlaps(self, other: "Timing") -> bool:
        lo1, hi1 = self.mean_s - self.ci95_s, self.mean_s + self.ci95_s
        lo2, hi2 = other.mean_s - other.ci95_s, other.mean_s + other.ci95_s
        return lo1 <= hi2 and lo2 <= hi1


def summarize(samples: list[float]) -> Timing:
    mean = statistics.fmean(samples)
    if len(samples) < 2:
        return Timing(mean, 0.0, samples)
    sd = statistics.stdev(samples)
    t = _T95.get(len(samples) - 1, 1.96)
    return Timing(mean, t * sd / math.sqrt(len(samples)), samples)


@contextmanager
def _quiesced_gc():
    # Collector pauses are large relative to desk-scale kernels; park the
    # cyclic collector during sampling (both modes equally).
    was_enabled = gc.isenabled()
    gc.collect()
    gc.disable()
    try:
        yield
    finally:
        if was_enabled:
            gc.enable()


def measure_runtime(fn, reps: int, warmup: int = 2) -> list[float]:
    for _ in range(warmup):
        fn()
    samples = []
    with _quiesced_gc():
        for _ in range(reps):
            start = time.perf_counter()
            fn()
            samples.append(time.perf_counter() - start)
    return samples


def measure_pair(name: str, reps: int) -> tuple[Timing, Timing]:
    """Interleaved plain/secret run-time samples for one kernel."""
    plain_fn = kernel_callable(name, "plain")
    secret_fn = kernel_callable(name, "secret")
    expected = plain_fn()
    got = secret_fn()
    if expected != got:
        raise AssertionError(
            f"kernel {name}: secret mode computed {got!r}, plain computed "
            f"{expected!r}")
    for _ in range(2):
        plain_fn()
        secret_fn()
    plain_samples, secret_samples = [], []
    with _quiesced_gc():
        for rep in range(reps):
            # Alternate which mode goes first so load drift within a
            # repetition cannot bias one mode systematically.
            first, first_samples, second, second_samples = (
                (plain_fn, plain_samples, secret_fn, secret_samples)
                if rep % 2 == 0 else
                (secret_fn, secret_samples, plain_fn, plain_samples))
            start = time.perf_counter()
            first()
            first_samples.append(time.perf_counter() - start)
            start = time.perf_counter()
            second()
            second_samples.append(time.perf_counter() - start)
    return summarize(plain_samples), summarize(secret_samples)


def kernel_source(name: str, mode: str) -> Path:
    fname = "kernels_plain.py" if mode == "plain" else "kernels_secret.py"
    return _DEMOS_DIR / fname


def measure_compile(name: str, mode: str, reps: int) -> tuple[Timing, int]:
    src = kernel_source(name, mode)
    with tempfile.TemporaryDirectory() as tmp:
        out = Path(tmp) / "artifact.pyc"
        samples = []
        size = 0
        for _ in range(reps):
            start = time.perf_counter()
            subprocess.run(
                [sys.executable, "-m", "labelflow._build", "--mode", mode,
                 str(src), str(out)],
                check=True, capture_output=True)
            samples.append(time.perf_counter() - start)
            size = out.stat().st_size
    return summarize(samples), size


@dataclass
class BenchRow:
    kernel: str
    mode: str
    runtime: Timing
    compile_time: Timing
    size_bytes: int

    def machine_line(self) -> str:
        return (f"{self.kernel},{self.mode},{self.runtime.mean_s:.6f},"
                f"{self.runtime.ci95_s:.6f},{self.compile_time.mean_s:.6f},"
                f"{self.size_bytes}")

    def text_line(self) -> str:
        flag = "  [noisy]" if self.runtime.noisy else ""
        return (f"{self.kernel:<10} {self.mode:<7} "
                f"run {self.runtime.mean_s * 1000:9.3f} ms "
                f"+/- {self.runtime.ci95_s * 1000:7.3f}  "
                f"compile {self.compile_time.mean_s * 1000:8.2f} ms  "
                f"size {self.size_bytes:7d} B{flag}")


def bench_kernel(name: str, mode: str, reps: int,
                 compile_reps: int = 10) -> BenchRow:
    fn = kernel_callable(name, mode)
    runtime = summarize(measure_runtime(fn, reps))
    compile_time, size = measure_compile(name, mode, compile_reps)
    return BenchRow(name, mode, runtime, compile_time, size)


def render_report(rows: list[BenchRow]) -> str:
    lines = ["kernel     mode    timings", "-" * 72]
    lines += [r.text_line() for r in rows]
    lines.append("")
    lines.append("kernel,mode,mean_s,ci95_s,compile_s,size_bytes")
    lines += [r.machine_line() for r in rows]
    lines.append("")
    return "\n".join(lines)
