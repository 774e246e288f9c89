"""Running an external Horn/SMT solver as a child process."""

from __future__ import annotations

import os
import shutil
import subprocess
import tempfile
import threading
import time
from dataclasses import dataclass

# Transformations that rewrite clauses before Spacer sees them; turning them
# off keeps the solver's view of the relations close to what was emitted.
EXTRACTION_SAFE_FLAGS = ("fp.xform.slice=false", "fp.xform.inline_linear=false", "fp.xform.inline_eager=false")
DEFAULT_TIME_LIMIT = 600.0
ENV_SOLVER = "SEMGUS_SOLVER"


class SolverNotFound(Exception):
    pass


class SolverTimeout(Exception):
    pass


class SolverError(Exception):
    def __init__(self, text: str):
        super().__init__(text.strip() or "solver failed")
        self.text = text


class Cancelled(Exception):
    pass


@dataclass(frozen=True)
class SolverConfig:
    executable: str = "z3"
    time_limit: float = DEFAULT_TIME_LIMIT
    extra_args: tuple[str, ...] = ()
    extraction_safe: bool = False

    def __post_init__(self):
        if not self.time_limit > 0:
            raise ValueError("time limit must be positive")
        object.__setattr__(self, "extra_args", tuple(self.extra_args))

    def resolved_executable(self) -> str:
        exe = os.environ.get(ENV_SOLVER) or self.executable
        found = shutil.which(exe)
        if found is None:
            raise SolverNotFound(f"solver executable {exe!r} not found")
        return found

    def command(self, path: str) -> list[str]:
        flags = EXTRACTION_SAFE_FLAGS if self.extraction_safe else ()
        return [self.resolved_executable(), *flags, *self.extra_args, path]


@dataclass(frozen=True)
class ChcAnswer:
    status: str  # sat | unsat | unknown
    text: str
    seconds: float


def run_script(script: str, cfg: SolverConfig, cancel: threading.Event | None = None) -> tuple[str, float]:
    """Run the solver on ``script``; return its stdout and the elapsed time."""
    with tempfile.TemporaryDirectory(prefix="semgus-") as tmp:
        path = os.path.join(tmp, "query.smt2")
        with open(path, "w") as fh:
            fh.write(script)
        cmd = cfg.command(path)
        start = time.monotonic()
        proc = subprocess.Popen(cmd, stdout=subprocess.PIPE, stderr=subprocess.PIPE, text=True)
        try:
            while True:
                try:
                    out, err = proc.communicate(timeout=0.05)
                    break
                except subprocess.TimeoutExpired:
                    if cancel is not None and cancel.is_set():
                        raise Cancelled()
                    if time.monotonic() - start > cfg.time_limit:
                        raise SolverTimeout(f"no answer within {cfg.time_limit:g} s")
        finally:
            if proc.poll() is None:
                proc.kill()
                proc.communicate()
        elapsed = time.monotonic() - start
    if proc.returncode != 0:
        raise SolverError(err or out)
    return out, elapsed


def run_chc(script: str, cfg: SolverConfig | None = None, cancel: threading.Event | None = None) -> ChcAnswer:
    """Solve a HORN script: sat means unrealizable, unsat means realizable."""
    cfg = cfg or SolverConfig()
    out, elapsed = run_script(script, cfg, cancel)
    tokens = out.split()
    if not tokens or tokens[0] not in ("sat", "unsat", "unknown"):
        raise SolverError(out)
    return ChcAnswer(tokens[0], out, elapsed)


__all__ = [
    "SolverConfig", "ChcAnswer", "run_chc", "run_script", "SolverNotFound", "SolverTimeout", "SolverError",
    "Cancelled", "EXTRACTION_SAFE_FLAGS", "DEFAULT_TIME_LIMIT", "ENV_SOLVER",
]
