"""Range verification with line-delimited output and resumable checkpoints.

The output file only ever grows by whole records, written in ascending ``a``.
After each record is flushed to disk the checkpoint is replaced atomically
with the last completed ``a`` and the output size at that point; resuming
truncates anything past that offset and continues with the next ``a``.
"""
from __future__ import annotations

import json
import os
import sys
from dataclasses import dataclass
from typing import Callable, Optional, TextIO

from .config import SolverConfig
from .search import Certificate, verify_range


class CheckpointMismatch(ValueError):
    pass


def record_line(cert: Certificate) -> str:
    return json.dumps(cert.to_record(), separators=(",", ":")) + "\n"


def parse_line(line: str) -> Certificate:
    return Certificate.from_record(json.loads(line))


@dataclass
class Checkpoint:
    lo: int
    hi: int
    config_hash: str
    last_a: int
    out_offset: int

    @classmethod
    def load(cls, path: str) -> Optional["Checkpoint"]:
        if not os.path.exists(path):
            return None
        with open(path) as fh:
            return cls(**json.load(fh))

    def save(self, path: str) -> None:
        tmp = f"{path}.tmp"
        with open(tmp, "w") as fh:
            json.dump(self.__dict__, fh)
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(tmp, path)


@dataclass
class Summary:
    verified: int = 0
    skipped: int = 0
    exceptions: int = 0
    torsion_excluded: int = 0
    diagnostics: int = 0
    exception_values: tuple = ()

    def line(self) -> str:
        return (
            f"verified={self.verified} skipped={self.skipped} exceptions={self.exceptions} "
            f"torsion_excluded={self.torsion_excluded} diagnostics={self.diagnostics}"
        )


def _tally(summary: Summary, cert: Certificate, found: list) -> None:
    summary.exceptions += len(cert.exceptions)
    summary.torsion_excluded += len(cert.excluded_torsion)
    summary.diagnostics += len(cert.diagnostics)
    found.extend((cert.a, e.m, e.k) for e in cert.exceptions)


def check_writable(path: str) -> None:
    """Raise OSError now rather than after hours of work."""
    directory = os.path.dirname(os.path.abspath(path)) or "."
    if not os.path.isdir(directory):
        raise OSError(f"directory does not exist: {directory}")
    if os.path.exists(path):
        if not os.access(path, os.W_OK):
            raise OSError(f"not writable: {path}")
    elif not os.access(directory, os.W_OK):
        raise OSError(f"cannot create files in {directory}")


def run_campaign(
    lo: int,
    hi: int,
    cfg: SolverConfig,
    out: Optional[str] = None,
    checkpoint: Optional[str] = None,
    timing: bool = True,
    progress: Optional[Callable[[int], None]] = None,
    stream: Optional[TextIO] = None,
) -> Summary:
    """Verify ``lo..hi``; the summary covers records kept from a previous run too."""
    for path in (out, checkpoint):
        if path:
            check_writable(path)

    summary = Summary()
    start = lo
    offset = 0
    if checkpoint:
        ck = Checkpoint.load(checkpoint)
        if ck is not None:
            if (ck.lo, ck.hi, ck.config_hash) != (lo, hi, cfg.config_hash):
                raise CheckpointMismatch(
                    f"checkpoint {checkpoint} is for range {ck.lo}:{ck.hi} "
                    f"config {ck.config_hash}, not {lo}:{hi} config {cfg.config_hash}"
                )
            start = ck.last_a + 1
            offset = ck.out_offset
            summary.skipped = start - lo

    found = []
    if out:
        fh = open(out, "r+" if os.path.exists(out) else "w")
        if offset:
            for line in fh.read(offset).splitlines():
                _tally(summary, parse_line(line), found)
        fh.seek(offset)
        fh.truncate()
    else:
        fh = stream or sys.stdout

    try:
        if start > hi:
            return summary
        for cert in verify_range(start, hi, cfg.jobs, cfg, timing=timing):
            fh.write(record_line(cert))
            fh.flush()
            if out:
                os.fsync(fh.fileno())
            summary.verified += 1
            _tally(summary, cert, found)
            if checkpoint:
                pos = fh.tell() if out else 0
                Checkpoint(lo, hi, cfg.config_hash, cert.a, pos).save(checkpoint)
            if progress and (cert.a - lo + 1) % 1000 == 0:
                progress(cert.a)
    finally:
        summary.exception_values = tuple(found)
        if out:
            fh.close()
    return summary
