"""Monte-Carlo FER/BER simulation and the noiseless round-trip self-test.

Frames are simulated in fixed chunks of ``CHUNK`` frames. Chunk ``c`` of the
Eb/N0 point with list index ``j`` draws both its message bits and its noise
from the stream ``(seed, j, c)``. Workers only change which process computes a
chunk. Results are folded in chunk order and the frame-error stopping rule is
checked after each chunk, so the output is identical for any worker count.
"""

from __future__ import annotations

import csv
import itertools
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from .channel import RateMatchSpec, make_rng, noise_variance
from .decoder import SCDecoder
from .encoder import encode_u, scatter_info
from .llr import Arithmetic, resolve_model

CHUNK = 1000
DEFAULT_MAX_FRAMES = 100_000
DEFAULT_MAX_FRAME_ERRORS = 100


@dataclass
class SimRow:
    ebn0_db: float
    frames: int
    bit_errors: int
    frame_errors: int
    wall_seconds: float = 0.0
    k_bits: int = 1

    @property
    def ber(self) -> float:
        return self.bit_errors / (self.frames * self.k_bits)

    @property
    def fer(self) -> float:
        return self.frame_errors / self.frames


@dataclass
class _Job:
    spec: object
    model: Arithmetic
    rate_match: Optional[RateMatchSpec]
    ebn0_db: float
    seed: int
    snr_index: int


def _run_chunk(job: _Job, chunk: int, frames: int):
    """Simulate one chunk; returns per-frame bit-error counts."""
    spec = job.spec
    rng = make_rng(job.seed, job.snr_index, chunk)
    info = rng.integers(0, 2, size=(frames, spec.k_bits), dtype=np.uint8)
    x = encode_u(scatter_info(spec, info), spec.seq)
    rm = job.rate_match
    if rm is not None:
        if rm.mode == "shorten" and np.any(x[:, list(rm.dropped)]):
            raise AssertionError("shortened coded bits must be zero")
        x = rm.select(x)
    n_tx = x.shape[1]
    sigma2 = noise_variance(job.ebn0_db, spec.k_bits / n_tx)
    y = 1.0 - 2.0 * x + np.sqrt(sigma2) * rng.standard_normal(x.shape)
    llrs = 2.0 * y / sigma2
    if rm is not None:
        llrs = rm.expand(llrs)
    u_hat, _ = SCDecoder(spec, job.model).decode(llrs)
    return (u_hat[:, spec.info_indices] != info).sum(axis=1)


def measure(
    spec,
    ebn0_db: float,
    max_frames: int = DEFAULT_MAX_FRAMES,
    max_frame_errors: Optional[int] = DEFAULT_MAX_FRAME_ERRORS,
    seed: int = 0,
    model: Optional[Arithmetic] = None,
    rate_match: Optional[RateMatchSpec] = None,
    snr_index: int = 0,
    workers: int = 1,
    frame_log: Optional[list] = None,
    pool: Optional[ProcessPoolExecutor] = None,
) -> SimRow:
    """FER/BER at one Eb/N0 point.

    Stops after the first chunk at which ``max_frame_errors`` is reached, or at
    ``max_frames``. ``frame_log`` collects ``(frame, bit_errors)`` pairs.
    """
    if max_frames < 1:
        raise ValueError("max_frames must be >= 1")
    if not np.isfinite(ebn0_db):
        raise ValueError(f"Eb/N0 must be finite, got {ebn0_db}")
    job = _Job(spec, resolve_model(model), rate_match, float(ebn0_db), int(seed), snr_index)
    sizes = [min(CHUNK, max_frames - c * CHUNK) for c in range(-(-max_frames // CHUNK))]
    t0 = time.perf_counter()
    row = SimRow(float(ebn0_db), 0, 0, 0, k_bits=spec.k_bits)

    def fold(chunk, errs):
        if frame_log is not None:
            base = chunk * CHUNK
            frame_log.extend((base + i, int(e)) for i, e in enumerate(errs))
        row.frames += len(errs)
        row.bit_errors += int(errs.sum())
        row.frame_errors += int((errs > 0).sum())
        return max_frame_errors is not None and row.frame_errors >= max_frame_errors

    if workers <= 1 and pool is None:
        for c, b in enumerate(sizes):
            if fold(c, _run_chunk(job, c, b)):
                break
    else:
        own = pool is None
        ex = pool or ProcessPoolExecutor(max_workers=workers)
        try:
            width = max(1, workers)
            stop = False
            for start in range(0, len(sizes), width):
                wave = list(range(start, min(start + width, len(sizes))))
                futs = [ex.submit(_run_chunk, job, c, sizes[c]) for c in wave]
                for c, fut in zip(wave, futs):
                    if stop:
                        fut.cancel()
                        continue
                    stop = fold(c, fut.result())
                if stop:
                    break
        finally:
            if own:
                ex.shutdown()
    row.wall_seconds = time.perf_counter() - t0
    return row


def simulate(
    spec,
    ebn0_list: Iterable[float],
    max_frames: int = DEFAULT_MAX_FRAMES,
    max_frame_errors: Optional[int] = DEFAULT_MAX_FRAME_ERRORS,
    seed: int = 0,
    model: Optional[Arithmetic] = None,
    rate_match: Optional[RateMatchSpec] = None,
    workers: int = 1,
    frame_log: Optional[list] = None,
) -> list[SimRow]:
    ebn0_list = [float(e) for e in ebn0_list]
    if not ebn0_list:
        raise ValueError("at least one Eb/N0 value is required")
    pool = ProcessPoolExecutor(max_workers=workers) if workers > 1 else None
    rows = []
    try:
        for j, ebn0 in enumerate(ebn0_list):
            log = [] if frame_log is not None else None
            rows.append(
                measure(spec, ebn0, max_frames, max_frame_errors, seed, model,
                        rate_match, snr_index=j, workers=workers, frame_log=log, pool=pool)
            )
            if frame_log is not None:
                frame_log.extend((f, ebn0, e) for f, e in log)
    finally:
        if pool is not None:
            pool.shutdown()
    return rows


SUMMARY_FIELDS = ["ebn0_db", "frames", "bit_errors", "frame_errors", "ber", "fer"]


def write_summary_csv(rows: list[SimRow], fh, timing: bool = False) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(SUMMARY_FIELDS + (["wall_seconds"] if timing else []))
    for r in rows:
        out = [f"{r.ebn0_db:g}", r.frames, r.bit_errors, r.frame_errors,
               f"{r.ber:.6e}", f"{r.fer:.6e}"]
        if timing:
            out.append(f"{r.wall_seconds:.3f}")
        w.writerow(out)


def write_frames_csv(frame_log, fh) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["frame", "ebn0_db", "bit_errors", "frame_error"])
    for frame, ebn0, errs in frame_log:
        w.writerow([frame, f"{ebn0:g}", errs, int(errs > 0)])


def roundtrip(spec, exhaustive_limit: int = 12, samples: int = 10_000, seed: int = 0,
              model: Optional[Arithmetic] = None):
    """Noiseless encode -> decode identity check.

    Exhaustive over all messages when ``N <= exhaustive_limit``, otherwise
    ``samples`` random messages. Returns ``(ok, frames_checked, offending_u)``.
    """
    model = resolve_model(model)
    k = spec.k_bits
    if spec.n_bits <= exhaustive_limit:
        info = np.array(list(itertools.product((0, 1), repeat=k)), dtype=np.uint8)
    else:
        info = make_rng(seed).integers(0, 2, size=(samples, k), dtype=np.uint8)
    u = scatter_info(spec, info)
    x = encode_u(u, spec.seq)
    llrs = (1.0 - 2.0 * x) * float(model.saturated)
    dec = SCDecoder(spec, model)
    for lo in range(0, len(u), 4096):
        u_hat, x_hat = dec.decode(llrs[lo:lo + 4096])
        bad = np.nonzero(np.any(u_hat != u[lo:lo + 4096], axis=1)
                         | np.any(x_hat != x[lo:lo + 4096], axis=1))[0]
        if bad.size:
            return False, len(u), u[lo + bad[0]]
    return True, len(u), None
