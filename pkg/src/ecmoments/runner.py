"""Parallel moment computation over (family, prime) tasks, with CSV resume."""

from __future__ import annotations

import sys
from concurrent.futures import ProcessPoolExecutor

from .families import CurveFamily
from .io import (
    RunConfig,
    ValidationError,
    load_families,
    moments_csv_path,
    read_moments_csv,
    write_moments_csv,
)
from .modular import sieve_primes
from .traces import MomentRecord, moment_sums


def _compute_one(task) -> MomentRecord:
    fam, p, r_max = task
    return moment_sums(fam, p, r_max)


def compute_records(
    families: list[CurveFamily], start: int, end: int, r_max: int = 7, workers: int = 1
) -> list[MomentRecord]:
    """MomentRecords for prime indices start..end (1-based, inclusive), every family.

    Primes are distributed across worker processes; each S_r is an exact
    integer, so the assembled output is identical for any worker count.
    """
    primes = sieve_primes(end)[start - 1 : end]
    tasks = [(fam, p, r_max) for fam in families for p in primes]
    if workers <= 1 or len(tasks) <= 1:
        return [_compute_one(t) for t in tasks]
    chunk = max(1, len(tasks) // (workers * 4))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_compute_one, tasks, chunksize=chunk))


def run_moments(config: RunConfig) -> tuple[str, list[MomentRecord]]:
    """Compute the configured grid and write <out>/moments.csv atomically.

    With resume on, (family, prime) pairs already present in the CSV are kept
    as-is and only the missing pairs are computed; the rewritten file is
    byte-identical to a fresh full run.
    """
    config.validate()
    families = load_families(config)
    path = moments_csv_path(config)
    primes = sieve_primes(config.end)[config.start - 1 : config.end]
    have: dict[tuple[str, int], MomentRecord] = {}
    if config.resume:
        try:
            file_r_max, existing = read_moments_csv(path)
        except FileNotFoundError:
            existing = []
            file_r_max = config.r_max
        if file_r_max != config.r_max:
            raise ValidationError(
                "%s holds S1..S%d but this run wants S1..S%d"
                % (path, file_r_max, config.r_max)
            )
        names = {fam.name for fam in families}
        for rec in existing:
            if rec.family in names:
                have[(rec.family, rec.p)] = rec
            else:
                print("warning: dropping CSV rows for unknown family %r" % (rec.family,),
                      file=sys.stderr)
    todo_families = []
    todo_pairs = set()
    for fam in families:
        missing = [p for p in primes if (fam.name, p) not in have]
        if missing:
            todo_families.append((fam, missing))
            todo_pairs.update((fam.name, p) for p in missing)
    tasks = [(fam, p, config.r_max) for fam, missing in todo_families for p in missing]
    if config.workers <= 1 or len(tasks) <= 1:
        computed = [_compute_one(t) for t in tasks]
    else:
        chunk = max(1, len(tasks) // (config.workers * 4))
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            computed = list(pool.map(_compute_one, tasks, chunksize=chunk))
    for rec in computed:
        have[(rec.family, rec.p)] = rec
    ordered = [have[(fam.name, p)] for fam in families for p in primes]
    write_moments_csv(path, ordered, config.r_max)
    return path, ordered
