"""Random symmetric, homogeneous k-SAT formulas.

Every clause has exactly ``k`` distinct variables; every variable appears
``floor(mk/n)`` or ``ceil(mk/n)`` times, split as evenly as possible between
the two polarities.  Construction is a configuration model: the literal
multiset is fixed first, shuffled, dealt into clauses, and clauses holding a
repeated variable are repaired by swapping slots with other clauses.  Swaps
never change the multiset, so the balance guarantees survive the repair.

Randomness comes from numpy's PCG64 bit generator, whose output stream is
specified and identical across platforms for a given seed.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .cnf import Formula, appearance_profile, make_clause

__all__ = ["GenSpec", "GenerationError", "generate", "appearance_profile", "parse_seed"]

U64_MAX = 2**64 - 1


class GenerationError(RuntimeError):
    def __init__(self, message: str, retries: int):
        super().__init__(message)
        self.retries = retries


@dataclass(frozen=True)
class GenSpec:
    n: int
    m: int
    k: int
    seed: int = 0
    max_retries: int = 100_000

    def __post_init__(self) -> None:
        if self.k < 2:
            raise ValueError(f"k must be >= 2, got {self.k}")
        if self.n < self.k:
            raise ValueError(f"k must be <= n (got k={self.k}, n={self.n})")
        if self.m < 0:
            raise ValueError(f"m must be >= 0, got {self.m}")
        if not 0 <= self.seed <= U64_MAX:
            raise ValueError(f"seed must be an unsigned 64-bit integer, got {self.seed}")
        if self.max_retries < 0:
            raise ValueError("max_retries must be >= 0")


def parse_seed(text: str) -> int:
    """Decimal or ``0x``-prefixed hexadecimal unsigned 64-bit seed."""
    text = text.strip()
    value = int(text, 16) if text.lower().startswith("0x") else int(text, 10)
    if not 0 <= value <= U64_MAX:
        raise ValueError(f"seed out of range for u64: {text}")
    return value


def _literal_pool(spec: GenSpec, rng: np.random.Generator) -> list[int]:
    total = spec.m * spec.k
    base, extra = divmod(total, spec.n)
    order = rng.permutation(spec.n) + 1
    pool: list[int] = []
    for rank, var in enumerate(order.tolist()):
        count = base + (1 if rank < extra else 0)
        half, odd = divmod(count, 2)
        pos = neg = half
        if odd:
            if rng.integers(2):
                pos += 1
            else:
                neg += 1
        pool.extend([var] * pos)
        pool.extend([-var] * neg)
    return pool


def _excess(row) -> int:
    """Number of slots in ``row`` whose variable already occurred earlier."""
    return len(row) - len({abs(int(l)) for l in row})


def generate(spec: GenSpec) -> Formula:
    """Draw one formula; deterministic in ``spec`` (seed included).

    Repair picks a slot holding a repeated variable and swaps it with a random
    slot of another clause, accepting the swap unless it increases the total
    number of repeats.  Neutral swaps let the walk escape configurations that
    no single improving swap can fix (e.g. when ``k == n``).
    """
    if spec.m * spec.k < spec.n:
        warnings.warn(
            f"m*k={spec.m * spec.k} < n={spec.n}: some variables cannot appear",
            stacklevel=2,
        )
    rng = np.random.Generator(np.random.PCG64(spec.seed))
    pool = np.array(_literal_pool(spec, rng), dtype=np.int64)
    rng.shuffle(pool)
    rows = pool.reshape(spec.m, spec.k).tolist()

    excess = [_excess(row) for row in rows]
    retries = 0
    while any(excess):
        if retries >= spec.max_retries:
            raise GenerationError(
                f"could not separate repeated variables after {retries} swaps", retries
            )
        retries += 1
        bad = [i for i, e in enumerate(excess) if e]
        i = bad[int(rng.integers(len(bad)))]
        row = rows[i]
        seen: set[int] = set()
        p = 0
        for p, lit in enumerate(row):
            if abs(lit) in seen:
                break
            seen.add(abs(lit))
        j = int(rng.integers(spec.m))
        if j == i:
            continue
        q = int(rng.integers(spec.k))
        row_j = rows[j]
        row[p], row_j[q] = row_j[q], row[p]
        ei, ej = _excess(row), _excess(row_j)
        if ei + ej > excess[i] + excess[j]:
            row[p], row_j[q] = row_j[q], row[p]
            continue
        excess[i], excess[j] = ei, ej

    clauses = tuple(make_clause(row) for row in rows)
    return Formula(clauses, spec.n)
