"""SPLIT: decide satisfiability by eliminating variables one at a time.

Eliminating ``v`` replaces ``F`` by ``F(v) or F(not v)`` rewritten in CNF:
clauses ``v or Y_i`` and ``not v or Z_j`` are replaced by all pairwise
disjunctions ``Y_i or Z_j``; clauses without ``v`` pass through unchanged.
Orthogonal pairs (tautologies), duplicate clauses and subsumed clauses can be
dropped after each step, and a clause budget aborts runaway growth.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .cnf import (
    TAUTOLOGY,
    Clause,
    Formula,
    dedup_clauses,
    disjoin,
    is_tautological,
    make_clause,
    subsumption_filter,
)

DEFAULT_BUDGET = 10**6
BRUTE_FORCE_MAX_VARS = 24


class OrderPolicy(enum.Enum):
    FIXED_INDEX = "fixed"
    MAX_APPEARANCE = "max-appearance"
    MIN_PRODUCT_RS = "min-product"


class Verdict(enum.Enum):
    SAT = "SAT"
    UNSAT = "UNSAT"
    BUDGET = "BUDGET"


class BudgetExceeded(RuntimeError):
    def __init__(self, step: int, clauses: int, budget: int):
        super().__init__(f"step {step}: {clauses} clauses exceed budget {budget}")
        self.step = step
        self.clauses = clauses
        self.budget = budget


class BruteForceRefused(ValueError):
    pass


@dataclass(frozen=True)
class ReductionConfig:
    drop_tautologies: bool = True
    drop_duplicates: bool = True
    drop_subsumed: bool = True
    clause_budget: int = DEFAULT_BUDGET
    order_policy: OrderPolicy = OrderPolicy.FIXED_INDEX

    def __post_init__(self) -> None:
        if self.drop_subsumed and not self.drop_duplicates:
            raise ValueError("drop_subsumed requires drop_duplicates")
        if self.clause_budget < 1:
            raise ValueError(f"clause_budget must be positive, got {self.clause_budget}")

    @classmethod
    def none(cls, **kw) -> "ReductionConfig":
        return cls(drop_tautologies=False, drop_duplicates=False, drop_subsumed=False, **kw)


@dataclass(frozen=True)
class Partition:
    """Clauses of a formula split around one variable.

    ``y_block`` holds the clauses that contained the positive literal (with it
    removed), ``z_block`` the negative ones, ``rest`` everything else.
    Clauses holding both polarities of the variable are true under either
    value; they are counted in ``tautological`` and belong to no block.
    """

    variable: int
    y_block: tuple[Clause, ...]
    z_block: tuple[Clause, ...]
    rest: tuple[Clause, ...]
    tautological: int = 0

    @property
    def r(self) -> int:
        return len(self.y_block)

    @property
    def s(self) -> int:
        return len(self.z_block)

    @property
    def m_rest(self) -> int:
        return len(self.rest)


@dataclass(frozen=True)
class TracePoint:
    j: int
    var: int
    n: int
    m: int
    r: int
    s: int
    m_rest: int
    generated: int
    kept: int
    k_mean: float
    p_mean: float
    x: float | None

    @property
    def step_cost(self) -> int:
        return self.m**2 * self.n


@dataclass
class Decision:
    verdict: Verdict
    trajectory: list[TracePoint] = field(default_factory=list)
    budget_step: int | None = None
    budget_clauses: int | None = None

    @property
    def decided(self) -> bool:
        return self.verdict is not Verdict.BUDGET


def partition(f: Formula, v: int) -> Partition:
    if v < 1:
        raise ValueError(f"variable index must be >= 1, got {v}")
    y, z, rest = [], [], []
    taut = 0
    for c in f.clauses:
        has_pos = v in c
        has_neg = -v in c
        if has_pos and has_neg:
            taut += 1
        elif has_pos:
            y.append(tuple(l for l in c if l != v))
        elif has_neg:
            z.append(tuple(l for l in c if l != -v))
        else:
            rest.append(c)
    return Partition(v, tuple(y), tuple(z), tuple(rest), taut)


def reduce_clauses(clauses: list[Clause], cfg: ReductionConfig) -> list[Clause]:
    if cfg.drop_tautologies:
        clauses = [c for c in clauses if not is_tautological(c)]
    if cfg.drop_subsumed:
        return subsumption_filter(clauses)
    if cfg.drop_duplicates:
        return dedup_clauses(clauses)
    return clauses


@dataclass(frozen=True)
class Elimination:
    formula: Formula
    partition: Partition
    generated: int
    kept: int


def eliminate_step(f: Formula, v: int, cfg: ReductionConfig, step: int = 1) -> Elimination:
    """One elimination with its bookkeeping; see :func:`eliminate`."""
    part = partition(f, v)
    budget = cfg.clause_budget
    generated = part.r * part.s
    if not (cfg.drop_tautologies or cfg.drop_duplicates) and generated + part.m_rest > budget:
        # count is exact without reductions; refuse before materializing
        raise BudgetExceeded(step, generated + part.m_rest, budget)
    # Cap on new clauses while building.  Exact when subsumption is off (the
    # new clauses kept here all survive); with subsumption it only bounds
    # memory, at ten times the budget.
    cap = budget * 10 if cfg.drop_subsumed else budget
    new: list[Clause] = []
    seen: set[Clause] = set()
    for y in part.y_block:
        for z in part.z_block:
            d = disjoin(y, z)
            if d is TAUTOLOGY:
                if cfg.drop_tautologies:
                    continue
                d = make_clause(y + z)
            if cfg.drop_duplicates:
                if d in seen:
                    continue
                seen.add(d)
            new.append(d)
            if len(new) > cap:
                raise BudgetExceeded(step, len(new) + part.m_rest, budget)

    reduced = reduce_clauses(new + list(part.rest), cfg)
    if cfg.drop_duplicates:
        # first occurrences win, so every surviving copy of a new clause is new
        kept = sum(1 for c in reduced if c in seen)
    else:
        kept = len(new)
    if len(reduced) > budget:
        raise BudgetExceeded(step, len(reduced), budget)
    return Elimination(f.replace(reduced), part, generated, kept)


def eliminate(f: Formula, v: int, cfg: ReductionConfig | None = None) -> Formula:
    """Eliminate ``v`` from ``f``; the result is equisatisfiable with ``f``.

    With every reduction off the clause count is exactly ``r*s + m_rest``.
    Raises :class:`BudgetExceeded` when the result exceeds the clause budget.
    """
    return eliminate_step(f, v, cfg or ReductionConfig()).formula


# ---------------------------------------------------------------------------
# decide() runs on a bag: packed clause -> multiplicity.  A clause over
# variables 1..n is packed as ``pos | neg << w`` with bit ``v`` marking
# variable ``v``, so a disjunction is a bitwise or and a tautology test is an
# and.  Without duplicate removal a formula carries many identical clauses;
# counting them instead of storing them keeps clause counts exact (Python
# ints) while memory tracks distinct clauses only.

Bag = dict[int, int]


@dataclass(frozen=True)
class _Packing:
    width: int

    @property
    def low(self) -> int:
        return (1 << self.width) - 1

    def pack(self, clause: Clause) -> int:
        key = 0
        for l in clause:
            key |= 1 << l if l > 0 else 1 << (self.width - l)
        return key

    def unpack(self, key: int) -> Clause:
        pos, neg = key & self.low, key >> self.width
        lits = [v for v in _bits(pos)] + [-v for v in _bits(neg)]
        return make_clause(lits)

    def taut(self, key: int) -> bool:
        return bool(key & self.low & (key >> self.width))


def _bits(x: int):
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


def _bag_counts(bag: Bag, pk: _Packing) -> tuple[dict[int, int], dict[int, int]]:
    pos: dict[int, int] = {}
    neg: dict[int, int] = {}
    low, w = pk.low, pk.width
    for key, mult in bag.items():
        for v in _bits(key & low):
            pos[v] = pos.get(v, 0) + mult
        for v in _bits(key >> w):
            neg[v] = neg.get(v, 0) + mult
    return pos, neg


def _choose(bag: Bag, pk: _Packing, policy: OrderPolicy) -> int:
    if policy is OrderPolicy.FIXED_INDEX:
        union = 0
        for key in bag:
            union |= key
        union = (union | union >> pk.width) & pk.low
        return (union & -union).bit_length() - 1
    pos, neg = _bag_counts(bag, pk)
    variables = sorted(pos.keys() | neg.keys())
    if policy is OrderPolicy.MAX_APPEARANCE:
        return max(variables, key=lambda v: (pos.get(v, 0) + neg.get(v, 0), -v))
    return min(variables, key=lambda v: (pos.get(v, 0) * neg.get(v, 0), v))


def _to_bag(clauses, pk: _Packing) -> Bag:
    bag: Bag = {}
    for c in clauses:
        key = pk.pack(c)
        bag[key] = bag.get(key, 0) + 1
    return bag


def choose_variable(f: Formula, policy: OrderPolicy) -> int:
    """Next variable to eliminate under ``policy`` (ties go to the lowest index)."""
    pk = _Packing(f.num_vars + 1)
    return _choose(_to_bag(f.clauses, pk), pk, policy)


def _subsume_keys(keys: list[int]) -> list[int]:
    """Keys not containing another key; input order kept.  Keys are distinct."""
    order = sorted(range(len(keys)), key=lambda i: keys[i].bit_count())
    survivors: list[int] = []
    keep = [False] * len(keys)
    for i in order:
        k = keys[i]
        if not any(s & k == s for s in survivors):
            survivors.append(k)
            keep[i] = True
    return [k for k, ok in zip(keys, keep) if ok]


def _reduce_bag(bag: Bag, pk: _Packing, cfg: ReductionConfig) -> Bag:
    if cfg.drop_tautologies:
        bag = {key: k for key, k in bag.items() if not pk.taut(key)}
    if cfg.drop_subsumed:
        return dict.fromkeys(_subsume_keys(list(bag)), 1)
    if cfg.drop_duplicates:
        return dict.fromkeys(bag, 1)
    return bag


def _bag_stats(bag: Bag, pk: _Packing) -> tuple[int, float, float, float]:
    m = sum(bag.values())
    if m == 0:
        return 0, 0.0, 0.0, 0.0
    total = sum(key.bit_count() * k for key, k in bag.items())
    union = 0
    for key in bag:
        union |= key
    n_active = ((union | union >> pk.width) & pk.low).bit_count()
    if not n_active:
        return m, 0.0, 0.0, 0.0
    try:
        p_mean = total / n_active
    except OverflowError:
        p_mean = math.inf
    return m, total / m, p_mean, total / (n_active * m)


_VECTOR_MIN_PAIRS = 4096
_VECTOR_BLOCK = 1 << 20


_DENSE_MAX_BITS = 22
_DENSE_MAX_BYTES = 1 << 28
_LIMB = 16


def _limbs(mults: list[int], count: int) -> np.ndarray:
    out = np.empty((count, len(mults)), dtype=np.int64)
    mask = (1 << _LIMB) - 1
    for i in range(count):
        out[i] = [(v >> (_LIMB * i)) & mask for v in mults]
    return out


def _cross_counts_dense(y: Bag, z: Bag, w: int, drop_taut: bool) -> tuple[Bag, int] | None:
    """Counted cross product on a dense table over the variables in use.

    Keys are re-encoded onto the ``h`` variables that occur in either bag
    (positive bit ``t``, negative bit ``t + h``), so a disjunction is still
    an OR and a tautology still ``d & (d >> h)``.  Multiplicities are split
    into 16-bit limbs; every limb product is below 2**32 and each
    ``bincount`` call sums at most 2**20 of them, which float64 holds
    exactly.  Returns None when the table or limb count would be too big.
    """
    union = 0
    for key in y:
        union |= key
    for key in z:
        union |= key
    present = sorted({b for b in _bits(union & ((1 << w) - 1))} | {b for b in _bits(union >> w)})
    h = len(present)
    if 2 * h > _DENSE_MAX_BITS or len(z) > _VECTOR_BLOCK:
        return None
    ly = max(1, -(-max(y.values()).bit_length() // _LIMB))
    lz = max(1, -(-max(z.values()).bit_length() // _LIMB))
    size = 1 << (2 * h)
    if ly * lz > 16 or (ly + lz - 1) * size * 8 > _DENSE_MAX_BYTES:
        return None

    def encode(keys) -> np.ndarray:
        ks = np.fromiter(keys, dtype=np.uint64)
        c = np.zeros(len(ks), dtype=np.int64)
        for t, b in enumerate(present):
            c |= ((ks >> np.uint64(b)) & np.uint64(1)).astype(np.int64) << t
            c |= ((ks >> np.uint64(b + w)) & np.uint64(1)).astype(np.int64) << (t + h)
        return c

    cy, cz = encode(y.keys()), encode(z.keys())
    ym, zm = _limbs(list(y.values()), ly), _limbs(list(z.values()), lz)
    low = (1 << h) - 1
    acc = [np.zeros(size, dtype=np.int64) for _ in range(ly + lz - 1)]
    result: dict[int, int] = {}

    def flush() -> None:
        hit = np.flatnonzero(np.logical_or.reduce([a != 0 for a in acc]))
        for s, a in enumerate(acc):
            vals = a[hit].tolist()
            for c, v in zip(hit.tolist(), vals):
                if v:
                    result[c] = result.get(c, 0) + (v << (_LIMB * s))
            a[:] = 0

    rows = max(1, _VECTOR_BLOCK // len(cz))
    pending = 0
    for start in range(0, len(cy), rows):
        stop = start + rows
        idx = (cy[start:stop, None] | cz[None, :]).ravel()
        keep = None
        if drop_taut:
            keep = (idx & (idx >> h) & low) == 0
            idx = idx[keep]
            if not len(idx):
                continue
        for i in range(ly):
            for j in range(lz):
                wts = (ym[i, start:stop, None] * zm[j, None, :]).ravel()
                if keep is not None:
                    wts = wts[keep]
                acc[i + j] += np.bincount(idx, weights=wts, minlength=size).astype(np.int64)
        # each acc cell gains < min(ly, lz) * 2**52 per block; flush well before 2**63
        pending += 1
        if pending * min(ly, lz) >= 1 << 9:
            flush()
            pending = 0
    flush()

    out: Bag = {}
    total = 0
    for c, cnt in result.items():
        key = 0
        for t, b in enumerate(present):
            if c >> t & 1:
                key |= 1 << b
            if c >> (t + h) & 1:
                key |= 1 << (b + w)
        out[key] = cnt
        total += cnt
    return out, total


def _cross_counts_np(y: Bag, z: Bag, w: int, drop_taut: bool, cap: int) -> tuple[Bag, int]:
    """Counted cross product of two bags, vectorized over blocks of Y rows.

    Keys must fit in 63 bits.  Multiplicities stay Python ints (object
    arrays) so counts remain exact however large they get.
    """
    low = np.uint64((1 << w) - 1)
    shift = np.uint64(w)
    zk = np.fromiter(z.keys(), dtype=np.uint64, count=len(z))
    zm = np.array(list(z.values()), dtype=object)
    ykeys = list(y.keys())
    ymults = list(y.values())
    rows = max(1, _VECTOR_BLOCK // len(z))
    out: Bag = {}
    total = 0
    for start in range(0, len(ykeys), rows):
        yk = np.fromiter(ykeys[start:start + rows], dtype=np.uint64)
        ym = np.array(ymults[start:start + rows], dtype=object)
        d = (yk[:, None] | zk[None, :]).ravel()
        mult = np.multiply.outer(ym, zm).ravel()
        if drop_taut:
            ok = (d & low & (d >> shift)) == 0
            d, mult = d[ok], mult[ok]
        if not len(d):
            continue
        order = np.argsort(d)
        d = d[order]
        first = np.flatnonzero(np.concatenate(([True], d[1:] != d[:-1])))
        keys = d[first]
        sums = np.add.reduceat(mult[order], first)
        for key, cnt in zip(keys.tolist(), sums.tolist()):
            out[key] = out.get(key, 0) + cnt
            total += cnt
        if total > cap:
            break
    return out, total


def _eliminate_bag(bag: Bag, pk: _Packing, v: int, cfg: ReductionConfig, step: int):
    pbit = 1 << v
    nbit = 1 << (v + pk.width)
    y: Bag = {}
    z: Bag = {}
    rest: Bag = {}
    for key, k in bag.items():
        has_pos, has_neg = key & pbit, key & nbit
        if has_pos and has_neg:
            continue
        if has_pos:
            key ^= pbit
            y[key] = y.get(key, 0) + k
        elif has_neg:
            key ^= nbit
            z[key] = z.get(key, 0) + k
        else:
            rest[key] = k
    r, s = sum(y.values()), sum(z.values())
    m_rest = sum(rest.values())
    budget = cfg.clause_budget
    if not cfg.drop_tautologies and not cfg.drop_duplicates and r * s + m_rest > budget:
        raise BudgetExceeded(step, r * s + m_rest, budget)
    cap = budget * 10 if cfg.drop_subsumed else budget
    low, w = pk.low, pk.width
    drop_taut, dedup = cfg.drop_tautologies, cfg.drop_duplicates
    if not dedup and 2 * w <= 63 and len(y) * len(z) >= _VECTOR_MIN_PAIRS:
        dense = _cross_counts_dense(y, z, w, drop_taut)
        new, new_total = dense if dense is not None else _cross_counts_np(y, z, w, drop_taut, cap)
        if new_total > cap:
            raise BudgetExceeded(step, new_total + m_rest, budget)
        y = {}
    else:
        new = {}
        new_total = 0
    for yk, ym in y.items():
        for zk, zm in z.items():
            d = yk | zk
            if drop_taut and d & low & (d >> w):
                continue
            if dedup:
                if d in new:
                    continue
                new[d] = 1
                new_total += 1
            else:
                mult = ym * zm
                new[d] = new.get(d, 0) + mult
                new_total += mult
        if new_total > cap:
            raise BudgetExceeded(step, new_total + m_rest, budget)
    merged = dict(new)
    for key, k in rest.items():
        merged[key] = merged.get(key, 0) + k
    reduced = _reduce_bag(merged, pk, cfg)
    kept = sum(1 for key in reduced if key in new) if dedup else new_total
    m = sum(reduced.values())
    if m > budget:
        raise BudgetExceeded(step, m, budget)
    return reduced, r, s, m_rest, r * s, kept


def decide(f: Formula, cfg: ReductionConfig | None = None) -> Decision:
    """Run SPLIT to completion, recording one trace point per elimination.

    Stops early with UNSAT as soon as an empty clause appears (it can never
    go away) and with SAT once no clause is left.
    """
    cfg = cfg or ReductionConfig()
    pk = _Packing(f.num_vars + 1)
    trace: list[TracePoint] = []
    bag = _reduce_bag(_to_bag(f.clauses, pk), pk, cfg)
    j = 0
    while True:
        if 0 in bag:
            return Decision(Verdict.UNSAT, trace)
        if not bag:
            return Decision(Verdict.SAT, trace)
        v = _choose(bag, pk, cfg.order_policy)
        try:
            bag, r, s, m_rest, generated, kept = _eliminate_bag(bag, pk, v, cfg, j + 1)
        except BudgetExceeded as exc:
            return Decision(Verdict.BUDGET, trace, budget_step=exc.step, budget_clauses=exc.clauses)
        j += 1
        m, k_mean, p_mean, x = _bag_stats(bag, pk)
        trace.append(
            TracePoint(
                j=j, var=v, n=f.num_vars - j, m=m, r=r, s=s, m_rest=m_rest,
                generated=generated, kept=kept, k_mean=k_mean, p_mean=p_mean, x=x,
            )
        )


def brute_force(f: Formula) -> Verdict:
    """Exhaustive check over all assignments of the occurring variables."""
    variables = sorted(f.variables())
    if len(variables) > BRUTE_FORCE_MAX_VARS:
        raise BruteForceRefused(
            f"{len(variables)} active variables exceed the brute-force limit {BRUTE_FORCE_MAX_VARS}"
        )
    if f.has_empty_clause():
        return Verdict.UNSAT
    index = {v: i for i, v in enumerate(variables)}
    masks = []
    for c in f.clauses:
        pos = neg = 0
        for l in c:
            if l > 0:
                pos |= 1 << index[l]
            else:
                neg |= 1 << index[-l]
        masks.append((pos, neg))
    full = (1 << len(variables)) - 1
    for a in range(1 << len(variables)):
        na = full ^ a
        if all((p & a) or (q & na) for p, q in masks):
            return Verdict.SAT
    return Verdict.UNSAT
