"""CNF formulas: representation, DIMACS I/O, statistics and cheap reductions.

Literals are signed integers in the DIMACS convention: ``i`` stands for the
variable ``a_i`` and ``-i`` for its complement.  A clause is a tuple of
literals in canonical order (variable ascending, negative before positive)
with exact duplicates merged, so two clauses are equal iff their tuples are.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence, TextIO

Clause = tuple[int, ...]


class CnfError(ValueError):
    """Malformed DIMACS input."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class _Tautology:
    __slots__ = ()

    def __repr__(self) -> str:
        return "TAUTOLOGY"

    def __bool__(self) -> bool:
        return False


#: Returned by :func:`disjoin` when the union of two clauses is always true.
TAUTOLOGY = _Tautology()


def literal_key(lit: int) -> tuple[int, int]:
    return (abs(lit), lit > 0)


def make_clause(literals: Iterable[int]) -> Clause:
    """Canonical clause from an iterable of nonzero signed integers."""
    lits = set()
    for lit in literals:
        if lit == 0:
            raise ValueError("0 is not a literal")
        lits.add(int(lit))
    return tuple(sorted(lits, key=literal_key))


@dataclass(frozen=True)
class Formula:
    clauses: tuple[Clause, ...]
    num_vars: int

    def __post_init__(self) -> None:
        if self.num_vars < 0:
            raise ValueError(f"num_vars must be >= 0, got {self.num_vars}")
        for clause in self.clauses:
            for lit in clause:
                if abs(lit) > self.num_vars:
                    raise ValueError(
                        f"literal {lit} exceeds declared variable count {self.num_vars}"
                    )

    @classmethod
    def from_lists(cls, clauses: Iterable[Iterable[int]], num_vars: int | None = None) -> "Formula":
        canon = tuple(make_clause(c) for c in clauses)
        if num_vars is None:
            num_vars = max((abs(l) for c in canon for l in c), default=0)
        return cls(canon, num_vars)

    @property
    def m(self) -> int:
        return len(self.clauses)

    def __len__(self) -> int:
        return len(self.clauses)

    def variables(self) -> set[int]:
        return {abs(l) for c in self.clauses for l in c}

    def has_empty_clause(self) -> bool:
        return any(len(c) == 0 for c in self.clauses)

    def replace(self, clauses: Iterable[Clause]) -> "Formula":
        return Formula(tuple(clauses), self.num_vars)


@dataclass(frozen=True)
class FormulaStats:
    m: int
    n_active: int
    k_mean: float
    appearances: dict[int, tuple[int, int]] = field(repr=False)
    p_mean: float
    x: float | None
    total_literals: int
    max_symmetry_imbalance: int
    vacuous: bool = False

    def line(self) -> str:
        x = "undefined" if self.x is None else f"{self.x:.6g}"
        return (
            f"m={self.m} n_active={self.n_active} k_mean={self.k_mean:.6g} "
            f"p_mean={self.p_mean:.6g} x={x} total_literals={self.total_literals} "
            f"max_imbalance={self.max_symmetry_imbalance}"
        )


# ---------------------------------------------------------------------------
# DIMACS


def parse_dimacs(text: str | TextIO) -> Formula:
    """Parse DIMACS CNF.  Clauses may span lines; each must end with ``0``."""
    if not isinstance(text, str):
        text = text.read()
    num_vars = None
    clauses: list[Clause] = []
    current: list[int] = []
    current_start = 0
    lineno = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            if num_vars is not None:
                raise CnfError("duplicate header", lineno)
            fields = line.split()
            if len(fields) != 4 or fields[0] != "p" or fields[1] != "cnf":
                raise CnfError(f"bad header {line!r}, expected 'p cnf <n> <m>'", lineno)
            try:
                num_vars, declared_m = int(fields[2]), int(fields[3])
            except ValueError:
                raise CnfError(f"bad header {line!r}, counts must be integers", lineno) from None
            if num_vars < 0 or declared_m < 0:
                raise CnfError("negative count in header", lineno)
            continue
        if num_vars is None:
            raise CnfError("clause before 'p cnf' header", lineno)
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise CnfError(f"bad literal {tok!r}", lineno) from None
            if lit == 0:
                clauses.append(make_clause(current))
                current = []
                continue
            if abs(lit) > num_vars:
                raise CnfError(f"literal {lit} exceeds declared variable count {num_vars}", lineno)
            if not current:
                current_start = lineno
            current.append(lit)
    if num_vars is None:
        raise CnfError("missing 'p cnf' header", lineno or None)
    if current:
        raise CnfError("clause missing terminating 0", current_start)
    return Formula(tuple(clauses), num_vars)


def write_dimacs(f: Formula) -> str:
    lines = [f"p cnf {f.num_vars} {f.m}"]
    for clause in f.clauses:
        lines.append(" ".join([*map(str, clause), "0"]))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# statistics


def appearance_profile(f: Formula) -> dict[int, tuple[int, int]]:
    """Map each occurring variable to its (positive, negative) literal counts."""
    pos: Counter[int] = Counter()
    neg: Counter[int] = Counter()
    for clause in f.clauses:
        for lit in clause:
            if lit > 0:
                pos[lit] += 1
            else:
                neg[-lit] += 1
    return {v: (pos[v], neg[v]) for v in sorted(pos.keys() | neg.keys())}


def compute_stats(f: Formula) -> FormulaStats:
    """Clause/appearance statistics of ``f``.

    Means run over the clauses and over the variables that actually occur.
    For ``m == 0`` the result is flagged ``vacuous`` and ``x`` is ``None``.
    """
    app = appearance_profile(f)
    total_by_clause = sum(len(c) for c in f.clauses)
    total_by_var = sum(p + q for p, q in app.values())
    if total_by_clause != total_by_var:  # pragma: no cover - structural
        raise AssertionError("literal conservation violated")
    n_active = len(app)
    imbalance = max((abs(p - q) for p, q in app.values()), default=0)
    if f.m == 0:
        return FormulaStats(0, 0, 0.0, app, 0.0, None, 0, 0, vacuous=True)
    k_mean = total_by_clause / f.m
    p_mean = total_by_var / n_active if n_active else 0.0
    return FormulaStats(
        m=f.m,
        n_active=n_active,
        k_mean=k_mean,
        appearances=app,
        p_mean=p_mean,
        x=p_mean / f.m,
        total_literals=total_by_clause,
        max_symmetry_imbalance=imbalance,
    )


# ---------------------------------------------------------------------------
# clause operations and reductions


def is_tautological(clause: Sequence[int]) -> bool:
    lits = set(clause)
    return any(-lit in lits for lit in lits)


def disjoin(y: Clause, z: Clause) -> Clause | _Tautology:
    """Disjunction of two clauses, or ``TAUTOLOGY`` if it is always true."""
    merged = set(y)
    for lit in z:
        if -lit in merged:
            return TAUTOLOGY
        merged.add(lit)
    for lit in y:
        # y itself may be tautological
        if -lit in merged:
            return TAUTOLOGY
    return tuple(sorted(merged, key=literal_key))


def drop_tautologies(clauses: Iterable[Clause]) -> list[Clause]:
    return [c for c in clauses if not is_tautological(c)]


def dedup_clauses(clauses: Iterable[Clause]) -> list[Clause]:
    seen: set[Clause] = set()
    out = []
    for c in clauses:
        if c not in seen:
            seen.add(c)
            out.append(c)
    return out


def subsumption_filter(clauses: Sequence[Clause]) -> list[Clause]:
    """Drop every clause that contains another one; first of equals survives.

    Pairwise containment test, shortest clauses checked first so the scan
    over candidate subsumers can stop at the clause's own length.
    """
    uniq = dedup_clauses(clauses)
    sets = [frozenset(c) for c in uniq]
    by_len = sorted(range(len(uniq)), key=lambda i: len(uniq[i]))
    if sets and not sets[by_len[0]]:
        # the empty clause subsumes everything
        first_empty = next(i for i, c in enumerate(uniq) if not c)
        return [uniq[first_empty]]
    keep = [True] * len(uniq)
    survivors: list[int] = []
    for i in by_len:
        s = sets[i]
        for j in survivors:
            if len(sets[j]) >= len(s):
                break
            if sets[j] <= s:
                keep[i] = False
                break
        if keep[i]:
            survivors.append(i)
    return [c for c, k in zip(uniq, keep) if k]


def remove_duplicates(f: Formula) -> Formula:
    return f.replace(dedup_clauses(f.clauses))


def remove_subsumed(f: Formula) -> Formula:
    return f.replace(subsumption_filter(f.clauses))


def evaluate(f: Formula, assignment: dict[int, bool]) -> bool:
    """Truth value of ``f`` under a total assignment of its variables."""
    return all(any(assignment[abs(l)] == (l > 0) for l in c) for c in f.clauses)
