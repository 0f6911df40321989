import itertools

import pytest
from hypothesis import strategies as st

from splitlab.cnf import Formula, make_clause


def satisfiable_by_enumeration(f: Formula) -> bool:
    """Second, deliberately naive oracle: dict assignments over all num_vars."""
    vs = list(range(1, f.num_vars + 1))
    for values in itertools.product((False, True), repeat=len(vs)):
        a = dict(zip(vs, values))
        if all(any(a[abs(l)] == (l > 0) for l in c) for c in f.clauses):
            return True
    return False


@st.composite
def formulas(draw, max_vars=6, max_clauses=10, max_len=4, allow_empty=True):
    n = draw(st.integers(1, max_vars))
    lit = st.integers(1, n).flatmap(lambda v: st.sampled_from([v, -v]))
    min_len = 0 if allow_empty else 1
    clauses = draw(st.lists(st.lists(lit, min_size=min_len, max_size=max_len), max_size=max_clauses))
    return Formula(tuple(make_clause(c) for c in clauses), n)


@pytest.fixture
def F():
    return Formula.from_lists


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split("criterion")[1].split(":")[0])):
            terminalreporter.write_line(line)
