import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from splitlab.cnf import Formula, appearance_profile, compute_stats, write_dimacs
from splitlab.gen import GenerationError, GenSpec, generate, parse_seed


def check_postconditions(f: Formula, spec: GenSpec) -> None:
    assert f.m == spec.m
    for clause in f.clauses:
        assert len(clause) == spec.k
        assert len({abs(l) for l in clause}) == spec.k
    lo, hi = divmod(spec.m * spec.k, spec.n)[0], math.ceil(spec.m * spec.k / spec.n)
    prof = appearance_profile(f)
    for v in range(1, spec.n + 1):
        pos, neg = prof.get(v, (0, 0))
        assert abs(pos - neg) <= 1
        assert pos + neg in (lo, hi)


def test_small_forced():
    spec = GenSpec(4, 2, 2, seed=11)
    f = generate(spec)
    check_postconditions(f, spec)
    assert all(p + q <= 1 for p, q in appearance_profile(f).values())


def test_pigeonhole_uses_all_variables():
    f = generate(GenSpec(3, 1, 3, seed=5))
    assert {abs(l) for l in f.clauses[0]} == {1, 2, 3}


def test_fig2_parameters():
    spec = GenSpec(60, 100, 4, seed=2024)
    f = generate(spec)
    check_postconditions(f, spec)
    s = compute_stats(f)
    assert s.k_mean == 4
    assert 400 / 60 - 1 <= s.p_mean <= 400 / 60 + 1
    assert {p + q for p, q in s.appearances.values()} <= {6, 7}


def test_deterministic_bytes():
    a = write_dimacs(generate(GenSpec(30, 50, 3, seed=0xDEADBEEF)))
    b = write_dimacs(generate(GenSpec(30, 50, 3, seed=0xDEADBEEF)))
    c = write_dimacs(generate(GenSpec(30, 50, 3, seed=0xDEADBEEE)))
    assert a == b
    assert a != c


def test_empirical_filling_over_seeds():
    xs = [compute_stats(generate(GenSpec(60, 100, 4, seed=s))).x for s in range(100)]
    mean_x = sum(xs) / len(xs)
    assert mean_x == pytest.approx(1 / 15, rel=0.02)


def test_k_equals_n_needs_repair_cycles():
    # every clause must hold every variable; single improving swaps can deadlock here
    spec = GenSpec(4, 22, 4, seed=30)
    check_postconditions(generate(spec), spec)


@settings(max_examples=60, deadline=None)
@given(
    st.integers(2, 14).flatmap(
        lambda n: st.tuples(
            st.just(n),
            st.integers(2, n).filter(lambda k: k <= 5),
            st.integers(1, 40),
            st.integers(0, 2**64 - 1),
        )
    )
)
def test_postconditions_on_grid(params):
    n, k, m, seed = params
    if m * k < n:
        m = -(-n // k)
    spec = GenSpec(n, m, k, seed)
    check_postconditions(generate(spec), spec)


def test_sparse_warns():
    with pytest.warns(UserWarning):
        generate(GenSpec(10, 1, 2, seed=1))


@pytest.mark.parametrize(
    "kwargs",
    [dict(n=4, m=2, k=5), dict(n=4, m=2, k=1), dict(n=4, m=-1, k=2), dict(n=4, m=2, k=2, seed=-1)],
)
def test_invalid_specs(kwargs):
    with pytest.raises(ValueError):
        GenSpec(**kwargs)


def test_retry_exhaustion_reports_count():
    with pytest.raises(GenerationError) as info:
        generate(GenSpec(4, 22, 4, seed=30, max_retries=0))
    assert info.value.retries == 0


def test_parse_seed():
    assert parse_seed("17") == 17
    assert parse_seed("0x1F") == 31
    assert parse_seed("0xffffffffffffffff") == 2**64 - 1
    with pytest.raises(ValueError):
        parse_seed("0x1ffffffffffffffff")
    with pytest.raises(ValueError):
        parse_seed("-3")
