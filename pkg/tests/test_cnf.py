import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from splitlab.cnf import (
    TAUTOLOGY,
    CnfError,
    Formula,
    appearance_profile,
    compute_stats,
    disjoin,
    is_tautological,
    make_clause,
    parse_dimacs,
    remove_duplicates,
    remove_subsumed,
    write_dimacs,
)
from splitlab.gen import GenSpec, generate
from splitlab.split import brute_force

from conftest import formulas, satisfiable_by_enumeration


class TestParse:
    def test_basic(self):
        f = parse_dimacs("p cnf 2 2\n1 2 0\n-1 2 0\n")
        assert f.m == 2 and f.num_vars == 2
        assert f.clauses == ((1, 2), (-1, 2))

    def test_empty_clause(self):
        f = parse_dimacs("p cnf 1 1\n0\n")
        assert f.clauses == ((),)

    def test_tautology_is_kept(self):
        f = parse_dimacs("p cnf 2 1\n1 -1 0\n")
        assert f.clauses == ((-1, 1),)

    def test_comments_and_canonical_order(self):
        f = parse_dimacs("c hello\nc world\np cnf 3 1\n3 -1 2 -1 0\n")
        assert f.clauses == ((-1, 2, 3),)

    def test_clause_spanning_lines(self):
        f = parse_dimacs("p cnf 3 1\n1 2\n3 0\n")
        assert f.clauses == ((1, 2, 3),)

    def test_file_object(self, tmp_path):
        path = tmp_path / "a.cnf"
        path.write_text("p cnf 1 1\n-1 0\n")
        with open(path) as fh:
            assert parse_dimacs(fh).clauses == ((-1,),)

    @pytest.mark.parametrize(
        "text, line",
        [
            ("p cnf x 2\n1 0\n", 1),
            ("p dnf 2 1\n1 0\n", 1),
            ("p cnf 2\n1 0\n", 1),
            ("p cnf 2 1\n1 3 0\n", 2),
            ("p cnf 2 2\n1 0\n-2 1\n", 3),
            ("1 2 0\n", 1),
            ("p cnf 2 1\n1 a 0\n", 2),
        ],
    )
    def test_errors_carry_line_numbers(self, text, line):
        with pytest.raises(CnfError) as info:
            parse_dimacs(text)
        assert info.value.line == line
        assert f"line {line}" in str(info.value)

    def test_missing_header(self):
        with pytest.raises(CnfError):
            parse_dimacs("c only comments\n")


class TestWrite:
    def test_empty_formula(self):
        assert write_dimacs(Formula((), 3)) == "p cnf 3 0\n"

    def test_format(self):
        f = Formula.from_lists([[2, -1], []], 2)
        assert write_dimacs(f) == "p cnf 2 2\n-1 2 0\n0\n"

    @given(formulas())
    def test_round_trip(self, f):
        assert parse_dimacs(write_dimacs(f)) == f

    def test_generated_round_trip_byte_identical(self):
        f = generate(GenSpec(60, 100, 4, seed=7))
        text = write_dimacs(f)
        g = parse_dimacs(text)
        assert g == f
        assert write_dimacs(g) == text


class TestStats:
    def test_hand_count(self):
        # (a or b) and (not a or b)
        st_ = compute_stats(Formula.from_lists([[1, 2], [-1, 2]]))
        assert st_.m == 2 and st_.k_mean == 2
        assert st_.appearances == {1: (1, 1), 2: (2, 0)}
        assert st_.p_mean == 2 and st_.x == 1
        assert st_.max_symmetry_imbalance == 2

    def test_generated_fig2_scale(self):
        st_ = compute_stats(generate(GenSpec(60, 100, 4, seed=3)))
        assert st_.k_mean == 4
        assert 400 / 60 - 1 <= st_.p_mean <= 400 / 60 + 1
        assert st_.max_symmetry_imbalance <= 1

    def test_empty_clause_counts_zero(self):
        st_ = compute_stats(Formula.from_lists([[], [1, 2]], 2))
        assert st_.k_mean == 1.0
        assert st_.total_literals == 2

    def test_vacuous(self):
        st_ = compute_stats(Formula((), 4))
        assert st_.vacuous and st_.x is None

    @given(formulas(allow_empty=False))
    def test_conservation_and_filling(self, f):
        s = compute_stats(f)
        by_var = sum(p + q for p, q in appearance_profile(f).values())
        assert s.total_literals == by_var == sum(len(c) for c in f.clauses)
        if s.m and s.n_active:
            assert s.x == pytest.approx(s.k_mean / s.n_active, rel=1e-12, abs=1e-12)


class TestClauseOps:
    @pytest.mark.parametrize(
        "clause, expected", [((-1, 1), True), ((1, 2), False), ((), False), ((-2, 1, 2), True)]
    )
    def test_is_tautological(self, clause, expected):
        assert is_tautological(clause) is expected

    def test_disjoin_examples(self):
        assert disjoin((2,), (3,)) == (2, 3)
        assert disjoin((2,), (-2,)) is TAUTOLOGY
        assert disjoin((), ()) == ()

    @given(formulas(max_clauses=2), st.data())
    def test_disjoin_matches_direct_scan(self, f, data):
        y = data.draw(st.sampled_from(f.clauses)) if f.clauses else ()
        z = data.draw(st.sampled_from(f.clauses)) if f.clauses else ()
        clash = any(-a == b for a in y + z for b in y + z)
        out = disjoin(y, z)
        assert (out is TAUTOLOGY) == clash
        if not clash:
            assert out == make_clause(y + z)


class TestReductions:
    def test_duplicates(self):
        f = Formula.from_lists([[2, 3], [3, 2], [1]])
        assert remove_duplicates(f).clauses == ((2, 3), (1,))

    def test_duplicate_free_unchanged(self):
        f = Formula.from_lists([[1, 2], [2, 3]])
        assert remove_duplicates(f) == f

    def test_subsumed(self):
        assert remove_subsumed(Formula.from_lists([[2], [2, 3]])).clauses == ((2,),)

    def test_incomparable(self):
        f = Formula.from_lists([[2, 3], [3, 4]])
        assert remove_subsumed(f) == f

    def test_empty_clause_subsumes_all(self):
        assert remove_subsumed(Formula.from_lists([[], [2]], 2)).clauses == ((),)

    def test_keeps_first_and_order(self):
        f = Formula.from_lists([[1, 2, 3], [4], [2, 1], [4, 5], [2, 1]])
        assert remove_subsumed(f).clauses == ((4,), (1, 2))

    @settings(max_examples=150)
    @given(formulas(max_vars=7, max_clauses=12))
    def test_antichain_idempotent_equisatisfiable(self, f):
        r = remove_subsumed(f)
        sets = [set(c) for c in r.clauses]
        assert not any(i != j and a <= b for i, a in enumerate(sets) for j, b in enumerate(sets))
        assert remove_subsumed(r) == r
        d = remove_duplicates(f)
        assert remove_duplicates(d) == d
        truth = satisfiable_by_enumeration(f)
        assert satisfiable_by_enumeration(r) == truth
        assert satisfiable_by_enumeration(d) == truth
        assert (brute_force(r).value == "SAT") == truth
