import pytest

from bibliorank.baseline import build_baselines
from bibliorank.errors import (EmptyIntersection, NoEligibleUniversities,
                               NotInBoth)
from bibliorank.indicators import ShareScheme
from bibliorank.rankshift import (QuintileAssignment, RankList, ShiftTable,
                                  assign_quintiles, classify_shifts,
                                  indicator_comparison, quintile_shift,
                                  quintile_shift_for, rank_list, sds_drilldown,
                                  shift_stats, transition_matrix,
                                  uda_rank_list, university_shift_table)
from bibliorank.synthgen import GenConfig, make_corpus as synth_corpus

from conftest import read_fixture


def ranked(values, min_staff=0.0):
    scores = {u: (v, 100.0) for u, v in values.items()}
    return rank_list(scores, period="E", min_staff=min_staff)


def assignment(quintiles):
    return QuintileAssignment("", "", "", dict(quintiles),
                              tuple(list(quintiles.values()).count(q + 1)
                                    for q in range(5)))


class TestRankList:
    def test_distinct_values(self):
        rl = ranked({"a": 3.0, "b": 2.0, "c": 1.0})
        assert [(e.university_id, e.rank) for e in rl.entries] == \
            [("a", 1), ("b", 2), ("c", 3)]

    def test_competition_ranking(self):
        rl = ranked({"a": 3.0, "b": 3.0, "c": 1.0})
        assert [(e.university_id, e.rank) for e in rl.entries] == \
            [("a", 1), ("b", 1), ("c", 3)]

    def test_staff_threshold(self):
        rl = rank_list({"a": (3.0, 6.0), "b": (9.0, 5.9)}, min_staff=6.0)
        assert rl.universities == ["a"]

    def test_no_eligible(self):
        with pytest.raises(NoEligibleUniversities):
            rank_list({"a": (3.0, 1.0)}, min_staff=6.0)

    def test_scale_invariance(self):
        values = {f"u{i}": float(i * 7 % 13) for i in range(10)}
        base = ranked(values)
        for k in (2.0, 0.5, 1e6):
            scaled = ranked({u: v * k for u, v in values.items()})
            assert [(e.university_id, e.rank) for e in scaled.entries] == \
                [(e.university_id, e.rank) for e in base.entries]


class TestQuintiles:
    def test_fifty_units(self):
        rl = ranked({f"u{i:02d}": float(100 - i) for i in range(50)})
        assert assign_quintiles(rl).sizes == (10, 10, 10, 10, 10)

    def test_remainder_to_top(self):
        rl = ranked({f"u{i}": float(10 - i) for i in range(7)})
        assert assign_quintiles(rl).sizes == (2, 2, 1, 1, 1)

    def test_three_distinct(self):
        rl = ranked({"a": 3.0, "b": 2.0, "c": 1.0})
        out = assign_quintiles(rl)
        assert out.entries == {"a": 1, "b": 2, "c": 3}
        assert out.sizes == (1, 1, 1, 0, 0)

    def test_tie_block_never_straddles(self):
        # 10 units, targets (2,2,2,2,2); units 2-4 tied -> all land in quintile 2
        values = {f"u{i}": 10.0 - i for i in range(10)}
        values["u2"] = values["u3"] = values["u4"] = 7.5
        out = assign_quintiles(ranked(values))
        assert out.entries["u2"] == out.entries["u3"] == out.entries["u4"] == 2
        assert sum(out.sizes) == 10
        assert out.sizes == (2, 3, 1, 2, 2)


class TestShiftStats:
    def test_identical_lists(self):
        rl = ranked({"a": 3.0, "b": 2.0, "c": 1.0})
        stats = shift_stats(rl, rl)
        assert stats.n_changed == 0
        assert stats.max_abs_shift == stats.mean_abs_shift == 0
        assert stats.median_abs_shift == 0

    def test_pairwise_swaps(self):
        early = ranked({"a": 4.0, "b": 3.0, "c": 2.0, "d": 1.0})
        late = ranked({"b": 4.0, "a": 3.0, "d": 2.0, "c": 1.0})
        stats = shift_stats(early, late)
        assert stats.n_total == 4 and stats.n_changed == 4
        assert stats.max_abs_shift == 1
        assert stats.mean_abs_shift == 1.0
        assert stats.median_abs_shift == 1.0

    def test_entries_and_exits(self):
        early = ranked({"a": 2.0, "b": 1.0})
        late = ranked({"a": 2.0, "c": 1.0})
        stats = shift_stats(early, late)
        assert stats.n_total == 1
        assert stats.entries == ("c",) and stats.exits == ("b",)

    def test_empty_intersection(self):
        with pytest.raises(EmptyIntersection):
            shift_stats(ranked({"a": 1.0}), ranked({"b": 1.0}))


class TestQuintileShift:
    def test_bottom_to_top(self):
        assert quintile_shift(5, 1) == 4

    def test_no_move(self):
        assert quintile_shift(3, 3) == 0

    def test_top_to_bottom(self):
        assert quintile_shift(1, 5) == -4

    def test_not_in_both(self):
        with pytest.raises(NotInBoth):
            quintile_shift_for(assignment({"a": 1}), assignment({"b": 1}), "a")


class TestTransitionMatrix:
    def test_identity(self):
        a = assignment({"a": 1, "b": 2, "c": 3, "d": 4, "e": 5})
        m = transition_matrix(a, a)
        assert m.trace == 5 and m.grand_total == 5
        assert m.pct_changed == 0.0

    def test_two_university_swap(self):
        early = assignment({"a": 1, "b": 2})
        late = assignment({"a": 2, "b": 1})
        m = transition_matrix(early, late)
        assert m.counts[0][1] == 1 and m.counts[1][0] == 1
        assert m.trace == 0

    def test_marginals(self):
        early = assignment({c: 1 + i % 5 for i, c in enumerate("abcdefghij")})
        late = assignment({c: 1 + (i * 3) % 5 for i, c in enumerate("abcdefghij")})
        m = transition_matrix(early, late)
        for q in range(5):
            assert m.row_totals[q] == sum(
                1 for v in early.entries.values() if v == q + 1)
            assert m.col_totals[q] == sum(
                1 for v in late.entries.values() if v == q + 1)
        assert sum(m.row_totals) == m.grand_total

    def test_reference_biology_matrix(self):
        rows = read_fixture("biology_transition_matrix.csv")
        counts = [[int(r[f"q{j}"]) for j in range(1, 6)] for r in rows]
        trace = sum(counts[i][i] for i in range(5))
        total = sum(sum(row) for row in counts)
        assert trace == 31 and total - trace == 19 and total == 50
        assert all(sum(row) == 10 for row in counts)
        assert all(sum(counts[i][j] for i in range(5)) == 10 for j in range(5))


class TestShiftTable:
    def make_table(self):
        cells = {
            "u1": {"A": -1, "B": 2},
            "u2": {"A": 0, "B": None},
            "u3": {"A": 1, "B": -1},
        }
        return ShiftTable(columns=["A", "B"], cells=cells)

    def test_row_totals(self):
        t = self.make_table()
        assert t.row_total("u1") == 1
        assert t.row_total("u2") == 0
        assert t.row_total("u3") == 0

    def test_column_pct(self):
        t = self.make_table()
        assert t.column_pct_changed("A") == pytest.approx(100 * 2 / 3)
        assert t.column_pct_changed("B") == pytest.approx(100.0)

    def test_balance_shares(self):
        shares = self.make_table().balance_shares()
        assert shares["positive"] == pytest.approx(100 / 3)
        assert shares["nil"] == pytest.approx(200 / 3)
        assert shares["negative"] == 0.0


class TestClassify:
    def test_all_up(self):
        assert classify_shifts(2, 3, 1) == ("all-up",)

    def test_all_down(self):
        assert classify_shifts(-2, -1, -3) == ("all-down",)

    def test_quality_up_quantity_down(self):
        assert classify_shifts(-3, -2, 3) == ("quality-up-quantity-down",)

    def test_no_flags(self):
        assert classify_shifts(0, 0, 0) == ()


class TestCorpusDriven:
    def setup_method(self):
        self.corpus = synth_corpus(GenConfig(seed=4, n_universities=8, n_sds=4,
                                             turnover_rate=0.1))
        self.baselines = build_baselines(self.corpus)
        self.scheme = ShareScheme()

    def test_shift_table_consistency(self):
        table = university_shift_table(self.corpus, "FSS", self.scheme,
                                       self.baselines, min_staff=1.0)
        for u in table.universities:
            numeric = [v for v in table.cells[u].values() if v is not None]
            assert all(abs(v) <= 4 for v in numeric)
            assert table.row_total(u) == sum(numeric)
        shares = table.balance_shares()
        assert sum(shares.values()) == pytest.approx(100.0)

    def test_shift_table_matches_rank_machinery(self):
        table = university_shift_table(self.corpus, "P", self.scheme,
                                       self.baselines, min_staff=1.0)
        for uda in self.corpus.taxonomy.uda_list:
            assigns = []
            for period in self.corpus.periods:
                rl = uda_rank_list(self.corpus, uda, "P", period, self.scheme,
                                   self.baselines, min_staff=1.0)
                assigns.append(assign_quintiles(rl))
            for u in self.corpus.universities:
                if u in assigns[0].entries and u in assigns[1].entries:
                    assert table.cells[u][uda] == quintile_shift(
                        assigns[0].entries[u], assigns[1].entries[u])
                else:
                    assert table.cells[u][uda] is None

    def test_pct_changed_equals_off_diagonal_share(self):
        for uda in self.corpus.taxonomy.uda_list:
            assigns = [assign_quintiles(uda_rank_list(
                self.corpus, uda, "FSS", period, self.scheme, self.baselines,
                min_staff=1.0)) for period in self.corpus.periods]
            m = transition_matrix(*assigns)
            both = set(assigns[0].entries) & set(assigns[1].entries)
            changed = sum(1 for u in both
                          if assigns[0].entries[u] != assigns[1].entries[u])
            assert m.pct_changed == pytest.approx(changed / len(both))

    def test_drilldown_against_direct_recomputation(self):
        from bibliorank.rankshift import sds_rank_list
        uda = self.corpus.taxonomy.uda_list[0]
        univ = self.corpus.universities_in_uda(uda)[0]
        shifts = sds_drilldown(self.corpus, univ, uda, "FSS", self.scheme,
                               self.baselines, min_staff=1.0)
        for sds, shift in shifts.items():
            assigns = [assign_quintiles(sds_rank_list(
                self.corpus, sds, "FSS", period, self.scheme, self.baselines,
                min_staff=1.0)) for period in self.corpus.periods]
            assert shift == (assigns[0].entries[univ] - assigns[1].entries[univ])

    def test_indicator_comparison_flags(self):
        uda = self.corpus.taxonomy.uda_list[0]
        univ = self.corpus.universities_in_uda(uda)[0]
        rows = indicator_comparison(self.corpus, univ, uda, self.scheme,
                                    self.baselines, min_staff=1.0)
        for sds, row in rows.items():
            assert row["flags"] == classify_shifts(row["P"], row["FP"], row["AQ"])
