import pytest

from bibliorank.aggregate import (national_weighted_average, percent_variation,
                                  rescale_sds, sds_unit_scores, uda_score)
from bibliorank.baseline import build_baselines
from bibliorank.errors import AllAbsent, EmptyScope, NoStaffInUda, ZeroBase
from bibliorank.indicators import IndicatorScore, ShareScheme

from conftest import A, EARLY, LATE, P, R, make_corpus, make_taxonomy, read_fixture


def score(unit, value, staff):
    return IndicatorScore(unit, "P", "E", value, 0, staff)


class TestRescale:
    def test_single_unit(self):
        out = rescale_sds({("U1", "S1"): score(("U1", "S1"), 2.0, 3.0)})
        assert out[("U1", "S1")] == 1.0

    def test_two_equal_staff_units(self):
        out = rescale_sds({
            ("U1", "S1"): score(("U1", "S1"), 2.0, 5.0),
            ("U2", "S1"): score(("U2", "S1"), 4.0, 5.0),
        })
        assert out[("U1", "S1")] == pytest.approx(2 / 3)
        assert out[("U2", "S1")] == pytest.approx(4 / 3)

    def test_identical_values(self):
        out = rescale_sds({
            ("U1", "S1"): score(("U1", "S1"), 0.7, 1.0),
            ("U2", "S1"): score(("U2", "S1"), 0.7, 9.0),
        })
        assert all(v == pytest.approx(1.0) for v in out.values())

    def test_staff_weighting(self):
        out = rescale_sds({
            ("U1", "S1"): score(("U1", "S1"), 1.0, 3.0),
            ("U2", "S1"): score(("U2", "S1"), 5.0, 1.0),
        })
        # weighted mean (3*1 + 1*5)/4 = 2
        assert out[("U1", "S1")] == pytest.approx(0.5)
        assert out[("U2", "S1")] == pytest.approx(2.5)

    def test_absent_units_dropped(self):
        out = rescale_sds({
            ("U1", "S1"): score(("U1", "S1"), 2.0, 1.0),
            ("U2", "S1"): None,
        })
        assert ("U2", "S1") not in out

    def test_all_absent(self):
        with pytest.raises(AllAbsent):
            rescale_sds({("U1", "S1"): None})

    def test_weighted_mean_is_one(self):
        scores = {("U%d" % i, "S1"): score(("U%d" % i, "S1"), float(i), i + 0.5)
                  for i in range(1, 8)}
        out = rescale_sds(scores)
        num = sum(scores[u].staff * out[u] for u in out)
        den = sum(scores[u].staff for u in out)
        assert num / den == pytest.approx(1.0, abs=1e-9)


def two_sds_corpus():
    """U1 active in S1 and S2 of UDA A; U2 provides the national context."""
    tax = make_taxonomy({"S1": "A", "S2": "A"})
    researchers = (
        [R(f"a{i}", "S1", "U1") for i in range(6)]
        + [R(f"b{i}", "S2", "U1") for i in range(2)]
        + [R(f"c{i}", "S1", "U2") for i in range(4)]
        + [R(f"d{i}", "S2", "U2") for i in range(4)]
    )
    pubs, auths = [], []
    # S1: U1 produces 18 pubs (P=1.0), U2 produces 6 (P=0.5)
    def emit(prefix, rid, count):
        for i in range(count):
            pid = f"{prefix}{i}"
            pubs.append(P(pid, 2001 + i % 3, "CAT_X", 1, 1))
            auths.append(A(pid, rid))
    emit("pa", "a0", 18)
    emit("pc", "c0", 6)
    # S2: U1 produces 3 pubs (P=0.5), U2 produces 9 (P=0.75)
    emit("pb", "b0", 3)
    emit("pd", "d0", 9)
    return make_corpus(researchers, pubs, auths, tax)


class TestUdaScore:
    def setup_method(self):
        self.corpus = two_sds_corpus()
        self.baselines = build_baselines(self.corpus)
        self.scheme = ShareScheme()

    def test_single_sds_university(self):
        tax = make_taxonomy({"S1": "A"})
        corpus = make_corpus([R("r1")], [P("p1"), ], [A("p1", "r1")], tax)
        sc = uda_score(corpus, "U1", "A", "P", EARLY, self.scheme,
                       build_baselines(corpus))
        rescaled = rescale_sds(sds_unit_scores(corpus, "S1", "P", EARLY,
                                               self.scheme, build_baselines(corpus)))
        assert sc.value == pytest.approx(rescaled[("U1", "S1")])

    def test_hand_weighted_mean(self):
        # S1 national weighted mean: (6*1.0 + 4*0.5)/10 = 0.8 -> U1 rescaled 1.25
        # S2 national weighted mean: (2*0.5 + 4*0.75)/6 = 2/3 -> U1 rescaled 0.75
        # U1 staff in UDA A: S1=6, S2=2 -> weights 0.75, 0.25
        sc = uda_score(self.corpus, "U1", "A", "P", EARLY, self.scheme,
                       self.baselines)
        assert sc.value == pytest.approx(0.75 * 1.25 + 0.25 * 0.75)
        assert sc.covered_staff == pytest.approx(8.0)

    def test_all_rescaled_one_gives_one(self):
        tax = make_taxonomy({"S1": "A", "S2": "A"})
        researchers = [R("r1", "S1", "U1"), R("r2", "S2", "U1")]
        pubs = [P("p1"), P("p2")]
        auths = [A("p1", "r1"), A("p2", "r2")]
        corpus = make_corpus(researchers, pubs, auths, tax)
        sc = uda_score(corpus, "U1", "A", "P", EARLY, self.scheme,
                       build_baselines(corpus))
        assert sc.value == pytest.approx(1.0)

    def test_no_staff_in_uda(self):
        with pytest.raises(NoStaffInUda):
            uda_score(self.corpus, "U1", "A", "P", LATE, self.scheme,
                      self.baselines)

    def test_convexity(self):
        sc = uda_score(self.corpus, "U1", "A", "P", EARLY, self.scheme,
                       self.baselines)
        assert 0.75 <= sc.value <= 1.25


class TestNationalWeightedAverage:
    def test_single_sds_gives_mean(self):
        tax = make_taxonomy({"S1": "A"})
        researchers = [R("r1"), R("r2")]
        pubs = [P(f"p{i}", 2001 + i % 3) for i in range(6)]
        auths = [A(p.pub_id, "r1") for p in pubs[:3]] + \
                [A(p.pub_id, "r2") for p in pubs[3:]]
        corpus = make_corpus(researchers, pubs, auths, tax)
        avg = national_weighted_average(corpus, "P", EARLY, ShareScheme(),
                                        build_baselines(corpus))
        assert avg == pytest.approx(1.0)

    def test_staff_weighted_combination(self):
        # S1: 1 researcher with P=2.0; S2: 3 researchers with P=1.0 each
        tax = make_taxonomy({"S1": "A", "S2": "A"})
        researchers = [R("r1", "S1")] + [R(f"s{i}", "S2") for i in range(3)]
        pubs, auths = [], []
        for i in range(6):
            pubs.append(P(f"x{i}", 2001 + i % 3))
            auths.append(A(f"x{i}", "r1"))
        for j in range(3):
            for i in range(3):
                pubs.append(P(f"y{j}{i}", 2001 + i))
                auths.append(A(f"y{j}{i}", f"s{j}"))
        corpus = make_corpus(researchers, pubs, auths, tax)
        avg = national_weighted_average(corpus, "P", EARLY, ShareScheme(),
                                        build_baselines(corpus))
        assert avg == pytest.approx((1 * 2.0 + 3 * 1.0) / 4)

    def test_empty_scope(self):
        corpus = make_corpus([R("r1")], [], [], make_taxonomy({"S1": "A"}))
        with pytest.raises(EmptyScope):
            national_weighted_average(corpus, "P", LATE, ShareScheme(),
                                      build_baselines(make_corpus(
                                          [R("r1")], [P("p1")], [A("p1", "r1")],
                                          make_taxonomy({"S1": "A"}))))


class TestPercentVariation:
    def test_national_average_row(self):
        assert round(percent_variation(1.513, 1.825), 1) == 20.6

    def test_medicine_impact_row(self):
        assert round(percent_variation(1.021, 1.658), 1) == 62.4

    def test_no_change(self):
        assert percent_variation(1.3, 1.3) == 0.0

    def test_zero_base(self):
        with pytest.raises(ZeroBase):
            percent_variation(0.0, 1.0)

    def test_antisymmetry_identity(self):
        a, b = 1.21, 2.47
        assert percent_variation(a, b) == pytest.approx(
            -percent_variation(b, a) * b / a)
        assert (percent_variation(a, b) > 0) != (percent_variation(b, a) > 0)

    @pytest.mark.parametrize("fixture", ["uda_output_per_researcher.csv",
                                         "uda_standardized_impact.csv"])
    def test_reference_tables(self, fixture):
        for row in read_fixture(fixture):
            got = percent_variation(float(row["early"]), float(row["late"]))
            assert abs(round(got, 1) - float(row["printed_var_pct"])) <= 0.05, row
