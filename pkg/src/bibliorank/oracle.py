"""Independent brute-force recomputation of the whole pipeline.

Everything here is written as direct nested loops over raw records and shares
no computational code with the production modules; it exists purely so the
two paths can be checked against each other on small corpora.
"""
from __future__ import annotations

import math

from .errors import TooLarge
from .model import Corpus

MAX_RECORDS = 10_000
INDICATORS = ("P", "FP", "AQ", "FSS")


def _median(values):
    s = sorted(values)
    n = len(s)
    if n % 2 == 1:
        return float(s[n // 2])
    return (s[n // 2 - 1] + s[n // 2]) / 2.0


def _mean(values):
    # exact summation so the result does not depend on iteration order
    return math.fsum(values) / len(values)


class Oracle:
    def __init__(self, corpus: Corpus, first_weight=2.0, last_weight=2.0,
                 middle_weight=1.0, intramural_equal=True, basis="median",
                 min_staff=6.0, staff_mode="prorata"):
        n_records = (len(corpus.researchers) + len(corpus.publications)
                     + len(corpus.authorships))
        if n_records > MAX_RECORDS:
            raise TooLarge(f"{n_records} records exceeds oracle limit {MAX_RECORDS}")
        self.corpus = corpus
        self.weights = (first_weight, middle_weight, last_weight)
        self.intramural_equal = intramural_equal
        self.basis = basis
        self.min_staff = min_staff
        self.staff_mode = staff_mode
        self._baselines = self._build_baselines()

    # -- primitives ---------------------------------------------------------

    def _build_baselines(self):
        strata = {}
        for p in self.corpus.publications:
            strata.setdefault((p.subject_category, p.year), []).append(p.citations)
        table = {}
        for key, cites in strata.items():
            table[key] = {"median": _median(cites), "mean": _mean(cites)}
        return table

    def _standardized(self, pub):
        base = self._baselines[(pub.subject_category, pub.year)][self.basis]
        if base > 0:
            return pub.citations / base
        if pub.citations == 0:
            return 0.0
        positives = [e[self.basis] for (cat, _), e in self._baselines.items()
                     if cat == pub.subject_category and e[self.basis] > 0]
        return pub.citations / (min(positives) if positives else 1.0)

    def _presence(self, researcher, period):
        overlap = 0
        for y in researcher.active_years:
            if period.start_year <= y <= period.end_year:
                overlap += 1
        if overlap == 0:
            return 0.0
        if self.staff_mode == "headcount":
            return 1.0
        return overlap / (period.end_year - period.start_year + 1)

    def _share(self, authorship, pub, sds):
        n = pub.n_authors_total
        if n == 1 or sds not in self.corpus.taxonomy.life_science_sds:
            return 1.0 / n
        if self.intramural_equal:
            bylines = set()
            for a in self.corpus.authorships:
                if a.pub_id == pub.pub_id:
                    bylines.add(a.byline_university_id)
            if len(bylines) == 1:
                return 1.0 / n
        first, middle, last = self.weights
        total = 0.0
        for pos in range(1, n + 1):
            total += first if pos == 1 else (last if pos == n else middle)
        pos = authorship.author_position
        w = first if pos == 1 else (last if pos == n else middle)
        return w / total

    # -- indicator formulas over an arbitrary researcher set ----------------

    def _scores_for(self, researchers, staff_value, period):
        """All four indicator values for one group of researchers."""
        years = period.end_year - period.start_year + 1
        rids = {r.researcher_id for r in researchers}
        sds_of = {r.researcher_id: r.sds for r in researchers}
        pub_ids = set()
        fp_terms = []
        fss_terms = []
        for a in self.corpus.authorships:
            if a.researcher_id not in rids:
                continue
            pub = None
            for p in self.corpus.publications:
                if p.pub_id == a.pub_id:
                    pub = p
                    break
            if not (period.start_year <= pub.year <= period.end_year):
                continue
            pub_ids.add(pub.pub_id)
            share = self._share(a, pub, sds_of[a.researcher_id])
            fp_terms.append(share)
            fss_terms.append(share * self._standardized(pub))
        out = {}
        if staff_value > 0:
            out["P"] = len(pub_ids) / (staff_value * years)
            out["FP"] = math.fsum(fp_terms) / (staff_value * years)
            out["FSS"] = math.fsum(fss_terms) / (staff_value * years)
        else:
            out["P"] = out["FP"] = out["FSS"] = None
        if pub_ids:
            aq_terms = [self._standardized(p) for p in self.corpus.publications
                        if p.pub_id in pub_ids]
            out["AQ"] = math.fsum(aq_terms) / len(pub_ids)
        else:
            out["AQ"] = None
        return out

    # -- full recomputation -------------------------------------------------

    def unit_scores(self):
        """(university, sds, indicator, period label) -> value | None,
        plus unit staff under key (university, sds, 'staff', label)."""
        out = {}
        units = sorted({(r.university_id, r.sds) for r in self.corpus.researchers})
        for (u, s) in units:
            members = [r for r in self.corpus.researchers
                       if r.university_id == u and r.sds == s]
            for period in self.corpus.periods:
                staff_value = math.fsum(self._presence(r, period) for r in members)
                out[(u, s, "staff", period.label)] = staff_value
                if staff_value <= 0:
                    for ind in INDICATORS:
                        out[(u, s, ind, period.label)] = None
                    continue
                scores = self._scores_for(members, staff_value, period)
                for ind in INDICATORS:
                    out[(u, s, ind, period.label)] = scores[ind]
        return out

    def researcher_scores(self):
        out = {}
        for r in self.corpus.researchers:
            for period in self.corpus.periods:
                own = self._presence(r, period)
                scores = self._scores_for([r], own, period)
                for ind in INDICATORS:
                    out[(r.researcher_id, ind, period.label)] = scores[ind]
        return out

    def uda_scores(self, unit_scores=None):
        """(university, uda, indicator, period label) -> value | None."""
        us = unit_scores if unit_scores is not None else self.unit_scores()
        tax = self.corpus.taxonomy
        out = {}
        for uda in sorted(set(tax.sds_to_uda.values())):
            sds_codes = sorted(s for s, u in tax.sds_to_uda.items() if u == uda)
            # per-SDS national staff-weighted means over staffed, defined units
            rescaled = {}
            for ind in INDICATORS:
                for sds in sds_codes:
                    for period in self.corpus.periods:
                        num_terms = []
                        den_terms = []
                        for univ in self.corpus.universities:
                            st = us.get((univ, sds, "staff", period.label))
                            v = us.get((univ, sds, ind, period.label))
                            if st and st > 0 and v is not None:
                                num_terms.append(st * v)
                                den_terms.append(st)
                        den = math.fsum(den_terms)
                        if den == 0:
                            continue
                        mean = math.fsum(num_terms) / den
                        for univ in self.corpus.universities:
                            st = us.get((univ, sds, "staff", period.label))
                            v = us.get((univ, sds, ind, period.label))
                            if st and st > 0 and v is not None:
                                rescaled[(univ, sds, ind, period.label)] = (
                                    0.0 if mean == 0 else v / mean)
            for univ in self.corpus.universities:
                for ind in INDICATORS:
                    for period in self.corpus.periods:
                        w_terms = []
                        v_terms = []
                        any_staff = False
                        for sds in sds_codes:
                            st = us.get((univ, sds, "staff", period.label))
                            if not st or st <= 0:
                                continue
                            any_staff = True
                            rv = rescaled.get((univ, sds, ind, period.label))
                            if rv is None:
                                continue
                            w_terms.append(st)
                            v_terms.append(st * rv)
                        w_total = math.fsum(w_terms)
                        if not any_staff or w_total == 0:
                            out[(univ, uda, ind, period.label)] = None
                        else:
                            out[(univ, uda, ind, period.label)] = (
                                math.fsum(v_terms) / w_total)
        return out

    def _rank(self, values):
        """values: {name: score}; competition ranks, equal scores share rank."""
        ordered = sorted(values.items(), key=lambda t: (-t[1], t[0]))
        ranks = {}
        for i, (name, score) in enumerate(ordered):
            if i > 0 and score == ordered[i - 1][1]:
                ranks[name] = ranks[ordered[i - 1][0]]
            else:
                ranks[name] = i + 1
        return ranks

    def _quintiles(self, values):
        ordered = sorted(values.items(), key=lambda t: (-t[1], t[0]))
        n = len(ordered)
        q, r = divmod(n, 5)
        bounds = []
        acc = 0
        for i in range(5):
            acc += q + 1 if i < r else q
            bounds.append(acc)
        out = {}
        i = 0
        placed = 0
        while i < n:
            j = i
            while j < n and ordered[j][1] == ordered[i][1]:
                j += 1
            quintile = 1
            for b in bounds:
                if placed < b:
                    break
                quintile += 1
            for k in range(i, j):
                out[ordered[k][0]] = quintile
            placed += j - i
            i = j
        return out

    def uda_rank_tables(self, unit_scores=None, uda_scores=None):
        """(uda, indicator, period label) -> (ranks dict, quintiles dict)."""
        us = unit_scores if unit_scores is not None else self.unit_scores()
        uda_sc = uda_scores if uda_scores is not None else self.uda_scores(us)
        tax = self.corpus.taxonomy
        out = {}
        for uda in sorted(set(tax.sds_to_uda.values())):
            sds_codes = sorted(s for s, u in tax.sds_to_uda.items() if u == uda)
            for ind in INDICATORS:
                for period in self.corpus.periods:
                    eligible = {}
                    for univ in self.corpus.universities:
                        total = 0.0
                        for sds in sds_codes:
                            total += us.get((univ, sds, "staff", period.label)) or 0.0
                        v = uda_sc.get((univ, uda, ind, period.label))
                        if total >= self.min_staff and v is not None:
                            eligible[univ] = v
                    if eligible:
                        out[(uda, ind, period.label)] = (
                            self._rank(eligible), self._quintiles(eligible))
        return out

    def sds_rank_tables(self, unit_scores=None):
        """(sds, indicator, period label) -> (ranks dict, quintiles dict)."""
        us = unit_scores if unit_scores is not None else self.unit_scores()
        out = {}
        for sds in sorted(self.corpus.taxonomy.sds_to_uda):
            for ind in INDICATORS:
                for period in self.corpus.periods:
                    eligible = {}
                    for univ in self.corpus.universities:
                        st = us.get((univ, sds, "staff", period.label))
                        v = us.get((univ, sds, ind, period.label))
                        if st and st >= self.min_staff and v is not None:
                            eligible[univ] = v
                    if eligible:
                        out[(sds, ind, period.label)] = (
                            self._rank(eligible), self._quintiles(eligible))
        return out

    def quintile_shifts(self, rank_tables):
        """(key, indicator) -> {name: early quintile - late quintile}."""
        early_label = self.corpus.periods[0].label
        late_label = self.corpus.periods[1].label
        out = {}
        for (key, ind, label), (_, quintiles) in rank_tables.items():
            if label != early_label:
                continue
            late = rank_tables.get((key, ind, late_label))
            if late is None:
                continue
            shifts = {}
            for name, q_early in quintiles.items():
                if name in late[1]:
                    shifts[name] = q_early - late[1][name]
            out[(key, ind)] = shifts
        return out
