"""Ranking lists, quintile assignment, and every cross-period comparison.

Cross-period statistics run over the intersection of universities eligible in
both periods; entrants and exits are listed separately, never mixed into the
rank-shift numbers.
"""
from __future__ import annotations

import statistics
from dataclasses import dataclass

from .aggregate import rescale_sds, sds_unit_scores, uda_score
from .errors import (AllAbsent, EmptyIntersection, NoEligibleUniversities,
                     NoStaffInUda, NotInBoth)
from .model import Corpus, Period, uda_staff

DEFAULT_MIN_STAFF = 6.0
N_QUINTILES = 5


@dataclass(frozen=True)
class RankEntry:
    university_id: str
    value: float
    rank: int


@dataclass(frozen=True)
class RankList:
    uda: str
    indicator: str
    period: str
    entries: tuple
    min_staff_threshold: float

    def rank_of(self, university_id):
        for e in self.entries:
            if e.university_id == university_id:
                return e.rank
        return None

    @property
    def universities(self):
        return [e.university_id for e in self.entries]


@dataclass(frozen=True)
class QuintileAssignment:
    uda: str
    indicator: str
    period: str
    entries: dict  # university_id -> quintile, 1 = top
    sizes: tuple   # realized group sizes, top first


@dataclass(frozen=True)
class ShiftStats:
    n_total: int
    n_changed: int
    pct_changed: float
    max_abs_shift: int
    mean_abs_shift: float
    median_abs_shift: float
    entries: tuple = ()  # eligible late only
    exits: tuple = ()    # eligible early only


@dataclass(frozen=True)
class TransitionMatrix:
    counts: tuple  # 5x5 nested tuples, row = early quintile, col = late
    row_totals: tuple
    col_totals: tuple
    grand_total: int

    @property
    def trace(self) -> int:
        return sum(self.counts[i][i] for i in range(N_QUINTILES))

    @property
    def pct_changed(self) -> float:
        return 1.0 - self.trace / self.grand_total


def rank_list(scores: dict, uda: str = "", indicator: str = "", period: str = "",
              min_staff: float = DEFAULT_MIN_STAFF) -> RankList:
    """Competition-ranked list over eligible universities.

    `scores` maps university_id -> (value, staff); staff below the threshold
    or a None value excludes the university. Equal values share the smaller
    rank and are ordered by university_id for display.
    """
    eligible = [(u, v) for u, (v, s) in scores.items()
                if s >= min_staff and v is not None]
    if not eligible:
        raise NoEligibleUniversities(
            f"no university meets the staff threshold {min_staff} in {uda or 'list'}")
    eligible.sort(key=lambda t: (-t[1], t[0]))
    entries = []
    for i, (u, v) in enumerate(eligible):
        if i > 0 and v == eligible[i - 1][1]:
            rank = entries[-1].rank
        else:
            rank = i + 1
        entries.append(RankEntry(u, v, rank))
    return RankList(uda, indicator, period, tuple(entries), min_staff)


def assign_quintiles(ranked: RankList) -> QuintileAssignment:
    """Split the ranked order into five contiguous groups, 1 = top.

    For n = 5q + r the first r groups take q + 1 members. A tie block never
    straddles a boundary: the whole block stays in the better quintile and the
    groups below shrink.
    """
    n = len(ranked.entries)
    q, r = divmod(n, N_QUINTILES)
    targets = [q + 1 if i < r else q for i in range(N_QUINTILES)]
    boundaries = []
    acc = 0
    for t in targets:
        acc += t
        boundaries.append(acc)

    # group entries into tie blocks (same value -> same block)
    blocks = []
    for e in ranked.entries:
        if blocks and blocks[-1][0].value == e.value:
            blocks[-1].append(e)
        else:
            blocks.append([e])

    entries = {}
    sizes = [0] * N_QUINTILES
    placed = 0
    for block in blocks:
        quintile = next(i for i, b in enumerate(boundaries) if placed < b)
        for e in block:
            entries[e.university_id] = quintile + 1
        sizes[quintile] += len(block)
        placed += len(block)
    return QuintileAssignment(ranked.uda, ranked.indicator, ranked.period,
                              entries, tuple(sizes))


def shift_stats(list_early: RankList, list_late: RankList) -> ShiftStats:
    """Absolute rank-shift statistics over the intersection of both lists."""
    early = {e.university_id: e.rank for e in list_early.entries}
    late = {e.university_id: e.rank for e in list_late.entries}
    both = sorted(set(early) & set(late))
    if not both:
        raise EmptyIntersection("no university is eligible in both periods")
    deltas = [abs(early[u] - late[u]) for u in both]
    n_changed = sum(1 for d in deltas if d > 0)
    return ShiftStats(
        n_total=len(both),
        n_changed=n_changed,
        pct_changed=n_changed / len(both),
        max_abs_shift=max(deltas),
        mean_abs_shift=sum(deltas) / len(deltas),
        median_abs_shift=float(statistics.median(deltas)),
        entries=tuple(sorted(set(late) - set(early))),
        exits=tuple(sorted(set(early) - set(late))),
    )


def quintile_shift(q_early: int, q_late: int) -> int:
    """Early quintile minus late quintile; positive means improvement."""
    return q_early - q_late


def quintile_shift_for(assign_early: QuintileAssignment,
                       assign_late: QuintileAssignment, university_id: str) -> int:
    if (university_id not in assign_early.entries
            or university_id not in assign_late.entries):
        raise NotInBoth(f"{university_id} not assigned in both periods")
    return quintile_shift(assign_early.entries[university_id],
                          assign_late.entries[university_id])


def transition_matrix(assign_early: QuintileAssignment,
                      assign_late: QuintileAssignment) -> TransitionMatrix:
    both = sorted(set(assign_early.entries) & set(assign_late.entries))
    if not both:
        raise EmptyIntersection("no university is assigned in both periods")
    counts = [[0] * N_QUINTILES for _ in range(N_QUINTILES)]
    for u in both:
        counts[assign_early.entries[u] - 1][assign_late.entries[u] - 1] += 1
    return TransitionMatrix(
        counts=tuple(tuple(row) for row in counts),
        row_totals=tuple(sum(row) for row in counts),
        col_totals=tuple(sum(counts[i][j] for i in range(N_QUINTILES))
                         for j in range(N_QUINTILES)),
        grand_total=len(both),
    )


# ---------------------------------------------------------------------------
# corpus-driven orchestration


def uda_rank_list(corpus: Corpus, uda: str, indicator: str, period: Period,
                  scheme, baselines, basis: str = "median",
                  min_staff: float = DEFAULT_MIN_STAFF,
                  staff_mode: str = "prorata") -> RankList:
    """Rank universities within a UDA by their rolled-up indicator score."""
    rescaled_by_sds = {}
    for sds in corpus.taxonomy.sds_in_uda(uda):
        unit_scores = sds_unit_scores(corpus, sds, indicator, period,
                                      scheme, baselines, basis, staff_mode)
        if not unit_scores:
            continue
        try:
            rescaled_by_sds[sds] = rescale_sds(unit_scores)
        except AllAbsent:
            continue
    scores = {}
    for u in corpus.universities_in_uda(uda):
        total = uda_staff(corpus, u, uda, period, staff_mode)
        try:
            score = uda_score(corpus, u, uda, indicator, period, scheme,
                              baselines, basis, staff_mode,
                              rescaled_by_sds=rescaled_by_sds)
        except NoStaffInUda:
            continue
        scores[u] = (score.value, total)
    return rank_list(scores, uda, indicator, period.label, min_staff)


def sds_rank_list(corpus: Corpus, sds: str, indicator: str, period: Period,
                  scheme, baselines, basis: str = "median",
                  min_staff: float = DEFAULT_MIN_STAFF,
                  staff_mode: str = "prorata") -> RankList:
    """Rank universities within a single SDS by the raw unit score."""
    unit_scores = sds_unit_scores(corpus, sds, indicator, period,
                                  scheme, baselines, basis, staff_mode)
    scores = {u: (s.value if s is not None else None,
                  s.staff if s is not None else 0.0)
              for (u, _), s in unit_scores.items()}
    # absent scores still need their staff for the threshold check; they are
    # excluded from ranking either way
    return rank_list(scores, sds, indicator, period.label, min_staff)


@dataclass
class ShiftTable:
    """University x column matrix of quintile shifts with totals and shares.

    `cells[university][column]` is an integer shift or None (ineligible in at
    least one period, printed as "n.a.").
    """
    columns: list
    cells: dict
    indicator: str = ""

    def row_total(self, university_id) -> int:
        return sum(v for v in self.cells[university_id].values() if v is not None)

    @property
    def universities(self):
        return sorted(self.cells)

    def column_pct_changed(self, column) -> float:
        """Share of universities with a nonzero shift, over numeric cells."""
        numeric = [row[column] for row in self.cells.values()
                   if row.get(column) is not None]
        if not numeric:
            return 0.0
        return 100.0 * sum(1 for v in numeric if v != 0) / len(numeric)

    def overall_pct_changed(self) -> float:
        """Share of universities whose row total is nonzero."""
        totals = [self.row_total(u) for u in self.cells]
        return 100.0 * sum(1 for t in totals if t != 0) / len(totals)

    def balance_shares(self) -> dict:
        """Shares of universities with negative / positive / nil row totals."""
        totals = [self.row_total(u) for u in self.cells]
        n = len(totals)
        return {
            "negative": 100.0 * sum(1 for t in totals if t < 0) / n,
            "positive": 100.0 * sum(1 for t in totals if t > 0) / n,
            "nil": 100.0 * sum(1 for t in totals if t == 0) / n,
        }


def university_shift_table(corpus: Corpus, indicator: str, scheme, baselines,
                           basis: str = "median",
                           min_staff: float = DEFAULT_MIN_STAFF,
                           staff_mode: str = "prorata") -> ShiftTable:
    """Quintile shift of every university in every UDA between the two periods."""
    udas = corpus.taxonomy.uda_list
    cells = {u: {} for u in corpus.universities}
    for uda in udas:
        assignments = []
        for period in corpus.periods:
            try:
                ranked = uda_rank_list(corpus, uda, indicator, period, scheme,
                                       baselines, basis, min_staff, staff_mode)
                assignments.append(assign_quintiles(ranked))
            except NoEligibleUniversities:
                assignments.append(None)
        a_early, a_late = assignments
        for u in corpus.universities:
            if (a_early is None or a_late is None
                    or u not in a_early.entries or u not in a_late.entries):
                cells[u][uda] = None
            else:
                cells[u][uda] = quintile_shift(a_early.entries[u], a_late.entries[u])
    return ShiftTable(columns=list(udas), cells=cells, indicator=indicator)


def sds_drilldown(corpus: Corpus, university_id: str, uda: str, indicator: str,
                  scheme, baselines, basis: str = "median",
                  min_staff: float = DEFAULT_MIN_STAFF,
                  staff_mode: str = "prorata") -> dict:
    """Per-SDS quintile shifts of one university within a UDA.

    Only SDSs where the university is eligible in both periods appear.
    """
    out = {}
    for sds in corpus.taxonomy.sds_in_uda(uda):
        assignments = []
        for period in corpus.periods:
            try:
                ranked = sds_rank_list(corpus, sds, indicator, period, scheme,
                                       baselines, basis, min_staff, staff_mode)
                assignments.append(assign_quintiles(ranked))
            except NoEligibleUniversities:
                assignments.append(None)
        a_early, a_late = assignments
        if (a_early is not None and a_late is not None
                and university_id in a_early.entries
                and university_id in a_late.entries):
            out[sds] = quintile_shift(a_early.entries[university_id],
                                      a_late.entries[university_id])
    return out


def classify_shifts(p_shift: int, fp_shift: int, aq_shift: int) -> tuple:
    """Pattern flags for one SDS's (P, FP, AQ) quintile-shift triple."""
    flags = []
    if p_shift > 0 and fp_shift > 0 and aq_shift > 0:
        flags.append("all-up")
    if p_shift < 0 and fp_shift < 0 and aq_shift < 0:
        flags.append("all-down")
    if aq_shift > 0 and fp_shift < 0:
        flags.append("quality-up-quantity-down")
    return tuple(flags)


def indicator_comparison(corpus: Corpus, university_id: str, uda: str,
                         scheme, baselines, basis: str = "median",
                         min_staff: float = DEFAULT_MIN_STAFF,
                         staff_mode: str = "prorata") -> dict:
    """SDS x {P, FP, AQ} quintile shifts with pattern flags.

    Returns sds -> {"P": int, "FP": int, "AQ": int, "flags": tuple}; SDSs
    missing any of the three shift values are omitted.
    """
    per_indicator = {
        ind: sds_drilldown(corpus, university_id, uda, ind, scheme, baselines,
                           basis, min_staff, staff_mode)
        for ind in ("P", "FP", "AQ")
    }
    out = {}
    for sds in corpus.taxonomy.sds_in_uda(uda):
        if all(sds in per_indicator[ind] for ind in ("P", "FP", "AQ")):
            p, fp, aq = (per_indicator[ind][sds] for ind in ("P", "FP", "AQ"))
            out[sds] = {"P": p, "FP": fp, "AQ": aq,
                        "flags": classify_shifts(p, fp, aq)}
    return out
