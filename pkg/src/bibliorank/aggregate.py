"""Cross-field rescaling, university-UDA rollups, and national averages.

SDS-level unit scores are divided by the national staff-weighted mean of the
SDS, so 1.0 always reads as "national average". UDA scores are staff-weighted
convex combinations of those rescaled values.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import (AllAbsent, EmptyScope, NoPublications, NoStaffInUda,
                     ZeroBase, ZeroStaff)
from .indicators import (IndicatorScore, ShareScheme, researcher_indicator,
                         unit_indicator)
from .model import Corpus, Period, presence, staff


@dataclass(frozen=True)
class UdaScore:
    university_id: str
    uda: str
    indicator: str
    period: str
    value: float
    covered_staff: float


def sds_unit_scores(corpus: Corpus, sds: str, indicator: str, period: Period,
                    scheme: ShareScheme, baselines, basis: str = "median",
                    staff_mode: str = "prorata") -> dict:
    """Score every staffed unit of one SDS; None marks an absent (undefined) score."""
    out = {}
    for (u, s) in corpus.units():
        if s != sds:
            continue
        if staff(corpus, u, s, period, staff_mode) <= 0:
            continue
        try:
            out[(u, s)] = unit_indicator(corpus, u, s, indicator, period,
                                         scheme, baselines, basis, staff_mode)
        except NoPublications:
            out[(u, s)] = None
    return out


def rescale_sds(scores: dict) -> dict:
    """Divide each unit value by the SDS's national staff-weighted mean.

    Input maps unit -> IndicatorScore (None = absent). Absent units are
    dropped; the weighted mean runs over every unit with a defined score,
    including any below a reporting threshold.
    """
    defined = {u: s for u, s in scores.items() if s is not None}
    if not defined:
        raise AllAbsent("no unit has a defined score in this stratum")
    weight_total = math.fsum(s.staff for s in defined.values())
    if weight_total > 0:
        mean = math.fsum(s.staff * s.value for s in defined.values()) / weight_total
    else:
        mean = math.fsum(s.value for s in defined.values()) / len(defined)
    if mean == 0:
        return {u: 0.0 for u in defined}
    return {u: s.value / mean for u, s in defined.items()}


def uda_score(corpus: Corpus, university_id: str, uda: str, indicator: str,
              period: Period, scheme: ShareScheme, baselines,
              basis: str = "median", staff_mode: str = "prorata",
              rescaled_by_sds: dict | None = None) -> UdaScore:
    """Staff-weighted combination of the university's rescaled SDS scores.

    `rescaled_by_sds` (sds -> rescale_sds output) can be precomputed once per
    UDA and reused across universities.
    """
    contributions = []
    for sds in corpus.taxonomy.sds_in_uda(uda):
        w = staff(corpus, university_id, sds, period, staff_mode)
        if w <= 0:
            continue
        if rescaled_by_sds is not None and sds in rescaled_by_sds:
            rescaled = rescaled_by_sds[sds]
        else:
            unit_scores = sds_unit_scores(corpus, sds, indicator, period,
                                          scheme, baselines, basis, staff_mode)
            try:
                rescaled = rescale_sds(unit_scores)
            except AllAbsent:
                rescaled = {}
        value = rescaled.get((university_id, sds))
        contributions.append((sds, w, value))
    if not contributions:
        raise NoStaffInUda(f"{university_id} has no staff in UDA {uda}")
    covered = math.fsum(w for _, w, _ in contributions)
    # absent SDS scores are dropped and the weights renormalized
    scored = [(w, v) for _, w, v in contributions if v is not None]
    if not scored:
        raise NoStaffInUda(
            f"{university_id} has no scored SDS in UDA {uda} for {indicator}")
    w_total = math.fsum(w for w, _ in scored)
    value = math.fsum(w * v for w, v in scored) / w_total
    return UdaScore(university_id, uda, indicator, period.label, value, covered)


def national_weighted_average(corpus: Corpus, indicator: str, period: Period,
                              scheme: ShareScheme, baselines,
                              basis: str = "median", staff_mode: str = "prorata",
                              scope: str | None = None) -> float:
    """Staff-share weighted average of per-SDS mean researcher-level scores.

    `scope` restricts to one UDA; None covers every SDS in the taxonomy.
    """
    if scope is None:
        sds_codes = corpus.taxonomy.sds_list
    else:
        sds_codes = corpus.taxonomy.sds_in_uda(scope)
    per_sds = []
    for sds in sds_codes:
        active = [r for r in corpus.researchers
                  if r.sds == sds and presence(r, period, staff_mode) > 0]
        if not active:
            continue
        values = []
        for r in active:
            try:
                score = researcher_indicator(corpus, r.researcher_id, indicator,
                                             period, scheme, baselines, basis,
                                             staff_mode)
                values.append(score.value)
            except (ZeroStaff, NoPublications):
                continue
        if not values:
            continue
        sds_staff = math.fsum(presence(r, period, staff_mode) for r in active)
        per_sds.append((sds_staff, math.fsum(values) / len(values)))
    if not per_sds:
        raise EmptyScope(f"no staffed SDS in scope {scope!r} for {period.label}")
    total_staff = math.fsum(w for w, _ in per_sds)
    return math.fsum(w * m for w, m in per_sds) / total_staff


def percent_variation(v_early: float, v_late: float) -> float:
    """Relative change from early to late, in percent (unrounded)."""
    if v_early <= 0:
        raise ZeroBase(f"early value {v_early} is not positive")
    return 100.0 * (v_late - v_early) / v_early
