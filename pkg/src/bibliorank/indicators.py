"""Per-unit and per-researcher performance indicators.

Four measures per (university, SDS) unit and period:
  P    publications per researcher per year
  FP   author-share contributions per researcher per year
  AQ   mean standardized citation score over the unit's publications
  FSS  share-weighted standardized citation sum per researcher per year
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .baseline import BaselineTable, standardize_citations
from .errors import NoPublications, PositionOutOfRange, ZeroStaff
from .model import Authorship, Corpus, Period, Publication, presence, staff

INDICATORS = ("P", "FP", "AQ", "FSS")


@dataclass(frozen=True)
class ShareScheme:
    """Author-share weighting for life-science publication bylines.

    Position weights apply only to life-science fields; everywhere else a
    publication's credit splits equally across its authors. When every known
    byline carries the same university the split reverts to equal shares.
    """
    first_weight: float = 2.0
    last_weight: float = 2.0
    middle_weight: float = 1.0
    intramural_equal: bool = True

    def __post_init__(self):
        if min(self.first_weight, self.last_weight, self.middle_weight) <= 0:
            raise ValueError("share weights must be positive")


@dataclass(frozen=True)
class IndicatorScore:
    unit: object  # (university_id, sds) or researcher_id
    indicator: str
    period: str
    value: float
    n_pubs: int
    staff: float


def position_weight(position: int, n_authors: int, scheme: ShareScheme) -> float:
    if position == 1:
        return scheme.first_weight
    if position == n_authors:
        return scheme.last_weight
    return scheme.middle_weight


def fractional_share(authorship: Authorship, publication: Publication,
                     scheme: ShareScheme, is_life_science: bool,
                     known_bylines=None) -> float:
    """Credit share of one author on one publication, in (0, 1].

    `known_bylines` is the set of byline universities over the publication's
    corpus-resident authorships, used for the intramural fallback.
    """
    if authorship.pub_id != publication.pub_id:
        raise ValueError("authorship does not belong to publication")
    n = publication.n_authors_total
    if not (1 <= authorship.author_position <= n):
        raise PositionOutOfRange(
            f"position {authorship.author_position} outside [1, {n}] on {publication.pub_id}")
    if n == 1 or not is_life_science:
        return 1.0 / n
    if scheme.intramural_equal and known_bylines and len(set(known_bylines)) == 1:
        return 1.0 / n
    total = sum(position_weight(p, n, scheme) for p in range(1, n + 1))
    return position_weight(authorship.author_position, n, scheme) / total


def _period_pubs(corpus: Corpus, researchers, period: Period):
    """Distinct publications in the period with at least one authorship among
    the given researchers, plus those researchers' authorships on them."""
    rids = {r.researcher_id for r in researchers}
    pubs = {}
    auths = []
    for rid in sorted(rids):
        for a in corpus.authorships_by_researcher.get(rid, []):
            pub = corpus.publication_by_id[a.pub_id]
            if period.contains(pub.year):
                pubs[pub.pub_id] = pub
                auths.append(a)
    return [pubs[k] for k in sorted(pubs)], auths


def _share_of(corpus: Corpus, a: Authorship, scheme: ShareScheme, sds: str) -> float:
    pub = corpus.publication_by_id[a.pub_id]
    bylines = [x.byline_university_id for x in corpus.authorships_by_pub[a.pub_id]]
    return fractional_share(a, pub, scheme, corpus.taxonomy.is_life_science(sds),
                            known_bylines=bylines)


def unit_P(corpus: Corpus, university_id: str, sds: str, period: Period,
           staff_mode: str = "prorata") -> IndicatorScore:
    n_staff = staff(corpus, university_id, sds, period, staff_mode)
    if n_staff <= 0:
        raise ZeroStaff(f"({university_id}, {sds}) has no staff in {period.label}")
    pubs, _ = _period_pubs(corpus, corpus.unit_researchers(university_id, sds), period)
    value = len(pubs) / (n_staff * period.length_years)
    return IndicatorScore((university_id, sds), "P", period.label, value, len(pubs), n_staff)


def unit_FP(corpus: Corpus, university_id: str, sds: str, period: Period,
            scheme: ShareScheme, staff_mode: str = "prorata") -> IndicatorScore:
    n_staff = staff(corpus, university_id, sds, period, staff_mode)
    if n_staff <= 0:
        raise ZeroStaff(f"({university_id}, {sds}) has no staff in {period.label}")
    pubs, auths = _period_pubs(corpus, corpus.unit_researchers(university_id, sds), period)
    # fsum keeps the result independent of summation order, so equal units
    # tie exactly in downstream rankings
    total = math.fsum(_share_of(corpus, a, scheme, sds) for a in auths)
    value = total / (n_staff * period.length_years)
    return IndicatorScore((university_id, sds), "FP", period.label, value, len(pubs), n_staff)


def unit_AQ(corpus: Corpus, university_id: str, sds: str, period: Period,
            baselines: BaselineTable, basis: str = "median",
            staff_mode: str = "prorata", fallback_events=None) -> IndicatorScore:
    n_staff = staff(corpus, university_id, sds, period, staff_mode)
    pubs, _ = _period_pubs(corpus, corpus.unit_researchers(university_id, sds), period)
    if not pubs:
        raise NoPublications(
            f"({university_id}, {sds}) has no publications in {period.label}")
    scores = [standardize_citations(p, baselines, basis, fallback_events) for p in pubs]
    value = math.fsum(scores) / len(scores)
    return IndicatorScore((university_id, sds), "AQ", period.label, value, len(pubs), n_staff)


def unit_FSS(corpus: Corpus, university_id: str, sds: str, period: Period,
             scheme: ShareScheme, baselines: BaselineTable, basis: str = "median",
             staff_mode: str = "prorata", fallback_events=None) -> IndicatorScore:
    n_staff = staff(corpus, university_id, sds, period, staff_mode)
    if n_staff <= 0:
        raise ZeroStaff(f"({university_id}, {sds}) has no staff in {period.label}")
    pubs, auths = _period_pubs(corpus, corpus.unit_researchers(university_id, sds), period)
    total = math.fsum(
        _share_of(corpus, a, scheme, sds)
        * standardize_citations(corpus.publication_by_id[a.pub_id], baselines,
                                basis, fallback_events)
        for a in auths)
    value = total / (n_staff * period.length_years)
    return IndicatorScore((university_id, sds), "FSS", period.label, value, len(pubs), n_staff)


def unit_indicator(corpus: Corpus, university_id: str, sds: str, indicator: str,
                   period: Period, scheme: ShareScheme, baselines: BaselineTable,
                   basis: str = "median", staff_mode: str = "prorata") -> IndicatorScore:
    if indicator == "P":
        return unit_P(corpus, university_id, sds, period, staff_mode)
    if indicator == "FP":
        return unit_FP(corpus, university_id, sds, period, scheme, staff_mode)
    if indicator == "AQ":
        return unit_AQ(corpus, university_id, sds, period, baselines, basis, staff_mode)
    if indicator == "FSS":
        return unit_FSS(corpus, university_id, sds, period, scheme, baselines,
                        basis, staff_mode)
    raise ValueError(f"unknown indicator {indicator!r}")


def researcher_indicator(corpus: Corpus, researcher_id: str, indicator: str,
                         period: Period, scheme: ShareScheme, baselines: BaselineTable,
                         basis: str = "median",
                         staff_mode: str = "prorata") -> IndicatorScore:
    """Same formulas with a single researcher as the unit (staff = own presence)."""
    r = corpus.researcher_by_id[researcher_id]
    own = presence(r, period, staff_mode)
    pubs, auths = _period_pubs(corpus, [r], period)
    if indicator == "AQ":
        if not pubs:
            raise NoPublications(f"{researcher_id} has no publications in {period.label}")
        scores = [standardize_citations(p, baselines, basis) for p in pubs]
        value = math.fsum(scores) / len(scores)
        return IndicatorScore(researcher_id, "AQ", period.label, value, len(pubs), own)
    if own <= 0:
        raise ZeroStaff(f"{researcher_id} inactive in {period.label}")
    denom = own * period.length_years
    if indicator == "P":
        value = len(pubs) / denom
    elif indicator == "FP":
        value = math.fsum(_share_of(corpus, a, scheme, r.sds) for a in auths) / denom
    elif indicator == "FSS":
        value = math.fsum(
            _share_of(corpus, a, scheme, r.sds)
            * standardize_citations(corpus.publication_by_id[a.pub_id], baselines, basis)
            for a in auths) / denom
    else:
        raise ValueError(f"unknown indicator {indicator!r}")
    return IndicatorScore(researcher_id, indicator, period.label, value, len(pubs), own)
