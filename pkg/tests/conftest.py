import csv
from pathlib import Path

import pytest

from bibliorank.model import (Authorship, Corpus, Period, Publication,
                              Researcher, Taxonomy)

FIXTURES = Path(__file__).parent / "fixtures"

EARLY = Period("E", 2001, 2003)
LATE = Period("L", 2004, 2008)


def make_taxonomy(sds_to_uda=None, life=()):
    return Taxonomy(sds_to_uda=dict(sds_to_uda or {"S1": "A", "S2": "A"}),
                    life_science_sds=frozenset(life))


def make_corpus(researchers, publications, authorships, taxonomy=None,
                periods=(EARLY, LATE)):
    return Corpus(taxonomy or make_taxonomy(), researchers, publications,
                  authorships, periods)


def R(rid, sds="S1", univ="U1", years=(2001, 2002, 2003)):
    return Researcher(rid, sds, univ, frozenset(years))


def P(pid, year=2001, cat="CAT_X", cites=0, n_authors=1):
    return Publication(pid, year, cat, cites, n_authors)


def A(pid, rid, pos=1, byline="U1"):
    return Authorship(pid, rid, pos, byline)


def read_fixture(name):
    with open(FIXTURES / name, newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))


@pytest.fixture
def fixtures_dir():
    return FIXTURES


@pytest.fixture
def simple_corpus():
    """Two universities, two SDSs (S2 life science), hand-checkable output."""
    researchers = [
        R("r1", "S1", "U1", (2001, 2002, 2003, 2004, 2005, 2006, 2007, 2008)),
        R("r2", "S1", "U1", (2001, 2002)),
        R("r3", "S1", "U2", (2001, 2002, 2003, 2004, 2005, 2006, 2007, 2008)),
        R("r4", "S2", "U1", (2001, 2002, 2003, 2004, 2005, 2006, 2007, 2008)),
    ]
    publications = [
        P("p1", 2001, "CAT_X", cites=6, n_authors=1),
        P("p2", 2002, "CAT_X", cites=3, n_authors=4),
        P("p3", 2001, "CAT_X", cites=0, n_authors=2),
        P("p4", 2002, "CAT_Y", cites=4, n_authors=4),
        P("p5", 2003, "CAT_Y", cites=2, n_authors=3),
    ]
    authorships = [
        A("p1", "r1", 1, "U1"),
        A("p2", "r1", 1, "U1"),
        A("p3", "r3", 2, "U2"),
        A("p4", "r4", 1, "U1"),
        A("p5", "r4", 3, "U1"),
    ]
    return make_corpus(researchers, publications, authorships,
                       make_taxonomy(life=("S2",)))
