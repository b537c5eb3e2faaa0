"""Reading and writing the corpus fileset (CSV, with JSON equivalents)."""
from __future__ import annotations

import csv
import json
from pathlib import Path

from .errors import DanglingReference, DuplicateKey, MissingFile, SchemaError
from .model import Authorship, Corpus, Period, Publication, Researcher, Taxonomy

FILE_STEMS = ("researchers", "publications", "authorships", "taxonomy", "periods")


def _find_file(input_dir: Path, stem: str) -> Path:
    for ext in (".csv", ".json"):
        p = input_dir / f"{stem}{ext}"
        if p.exists():
            return p
    raise MissingFile(f"{stem}.csv (or .json) not found in {input_dir}")


def _read_rows(path: Path, required: tuple) -> list:
    """Rows as dicts; both formats must carry exactly the documented field names."""
    if path.suffix == ".json":
        with open(path, encoding="utf-8") as fh:
            rows = json.load(fh)
        if not isinstance(rows, list):
            raise SchemaError("expected a JSON array of objects", path=path)
    else:
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.DictReader(fh)
            if reader.fieldnames is None:
                raise SchemaError("missing header row", path=path)
            rows = list(reader)
    for i, row in enumerate(rows, start=2 if path.suffix == ".csv" else 1):
        missing = [c for c in required if c not in row or row[c] is None]
        if missing:
            raise SchemaError(f"missing columns {missing}", path=path, row=i)
    return rows


def _to_int(value, name, path, row, minimum=None):
    try:
        v = int(value)
    except (TypeError, ValueError):
        raise SchemaError(f"{name}={value!r} is not an integer", path=path, row=row)
    if minimum is not None and v < minimum:
        raise SchemaError(f"{name}={v} below minimum {minimum}", path=path, row=row)
    return v


def _parse_years(value, path, row):
    if isinstance(value, list):
        years = [_to_int(y, "active_years", path, row) for y in value]
    else:
        parts = [p for p in str(value).split(";") if p != ""]
        years = [_to_int(p, "active_years", path, row) for p in parts]
    if not years:
        raise SchemaError("active_years is empty", path=path, row=row)
    return frozenset(years)


def load_corpus(input_dir) -> Corpus:
    """Load and cross-validate the five-file corpus fileset from a directory."""
    input_dir = Path(input_dir)
    if not input_dir.is_dir():
        raise MissingFile(f"input directory {input_dir} does not exist")

    tax_path = _find_file(input_dir, "taxonomy")
    sds_to_uda, life = {}, set()
    for i, row in enumerate(_read_rows(tax_path, ("sds", "uda", "is_life_science")), start=2):
        sds = str(row["sds"])
        if sds in sds_to_uda:
            raise DuplicateKey(f"taxonomy: SDS {sds} listed twice")
        sds_to_uda[sds] = str(row["uda"])
        if _to_int(row["is_life_science"], "is_life_science", tax_path, i) not in (0, 1):
            raise SchemaError("is_life_science must be 0 or 1", path=tax_path, row=i)
        if int(row["is_life_science"]):
            life.add(sds)
    taxonomy = Taxonomy(sds_to_uda=sds_to_uda, life_science_sds=frozenset(life))

    per_path = _find_file(input_dir, "periods")
    periods = []
    for i, row in enumerate(_read_rows(per_path, ("label", "start_year", "end_year")), start=2):
        periods.append(Period(
            label=str(row["label"]),
            start_year=_to_int(row["start_year"], "start_year", per_path, i),
            end_year=_to_int(row["end_year"], "end_year", per_path, i),
        ))
    if len(periods) != 2:
        raise SchemaError(f"expected exactly two periods, got {len(periods)}", path=per_path)

    res_path = _find_file(input_dir, "researchers")
    researchers = []
    seen = set()
    for i, row in enumerate(_read_rows(
            res_path, ("researcher_id", "sds", "university_id", "active_years")), start=2):
        rid = str(row["researcher_id"])
        if rid in seen:
            raise DuplicateKey(f"researchers: duplicate researcher_id {rid}")
        seen.add(rid)
        sds = str(row["sds"])
        if sds not in sds_to_uda:
            raise DanglingReference(f"researcher {rid} references unknown SDS {sds}")
        researchers.append(Researcher(
            researcher_id=rid, sds=sds,
            university_id=str(row["university_id"]),
            active_years=_parse_years(row["active_years"], res_path, i),
        ))

    pub_path = _find_file(input_dir, "publications")
    publications = []
    pub_ids = set()
    for i, row in enumerate(_read_rows(
            pub_path, ("pub_id", "year", "subject_category", "citations", "n_authors_total")),
            start=2):
        pid = str(row["pub_id"])
        if pid in pub_ids:
            raise DuplicateKey(f"publications: duplicate pub_id {pid}")
        pub_ids.add(pid)
        publications.append(Publication(
            pub_id=pid,
            year=_to_int(row["year"], "year", pub_path, i),
            subject_category=str(row["subject_category"]),
            citations=_to_int(row["citations"], "citations", pub_path, i, minimum=0),
            n_authors_total=_to_int(row["n_authors_total"], "n_authors_total",
                                    pub_path, i, minimum=1),
        ))

    auth_path = _find_file(input_dir, "authorships")
    authorships = []
    auth_keys = set()
    rids = {r.researcher_id for r in researchers}
    for i, row in enumerate(_read_rows(
            auth_path, ("pub_id", "researcher_id", "author_position", "byline_university_id")),
            start=2):
        pid, rid = str(row["pub_id"]), str(row["researcher_id"])
        if pid not in pub_ids:
            raise DanglingReference(f"authorship references unknown pub_id {pid}")
        if rid not in rids:
            raise DanglingReference(f"authorship references unknown researcher_id {rid}")
        key = (pid, rid)
        if key in auth_keys:
            raise DuplicateKey(f"authorships: duplicate (pub_id, researcher_id) {key}")
        auth_keys.add(key)
        authorships.append(Authorship(
            pub_id=pid, researcher_id=rid,
            author_position=_to_int(row["author_position"], "author_position",
                                    auth_path, i, minimum=1),
            byline_university_id=str(row["byline_university_id"]),
        ))

    return Corpus(taxonomy, researchers, publications, authorships, periods)


def write_corpus(corpus: Corpus, out_dir) -> None:
    """Write the standard CSV fileset; load_corpus(write_corpus(c)) == c."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    with open(out_dir / "taxonomy.csv", "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["sds", "uda", "is_life_science"])
        for sds in corpus.taxonomy.sds_list:
            w.writerow([sds, corpus.taxonomy.sds_to_uda[sds],
                        int(sds in corpus.taxonomy.life_science_sds)])

    with open(out_dir / "periods.csv", "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["label", "start_year", "end_year"])
        for p in corpus.periods:
            w.writerow([p.label, p.start_year, p.end_year])

    with open(out_dir / "researchers.csv", "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["researcher_id", "sds", "university_id", "active_years"])
        for r in corpus.researchers:
            w.writerow([r.researcher_id, r.sds, r.university_id,
                        ";".join(str(y) for y in sorted(r.active_years))])

    with open(out_dir / "publications.csv", "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["pub_id", "year", "subject_category", "citations", "n_authors_total"])
        for p in corpus.publications:
            w.writerow([p.pub_id, p.year, p.subject_category, p.citations, p.n_authors_total])

    with open(out_dir / "authorships.csv", "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["pub_id", "researcher_id", "author_position", "byline_university_id"])
        for a in corpus.authorships:
            w.writerow([a.pub_id, a.researcher_id, a.author_position, a.byline_university_id])
