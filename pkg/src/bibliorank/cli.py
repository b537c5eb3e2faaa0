"""Command-line front end.

Subcommands: ingest, indicators, rank, compare, drilldown, synth. Every
emitted table carries a provenance header (corpus hash, config hash, tool
version) and outputs are pure functions of inputs + flags, so re-runs and
different thread counts produce byte-identical files.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from . import __version__
from .aggregate import sds_unit_scores, uda_score
from .baseline import build_baselines, load_external_baselines
from .errors import BiblioRankError, NoEligibleUniversities, NoStaffInUda
from .indicators import INDICATORS, ShareScheme, researcher_indicator
from .loader import FILE_STEMS, load_corpus
from .model import presence, validate
from .rankshift import (assign_quintiles, indicator_comparison, sds_drilldown,
                        shift_stats, transition_matrix, uda_rank_list,
                        university_shift_table)
from .synthgen import GenConfig, generate
from .errors import NoPublications, ZeroStaff


def _corpus_hash(input_dir: Path) -> str:
    h = hashlib.sha256()
    for stem in FILE_STEMS:
        for ext in (".csv", ".json"):
            p = input_dir / f"{stem}{ext}"
            if p.exists():
                h.update(p.name.encode())
                h.update(p.read_bytes())
                break
    return h.hexdigest()[:16]

def _config_hash(args: argparse.Namespace) -> str:
    # threads is execution detail, not configuration: bytes must not depend on it
    skip = {"func", "out", "input", "threads"}
    payload = {k: v for k, v in sorted(vars(args).items())
               if k not in skip and not callable(v)}
    blob = json.dumps(payload, sort_keys=True, default=str)
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


class Emitter:
    def __init__(self, out_dir: Path, fmt: str, corpus_hash: str, config_hash: str):
        self.out_dir = out_dir
        self.fmt = fmt
        self.provenance = {"corpus": corpus_hash, "config": config_hash,
                           "version": __version__}
        out_dir.mkdir(parents=True, exist_ok=True)

    def _cell(self, v):
        if v is None:
            return {"csv": "", "json": None, "markdown": "n.a."}[self.fmt]
        if isinstance(v, float) and self.fmt == "markdown":
            return f"{v:.3f}"
        return v

    def write(self, name: str, columns: list, rows: list) -> Path:
        path = self.out_dir / f"{name}.{ 'md' if self.fmt == 'markdown' else self.fmt}"
        header = (f"# corpus={self.provenance['corpus']} "
                  f"config={self.provenance['config']} "
                  f"version={self.provenance['version']}")
        if self.fmt == "json":
            doc = {"provenance": self.provenance, "columns": columns,
                   "rows": [list(r) for r in rows]}
            path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n",
                            encoding="utf-8")
        elif self.fmt == "markdown":
            lines = [header, "", "| " + " | ".join(columns) + " |",
                     "| " + " | ".join("---" for _ in columns) + " |"]
            for r in rows:
                lines.append("| " + " | ".join(str(self._cell(v)) for v in r) + " |")
            path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        else:
            with open(path, "w", newline="", encoding="utf-8") as fh:
                fh.write(header + "\n")
                w = csv.writer(fh)
                w.writerow(columns)
                for r in rows:
                    w.writerow([self._cell(v) for v in r])
        return path


def _load_inputs(args):
    corpus = load_corpus(Path(args.input))
    baselines = build_baselines(corpus)
    if args.baselines:
        baselines = baselines.merge(load_external_baselines(Path(args.baselines)))
    first, last, middle = (float(x) for x in args.scheme.split(","))
    scheme = ShareScheme(first_weight=first, last_weight=last, middle_weight=middle)
    return corpus, baselines, scheme


def _map_udas(udas, fn, threads):
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(fn, udas))
    else:
        results = [fn(u) for u in udas]
    return dict(zip(udas, results))


def cmd_ingest(args) -> int:
    corpus = load_corpus(Path(args.input))
    report = validate(corpus)
    print(f"researchers={len(corpus.researchers)} "
          f"publications={len(corpus.publications)} "
          f"authorships={len(corpus.authorships)} violations={len(report)}")
    for v in report:
        print(f"  [{v.kind}] {v.message}")
    return 0 if report else 1


def cmd_indicators(args) -> int:
    corpus, baselines, scheme = _load_inputs(args)
    emit = Emitter(Path(args.out), args.format,
                   _corpus_hash(Path(args.input)), _config_hash(args))

    rows = []
    for s in corpus.taxonomy.sds_list:
        for period in corpus.periods:
            for ind in INDICATORS:
                scores = sds_unit_scores(corpus, s, ind, period, scheme,
                                         baselines, args.basis, args.staff_mode)
                for (u, _), sc in sorted(scores.items()):
                    rows.append([u, s, ind, period.label,
                                 None if sc is None else sc.value,
                                 None if sc is None else sc.n_pubs,
                                 None if sc is None else sc.staff])
    emit.write("unit_scores", ["university_id", "sds", "indicator", "period",
                               "value", "n_pubs", "staff"], rows)

    rows = []
    for r in corpus.researchers:
        for period in corpus.periods:
            if presence(r, period, args.staff_mode) <= 0:
                continue
            for ind in INDICATORS:
                try:
                    sc = researcher_indicator(corpus, r.researcher_id, ind,
                                              period, scheme, baselines,
                                              args.basis, args.staff_mode)
                    rows.append([r.researcher_id, ind, period.label,
                                 sc.value, sc.n_pubs, sc.staff])
                except (ZeroStaff, NoPublications):
                    rows.append([r.researcher_id, ind, period.label,
                                 None, 0, None])
    emit.write("researcher_scores",
               ["researcher_id", "indicator", "period", "value", "n_pubs", "staff"],
               rows)

    def uda_rows(uda):
        out = []
        for u in corpus.universities_in_uda(uda):
            for period in corpus.periods:
                for ind in INDICATORS:
                    try:
                        sc = uda_score(corpus, u, uda, ind, period, scheme,
                                       baselines, args.basis, args.staff_mode)
                        out.append([u, uda, ind, period.label, sc.value,
                                    sc.covered_staff])
                    except NoStaffInUda:
                        continue
        return out

    by_uda = _map_udas(corpus.taxonomy.uda_list, uda_rows, args.threads)
    rows = [r for uda in corpus.taxonomy.uda_list for r in by_uda[uda]]
    emit.write("uda_scores", ["university_id", "uda", "indicator", "period",
                              "value", "covered_staff"], rows)
    return 0


def cmd_rank(args) -> int:
    corpus, baselines, scheme = _load_inputs(args)
    emit = Emitter(Path(args.out), args.format,
                   _corpus_hash(Path(args.input)), _config_hash(args))

    def per_uda(uda):
        ranks, quintiles = [], []
        for ind in INDICATORS:
            for period in corpus.periods:
                try:
                    ranked = uda_rank_list(corpus, uda, ind, period, scheme,
                                           baselines, args.basis,
                                           args.min_staff, args.staff_mode)
                except NoEligibleUniversities:
                    continue
                assigned = assign_quintiles(ranked)
                for e in ranked.entries:
                    ranks.append([uda, ind, period.label, e.university_id,
                                  e.value, e.rank])
                    quintiles.append([uda, ind, period.label, e.university_id,
                                      assigned.entries[e.university_id]])
        return ranks, quintiles

    by_uda = _map_udas(corpus.taxonomy.uda_list, per_uda, args.threads)
    rank_rows = [r for uda in corpus.taxonomy.uda_list for r in by_uda[uda][0]]
    quintile_rows = [r for uda in corpus.taxonomy.uda_list for r in by_uda[uda][1]]
    emit.write("rank_lists", ["uda", "indicator", "period", "university_id",
                              "value", "rank"], rank_rows)
    emit.write("quintiles", ["uda", "indicator", "period", "university_id",
                             "quintile"], quintile_rows)
    return 0


def cmd_compare(args) -> int:
    corpus, baselines, scheme = _load_inputs(args)
    emit = Emitter(Path(args.out), args.format,
                   _corpus_hash(Path(args.input)), _config_hash(args))
    early, late = corpus.periods

    def per_uda(uda):
        stats_rows, transition_rows = [], []
        for ind in INDICATORS:
            lists = []
            for period in (early, late):
                try:
                    lists.append(uda_rank_list(corpus, uda, ind, period, scheme,
                                               baselines, args.basis,
                                               args.min_staff, args.staff_mode))
                except NoEligibleUniversities:
                    lists.append(None)
            if lists[0] is None or lists[1] is None:
                continue
            stats = shift_stats(lists[0], lists[1])
            stats_rows.append([uda, ind, stats.n_total, stats.n_changed,
                               round(100.0 * stats.pct_changed, 1),
                               stats.max_abs_shift, stats.mean_abs_shift,
                               stats.median_abs_shift,
                               ";".join(stats.entries), ";".join(stats.exits)])
            matrix = transition_matrix(assign_quintiles(lists[0]),
                                       assign_quintiles(lists[1]))
            for i in range(5):
                for j in range(5):
                    transition_rows.append([uda, ind, i + 1, j + 1,
                                            matrix.counts[i][j]])
        return stats_rows, transition_rows

    by_uda = _map_udas(corpus.taxonomy.uda_list, per_uda, args.threads)
    stats_rows = [r for uda in corpus.taxonomy.uda_list for r in by_uda[uda][0]]
    transition_rows = [r for uda in corpus.taxonomy.uda_list for r in by_uda[uda][1]]
    emit.write("shift_stats", ["uda", "indicator", "n_total", "n_changed",
                               "pct_changed", "max_abs_shift", "mean_abs_shift",
                               "median_abs_shift", "entries", "exits"],
               stats_rows)
    emit.write("transition_matrices",
               ["uda", "indicator", "early_quintile", "late_quintile", "count"],
               transition_rows)

    table = university_shift_table(corpus, args.indicator, scheme, baselines,
                                   args.basis, args.min_staff, args.staff_mode)
    rows = []
    for u in table.universities:
        rows.append([u] + [table.cells[u][c] for c in table.columns]
                    + [table.row_total(u)])
    rows.append(["pct_changed"]
                + [round(table.column_pct_changed(c), 1) for c in table.columns]
                + [round(table.overall_pct_changed(), 1)])
    emit.write("university_shift_table",
               ["university_id"] + list(table.columns) + ["total"], rows)
    shares = table.balance_shares()
    emit.write("shift_balance", ["negative_pct", "positive_pct", "nil_pct"],
               [[round(shares["negative"], 1), round(shares["positive"], 1),
                 round(shares["nil"], 1)]])
    return 0


def cmd_drilldown(args) -> int:
    corpus, baselines, scheme = _load_inputs(args)
    emit = Emitter(Path(args.out), args.format,
                   _corpus_hash(Path(args.input)), _config_hash(args))
    shifts = sds_drilldown(corpus, args.university, args.uda, args.indicator,
                           scheme, baselines, args.basis, args.min_staff,
                           args.staff_mode)
    emit.write("sds_drilldown", ["sds", "quintile_shift"],
               [[sds, shifts[sds]] for sds in sorted(shifts)])
    comparison = indicator_comparison(corpus, args.university, args.uda, scheme,
                                      baselines, args.basis, args.min_staff,
                                      args.staff_mode)
    rows = [[sds, row["P"], row["FP"], row["AQ"], ";".join(row["flags"])]
            for sds, row in sorted(comparison.items())]
    emit.write("indicator_comparison", ["sds", "P", "FP", "AQ", "flags"], rows)
    return 0


def cmd_synth(args) -> int:
    config = GenConfig(
        seed=args.seed, n_universities=args.n_universities, n_sds=args.n_sds,
        sds_per_uda=args.sds_per_uda, staff_min=args.staff_min,
        staff_max=args.staff_max,
        pubs_per_researcher_year=args.pubs_per_researcher_year,
        citation_mean=args.citation_mean, turnover_rate=args.turnover_rate,
        life_science_fraction=args.life_science_fraction)
    manifest = generate(config, Path(args.out))
    print(json.dumps({k: v for k, v in manifest.items() if k != "config"},
                     sort_keys=True))
    return 0


def _add_common(p):
    p.add_argument("--input", required=True, help="directory with the corpus fileset")
    p.add_argument("--baselines", default=None,
                   help="external baseline CSV overriding corpus-derived strata")
    p.add_argument("--basis", choices=("median", "mean"), default="median")
    p.add_argument("--min-staff", dest="min_staff", type=float, default=6.0)
    p.add_argument("--staff-mode", dest="staff_mode",
                   choices=("prorata", "headcount"), default="prorata")
    p.add_argument("--scheme", default="2,2,1",
                   help="life-science share weights: first,last,middle")
    p.add_argument("--format", choices=("csv", "json", "markdown"), default="csv")
    p.add_argument("--out", default="out")
    p.add_argument("--threads", type=int, default=1)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bibliorank",
        description="Field-standardized research performance indicators and "
                    "cross-period rank mobility")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="load and validate a corpus fileset")
    p.add_argument("--input", required=True)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("indicators", help="per-unit, per-researcher and UDA scores")
    _add_common(p)
    p.set_defaults(func=cmd_indicators)

    p = sub.add_parser("rank", help="rank lists and quintile assignments")
    _add_common(p)
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("compare", help="cross-period shift statistics and matrices")
    _add_common(p)
    p.add_argument("--indicator", choices=INDICATORS, default="FSS")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("drilldown", help="per-SDS shifts for one university and UDA")
    _add_common(p)
    p.add_argument("--university", required=True)
    p.add_argument("--uda", required=True)
    p.add_argument("--indicator", choices=INDICATORS, default="FSS")
    p.set_defaults(func=cmd_drilldown)

    p = sub.add_parser("synth", help="generate a seeded synthetic corpus fileset")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n-universities", dest="n_universities", type=int, default=8)
    p.add_argument("--n-sds", dest="n_sds", type=int, default=6)
    p.add_argument("--sds-per-uda", dest="sds_per_uda", type=int, default=3)
    p.add_argument("--staff-min", dest="staff_min", type=int, default=1)
    p.add_argument("--staff-max", dest="staff_max", type=int, default=4)
    p.add_argument("--pubs-per-researcher-year", dest="pubs_per_researcher_year",
                   type=float, default=1.2)
    p.add_argument("--citation-mean", dest="citation_mean", type=float, default=2.0)
    p.add_argument("--turnover-rate", dest="turnover_rate", type=float, default=0.2)
    p.add_argument("--life-science-fraction", dest="life_science_fraction",
                   type=float, default=0.3)
    p.add_argument("--out", default="synth_out")
    p.set_defaults(func=cmd_synth)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except BiblioRankError as exc:
        record = {"error": type(exc).__name__, "message": str(exc)}
        print(json.dumps(record), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
