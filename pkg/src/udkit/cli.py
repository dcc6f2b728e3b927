"""Command-line front end: validate, convert, enhance, stats and fmt.

Exit codes: 0 success (and valid for validate), 1 validation errors found,
2 usage or I/O failure. Multiple input files are processed with their
outputs in input order; --jobs caps the worker count.
"""

from __future__ import annotations

import argparse
import json
import sys
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from . import __version__
from .conllu import ParsedDocument, ParseIssue, parse_document, serialize
from .convert import ConversionLog, convert_v1_to_v2
from .enhance import EnhanceOptions, enhance_document
from .registry import ConfigError, Registry
from .validate import validate_document


# ---------------------------------------------------------------------------
# Statistics


@dataclass
class StatsReport:
    """Desk-scale counts for one document (or a sum of documents).

    Orthographic tokens = words - span-covered words + spans; empty nodes
    are counted separately and never as words.
    """

    sentences: int = 0
    words: int = 0
    tokens: int = 0
    empty_nodes: int = 0
    upos: Counter = field(default_factory=Counter)
    deprel: Counter = field(default_factory=Counter)
    feature_names: Counter = field(default_factory=Counter)
    genres: Counter = field(default_factory=Counter)

    def __add__(self, other: "StatsReport") -> "StatsReport":
        return StatsReport(
            sentences=self.sentences + other.sentences,
            words=self.words + other.words,
            tokens=self.tokens + other.tokens,
            empty_nodes=self.empty_nodes + other.empty_nodes,
            upos=self.upos + other.upos,
            deprel=self.deprel + other.deprel,
            feature_names=self.feature_names + other.feature_names,
            genres=self.genres + other.genres,
        )

    def to_record(self) -> dict:
        return {
            "sentences": self.sentences,
            "words": self.words,
            "tokens": self.tokens,
            "empty_nodes": self.empty_nodes,
            "upos": dict(self.upos),
            "deprel": dict(self.deprel),
            "feature_names": dict(self.feature_names),
            "genres": dict(self.genres),
        }


def compute_stats(document: ParsedDocument) -> StatsReport:
    """Count sentences, words, orthographic tokens and distributions."""
    report = StatsReport()
    for sentence in document.sentences:
        report.sentences += 1
        covered = sum(span.end - span.start + 1
                      for span in sentence.spans if span.end >= span.start)
        report.words += len(sentence.words)
        report.tokens += len(sentence.words) - covered + len(sentence.spans)
        report.empty_nodes += len(sentence.empties)
        for word in sentence.words:
            report.upos[word.upos or "_"] += 1
            report.deprel[word.deprel.split(":")[0] if word.deprel else "_"] += 1
            for name in word.feats.names():
                report.feature_names[name] += 1
        genre = sentence.metadata("genre")
        if genre:
            report.genres[genre] += 1
    return report


def _counter_block(title: str, counter: Counter) -> list[str]:
    lines = [f"{title}:"]
    for key, count in sorted(counter.items(), key=lambda kv: (-kv[1], kv[0])):
        lines.append(f"  {key:<12} {count:>8}")
    return lines


def render_stats_table(reports: list[tuple[str, StatsReport]],
                       declared_genres: tuple[str, ...] = ()) -> str:
    """Aligned plain-text table, one row per file plus a total row."""
    total = StatsReport()
    for _, report in reports:
        total = total + report
    width = max([len(name) for name, _ in reports] + [len("TOTAL"), 6])
    lines = [f"{'file':<{width}} {'sents':>8} {'words':>8} {'tokens':>8} {'empties':>8}"]
    rows = list(reports) + ([("TOTAL", total)] if len(reports) > 1 else [])
    for name, report in rows:
        lines.append(f"{name:<{width}} {report.sentences:>8} {report.words:>8} "
                     f"{report.tokens:>8} {report.empty_nodes:>8}")
    lines.append("")
    lines.extend(_counter_block("upos", total.upos))
    lines.extend(_counter_block("deprel", total.deprel))
    if total.feature_names:
        lines.extend(_counter_block("features", total.feature_names))
    if total.genres:
        lines.extend(_counter_block("genres", total.genres))
    if declared_genres:
        lines.append("declared genres: " + "|".join(declared_genres))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Shared plumbing


def _read_input(path: str) -> tuple[ParsedDocument, list[ParseIssue]]:
    if path == "-":
        return parse_document(sys.stdin.read(), source_name="<stdin>")
    with open(path, encoding="utf-8") as handle:
        return parse_document(handle.read(), source_name=path)


def _read_inputs(paths: list[str], jobs: int) -> list[tuple[ParsedDocument, list[ParseIssue]]]:
    if jobs > 1 and len(paths) > 1 and "-" not in paths:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_read_input, paths))
    return [_read_input(path) for path in paths]


def _load_registry(args) -> Registry:
    if getattr(args, "config", None):
        return Registry.from_config_file(args.config)
    return Registry.default()


def _write_output(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(text)


# ---------------------------------------------------------------------------
# Subcommands


def _cmd_validate(args) -> int:
    registry = _load_registry(args)
    records = []
    worst = 0
    for document, issues in _read_inputs(args.paths, args.jobs):
        report = validate_document(document, registry, max_level=args.level,
                                   parse_issues=issues)
        sys.stdout.write(report.render_text())
        records.append({"source": document.source_name, "valid": report.valid,
                        "sentences": report.sentence_count,
                        "diagnostics": report.to_records(),
                        "counts": dict(report.counts)})
        if not report.valid:
            worst = 1
    if args.json:
        _write_output(json.dumps(records, indent=2, sort_keys=True) + "\n", args.json)
    return worst


def _cmd_convert(args) -> int:
    registry = _load_registry(args)
    out_parts = []
    log = ConversionLog()
    for document, _ in _read_inputs(args.paths, args.jobs):
        converted, document_log = convert_v1_to_v2(document, registry)
        out_parts.append(serialize(converted))
        log.extend(document_log)
    _write_output("".join(out_parts), args.output)
    if args.log:
        _write_output(log.to_tsv(), args.log)
    return 0


def _options_from_args(args) -> EnhanceOptions:
    return EnhanceOptions(
        null_nodes=not args.no_null_nodes,
        conjunct_propagation=not args.no_conjunct_propagation,
        xsubj=not args.no_xsubj,
        relative_pronouns=not args.no_relative_pronouns,
        case_augmentation=not args.no_case_augmentation,
        subtype_xsubj=args.subtype_xsubj,
        lemma_source_for_case=args.case_source,
    )


def _cmd_enhance(args) -> int:
    options = _options_from_args(args)
    out_parts = []
    for document, _ in _read_inputs(args.paths, args.jobs):
        enhanced, diagnostics = enhance_document(document, options)
        out_parts.append(serialize(enhanced))
        for diagnostic in diagnostics:
            sys.stderr.write(diagnostic.render() + "\n")
    _write_output("".join(out_parts), args.output)
    return 0


def _cmd_stats(args) -> int:
    registry = _load_registry(args)
    reports = []
    for document, _ in _read_inputs(args.paths, args.jobs):
        reports.append((document.source_name, compute_stats(document)))
    sys.stdout.write(render_stats_table(reports, registry.genres))
    if args.json:
        payload = {name: report.to_record() for name, report in reports}
        _write_output(json.dumps(payload, indent=2, sort_keys=True) + "\n", args.json)
    return 0


def _cmd_fmt(args) -> int:
    out_parts = []
    for document, _ in _read_inputs(args.paths, args.jobs):
        out_parts.append(serialize(document))
    _write_output("".join(out_parts), args.output)
    return 0


# ---------------------------------------------------------------------------
# Argument parsing


def _add_common(parser: argparse.ArgumentParser, output: bool = False) -> None:
    parser.add_argument("paths", nargs="*", default=["-"], metavar="FILE",
                        help="input CoNLL-U files, or - for stdin (default)")
    parser.add_argument("--config", metavar="PATH",
                        help="registry extension file (declared features, subtypes, "
                             "particle and copula lemmas, space policy)")
    parser.add_argument("--jobs", type=int, default=1, metavar="N",
                        help="max worker count for multi-file runs")
    if output:
        parser.add_argument("-o", "--output", metavar="PATH",
                            help="write output here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="udkit",
        description="Parse, validate, convert and enhance Universal Dependencies "
                    "treebanks in CoNLL-U format.")
    parser.add_argument("--version", action="version", version=f"udkit {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a treebank against the v2 guidelines")
    _add_common(p)
    p.add_argument("--level", type=int, default=5, choices=range(1, 6), metavar="N",
                   help="validation depth 1-5 (default 5)")
    p.add_argument("--json", metavar="PATH", help="also write diagnostics as JSON")
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("convert", help="convert v1 annotation to v2")
    _add_common(p, output=True)
    p.add_argument("--from", dest="from_version", default="v1", choices=["v1"],
                   help="source guideline version (only v1)")
    p.add_argument("--log", metavar="PATH", help="write the conversion log as TSV")
    p.set_defaults(func=_cmd_convert)

    p = sub.add_parser("enhance", help="compute the enhanced graph from basic trees")
    _add_common(p, output=True)
    p.add_argument("--all", action="store_true",
                   help="enable every enhancement step (the default)")
    for step in ("null-nodes", "conjunct-propagation", "xsubj",
                 "relative-pronouns", "case-augmentation"):
        p.add_argument(f"--no-{step}", action="store_true",
                       help=f"disable the {step.replace('-', ' ')} step")
    p.add_argument("--subtype-xsubj", action="store_true",
                   help="label controlled subjects nsubj:xsubj instead of nsubj")
    p.add_argument("--case-source", choices=["lemma", "form"], default="lemma",
                   help="take augmentation segments from lemmas (default) or forms")
    p.set_defaults(func=_cmd_enhance)

    p = sub.add_parser("stats", help="sentence/word/token counts and distributions")
    _add_common(p)
    p.add_argument("--json", metavar="PATH", help="also write counts as JSON")
    p.set_defaults(func=_cmd_stats)

    p = sub.add_parser("fmt", help="re-serialize in canonical form")
    _add_common(p, output=True)
    p.set_defaults(func=_cmd_fmt)
    return parser


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exit_error:
        return 2 if exit_error.code not in (0, None) else 0
    try:
        return args.func(args)
    except ConfigError as error:
        sys.stderr.write(f"udkit: bad config: {error}\n")
        return 2
    except (OSError, UnicodeDecodeError) as error:
        sys.stderr.write(f"udkit: {error}\n")
        return 2


def main() -> None:
    sys.exit(run())
