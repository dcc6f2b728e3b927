"""Bit-exact reader and writer for the CoNLL-U file format.

Parsing is lenient: recoverable problems are reported as ParseIssue records
and unrecoverable lines are skipped with an issue, never aborting the file,
so the validator gets to see malformed treebanks whole. Serialization is
canonical (sorted FEATS and DEPS, ``_`` for empty fields) and round-trips
canonical files byte for byte.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import IO, Iterable, Iterator

from .model import (
    EmptyNode,
    FeatureBag,
    MultiwordTokenSpan,
    NodeId,
    Sentence,
    SyntacticWord,
)

# 1-based field numbers, used in issue reports
F_ID, F_FORM, F_LEMMA, F_UPOS, F_XPOS, F_FEATS, F_HEAD, F_DEPREL, F_DEPS, F_MISC = range(1, 11)
FIELD_COUNT = 10

_WORD_ID_RE = re.compile(r"[1-9][0-9]*$")
_SPAN_ID_RE = re.compile(r"([1-9][0-9]*)-([1-9][0-9]*)$")
_EMPTY_ID_RE = re.compile(r"(0|[1-9][0-9]*)\.([1-9][0-9]*)$")


@dataclass
class ParseIssue:
    """One problem found while reading a file; lines are 1-based."""

    line: int
    field: int | None
    code: str
    message: str


@dataclass
class ParsedDocument:
    sentences: list[Sentence] = field(default_factory=list)
    source_name: str = "<stream>"


@dataclass(frozen=True)
class SpacePolicy:
    """Word-internal space policy.

    ``forbid`` rejects any space; ``allow-all-declared`` accepts everything
    (for scripts whose spaces separate sub-word units); ``allow-listed``
    accepts only listed exception forms (matched exactly, case-sensitively)
    or forms fully matching one of the listed regular expressions.
    """

    mode: str = "forbid"
    forms: frozenset[str] = frozenset()
    patterns: tuple[str, ...] = ()

    MODES = ("forbid", "allow-all-declared", "allow-listed")

    def __post_init__(self):
        if self.mode not in self.MODES:
            raise ValueError(f"unknown space policy {self.mode!r}")

    def licenses(self, text: str) -> bool:
        if " " not in text:
            return True
        if self.mode == "allow-all-declared":
            return True
        if self.mode == "forbid":
            return False
        if text in self.forms:
            return True
        return any(re.fullmatch(p, text) for p in self.patterns)


def check_space_policy(word: SyntacticWord, policy: SpacePolicy) -> ParseIssue | None:
    """Issue iff FORM or LEMMA contains a space the policy does not license."""
    if not policy.licenses(word.form):
        return ParseIssue(word.line, F_FORM, "WORD_SPACE",
                          f"form {word.form!r} contains an undeclared space")
    if word.lemma is not None and not policy.licenses(word.lemma):
        return ParseIssue(word.line, F_LEMMA, "WORD_SPACE",
                          f"lemma {word.lemma!r} contains an undeclared space")
    return None


def _opt(text: str) -> str | None:
    return None if text == "_" else text


def _parse_deps(text: str, line: int, issues: list[ParseIssue]) -> list[tuple[NodeId, str]]:
    deps: list[tuple[NodeId, str]] = []
    if text in ("_", ""):
        return deps
    for chunk in text.split("|"):
        head_text, colon, rel = chunk.partition(":")
        ok = bool(colon) and bool(rel)
        head = None
        if ok:
            try:
                head = NodeId.parse(head_text)
            except ValueError:
                ok = False
        if not ok:
            issues.append(ParseIssue(line, F_DEPS, "INVALID_DEPS",
                                     f"cannot parse deps entry {chunk!r}"))
            continue
        deps.append((head, rel))  # type: ignore[arg-type]
    return deps


def _parse_feats(text: str, line: int, issues: list[ParseIssue]) -> FeatureBag:
    bag, bad = FeatureBag.parse_lenient(text)
    for chunk in bad:
        issues.append(ParseIssue(line, F_FEATS, "INVALID_FEATS",
                                 f"cannot parse feature {chunk!r}"))
    return bag


def _parse_head(text: str, line: int, issues: list[ParseIssue]) -> int | None:
    if text == "_":
        return None
    if re.fullmatch(r"[0-9]+", text):
        return int(text)
    issues.append(ParseIssue(line, F_HEAD, "INVALID_HEAD",
                             f"HEAD must be an integer or _, got {text!r}"))
    return None


def _build_sentence(rows: list[tuple[int, list[str]]], comments: list[str],
                    issues: list[ParseIssue]) -> Sentence:
    sentence = Sentence(comments=list(comments))
    for line_no, cols in rows:
        token_id = cols[0]
        if _WORD_ID_RE.fullmatch(token_id):
            word = SyntacticWord(
                index=int(token_id),
                form=cols[1],
                lemma=_opt(cols[2]),
                upos=_opt(cols[3]),
                xpos=_opt(cols[4]),
                feats=_parse_feats(cols[5], line_no, issues),
                head=_parse_head(cols[6], line_no, issues),
                deprel=_opt(cols[7]),
                deps=_parse_deps(cols[8], line_no, issues),
                misc=() if cols[9] == "_" else tuple(cols[9].split("|")),
                line=line_no,
            )
            sentence.words.append(word)
        elif m := _SPAN_ID_RE.fullmatch(token_id):
            if any(c != "_" for c in cols[2:9]):
                issues.append(ParseIssue(line_no, None, "SPAN_FIELDS",
                                         "multiword token line carries annotation "
                                         "outside FORM/MISC; dropped"))
            sentence.spans.append(MultiwordTokenSpan(
                start=int(m.group(1)),
                end=int(m.group(2)),
                form=cols[1],
                misc=() if cols[9] == "_" else tuple(cols[9].split("|")),
                line=line_no,
            ))
        elif m := _EMPTY_ID_RE.fullmatch(token_id):
            node = EmptyNode(
                anchor=int(m.group(1)),
                sub=int(m.group(2)),
                form=_opt(cols[1]),
                lemma=_opt(cols[2]),
                upos=_opt(cols[3]),
                xpos=_opt(cols[4]),
                feats=_parse_feats(cols[5], line_no, issues),
                deps=_parse_deps(cols[8], line_no, issues),
                misc=() if cols[9] == "_" else tuple(cols[9].split("|")),
                head=_parse_head(cols[6], line_no, issues) if cols[6] != "_" else None,
                deprel=_opt(cols[7]),
                line=line_no,
            )
            sentence.empties.append(node)
        else:
            issues.append(ParseIssue(line_no, F_ID, "INVALID_ID",
                                     f"unrecognized token id {token_id!r}; line skipped"))
    return sentence


def parse_document(source: str | IO[str] | Iterable[str],
                   source_name: str = "<stream>") -> tuple[ParsedDocument, list[ParseIssue]]:
    """Parse CoNLL-U text into a document plus a list of recoverable issues.

    Sentences are split on blank lines. Token lines must carry exactly 10
    tab-separated fields; bad lines are skipped and reported.
    """
    if isinstance(source, str):
        lines: Iterable[str] = source.split("\n")
    else:
        lines = (line.rstrip("\n") for line in source)

    document = ParsedDocument(source_name=source_name)
    issues: list[ParseIssue] = []
    comments: list[str] = []
    rows: list[tuple[int, list[str]]] = []
    comment_line = 0
    line_no = 0

    def flush():
        nonlocal comments, rows
        if rows:
            document.sentences.append(_build_sentence(rows, comments, issues))
        elif comments:
            issues.append(ParseIssue(comment_line, None, "EMPTY_SENTENCE",
                                     "comment block with no token lines"))
        comments = []
        rows = []

    for raw in lines:
        line_no += 1
        line = raw.rstrip("\r")
        if line == "":
            flush()
            continue
        if line.startswith("#"):
            if not comments and not rows:
                comment_line = line_no
            comments.append(line)
            continue
        cols = line.split("\t")
        if len(cols) != FIELD_COUNT:
            issues.append(ParseIssue(line_no, None, "FIELD_COUNT",
                                     f"expected 10 tab-separated fields, got {len(cols)}"))
            continue
        rows.append((line_no, cols))
    # a str source split on "\n" yields a final "" after a trailing newline,
    # which flushes above; flush again for files without one
    flush()
    return document, issues


def parse_file(path: str) -> tuple[ParsedDocument, list[ParseIssue]]:
    """Read a file as UTF-8; invalid encoding raises UnicodeDecodeError."""
    with open(path, encoding="utf-8") as handle:
        text = handle.read()
    return parse_document(text, source_name=path)


def _render_misc(misc: tuple[str, ...]) -> str:
    return "|".join(misc) if misc else "_"


def _render_deps(deps: list[tuple[NodeId, str]]) -> str:
    if not deps:
        return "_"
    unique = sorted(set(deps), key=lambda d: (d[0], d[1]))
    return "|".join(f"{head.render()}:{rel}" for head, rel in unique)


def _word_line(word: SyntacticWord) -> str:
    return "\t".join([
        str(word.index),
        word.form,
        word.lemma if word.lemma is not None else "_",
        word.upos if word.upos is not None else "_",
        word.xpos if word.xpos is not None else "_",
        word.feats.render(),
        str(word.head) if word.head is not None else "_",
        word.deprel if word.deprel is not None else "_",
        _render_deps(word.deps),
        _render_misc(word.misc),
    ])


def _empty_line(node: EmptyNode) -> str:
    return "\t".join([
        node.node_id.render(),
        node.form if node.form is not None else "_",
        node.lemma if node.lemma is not None else "_",
        node.upos if node.upos is not None else "_",
        node.xpos if node.xpos is not None else "_",
        node.feats.render(),
        "_",
        "_",
        _render_deps(node.deps),
        _render_misc(node.misc),
    ])


def _span_line(span: MultiwordTokenSpan) -> str:
    return "\t".join([
        f"{span.start}-{span.end}", span.form,
        "_", "_", "_", "_", "_", "_", "_",
        _render_misc(span.misc),
    ])


def serialize_sentence(sentence: Sentence) -> str:
    """Canonical CoNLL-U block for one sentence, ending with a newline."""
    lines: list[str] = list(sentence.comments)
    spans_by_start = {span.start: span for span in sentence.spans}
    empties = sorted(sentence.empties, key=lambda e: (e.anchor, e.sub))
    i = 0
    while i < len(empties) and empties[i].anchor == 0:
        lines.append(_empty_line(empties[i]))
        i += 1
    for word in sentence.words:
        span = spans_by_start.get(word.index)
        if span is not None:
            lines.append(_span_line(span))
        lines.append(_word_line(word))
        while i < len(empties) and empties[i].anchor == word.index:
            lines.append(_empty_line(empties[i]))
            i += 1
    while i < len(empties):
        lines.append(_empty_line(empties[i]))
        i += 1
    return "\n".join(lines) + "\n"


def serialize(document: ParsedDocument) -> str:
    """Whole document; every sentence block is followed by one blank line."""
    return "".join(serialize_sentence(s) + "\n" for s in document.sentences)


def iter_words(document: ParsedDocument) -> Iterator[SyntacticWord]:
    for sentence in document.sentences:
        yield from sentence.words
