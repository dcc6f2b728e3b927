"""Layered UD v2 validation.

Levels build on each other: 1 file format, 2 morphology, 3 basic syntax,
4 v2 construction rules, 5 enhanced graph. Validating at level k runs all
checks up to and including k, so the diagnostics at level k are always a
subset of those at level k+1. Codes come from the closed CATALOG below.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from . import registry as reg
from .conllu import ParsedDocument, ParseIssue, check_space_policy
from .model import (
    CycleError,
    DanglingHeadError,
    EnhancedGraphError,
    MultipleRootsError,
    NodeId,
    NoRootError,
    Sentence,
    TreeError,
    base_label,
    build_tree,
    enhanced_graph,
    subtype_segments,
)

ERROR = "error"
WARNING = "warning"

# code -> (level, severity, description). The catalog is closed: every
# diagnostic the toolkit can emit is registered here (ORPHAN_OUTSIDE_CONJ
# is produced by the enhancer rather than the validator).
CATALOG: dict[str, tuple[int, str, str]] = {
    # level 1: file format and document structure
    "FIELD_COUNT": (1, ERROR, "token line does not have exactly 10 tab-separated fields"),
    "INVALID_ID": (1, ERROR, "ID field is not i, i-j or i.j"),
    "INVALID_HEAD": (1, ERROR, "HEAD field is neither an integer nor _"),
    "INVALID_FEATS": (1, ERROR, "FEATS entry is not Name=Value"),
    "INVALID_DEPS": (1, ERROR, "DEPS entry is not head:relation"),
    "SPAN_FIELDS": (1, WARNING, "multiword token line carries annotation outside FORM/MISC"),
    "EMPTY_SENTENCE": (1, ERROR, "comment block without token lines"),
    "WORD_ID_SEQUENCE": (1, ERROR, "word indices are not 1..n contiguous"),
    "SPAN_RANGE": (1, ERROR, "multiword token span is inverted or covers missing words"),
    "SPAN_OVERLAP": (1, ERROR, "multiword token spans overlap"),
    "EMPTY_NODE_PLACEMENT": (1, ERROR,
                             "empty node anchor out of range or sub ids not consecutive from 1"),
    "HEAD_MISSING": (1, ERROR, "word has no HEAD value"),
    "DEPREL_MISSING": (1, ERROR, "word has no DEPREL value"),
    "WORD_SPACE": (1, ERROR, "FORM or LEMMA contains an undeclared space"),
    "EMPTY_FILE": (1, WARNING, "document contains no sentences"),
    # level 2: morphology
    "UPOS_MISSING": (2, ERROR, "word has no UPOS tag"),
    "UPOS_UNKNOWN": (2, ERROR, "UPOS tag is not one of the 17 universal tags"),
    "UPOS_LEGACY": (2, ERROR, "UPOS tag was retired in v2 (CONJ)"),
    "FEAT_MALFORMED": (2, ERROR, "feature name or value breaks the capitalized-alphanumeric shape"),
    "FEAT_VALUE_UNKNOWN": (2, ERROR, "universal feature carries an unknown value"),
    "FEAT_LEGACY": (2, ERROR, "feature name was renamed in v2"),
    "FEAT_LEGACY_VALUE": (2, ERROR, "feature value was renamed in v2"),
    "FEAT_UNDECLARED": (2, WARNING, "non-universal feature not declared in the extension config"),
    "FEAT_EXT_VALUE": (2, WARNING, "declared extension feature carries an undeclared value"),
    "PART_UNLISTED": (2, ERROR, "PART word missing from the declared particle list"),
    # level 3: basic syntax
    "NO_ROOT": (3, ERROR, "no word attaches to the artificial root"),
    "MULTIPLE_ROOTS": (3, ERROR, "more than one word attaches to the artificial root"),
    "CYCLE": (3, ERROR, "heads form a cycle"),
    "DANGLING_HEAD": (3, ERROR, "head index outside the sentence"),
    "ROOT_DEPREL_MISMATCH": (3, ERROR, "head 0 must pair with deprel root and vice versa"),
    "DEPREL_UNKNOWN": (3, ERROR, "relation base is not one of the 37 universal relations"),
    "DEPREL_LEGACY": (3, ERROR, "relation was retired in v2"),
    "DEPREL_MALFORMED": (3, ERROR, "relation subtype breaks the lowercase-alphanumeric shape"),
    "DEPREL_SUBTYPE_UNDECLARED": (3, WARNING, "subtype not declared for this relation"),
    # level 4: v2 construction rules
    "FIXED_LEFTWARD": (4, ERROR, "fixed must attach later words to the first one"),
    "FLAT_LEFTWARD": (4, ERROR, "flat must attach later words to the first one"),
    "CONJ_LEFTWARD": (4, ERROR, "conj must attach later conjuncts to the first one"),
    "FIXED_CHAIN": (4, ERROR, "fixed head is itself a fixed dependent (chain, not bouquet)"),
    "FLAT_CHAIN": (4, ERROR, "flat head is itself a flat dependent (chain, not bouquet)"),
    "CONJ_CHAIN": (4, ERROR, "conj head is itself a conj dependent (chain, not bouquet)"),
    "CC_FIRST_CONJ": (4, WARNING, "cc attached v1-style to the first conjunct"),
    "PUNCT_FIRST_CONJ": (4, WARNING, "punct attached v1-style to the first conjunct"),
    "COP_LEMMA_UNLISTED": (4, WARNING, "cop lemma missing from the declared copula list"),
    # level 5: enhanced graph
    "DEPS_RELATION_INVALID": (5, ERROR, "DEPS relation label does not parse"),
    "DEPS_DANGLING": (5, ERROR, "DEPS head references a nonexistent node"),
    "DEPS_SELF_LOOP": (5, ERROR, "DEPS edge loops on its own node"),
    "UNREACHABLE_NODE": (5, ERROR, "node not reachable from the root in the enhanced graph"),
    "EMPTY_NODE_BASIC_HEAD": (5, ERROR, "empty node carries a basic HEAD/DEPREL"),
    "REF_NOT_PRONOUN": (5, ERROR, "ref dependent is not PRON or DET"),
    "CASE_LEMMA_MISMATCH": (5, WARNING,
                            "augmented relation segment disagrees with the case marker lemma"),
    "ORPHAN_OUTSIDE_CONJ": (5, WARNING, "orphan attaches to a word that is not a conj dependent"),
}


@dataclass
class Diagnostic:
    """One validation finding."""

    level: int
    severity: str
    code: str
    sentence_id: str
    node: str | None
    message: str

    def render(self) -> str:
        node = self.node if self.node else "-"
        sid = self.sentence_id if self.sentence_id else "-"
        return f"{self.level} {self.severity} {self.code} {sid} {node} {self.message}"


def make_diagnostic(code: str, sentence_id: str, node: str | None, message: str) -> Diagnostic:
    level, severity, _ = CATALOG[code]
    return Diagnostic(level, severity, code, sentence_id, node, message)


def _sid(sentence: Sentence, sent_id: str | None) -> str:
    if sent_id is not None:
        return sent_id
    return sentence.sent_id or "-"


# ---------------------------------------------------------------------------
# Level 1: format


def validate_format(sentence: Sentence, registry: reg.Registry,
                    sent_id: str | None = None) -> list[Diagnostic]:
    sid = _sid(sentence, sent_id)
    out: list[Diagnostic] = []

    indices = [w.index for w in sentence.words]
    if indices != list(range(1, len(indices) + 1)):
        out.append(make_diagnostic(
            "WORD_ID_SEQUENCE", sid, None,
            f"word ids are {indices}, expected 1..{len(indices)}"))
    index_set = set(indices)

    seen: list[tuple[int, int]] = []
    for span in sorted(sentence.spans, key=lambda s: (s.start, s.end)):
        if span.start > span.end or span.start not in index_set or span.end not in index_set:
            out.append(make_diagnostic(
                "SPAN_RANGE", sid, f"{span.start}-{span.end}",
                f"token span {span.start}-{span.end} does not cover existing words"))
        for start, end in seen:
            if span.start <= end and start <= span.end:
                out.append(make_diagnostic(
                    "SPAN_OVERLAP", sid, f"{span.start}-{span.end}",
                    f"token span {span.start}-{span.end} overlaps {start}-{end}"))
        seen.append((span.start, span.end))

    by_anchor: dict[int, list[int]] = {}
    for node in sentence.empties:
        by_anchor.setdefault(node.anchor, []).append(node.sub)
    for anchor, subs in sorted(by_anchor.items()):
        if anchor != 0 and anchor not in index_set:
            out.append(make_diagnostic(
                "EMPTY_NODE_PLACEMENT", sid, f"{anchor}.{min(subs)}",
                f"empty node anchor {anchor} is not a word in the sentence"))
        if sorted(subs) != list(range(1, len(subs) + 1)):
            out.append(make_diagnostic(
                "EMPTY_NODE_PLACEMENT", sid, f"{anchor}.{min(subs)}",
                f"empty node ids for anchor {anchor} are not consecutive from .1"))

    for word in sentence.words:
        if word.head is None:
            out.append(make_diagnostic("HEAD_MISSING", sid, str(word.index),
                                       f"word {word.index} ({word.form}) has no head"))
        if word.deprel is None:
            out.append(make_diagnostic("DEPREL_MISSING", sid, str(word.index),
                                       f"word {word.index} ({word.form}) has no deprel"))
        issue = check_space_policy(word, registry.space_policy)
        if issue is not None:
            out.append(make_diagnostic("WORD_SPACE", sid, str(word.index), issue.message))
    return out


# ---------------------------------------------------------------------------
# Level 2: morphology


def _validate_feats(feats, registry: reg.Registry, sid: str, node: str) -> list[Diagnostic]:
    out = []
    for name, values in feats.items():
        for value in values:
            try:
                result = reg.lookup_feature(name, value)
            except reg.MalformedFeature:
                out.append(make_diagnostic("FEAT_MALFORMED", sid, node,
                                           f"feature {name}={value} is malformed"))
                continue
            if result.status == reg.UNIVERSAL_OK:
                continue
            if result.status == reg.V1_LEGACY:
                new_name, new_value = result.rename  # type: ignore[misc]
                if new_name != name:
                    out.append(make_diagnostic(
                        "FEAT_LEGACY", sid, node,
                        f"feature {name} was renamed to {new_name}"))
                else:
                    out.append(make_diagnostic(
                        "FEAT_LEGACY_VALUE", sid, node,
                        f"value {name}={value} was renamed to {name}={new_value}"))
            elif result.status == reg.UNIVERSAL_UNKNOWN_VALUE:
                out.append(make_diagnostic(
                    "FEAT_VALUE_UNKNOWN", sid, node,
                    f"{value} is not a legal value of universal feature {name}"))
            else:  # non-universal
                spec = registry.extra_features.get(name)
                if spec is None:
                    out.append(make_diagnostic(
                        "FEAT_UNDECLARED", sid, node,
                        f"feature {name} is not universal and not declared"))
                elif spec.values and value not in spec.values:
                    out.append(make_diagnostic(
                        "FEAT_EXT_VALUE", sid, node,
                        f"{value} is not a declared value of extension feature {name}"))
    return out


def validate_morphology(sentence: Sentence, registry: reg.Registry,
                        sent_id: str | None = None) -> list[Diagnostic]:
    sid = _sid(sentence, sent_id)
    out: list[Diagnostic] = []
    for word in sentence.words:
        node = str(word.index)
        if word.upos is None:
            out.append(make_diagnostic("UPOS_MISSING", sid, node,
                                       f"word {word.index} ({word.form}) has no UPOS"))
        elif word.upos in reg.LEGACY_UPOS_TAGS:
            new = registry.renames.upos_renames.get(word.upos, "?")
            out.append(make_diagnostic("UPOS_LEGACY", sid, node,
                                       f"UPOS {word.upos} was renamed to {new}"))
        elif not reg.is_universal_upos(word.upos):
            out.append(make_diagnostic("UPOS_UNKNOWN", sid, node,
                                       f"{word.upos} is not a universal UPOS tag"))
        if (word.upos == "PART" and registry.part_lemmas
                and (word.lemma or word.form) not in registry.part_lemmas):
            out.append(make_diagnostic(
                "PART_UNLISTED", sid, node,
                f"PART word {word.lemma or word.form!r} is not on the declared particle list"))
        out.extend(_validate_feats(word.feats, registry, sid, node))
    for empty in sentence.empties:
        node = empty.node_id.render()
        if empty.upos is not None and not reg.is_universal_upos(empty.upos):
            code = "UPOS_LEGACY" if empty.upos in reg.LEGACY_UPOS_TAGS else "UPOS_UNKNOWN"
            out.append(make_diagnostic(code, sid, node,
                                       f"{empty.upos} is not a universal UPOS tag"))
        out.extend(_validate_feats(empty.feats, registry, sid, node))
    return out


# ---------------------------------------------------------------------------
# Level 3: basic syntax


def _tree_error_diagnostic(error: TreeError, sid: str) -> Diagnostic:
    if isinstance(error, MultipleRootsError):
        return make_diagnostic("MULTIPLE_ROOTS", sid, str(error.roots[1]), str(error))
    if isinstance(error, NoRootError):
        return make_diagnostic("NO_ROOT", sid, None, str(error))
    if isinstance(error, CycleError):
        return make_diagnostic("CYCLE", sid, str(error.cycle[0]), str(error))
    if isinstance(error, DanglingHeadError):
        return make_diagnostic("DANGLING_HEAD", sid, str(error.index), str(error))
    raise error  # pragma: no cover - no other TreeError subclasses


def validate_syntax(sentence: Sentence, registry: reg.Registry,
                    sent_id: str | None = None) -> list[Diagnostic]:
    sid = _sid(sentence, sent_id)
    out: list[Diagnostic] = []
    for word in sentence.words:
        node = str(word.index)
        if word.deprel is not None:
            base = base_label(word.deprel)
            if base in reg.LEGACY_RELATIONS:
                new = registry.renames.relation_renames.get(base)
                hint = f"; use {new}" if new else ""
                out.append(make_diagnostic(
                    "DEPREL_LEGACY", sid, node,
                    f"relation {base} was retired in v2{hint}"))
            else:
                try:
                    relation = reg.parse_relation(word.deprel)
                except reg.UnknownUniversalRelation:
                    out.append(make_diagnostic(
                        "DEPREL_UNKNOWN", sid, node,
                        f"{base} is not a universal relation"))
                    relation = None
                except reg.MalformedSubtype as exc:
                    out.append(make_diagnostic("DEPREL_MALFORMED", sid, node, str(exc)))
                    relation = None
                if relation is not None:
                    for segment in relation.subtypes:
                        if not registry.subtype_declared(relation.base, segment):
                            out.append(make_diagnostic(
                                "DEPREL_SUBTYPE_UNDECLARED", sid, node,
                                f"subtype {relation.base}:{segment} is not declared"))
            if word.head is not None:
                if word.head == 0 and base != "root":
                    out.append(make_diagnostic(
                        "ROOT_DEPREL_MISMATCH", sid, node,
                        f"word {word.index} has head 0 but deprel {word.deprel}"))
                elif word.head != 0 and base == "root":
                    out.append(make_diagnostic(
                        "ROOT_DEPREL_MISMATCH", sid, node,
                        f"word {word.index} has deprel root but head {word.head}"))
    try:
        build_tree(sentence)
    except TreeError as error:
        out.append(_tree_error_diagnostic(error, sid))
    except ValueError:
        pass  # duplicate indices, already reported at level 1
    return out


# ---------------------------------------------------------------------------
# Level 4: v2 construction rules


_BOUQUET_RELATIONS = ("fixed", "flat", "conj")


def validate_constructions(sentence: Sentence, registry: reg.Registry,
                           sent_id: str | None = None) -> list[Diagnostic]:
    sid = _sid(sentence, sent_id)
    out: list[Diagnostic] = []
    try:
        build_tree(sentence)
    except (TreeError, ValueError):
        return out  # structural checks need a valid tree

    words = {w.index: w for w in sentence.words}
    for word in sentence.words:
        base = word.deprel_base
        node = str(word.index)
        if base in _BOUQUET_RELATIONS and word.head:
            head = words[word.head]
            if word.head > word.index:
                out.append(make_diagnostic(
                    f"{base.upper()}_LEFTWARD", sid, node,
                    f"{base}({head.form},{word.form}) points leftward"))
            if head.deprel_base == base:
                out.append(make_diagnostic(
                    f"{base.upper()}_CHAIN", sid, node,
                    f"{base} head {head.form!r} is itself a {base} dependent"))
        if base in ("cc", "punct") and word.head:
            head = words[word.head]
            conj_positions = [c.index for c in sentence.children(head.index)
                              if c.deprel_base == "conj"]
            if (conj_positions and head.index < word.index
                    and any(pos > word.index for pos in conj_positions)):
                code = "CC_FIRST_CONJ" if base == "cc" else "PUNCT_FIRST_CONJ"
                out.append(make_diagnostic(
                    code, sid, node,
                    f"{base} {word.form!r} attaches to the first conjunct {head.form!r}; "
                    f"v2 attaches it to the following conjunct"))
        if base == "cop" and registry.cop_lemmas:
            if (word.lemma or word.form) not in registry.cop_lemmas:
                out.append(make_diagnostic(
                    "COP_LEMMA_UNLISTED", sid, node,
                    f"cop lemma {word.lemma or word.form!r} is not on the declared copula list"))
    return out


# ---------------------------------------------------------------------------
# Level 5: enhanced graph


def _case_marker_segments(sentence: Sentence, graph, dep_id: NodeId) -> str | None:
    """Expected augmentation segment from the case/mark dependents of a node."""
    markers = []
    for child_id, rel in graph.dependents(dep_id):
        if base_label(rel) in ("case", "mark") and child_id.is_word:
            markers.append(child_id)
    if not markers:
        return None
    marker = sentence.word(min(markers).anchor)
    parts = [marker]
    for child_id, rel in graph.dependents(marker.node_id):
        if base_label(rel) == "fixed" and child_id.is_word:
            parts.append(sentence.word(child_id.anchor))
    parts.sort(key=lambda w: w.index)
    pieces = [(w.lemma if w.lemma is not None else w.form) for w in parts]
    return "_".join(p.lower().replace(" ", "_") for p in pieces)


def validate_enhanced(sentence: Sentence, registry: reg.Registry,
                      sent_id: str | None = None) -> list[Diagnostic]:
    sid = _sid(sentence, sent_id)
    out: list[Diagnostic] = []
    if not any(node.deps for node in sentence.all_nodes()):
        return out

    for empty in sentence.empties:
        if empty.head is not None or empty.deprel is not None:
            out.append(make_diagnostic(
                "EMPTY_NODE_BASIC_HEAD", sid, empty.node_id.render(),
                f"empty node {empty.node_id.render()} carries a basic head or deprel"))

    for node in sentence.all_nodes():
        nid = node.node_id.render()
        for head, rel in node.deps:
            try:
                reg.parse_relation(rel, enhanced=True)
            except (reg.UnknownUniversalRelation, reg.MalformedSubtype) as exc:
                out.append(make_diagnostic("DEPS_RELATION_INVALID", sid, nid, str(exc)))

    try:
        graph = enhanced_graph(sentence)
    except EnhancedGraphError as error:
        for issue in error.issues:
            out.append(make_diagnostic(issue.code, sid, issue.node.render(), issue.message))
        return out

    for head, dep, rel in sorted(graph.edges):
        if base_label(rel) == "ref":
            target = sentence.node(dep)
            upos = getattr(target, "upos", None)
            if upos not in ("PRON", "DET"):
                out.append(make_diagnostic(
                    "REF_NOT_PRONOUN", sid, dep.render(),
                    f"ref points at {dep.render()} tagged {upos or '_'}, expected PRON or DET"))
        segments = subtype_segments(rel)
        if base_label(rel) in ("obl", "nmod", "acl", "advcl") and segments:
            expected = _case_marker_segments(sentence, graph, dep)
            if expected is not None and expected not in segments:
                out.append(make_diagnostic(
                    "CASE_LEMMA_MISMATCH", sid, dep.render(),
                    f"relation {rel} does not carry the case marker lemma {expected!r}"))
    return out


# ---------------------------------------------------------------------------
# Document-level driver


_LEVEL_CHECKS = (
    (1, validate_format),
    (2, validate_morphology),
    (3, validate_syntax),
    (4, validate_constructions),
    (5, validate_enhanced),
)


@dataclass
class ValidationReport:
    """All diagnostics for a document plus summary counts."""

    diagnostics: list[Diagnostic] = field(default_factory=list)
    sentence_count: int = 0
    max_level: int = 5
    source_name: str = "<stream>"

    @property
    def valid(self) -> bool:
        return not any(d.severity == ERROR for d in self.diagnostics)

    @property
    def counts(self) -> Counter:
        return Counter(d.code for d in self.diagnostics)

    def render_text(self) -> str:
        lines = [d.render() for d in self.diagnostics]
        errors = sum(1 for d in self.diagnostics if d.severity == ERROR)
        warnings = len(self.diagnostics) - errors
        for code, count in sorted(self.counts.items()):
            lines.append(f"# {code}: {count}")
        lines.append(f"# {self.source_name}: {self.sentence_count} sentences, "
                     f"{errors} errors, {warnings} warnings")
        lines.append(f"# status: {'valid' if self.valid else 'invalid'}")
        return "\n".join(lines) + "\n"

    def to_records(self) -> list[dict]:
        return [{"level": d.level, "severity": d.severity, "code": d.code,
                 "sentence_id": d.sentence_id, "node": d.node, "message": d.message}
                for d in self.diagnostics]


def validate_document(document: ParsedDocument, registry: reg.Registry | None = None,
                      max_level: int = 5,
                      parse_issues: list[ParseIssue] | None = None) -> ValidationReport:
    """Validate every sentence up to ``max_level`` and summarize.

    ``parse_issues`` from the reader surface as level-1 diagnostics. The
    document classifies as valid iff there are zero errors.
    """
    if not 1 <= max_level <= 5:
        raise ValueError("max_level must be between 1 and 5")
    registry = registry or reg.Registry.default()
    report = ValidationReport(sentence_count=len(document.sentences),
                              max_level=max_level, source_name=document.source_name)

    for issue in parse_issues or []:
        where = f"line {issue.line}"
        if issue.field is not None:
            where += f", field {issue.field}"
        report.diagnostics.append(make_diagnostic(issue.code, "-", None,
                                                  f"{where}: {issue.message}"))

    if not document.sentences:
        report.diagnostics.append(make_diagnostic(
            "EMPTY_FILE", "-", None, "document contains no sentences"))
        return report

    for position, sentence in enumerate(document.sentences, start=1):
        sid = sentence.sent_id or f"#{position}"
        for level, checker in _LEVEL_CHECKS:
            if level > max_level:
                break
            report.diagnostics.extend(checker(sentence, registry, sent_id=sid))
    return report
