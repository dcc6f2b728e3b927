"""Mechanical UD v1 to v2 conversion.

Each rule is a pure sentence transformation returning a fresh sentence and
a log of every mutation it made, tagged exact, heuristic or manual-review.
The document pipeline applies them in a fixed, normative order:

    rename_labels -> convert_cop_aux -> convert_neg -> split_nmod_obl
        -> reattach_coordination -> convert_remnant_to_orphan

Renames run first so later structural rules never see legacy labels.
Sentences that are already v2 pass through untouched with an empty log.
"""

from __future__ import annotations

import copy
from dataclasses import dataclass, field

from .conllu import ParsedDocument
from .model import Sentence, SyntacticWord, base_label, build_tree, is_predicate, TreeError
from .registry import DEFAULT_RENAMES, Registry, RenameTable

EXACT = "exact"
HEURISTIC = "heuristic"
MANUAL_REVIEW = "manual-review"


@dataclass
class LogEntry:
    sentence_id: str
    node: str
    rule: str
    old: str
    new: str
    confidence: str


@dataclass
class ConversionLog:
    entries: list[LogEntry] = field(default_factory=list)

    def add(self, sentence_id: str, node: int | str, rule: str,
            old: str, new: str, confidence: str) -> None:
        self.entries.append(LogEntry(sentence_id, str(node), rule, old, new, confidence))

    def extend(self, other: "ConversionLog") -> None:
        self.entries.extend(other.entries)

    def to_tsv(self) -> str:
        lines = ["\t".join((e.sentence_id, e.node, e.rule, e.old, e.new, e.confidence))
                 for e in self.entries]
        return "\n".join(lines) + ("\n" if lines else "")

    def __len__(self) -> int:
        return len(self.entries)


def _sid(sentence: Sentence, sent_id: str | None) -> str:
    if sent_id is not None:
        return sent_id
    return sentence.sent_id or "-"


def _rename_relation(label: str, renames: RenameTable) -> tuple[str, bool]:
    """New label for a possibly subtyped legacy relation.

    When the rename target itself carries a subtype (nsubjpass -> nsubj:pass)
    an old subtype cannot be kept without deep nesting; it is dropped and the
    second return value reports that.
    """
    if label in renames.relation_renames:
        return renames.relation_renames[label], False
    base, colon, rest = label.partition(":")
    if colon and base in renames.relation_renames:
        target = renames.relation_renames[base]
        if ":" in target:
            return target, True
        return f"{target}:{rest}", False
    return label, False


def rename_labels(sentence: Sentence, renames: RenameTable = DEFAULT_RENAMES,
                  sent_id: str | None = None) -> tuple[Sentence, ConversionLog]:
    """Apply the v1-to-v2 rename tables for UPOS, relations, features and values."""
    sentence = copy.deepcopy(sentence)
    sid = _sid(sentence, sent_id)
    log = ConversionLog()
    for word in sentence.words:
        if word.upos in renames.upos_renames:
            new = renames.upos_renames[word.upos]
            log.add(sid, word.index, "rename_labels",
                    f"upos={word.upos}", f"upos={new}", EXACT)
            word.upos = new
        if word.deprel:
            new_label, dropped = _rename_relation(word.deprel, renames)
            if new_label != word.deprel:
                log.add(sid, word.index, "rename_labels",
                        f"deprel={word.deprel}", f"deprel={new_label}",
                        MANUAL_REVIEW if dropped else EXACT)
                word.deprel = new_label
        for old_name, new_name in renames.feature_renames.items():
            if word.feats.has(old_name):
                old_render = f"feats={old_name}={','.join(sorted(word.feats.get(old_name)))}"
                word.feats.rename(old_name, new_name)
                log.add(sid, word.index, "rename_labels", old_render,
                        f"feats={new_name}={','.join(sorted(word.feats.get(new_name)))}", EXACT)
        for (name, old_value), new_value in renames.value_renames.items():
            if word.feats.has(name, old_value):
                word.feats.replace_value(name, old_value, new_value)
                log.add(sid, word.index, "rename_labels",
                        f"feats={name}={old_value}", f"feats={name}={new_value}", EXACT)
    return sentence, log


def convert_cop_aux(sentence: Sentence, cop_lemmas: frozenset[str] = frozenset(),
                    sent_id: str | None = None) -> tuple[Sentence, ConversionLog]:
    """Retag declared copulas VERB -> AUX; route undeclared cop lemmas to review.

    v2 restricts cop to pure linking words, but deciding which verbs qualify
    needs a per-language lemma list, so anything not declared is only logged.
    """
    sentence = copy.deepcopy(sentence)
    sid = _sid(sentence, sent_id)
    log = ConversionLog()
    for word in sentence.words:
        if word.deprel_base != "cop":
            continue
        lemma = word.lemma or word.form
        if lemma in cop_lemmas:
            if word.upos == "VERB":
                log.add(sid, word.index, "cop_aux", "upos=VERB", "upos=AUX", HEURISTIC)
                word.upos = "AUX"
        else:
            log.add(sid, word.index, "cop_aux",
                    f"cop lemma {lemma!r}", f"cop lemma {lemma!r}", MANUAL_REVIEW)
    return sentence, log


def convert_neg(sentence: Sentence, sent_id: str | None = None) -> tuple[Sentence, ConversionLog]:
    """Replace the retired neg relation with advmod/det plus Polarity=Neg."""
    sentence = copy.deepcopy(sentence)
    sid = _sid(sentence, sent_id)
    log = ConversionLog()
    for word in sentence.words:
        if base_label(word.deprel) != "neg":
            continue
        if word.upos == "DET":
            new_label = "det"
            confidence = HEURISTIC
        elif word.upos in ("ADV", "PART"):
            new_label = "advmod"
            confidence = HEURISTIC
        else:
            # no mapping given for other categories; take the adverbial
            # reading but flag it
            new_label = "advmod"
            confidence = MANUAL_REVIEW
        log.add(sid, word.index, "neg", f"deprel={word.deprel}",
                f"deprel={new_label}", confidence)
        word.deprel = new_label
        if not word.feats.has("Polarity", "Neg"):
            word.feats.add("Polarity", "Neg")
            log.add(sid, word.index, "neg", "feats=", "feats=Polarity=Neg", confidence)
    return sentence, log


def split_nmod_obl(sentence: Sentence, sent_id: str | None = None) -> tuple[Sentence, ConversionLog]:
    """Relabel nmod as obl wherever the head is a predicate.

    The predicate test is head category (VERB/AUX), a clausal relation on the
    head, or a copula child; the paper states the principle without an
    algorithm, so every relabeling is logged heuristic.
    """
    sentence = copy.deepcopy(sentence)
    sid = _sid(sentence, sent_id)
    log = ConversionLog()
    index_set = {w.index for w in sentence.words}
    for word in sentence.words:
        if base_label(word.deprel) != "nmod":
            continue
        if word.head not in index_set:
            continue
        if is_predicate(sentence, word.head):
            new_label = "obl" + word.deprel[len("nmod"):]  # keep any subtype
            log.add(sid, word.index, "nmod_obl", f"deprel={word.deprel}",
                    f"deprel={new_label}", HEURISTIC)
            word.deprel = new_label
    return sentence, log


def _subtree(sentence: Sentence, root_index: int) -> set[int]:
    out: set[int] = set()
    frontier = [root_index]
    while frontier:
        index = frontier.pop()
        for child in sentence.children(index):
            if child.index not in out:
                out.add(child.index)
                frontier.append(child.index)
    return out


def reattach_coordination(sentence: Sentence,
                          sent_id: str | None = None) -> tuple[Sentence, ConversionLog]:
    """Move cc/punct from the first conjunct to the immediately following conjunct.

    Only dependents lying linearly between the coordination head and one of
    its conjuncts are touched. A cc with no following conjunct (trailing
    conjunction) is left alone and routed to manual review.
    """
    sentence = copy.deepcopy(sentence)
    sid = _sid(sentence, sent_id)
    log = ConversionLog()
    for word in sentence.words:
        base = base_label(word.deprel)
        if base not in ("cc", "punct") or not word.head:
            continue
        try:
            head = sentence.word(word.head)
        except KeyError:
            continue
        conj_after_head = [c.index for c in sentence.children(head.index)
                           if c.deprel_base == "conj" and c.index > head.index]
        if not conj_after_head or word.index <= head.index:
            continue
        following = [c for c in conj_after_head if c > word.index]
        if not following:
            if base == "cc":
                log.add(sid, word.index, "coordination",
                        f"head={word.head}", f"head={word.head}", MANUAL_REVIEW)
            continue
        target = min(following)
        if target in _subtree(sentence, word.index):
            log.add(sid, word.index, "coordination",
                    f"head={word.head}", f"head={word.head}", MANUAL_REVIEW)
            continue
        log.add(sid, word.index, "coordination",
                f"head={word.head}", f"head={target}", EXACT)
        word.head = target
    return sentence, log


# promotion order for gapped clauses; the paper fixes only that subjects
# precede objects, the tail is project convention
OBLIQUENESS_HIERARCHY = ("nsubj", "obj", "iobj", "csubj", "ccomp", "xcomp", "obl", "advmod")


def _obliqueness_rank(label: str | None) -> int:
    base = base_label(label)
    if base in OBLIQUENESS_HIERARCHY:
        return OBLIQUENESS_HIERARCHY.index(base)
    return len(OBLIQUENESS_HIERARCHY)


def convert_remnant_to_orphan(sentence: Sentence,
                              sent_id: str | None = None) -> tuple[Sentence, ConversionLog]:
    """Regroup v1 remnant chains into the v2 conj + orphan analysis.

    Assumes the documented v1 topology: each correlate attaches to its
    counterpart in the previous clause with the remnant relation. Per gapped
    clause the correlate highest on the obliqueness hierarchy is promoted
    and attached conj to the first-clause predicate; the rest become its
    orphan dependents, and cc/punct between the clauses move to the promoted
    word. Anything that does not fit leaves the sentence untouched with a
    manual-review entry.
    """
    original = sentence
    sentence = copy.deepcopy(sentence)
    sid = _sid(sentence, sent_id)
    log = ConversionLog()
    remnants = [w for w in sentence.words if base_label(w.deprel) == "remnant"]
    if not remnants:
        return sentence, log

    def bail(reason: str) -> tuple[Sentence, ConversionLog]:
        failed = ConversionLog()
        failed.add(sid, remnants[0].index, "remnant", reason, reason, MANUAL_REVIEW)
        return copy.deepcopy(original), failed

    words = {w.index: w for w in sentence.words}
    remnant_indices = {w.index for w in remnants}

    # clause depth along the remnant chain; counterpart of a depth-1
    # correlate must not itself be a remnant
    depth: dict[int, int] = {}
    role: dict[int, str] = {}

    def resolve(word: SyntacticWord, seen: set[int]) -> bool:
        if word.index in depth:
            return True
        if word.index in seen:
            return False  # remnant cycle
        seen.add(word.index)
        counterpart = words.get(word.head or 0)
        if counterpart is None:
            return False
        if counterpart.index in remnant_indices:
            if not resolve(counterpart, seen):
                return False
            depth[word.index] = depth[counterpart.index] + 1
            role[word.index] = role[counterpart.index]
        else:
            depth[word.index] = 1
            role[word.index] = counterpart.deprel or "dep"
        return True

    for word in remnants:
        if not resolve(word, set()):
            return bail("remnant chain is not pairable")

    # the shared first-clause predicate is the common governor of the
    # depth-1 counterparts
    predicates = set()
    for word in remnants:
        if depth[word.index] == 1:
            counterpart = words[word.head]  # type: ignore[index]
            predicates.add(counterpart.head)
    if len(predicates) != 1 or not predicates.issubset(set(words) | {None}):
        return bail("correlates do not share one first-clause predicate")
    predicate_index = predicates.pop()
    if predicate_index is None or predicate_index not in words:
        return bail("first-clause predicate not found")

    clauses: dict[int, list[SyntacticWord]] = {}
    for word in remnants:
        clauses.setdefault(depth[word.index], []).append(word)

    promoted_indices = []
    for clause_depth in sorted(clauses):
        members = sorted(clauses[clause_depth], key=lambda w: w.index)
        promoted = min(members, key=lambda w: (_obliqueness_rank(role[w.index]), w.index))
        promoted_indices.append(promoted.index)
        log.add(sid, promoted.index, "remnant",
                f"head={promoted.head}", f"head={predicate_index}", HEURISTIC)
        log.add(sid, promoted.index, "remnant",
                f"deprel={promoted.deprel}", "deprel=conj", HEURISTIC)
        promoted.head = predicate_index
        promoted.deprel = "conj"
        for member in members:
            if member is promoted:
                continue
            log.add(sid, member.index, "remnant",
                    f"head={member.head}", f"head={promoted.index}", HEURISTIC)
            log.add(sid, member.index, "remnant",
                    f"deprel={member.deprel}", "deprel=orphan", HEURISTIC)
            member.head = promoted.index
            member.deprel = "orphan"

    # cc/punct of each gapped clause sit on the first-clause predicate in
    # v1; move them to the promoted conjunct they precede
    for word in sentence.words:
        if word.deprel_base not in ("cc", "punct") or word.head != predicate_index:
            continue
        if word.index <= predicate_index:
            continue
        following = [p for p in promoted_indices if p > word.index]
        if following:
            target = min(following)
            log.add(sid, word.index, "remnant",
                    f"head={word.head}", f"head={target}", HEURISTIC)
            word.head = target

    try:
        build_tree(sentence)
    except (TreeError, ValueError):
        return bail("conversion would break the tree")
    return sentence, log


def convert_sentence(sentence: Sentence, registry: Registry | None = None,
                     sent_id: str | None = None) -> tuple[Sentence, ConversionLog]:
    """Run the full rule pipeline over one sentence."""
    registry = registry or Registry.default()
    sid = _sid(sentence, sent_id)
    log = ConversionLog()

    sentence, step_log = rename_labels(sentence, registry.renames, sent_id=sid)
    log.extend(step_log)
    sentence, step_log = convert_cop_aux(sentence, registry.cop_lemmas, sent_id=sid)
    log.extend(step_log)
    sentence, step_log = convert_neg(sentence, sent_id=sid)
    log.extend(step_log)
    sentence, step_log = split_nmod_obl(sentence, sent_id=sid)
    log.extend(step_log)

    try:
        build_tree(sentence)
    except (TreeError, ValueError):
        log.add(sid, "-", "pipeline", "invalid tree", "structural rules skipped",
                MANUAL_REVIEW)
        return sentence, log

    sentence, step_log = reattach_coordination(sentence, sent_id=sid)
    log.extend(step_log)
    sentence, step_log = convert_remnant_to_orphan(sentence, sent_id=sid)
    log.extend(step_log)
    return sentence, log


def convert_v1_to_v2(document: ParsedDocument,
                     registry: Registry | None = None) -> tuple[ParsedDocument, ConversionLog]:
    """Convert a whole document; per-sentence failures never abort the run."""
    registry = registry or Registry.default()
    out = ParsedDocument(source_name=document.source_name)
    log = ConversionLog()
    for position, sentence in enumerate(document.sentences, start=1):
        sid = sentence.sent_id or f"#{position}"
        converted, sentence_log = convert_sentence(sentence, registry, sent_id=sid)
        out.sentences.append(converted)
        log.extend(sentence_log)
    return out, log
