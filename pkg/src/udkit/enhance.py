"""Rule-based computation of the enhanced representation from a basic v2 tree.

The five enhancement types are independently togglable and run in a fixed
order: null nodes -> conjunct propagation -> controlled subjects ->
relative pronouns -> case augmentation. Everything operates on the DEPS
annotation only; the basic tree is never mutated.
"""

from __future__ import annotations

import copy
from dataclasses import dataclass

from .model import (
    EmptyNode,
    NodeId,
    Sentence,
    SyntacticWord,
    base_label,
    build_tree,
    is_predicate,
    subtype_segments,
)
from .validate import Diagnostic, make_diagnostic
from .convert import OBLIQUENESS_HIERARCHY


@dataclass(frozen=True)
class EnhanceOptions:
    """Independent switches for the five enhancement steps."""

    null_nodes: bool = True
    conjunct_propagation: bool = True
    xsubj: bool = True
    relative_pronouns: bool = True
    case_augmentation: bool = True
    subtype_xsubj: bool = False
    lemma_source_for_case: str = "lemma"  # or "form"

    @classmethod
    def all(cls) -> "EnhanceOptions":
        return cls()

    @classmethod
    def none(cls) -> "EnhanceOptions":
        return cls(null_nodes=False, conjunct_propagation=False, xsubj=False,
                   relative_pronouns=False, case_augmentation=False)


def _sid(sentence: Sentence) -> str:
    return sentence.sent_id or "-"


def _deps_dependents(sentence: Sentence, head: NodeId) -> list[tuple[SyntacticWord | EmptyNode, str]]:
    """Nodes depending on ``head`` in the DEPS graph, in document order."""
    out = []
    for node in sentence.all_nodes():
        for h, rel in node.deps:
            if h == head:
                out.append((node, rel))
    return out


def _has_dependent(sentence: Sentence, head: NodeId, bases: tuple[str, ...]) -> bool:
    return any(base_label(rel) in bases for _, rel in _deps_dependents(sentence, head))


def seed_enhanced(sentence: Sentence) -> Sentence:
    """Copy every basic (head, deprel) edge into DEPS."""
    sentence = copy.deepcopy(sentence)
    for word in sentence.words:
        if word.head is None or word.deprel is None:
            raise ValueError(f"word {word.index} has no basic head/deprel to seed from")
        word.deps = [(NodeId.word(word.head) if word.head else NodeId.root(), word.deprel)]
    return sentence


def add_null_nodes(sentence: Sentence) -> tuple[Sentence, list[Diagnostic]]:
    """Insert an empty node for each gapped clause marked by orphan edges.

    A promoted head is a conj dependent with orphan children. Its clause is
    rewired onto a new empty node that copies the first-conjunct predicate:
    the conj edge moves to the node, clause members get relations matched
    against the first conjunct's dependents in linear order (obliqueness
    hierarchy as fallback), and the clause's cc/punct move over as well.
    """
    sentence = copy.deepcopy(sentence)
    sid = _sid(sentence)
    diagnostics: list[Diagnostic] = []

    orphan_heads: dict[NodeId, list[SyntacticWord | EmptyNode]] = {}
    for node in sentence.all_nodes():
        for head, rel in node.deps:
            if base_label(rel) == "orphan":
                orphan_heads.setdefault(head, []).append(node)

    for promoted_id in sorted(orphan_heads):
        promoted = sentence.node(promoted_id)
        if promoted is None:
            continue
        conj_edges = [(h, rel) for h, rel in promoted.deps if base_label(rel) == "conj"]
        if not conj_edges:
            diagnostics.append(make_diagnostic(
                "ORPHAN_OUTSIDE_CONJ", sid, promoted_id.render(),
                f"orphan dependents of {promoted_id.render()} but it is not a conj dependent"))
            continue
        predicate_id, conj_label = conj_edges[0]
        predicate = sentence.node(predicate_id)
        if predicate is None:
            continue

        sub = 1 + max((e.sub for e in sentence.empties if e.anchor == promoted_id.anchor),
                      default=0)
        node = EmptyNode(
            anchor=promoted_id.anchor,
            sub=sub,
            lemma=predicate.lemma,
            upos=predicate.upos,
            feats=predicate.feats.copy(),
            deps=[(predicate_id, conj_label)],
        )
        sentence.empties.append(node)
        sentence.empties.sort(key=lambda e: (e.anchor, e.sub))

        # relations of the first conjunct's own dependents, in linear order
        pool = [rel for dep, rel in
                sorted(_deps_dependents(sentence, predicate_id),
                       key=lambda d: d[0].node_id)
                if base_label(rel) not in ("conj", "cc", "punct")
                and dep.node_id != promoted_id]
        members = sorted([promoted] + orphan_heads[promoted_id], key=lambda n: n.node_id)
        used: list[str] = []
        for position, member in enumerate(members):
            if position < len(pool):
                assigned = pool[position]
            else:
                fallback = next((b for b in OBLIQUENESS_HIERARCHY
                                 if b not in {base_label(u) for u in used}), "dep")
                assigned = fallback
            used.append(assigned)
            member.deps = [(h, rel) for h, rel in member.deps
                           if not ((h, base_label(rel)) in ((predicate_id, "conj"),
                                                            (promoted_id, "orphan")))]
            member.deps.append((node.node_id, assigned))

        for dep, rel in _deps_dependents(sentence, promoted_id):
            if base_label(rel) in ("cc", "punct"):
                dep.deps = [(h, r) for h, r in dep.deps if (h, r) != (promoted_id, rel)]
                dep.deps.append((node.node_id, rel))
    return sentence, diagnostics


def propagate_conjuncts(sentence: Sentence) -> Sentence:
    """Make shared dependents and shared governors of conjuncts explicit."""
    sentence = copy.deepcopy(sentence)

    conj_edges = []
    for node in sentence.all_nodes():
        for head, rel in node.deps:
            if base_label(rel) == "conj":
                conj_edges.append((head, node.node_id))
    conj_edges.sort()

    shared_bases = ("nsubj", "obj", "iobj", "obl", "csubj")

    # (a) shared dependents: pre-head arguments and post-coordination
    # arguments of the first conjunct also attach to the other conjuncts
    for head_id, conj_id in conj_edges:
        if not head_id.is_word:
            continue
        head_word = sentence.node(head_id)
        if head_word is None or not is_predicate(sentence, head_id.anchor):
            continue
        last_conjunct = max(c for h, c in conj_edges if h == head_id)
        for dep, rel in _deps_dependents(sentence, head_id):
            if base_label(rel) not in shared_bases:
                continue
            position = dep.node_id
            if not (position < head_id or position > last_conjunct):
                continue
            if _has_dependent(sentence, conj_id, (base_label(rel),)):
                continue
            if dep.node_id == conj_id or (conj_id, rel) in dep.deps:
                continue
            dep.deps.append((conj_id, rel))

    # (b) shared governors: a conjunct of a dependent also depends on the
    # first conjunct's governor
    for head_id, conj_id in conj_edges:
        if not head_id.is_word:
            continue
        first = sentence.node(head_id)
        if first is None or first.head is None or not first.deprel:
            continue
        if base_label(first.deprel) in ("root", "conj", "cc", "punct"):
            continue
        governor = NodeId.word(first.head) if first.head else NodeId.root()
        conj_node = sentence.node(conj_id)
        if conj_node is None or governor == conj_id:
            continue
        if (governor, first.deprel) not in conj_node.deps:
            conj_node.deps.append((governor, first.deprel))
    return sentence


def add_controlled_subjects(sentence: Sentence,
                            options: EnhanceOptions = EnhanceOptions()) -> Sentence:
    """Attach the controller of an open clausal complement as its subject.

    Controller precedence is obj > iobj > nsubj on the matrix predicate.
    xcomp chains resolve left to right so a controller found for an inner
    predicate carries on outward.
    """
    sentence = copy.deepcopy(sentence)
    label = "nsubj:xsubj" if options.subtype_xsubj else "nsubj"

    xcomp_edges = []
    for node in sentence.all_nodes():
        for head, rel in node.deps:
            if base_label(rel) == "xcomp":
                xcomp_edges.append((head, node.node_id))
    xcomp_edges.sort()

    for matrix_id, pred_id in xcomp_edges:
        if _has_dependent(sentence, pred_id, ("nsubj", "csubj")):
            continue
        controller = None
        dependents = _deps_dependents(sentence, matrix_id)
        for wanted in ("obj", "iobj", "nsubj"):
            candidates = [dep for dep, rel in dependents if base_label(rel) == wanted]
            if candidates:
                controller = min(candidates, key=lambda n: n.node_id)
                break
        if controller is None or controller.node_id == pred_id:
            continue
        if (pred_id, label) not in controller.deps:
            controller.deps.append((pred_id, label))
    return sentence


def add_ref_relations(sentence: Sentence) -> Sentence:
    """Mark relative pronouns with ref and link the clause predicate to the
    antecedent.

    The relativizer is the leftmost PronType=Rel word among the clause
    predicate's dependents, or one level down under a case-marked nominal.
    The relativizer keeps its original relation alongside the new ref edge.
    """
    sentence = copy.deepcopy(sentence)

    relcl_edges = []
    for node in sentence.all_nodes():
        for head, rel in node.deps:
            if base_label(rel) == "acl" and "relcl" in subtype_segments(rel):
                relcl_edges.append((head, node.node_id))
    relcl_edges.sort()

    for antecedent_id, pred_id in relcl_edges:
        candidates: list[tuple[NodeId, NodeId, str]] = []  # (relativizer, head, relation)
        for dep, rel in _deps_dependents(sentence, pred_id):
            if dep.feats.has("PronType", "Rel"):
                candidates.append((dep.node_id, pred_id, rel))
            elif _has_dependent(sentence, dep.node_id, ("case",)):
                for nested, nested_rel in _deps_dependents(sentence, dep.node_id):
                    if nested.feats.has("PronType", "Rel"):
                        candidates.append((nested.node_id, dep.node_id, nested_rel))
        if not candidates:
            continue
        relativizer_id, inner_head, inner_rel = min(candidates)
        relativizer = sentence.node(relativizer_id)
        antecedent = sentence.node(antecedent_id)
        if relativizer is None or antecedent is None:
            continue
        if (antecedent_id, "ref") not in relativizer.deps:
            relativizer.deps.append((antecedent_id, "ref"))
        if antecedent_id != inner_head and (inner_head, inner_rel) not in antecedent.deps:
            antecedent.deps.append((inner_head, inner_rel))
    return sentence


_AUGMENTABLE = ("obl", "nmod", "acl", "advcl")


def augment_case_relations(sentence: Sentence,
                           options: EnhanceOptions = EnhanceOptions()) -> Sentence:
    """Append adposition lemmas or morphological case values to modifier labels.

    Multiword markers (fixed expressions) join with underscores; when there
    is no case or mark child but the dependent carries a Case feature, its
    lowercased value is used instead.
    """
    sentence = copy.deepcopy(sentence)

    def marker_text(node: SyntacticWord | EmptyNode) -> str:
        if options.lemma_source_for_case == "form":
            text = node.form or node.lemma or ""
        else:
            text = node.lemma if node.lemma is not None else (node.form or "")
        return text.lower().replace(" ", "_")

    for node in sentence.all_nodes():
        for position, (head, rel) in enumerate(list(node.deps)):
            if base_label(rel) not in _AUGMENTABLE:
                continue
            markers = [dep for dep, dep_rel in _deps_dependents(sentence, node.node_id)
                       if base_label(dep_rel) in ("case", "mark")]
            segment = None
            if markers:
                marker = min(markers, key=lambda n: n.node_id)
                parts = [marker] + [dep for dep, dep_rel
                                    in _deps_dependents(sentence, marker.node_id)
                                    if base_label(dep_rel) == "fixed"]
                parts.sort(key=lambda n: n.node_id)
                segment = "_".join(marker_text(p) for p in parts)
            elif node.feats.has("Case"):
                segment = sorted(node.feats.get("Case"))[0].lower()
            if not segment:
                continue
            if subtype_segments(rel) and subtype_segments(rel)[-1] == segment:
                continue
            node.deps[position] = (head, f"{rel}:{segment}")
    return sentence


def enhance(sentence: Sentence,
            options: EnhanceOptions = EnhanceOptions()) -> tuple[Sentence, list[Diagnostic]]:
    """Seed DEPS from the basic tree, then run the enabled steps in order."""
    build_tree(sentence)  # raises on an invalid basic tree
    sentence = seed_enhanced(sentence)
    diagnostics: list[Diagnostic] = []
    if options.null_nodes:
        sentence, step_diagnostics = add_null_nodes(sentence)
        diagnostics.extend(step_diagnostics)
    if options.conjunct_propagation:
        sentence = propagate_conjuncts(sentence)
    if options.xsubj:
        sentence = add_controlled_subjects(sentence, options)
    if options.relative_pronouns:
        sentence = add_ref_relations(sentence)
    if options.case_augmentation:
        sentence = augment_case_relations(sentence, options)
    return sentence, diagnostics


def enhance_document(document, options: EnhanceOptions = EnhanceOptions()):
    """Enhance every sentence; sentences without a valid basic tree are
    passed through untouched (their problems belong to the validator)."""
    from .conllu import ParsedDocument
    from .model import TreeError

    out = ParsedDocument(source_name=document.source_name)
    diagnostics: list[Diagnostic] = []
    for sentence in document.sentences:
        try:
            enhanced, step_diagnostics = enhance(sentence, options)
        except (TreeError, ValueError):
            out.sentences.append(copy.deepcopy(sentence))
            continue
        out.sentences.append(enhanced)
        diagnostics.extend(step_diagnostics)
    return out, diagnostics
