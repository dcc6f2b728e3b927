"""Document model for dependency-annotated sentences.

Sentences hold syntactic words, multiword token spans and empty nodes
exactly as they appear in a file. Heads are raw integers and nothing is
enforced at construction time, so broken files can be loaded, inspected
and diagnosed instead of crashing the reader. Trees and enhanced graphs
are built on demand and raise typed errors when the data is not well
formed.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, NamedTuple

_NODE_ID_RE = re.compile(r"(0|[1-9][0-9]*)(?:\.([0-9]+))?$")


def base_label(label: str | None) -> str:
    """Universal part of a relation label (everything before the first colon)."""
    if not label:
        return ""
    return label.split(":", 1)[0]


def subtype_segments(label: str | None) -> tuple[str, ...]:
    if not label or ":" not in label:
        return ()
    return tuple(label.split(":")[1:])


class NodeId(NamedTuple):
    """Address of a graph node: word ``(i, 0)``, empty node ``(anchor, sub>0)``,
    artificial root ``(0, 0)``.

    Plain tuple ordering gives document order, with an empty node sorting
    right after its anchor word and before the following word, and keeps
    ``5.1`` distinct from ``5.10``.
    """

    anchor: int
    sub: int = 0

    @classmethod
    def root(cls) -> "NodeId":
        return cls(0, 0)

    @classmethod
    def word(cls, index: int) -> "NodeId":
        return cls(index, 0)

    @classmethod
    def parse(cls, text: str) -> "NodeId":
        m = _NODE_ID_RE.fullmatch(text)
        if not m:
            raise ValueError(f"not a node id: {text!r}")
        anchor = int(m.group(1))
        sub = int(m.group(2)) if m.group(2) is not None else 0
        if m.group(2) is not None and sub < 1:
            raise ValueError(f"empty-node sub id must be >= 1: {text!r}")
        return cls(anchor, sub)

    def render(self) -> str:
        if self.sub:
            return f"{self.anchor}.{self.sub}"
        return str(self.anchor)

    @property
    def is_root(self) -> bool:
        return self.anchor == 0 and self.sub == 0

    @property
    def is_word(self) -> bool:
        return self.anchor > 0 and self.sub == 0

    @property
    def is_empty(self) -> bool:
        return self.sub > 0

    def __str__(self) -> str:  # pragma: no cover - convenience
        return self.render()


class FeatureBag:
    """Feature name to value-set mapping with canonical serialization order.

    Names are sorted case-insensitively alphabetical, values alphabetically
    within a name, so serialization is deterministic regardless of insertion
    order.
    """

    __slots__ = ("_entries",)

    def __init__(self, entries: dict[str, Iterable[str] | str] | None = None):
        self._entries: dict[str, set[str]] = {}
        if entries:
            for name, values in entries.items():
                if isinstance(values, str):
                    values = [values]
                for value in values:
                    self.add(name, value)

    def add(self, name: str, value: str) -> None:
        self._entries.setdefault(name, set()).add(value)

    def discard(self, name: str) -> None:
        self._entries.pop(name, None)

    def get(self, name: str) -> frozenset[str]:
        return frozenset(self._entries.get(name, ()))

    def has(self, name: str, value: str | None = None) -> bool:
        if name not in self._entries:
            return False
        return value is None or value in self._entries[name]

    def rename(self, old: str, new: str) -> None:
        if old in self._entries:
            values = self._entries.pop(old)
            for value in values:
                self.add(new, value)

    def replace_value(self, name: str, old: str, new: str) -> None:
        values = self._entries.get(name)
        if values and old in values:
            values.discard(old)
            values.add(new)

    def items(self) -> list[tuple[str, tuple[str, ...]]]:
        """Entries in canonical order."""
        out = []
        for name in sorted(self._entries, key=lambda n: (n.lower(), n)):
            out.append((name, tuple(sorted(self._entries[name]))))
        return out

    def names(self) -> list[str]:
        return [name for name, _ in self.items()]

    def copy(self) -> "FeatureBag":
        bag = FeatureBag()
        for name, values in self._entries.items():
            bag._entries[name] = set(values)
        return bag

    def render(self) -> str:
        if not self._entries:
            return "_"
        return "|".join(f"{name}={','.join(values)}" for name, values in self.items())

    @classmethod
    def parse_lenient(cls, text: str) -> tuple["FeatureBag", list[str]]:
        """Parse a FEATS field, returning the bag and any unparseable chunks."""
        bag = cls()
        bad: list[str] = []
        if text == "_" or text == "":
            return bag, bad
        for chunk in text.split("|"):
            name, eq, value = chunk.partition("=")
            if not eq or not name or not value:
                bad.append(chunk)
                continue
            for one in value.split(","):
                bag.add(name, one)
        return bag, bad

    def __bool__(self) -> bool:
        return bool(self._entries)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FeatureBag):
            return NotImplemented
        return self._entries == other._entries

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"FeatureBag({self.render()!r})"


@dataclass
class SyntacticWord:
    """One annotation row: a syntactic word with its basic and enhanced links.

    ``head`` is None when the file left the HEAD column empty; ``deps``
    stores enhanced edges as (head node, relation label) pairs.
    """

    index: int
    form: str
    lemma: str | None = None
    upos: str | None = None
    xpos: str | None = None
    feats: FeatureBag = field(default_factory=FeatureBag)
    head: int | None = None
    deprel: str | None = None
    deps: list[tuple[NodeId, str]] = field(default_factory=list)
    misc: tuple[str, ...] = ()
    line: int = 0

    @property
    def node_id(self) -> NodeId:
        return NodeId.word(self.index)

    @property
    def deprel_base(self) -> str:
        return base_label(self.deprel)


@dataclass
class MultiwordTokenSpan:
    """Surface token covering words start..end (a contraction or clitic cluster)."""

    start: int
    end: int
    form: str
    misc: tuple[str, ...] = ()
    line: int = 0


@dataclass
class EmptyNode:
    """Null node ``anchor.sub`` for an elided predicate.

    Empty nodes never head or depend on anything in the basic tree; the raw
    ``head``/``deprel`` fields only record illegal column content so the
    validator can report it.
    """

    anchor: int
    sub: int
    form: str | None = None
    lemma: str | None = None
    upos: str | None = None
    xpos: str | None = None
    feats: FeatureBag = field(default_factory=FeatureBag)
    deps: list[tuple[NodeId, str]] = field(default_factory=list)
    misc: tuple[str, ...] = ()
    head: int | None = None
    deprel: str | None = None
    line: int = 0

    @property
    def node_id(self) -> NodeId:
        return NodeId(self.anchor, self.sub)


@dataclass
class Sentence:
    """Ordered words plus token spans, empty nodes and metadata comments."""

    comments: list[str] = field(default_factory=list)
    words: list[SyntacticWord] = field(default_factory=list)
    spans: list[MultiwordTokenSpan] = field(default_factory=list)
    empties: list[EmptyNode] = field(default_factory=list)

    def metadata(self, key: str) -> str | None:
        prefix = f"# {key} = "
        for comment in self.comments:
            if comment.startswith(prefix):
                return comment[len(prefix):]
        return None

    @property
    def sent_id(self) -> str | None:
        return self.metadata("sent_id")

    @property
    def text(self) -> str | None:
        return self.metadata("text")

    def word(self, index: int) -> SyntacticWord:
        for w in self.words:
            if w.index == index:
                return w
        raise KeyError(f"no word with index {index}")

    def node(self, node_id: NodeId):
        if node_id.is_word:
            for w in self.words:
                if w.index == node_id.anchor:
                    return w
        elif node_id.is_empty:
            for e in self.empties:
                if e.anchor == node_id.anchor and e.sub == node_id.sub:
                    return e
        return None

    def children(self, index: int) -> list[SyntacticWord]:
        """Basic-tree dependents of the word at ``index``, in word order."""
        return [w for w in self.words if w.head == index]

    def all_nodes(self) -> Iterator[SyntacticWord | EmptyNode]:
        """Words and empty nodes interleaved in document order."""
        empties = sorted(self.empties, key=lambda e: (e.anchor, e.sub))
        i = 0
        while i < len(empties) and empties[i].anchor == 0:
            yield empties[i]
            i += 1
        for w in self.words:
            yield w
            while i < len(empties) and empties[i].anchor == w.index:
                yield empties[i]
                i += 1
        # empties anchored past the last word (broken files)
        while i < len(empties):
            yield empties[i]
            i += 1


# ---------------------------------------------------------------------------
# Basic trees


class TreeError(ValueError):
    """Base class for basic-tree construction failures."""


class NoRootError(TreeError):
    def __init__(self):
        super().__init__("no word has head 0")


class MultipleRootsError(TreeError):
    def __init__(self, roots: list[int]):
        super().__init__(f"multiple words have head 0: {roots}")
        self.roots = roots


class CycleError(TreeError):
    def __init__(self, cycle: list[int]):
        super().__init__(f"head cycle: {' -> '.join(map(str, cycle + cycle[:1]))}")
        self.cycle = cycle


class DanglingHeadError(TreeError):
    def __init__(self, index: int, head: int | None):
        shown = "_" if head is None else head
        super().__init__(f"word {index} has head {shown} outside the sentence")
        self.index = index
        self.head = head


@dataclass
class BasicTree:
    """Rooted dependency tree; node 0 is the artificial root."""

    indices: list[int]
    parent: dict[int, int]
    children: dict[int, list[int]]

    @property
    def root(self) -> int:
        return self.children[0][0]

    def edges(self) -> list[tuple[int, int]]:
        """All (head, dependent) pairs, including the root edge from 0."""
        return [(self.parent[i], i) for i in self.indices]

    def descendants(self, index: int) -> set[int]:
        out: set[int] = set()
        stack = list(self.children.get(index, ()))
        while stack:
            node = stack.pop()
            if node in out:
                continue
            out.add(node)
            stack.extend(self.children.get(node, ()))
        return out

    def heads(self) -> dict[int, int]:
        return dict(self.parent)


def build_tree(sentence: Sentence) -> BasicTree:
    """Build the basic tree, checking single-rootedness and acyclicity.

    Raises DanglingHeadError, NoRootError, MultipleRootsError or CycleError
    (listing the offending cycle), in that order of detection.
    """
    words = sentence.words
    indices = [w.index for w in words]
    index_set = set(indices)
    if len(index_set) != len(indices):
        raise ValueError("duplicate word indices")

    for w in words:
        if w.head is None or (w.head != 0 and w.head not in index_set):
            raise DanglingHeadError(w.index, w.head)
        if w.head == w.index:
            raise CycleError([w.index])

    roots = [w.index for w in words if w.head == 0]
    if not roots:
        if words:
            raise NoRootError()
        return BasicTree(indices=[], parent={}, children={0: []})
    if len(roots) > 1:
        raise MultipleRootsError(roots)

    parent = {w.index: w.head for w in words}  # type: ignore[misc]
    state: dict[int, int] = {}  # 0 = visiting, 1 = done
    for start in indices:
        if state.get(start) == 1:
            continue
        path: list[int] = []
        node = start
        while node != 0 and state.get(node) != 1:
            if state.get(node) == 0:
                cycle = path[path.index(node):]
                raise CycleError(cycle)
            state[node] = 0
            path.append(node)
            node = parent[node]
        for seen in path:
            state[seen] = 1

    children: dict[int, list[int]] = {0: []}
    for i in indices:
        children.setdefault(i, [])
    for w in words:
        children[w.head].append(w.index)  # type: ignore[index]
    return BasicTree(indices=indices, parent=parent, children=children)


def is_projective(tree: BasicTree) -> dict[int, bool]:
    """Per-edge projectivity flags keyed by dependent index.

    An edge is non-projective when its span properly crosses the span of
    another tree edge; the root edge from position 0 takes part.
    """
    edges = tree.edges()
    spans = {dep: (min(head, dep), max(head, dep)) for head, dep in edges}
    flags = {dep: True for _, dep in edges}
    deps = list(spans)
    for i, a in enumerate(deps):
        a_lo, a_hi = spans[a]
        for b in deps[i + 1:]:
            b_lo, b_hi = spans[b]
            if a_lo < b_lo < a_hi < b_hi or b_lo < a_lo < b_hi < a_hi:
                flags[a] = False
                flags[b] = False
    return flags


# ---------------------------------------------------------------------------
# Enhanced graphs


@dataclass
class GraphIssue:
    code: str
    node: NodeId
    message: str


class EnhancedGraphError(ValueError):
    """Raised when the DEPS annotation does not assemble into a valid graph.

    ``issues`` lists every problem found at the failing stage: dangling
    references and self-loops first, unreachable nodes otherwise.
    """

    def __init__(self, issues: list[GraphIssue]):
        super().__init__("; ".join(i.message for i in issues))
        self.issues = issues


@dataclass(frozen=True)
class EnhancedGraph:
    """Edge set over root, words and empty nodes; multiple heads allowed."""

    nodes: frozenset[NodeId]
    edges: frozenset[tuple[NodeId, NodeId, str]]

    def dependents(self, node: NodeId) -> list[tuple[NodeId, str]]:
        return sorted((dep, rel) for head, dep, rel in self.edges if head == node)

    def heads(self, node: NodeId) -> list[tuple[NodeId, str]]:
        return sorted((head, rel) for head, dep, rel in self.edges if dep == node)


def enhanced_graph(sentence: Sentence) -> EnhancedGraph:
    """Assemble the enhanced graph from the DEPS annotation.

    Raises EnhancedGraphError when a deps head names a nonexistent node, an
    edge loops on itself, or some node cannot be reached from the root.
    """
    nodes = {NodeId.root()}
    nodes.update(w.node_id for w in sentence.words)
    nodes.update(e.node_id for e in sentence.empties)

    issues: list[GraphIssue] = []
    edges: set[tuple[NodeId, NodeId, str]] = set()
    for node in sentence.all_nodes():
        nid = node.node_id
        for head, rel in node.deps:
            if head == nid:
                issues.append(GraphIssue(
                    "DEPS_SELF_LOOP", nid,
                    f"node {nid.render()} depends on itself"))
            elif head not in nodes:
                issues.append(GraphIssue(
                    "DEPS_DANGLING", nid,
                    f"node {nid.render()} references nonexistent head {head.render()}"))
            else:
                edges.add((head, nid, rel))
    if issues:
        raise EnhancedGraphError(issues)

    reached = {NodeId.root()}
    frontier = [NodeId.root()]
    out_edges: dict[NodeId, list[NodeId]] = {}
    for head, dep, _ in edges:
        out_edges.setdefault(head, []).append(dep)
    while frontier:
        head = frontier.pop()
        for dep in out_edges.get(head, ()):
            if dep not in reached:
                reached.add(dep)
                frontier.append(dep)
    unreachable = sorted(nodes - reached)
    if unreachable:
        issues = [GraphIssue("UNREACHABLE_NODE", nid,
                             f"no path from root to node {nid.render()}")
                  for nid in unreachable]
        raise EnhancedGraphError(issues)

    return EnhancedGraph(nodes=frozenset(nodes), edges=frozenset(edges))


_CLAUSAL_RELATIONS = frozenset({"advcl", "acl", "ccomp", "xcomp", "csubj"})


def is_predicate(sentence: Sentence, index: int) -> bool:
    """Heuristic predicate test used for the nmod/obl split and conjunct sharing.

    A word counts as a predicate when it is verbal, heads a clause by its own
    relation, or carries a copula dependent.
    """
    word = sentence.word(index)
    if word.upos in ("VERB", "AUX"):
        return True
    if word.deprel_base in _CLAUSAL_RELATIONS:
        return True
    return any(c.deprel_base == "cop" for c in sentence.children(index))
