import random

import pytest

from conftest import make_sentence, random_tree_sentence
from udkit.model import (
    CycleError,
    DanglingHeadError,
    EnhancedGraphError,
    FeatureBag,
    MultipleRootsError,
    NodeId,
    NoRootError,
    build_tree,
    enhanced_graph,
    is_predicate,
    is_projective,
)

EX1_ROWS = [
    (1, "she", "she", "PRON", "_", 3, "nsubj"),
    (2, "suddenly", "suddenly", "ADV", "_", 3, "advmod"),
    (3, "went", "go", "VERB", "_", 0, "root"),
    (4, "to", "to", "ADP", "_", 5, "case"),
    (5, "Paris", "Paris", "PROPN", "_", 3, "obl"),
]


def test_node_id_parse_render_and_order():
    assert NodeId.parse("5") == NodeId(5, 0)
    assert NodeId.parse("5.1") == NodeId(5, 1)
    assert NodeId.parse("0") == NodeId.root()
    assert NodeId(5, 1).render() == "5.1"
    # 5.1 and 5.10 are distinct ids and order lexicographically
    assert NodeId.parse("5.1") != NodeId.parse("5.10")
    assert NodeId(5, 0) < NodeId(5, 1) < NodeId(5, 10) < NodeId(6, 0)
    with pytest.raises(ValueError):
        NodeId.parse("5-6")
    with pytest.raises(ValueError):
        NodeId.parse("5.0")


def test_feature_bag_canonical_order():
    bag = FeatureBag()
    bag.add("Voice", "Pass")
    bag.add("Case", "Ins")
    assert bag.render() == "Case=Ins|Voice=Pass"
    # insertion order does not matter
    other = FeatureBag()
    other.add("Case", "Ins")
    other.add("Voice", "Pass")
    assert other.render() == bag.render()
    assert bag == other


def test_feature_bag_multivalue_sorted():
    bag = FeatureBag({"Gender": ["Neut", "Masc"]})
    assert bag.render() == "Gender=Masc,Neut"


def test_build_tree_example_sentence():
    tree = build_tree(make_sentence(EX1_ROWS))
    assert tree.root == 3
    assert sorted(tree.children[3]) == [1, 2, 5]
    assert tree.children[5] == [4]
    assert len(tree.edges()) == 5  # one edge per word, root edge included


def test_build_tree_single_word():
    tree = build_tree(make_sentence([(1, "go", "go", "VERB", "_", 0, "root")]))
    assert tree.root == 1
    assert tree.edges() == [(0, 1)]


def test_build_tree_two_word_cycle():
    sentence = make_sentence([
        (1, "a", "a", "X", "_", 2, "dep"),
        (2, "b", "b", "X", "_", 1, "dep"),
    ])
    with pytest.raises(NoRootError):
        # with no word on the root, the cycle is reported as a missing root
        build_tree(sentence)
    sentence = make_sentence([
        (1, "a", "a", "X", "_", 2, "dep"),
        (2, "b", "b", "X", "_", 1, "dep"),
        (3, "c", "c", "X", "_", 0, "root"),
    ])
    with pytest.raises(CycleError) as info:
        build_tree(sentence)
    assert set(info.value.cycle) == {1, 2}


def test_build_tree_error_cases():
    with pytest.raises(MultipleRootsError):
        build_tree(make_sentence([
            (1, "a", "a", "X", "_", 0, "root"),
            (2, "b", "b", "X", "_", 0, "root"),
        ]))
    with pytest.raises(DanglingHeadError):
        build_tree(make_sentence([(1, "a", "a", "X", "_", 7, "dep")]))
    with pytest.raises(DanglingHeadError):
        build_tree(make_sentence([(1, "a", "a", "X", "_", None, None)]))
    with pytest.raises(CycleError):
        build_tree(make_sentence([(1, "a", "a", "X", "_", 1, "dep")]))


def test_head_array_round_trip(rng):
    # flattening the tree reproduces the original head assignment
    for _ in range(200):
        sentence = random_tree_sentence(rng)
        tree = build_tree(sentence)
        assert tree.heads() == {w.index: w.head for w in sentence.words}


def test_is_projective_example_sentence():
    flags = is_projective(build_tree(make_sentence(EX1_ROWS)))
    assert flags == {1: True, 2: True, 3: True, 4: True, 5: True}


def test_is_projective_chain():
    chain = make_sentence([
        (1, "a", "a", "X", "_", 2, "dep"),
        (2, "b", "b", "X", "_", 3, "dep"),
        (3, "c", "c", "X", "_", 0, "root"),
    ])
    assert all(is_projective(build_tree(chain)).values())


def test_is_projective_crossing_edges():
    # heads: 1<-2, 2=root, 3<-1, 4<-2; spans (1,3) and (2,4) interleave,
    # and (1,3) also crosses the root edge (0,2).
    # expected flags enumerated by hand over all edge pairs.
    sentence = make_sentence([
        (1, "a", "a", "X", "_", 2, "dep"),
        (2, "b", "b", "X", "_", 0, "root"),
        (3, "c", "c", "X", "_", 1, "dep"),
        (4, "d", "d", "X", "_", 2, "dep"),
    ])
    flags = is_projective(build_tree(sentence))
    assert flags[3] is False
    assert flags == {1: True, 2: False, 3: False, 4: False}


def _with_identity_deps(sentence):
    for w in sentence.words:
        w.deps = [(NodeId.word(w.head) if w.head else NodeId.root(), w.deprel)]
    return sentence


def test_enhanced_graph_gapping_example():
    # enhanced graph of the gapping example with the null node E5.1
    sentence = make_sentence([
        (1, "she", "she", "PRON", "_", 2, "nsubj"),
        (2, "drank", "drink", "VERB", "_", 0, "root"),
        (3, "coffee", "coffee", "NOUN", "_", 2, "obj"),
        (4, "and", "and", "CCONJ", "_", 5, "cc"),
        (5, "he", "he", "PRON", "_", 2, "conj"),
        (6, "tea", "tea", "NOUN", "_", 5, "orphan"),
    ])
    from udkit.model import EmptyNode
    empty = EmptyNode(anchor=5, sub=1, lemma="drink", upos="VERB",
                      deps=[(NodeId.word(2), "conj")])
    sentence.empties.append(empty)
    node = NodeId(5, 1)
    deps_by_word = {
        1: [(NodeId.word(2), "nsubj")],
        2: [(NodeId.root(), "root")],
        3: [(NodeId.word(2), "obj")],
        4: [(node, "cc")],
        5: [(node, "nsubj")],
        6: [(node, "obj")],
    }
    for w in sentence.words:
        w.deps = deps_by_word[w.index]
    graph = enhanced_graph(sentence)
    assert (NodeId.word(2), node, "conj") in graph.edges
    assert (node, NodeId.word(5), "nsubj") in graph.edges
    assert (node, NodeId.word(6), "obj") in graph.edges
    assert (node, NodeId.word(4), "cc") in graph.edges
    assert len(graph.edges) == 7


def test_enhanced_graph_identity_mirror():
    sentence = _with_identity_deps(make_sentence(EX1_ROWS))
    graph = enhanced_graph(sentence)
    assert len(graph.edges) == len(sentence.words)


def test_enhanced_graph_dangling_reference():
    sentence = _with_identity_deps(make_sentence([
        (1, "a", "a", "X", "_", 2, "dep"),
        (2, "b", "b", "X", "_", 0, "root"),
        (3, "c", "c", "X", "_", 2, "dep"),
    ]))
    sentence.words[0].deps = [(NodeId.word(9), "dep")]
    with pytest.raises(EnhancedGraphError) as info:
        enhanced_graph(sentence)
    assert [i.code for i in info.value.issues] == ["DEPS_DANGLING"]


def test_enhanced_graph_unreachable_node():
    sentence = _with_identity_deps(make_sentence(EX1_ROWS))
    sentence.words[4].deps = []  # Paris loses its incoming edge
    with pytest.raises(EnhancedGraphError) as info:
        enhanced_graph(sentence)
    codes = {i.code for i in info.value.issues}
    assert codes == {"UNREACHABLE_NODE"}
    assert {i.node for i in info.value.issues} == {NodeId.word(4), NodeId.word(5)}


def test_is_predicate_cases():
    sentence = make_sentence(EX1_ROWS)
    assert is_predicate(sentence, 3)       # VERB
    assert not is_predicate(sentence, 5)   # plain nominal
    copular = make_sentence([
        (1, "it", "it", "PRON", "_", 3, "nsubj"),
        (2, "is", "be", "AUX", "_", 3, "cop"),
        (3, "yours", "yours", "PRON", "_", 0, "root"),
    ])
    assert is_predicate(copular, 3)  # nominal root with a cop child
