import os
import random

import pytest

from udkit.model import FeatureBag, Sentence, SyntacticWord

FIXTURES = os.path.join(os.path.dirname(__file__), "fixtures")


def fixture_path(name: str) -> str:
    return os.path.join(FIXTURES, name)


def make_sentence(rows, comments=None) -> Sentence:
    """Build a sentence from (index, form, lemma, upos, feats, head, deprel) rows."""
    words = []
    for index, form, lemma, upos, feats, head, deprel in rows:
        bag, bad = FeatureBag.parse_lenient(feats)
        assert not bad, f"bad feats in test row: {feats}"
        words.append(SyntacticWord(
            index=index, form=form, lemma=lemma, upos=upos, feats=bag,
            head=head, deprel=deprel))
    return Sentence(comments=list(comments or []), words=words)


V2_LABEL_POOL = (
    "nsubj", "obj", "iobj", "obl", "nmod", "amod", "advmod", "aux", "case",
    "det", "mark", "cc", "conj", "punct", "xcomp", "ccomp", "acl", "advcl",
    "compound", "flat", "fixed", "appos", "nummod", "cop", "dep",
)
V1_LABEL_POOL = V2_LABEL_POOL + ("dobj", "nsubjpass", "auxpass", "neg", "mwe", "name")
UPOS_POOL = ("NOUN", "VERB", "ADJ", "ADV", "PRON", "ADP", "DET", "AUX",
             "PROPN", "PART", "CCONJ", "PUNCT", "NUM", "X")


def random_tree_sentence(rng: random.Random, max_words: int = 12,
                         labels=V2_LABEL_POOL, upos_pool=UPOS_POOL) -> Sentence:
    """Random sentence with a valid single-rooted tree over 1..n words."""
    n = rng.randint(1, max_words)
    order = list(range(1, n + 1))
    rng.shuffle(order)
    root = order[0]
    heads = {root: 0}
    attached = [root]
    for index in order[1:]:
        heads[index] = rng.choice(attached)
        attached.append(index)
    rows = []
    for i in range(1, n + 1):
        deprel = "root" if heads[i] == 0 else rng.choice(labels)
        rows.append((i, f"w{i}", f"l{i}", rng.choice(upos_pool), "_", heads[i], deprel))
    return make_sentence(rows, comments=[f"# sent_id = rand-{rng.random():.12f}"])


def random_head_array(rng: random.Random, max_words: int = 12) -> list[int]:
    """Arbitrary head values in 0..n+1, valid tree or not."""
    n = rng.randint(1, max_words)
    return [rng.randint(0, n + 1) for _ in range(n)]


@pytest.fixture
def rng():
    return random.Random(20477)
