from conftest import fixture_path, make_sentence
from udkit.conllu import parse_file, serialize
from udkit.convert import (
    EXACT,
    HEURISTIC,
    MANUAL_REVIEW,
    convert_cop_aux,
    convert_neg,
    convert_remnant_to_orphan,
    convert_sentence,
    convert_v1_to_v2,
    reattach_coordination,
    rename_labels,
    split_nmod_obl,
)
from udkit.model import build_tree
from udkit.registry import Registry


def heads_and_deprels(sentence):
    return [(w.index, w.head, w.deprel) for w in sentence.words]


def test_rename_labels_spec_examples():
    sentence = make_sentence([
        (1, "she", "she", "PRON", "_", 2, "nsubj"),
        (2, "reads", "read", "VERB", "_", 0, "root"),
        (3, "books", "book", "NOUN", "_", 2, "dobj"),
        (4, "and", "and", "CONJ", "Negative=Neg", 2, "cc"),
    ])
    out, log = rename_labels(sentence)
    assert out.words[2].deprel == "obj"
    assert out.words[3].upos == "CCONJ"
    assert out.words[3].feats.render() == "Polarity=Neg"
    assert all(e.confidence == EXACT for e in log.entries)
    assert len(log) == 3


def test_rename_keeps_subtype_when_target_is_plain():
    sentence = make_sentence([
        (1, "a", "a", "X", "_", 2, "dobj:part"),
        (2, "b", "b", "VERB", "_", 0, "root"),
    ])
    out, _ = rename_labels(sentence)
    assert out.words[0].deprel == "obj:part"


def test_rename_drops_subtype_when_target_is_subtyped():
    sentence = make_sentence([
        (1, "a", "a", "X", "_", 2, "nsubjpass:foo"),
        (2, "b", "b", "VERB", "_", 0, "root"),
    ])
    out, log = rename_labels(sentence)
    assert out.words[0].deprel == "nsubj:pass"
    assert log.entries[0].confidence == MANUAL_REVIEW


def test_split_nmod_obl_on_verbal_head():
    sentence = make_sentence([
        (1, "she", "she", "PRON", "_", 3, "nsubj"),
        (2, "suddenly", "suddenly", "ADV", "_", 3, "advmod"),
        (3, "went", "go", "VERB", "_", 0, "root"),
        (4, "to", "to", "ADP", "_", 5, "case"),
        (5, "Paris", "Paris", "PROPN", "_", 3, "nmod"),
    ])
    out, log = split_nmod_obl(sentence)
    assert out.words[4].deprel == "obl"
    assert log.entries[0].confidence == HEURISTIC


def test_split_nmod_obl_keeps_nominal_head():
    sentence = make_sentence([
        (1, "her", "her", "PRON", "_", 3, "nmod"),
        (2, "sudden", "sudden", "ADJ", "_", 3, "amod"),
        (3, "trip", "trip", "NOUN", "_", 0, "root"),
        (4, "to", "to", "ADP", "_", 5, "case"),
        (5, "Paris", "Paris", "PROPN", "_", 3, "nmod"),
    ])
    out, log = split_nmod_obl(sentence)
    assert [w.deprel for w in out.words] == ["nmod", "amod", "root", "case", "nmod"]
    assert len(log) == 0


def test_split_nmod_obl_copular_pronoun_head():
    # predicate by cop child: nominal root is a PRON
    sentence = make_sentence([
        (1, "it", "it", "PRON", "_", 3, "nsubj"),
        (2, "is", "be", "AUX", "_", 3, "cop"),
        (3, "yours", "yours", "PRON", "_", 0, "root"),
        (4, "in", "in", "ADP", "_", 5, "case"),
        (5, "essence", "essence", "NOUN", "_", 3, "nmod"),
    ])
    out, _ = split_nmod_obl(sentence)
    assert out.words[4].deprel == "obl"


def test_split_preserves_subtype():
    sentence = make_sentence([
        (1, "ran", "run", "VERB", "_", 0, "root"),
        (2, "home", "home", "NOUN", "_", 1, "nmod:tmod"),
    ])
    out, _ = split_nmod_obl(sentence)
    assert out.words[1].deprel == "obl:tmod"


BLT_V1 = [
    (1, "bacon", "bacon", "NOUN", "_", 0, "root"),
    (2, ",", ",", "PUNCT", "_", 1, "punct"),
    (3, "lettuce", "lettuce", "NOUN", "_", 1, "conj"),
    (4, "and", "and", "CCONJ", "_", 1, "cc"),
    (5, "tomato", "tomato", "NOUN", "_", 1, "conj"),
]


def test_reattach_coordination_blt():
    out, log = reattach_coordination(make_sentence(BLT_V1))
    assert heads_and_deprels(out) == [
        (1, 0, "root"), (2, 3, "punct"), (3, 1, "conj"), (4, 5, "cc"), (5, 1, "conj")]
    assert {e.confidence for e in log.entries} == {EXACT}
    assert len(log) == 2


def test_reattach_without_coordination_is_identity():
    sentence = make_sentence([
        (1, "she", "she", "PRON", "_", 2, "nsubj"),
        (2, "slept", "sleep", "VERB", "_", 0, "root"),
    ])
    out, log = reattach_coordination(sentence)
    assert heads_and_deprels(out) == heads_and_deprels(sentence)
    assert len(log) == 0


def test_trailing_cc_goes_to_manual_review():
    sentence = make_sentence([
        (1, "bacon", "bacon", "NOUN", "_", 0, "root"),
        (2, "lettuce", "lettuce", "NOUN", "_", 1, "conj"),
        (3, "and", "and", "CCONJ", "_", 1, "cc"),
    ])
    out, log = reattach_coordination(sentence)
    assert heads_and_deprels(out) == heads_and_deprels(sentence)
    assert [e.confidence for e in log.entries] == [MANUAL_REVIEW]


def test_convert_neg_part_and_det():
    sentence = make_sentence([
        (1, "no", "no", "DET", "_", 2, "neg"),
        (2, "dogs", "dog", "NOUN", "_", 3, "nsubj"),
        (3, "did", "do", "AUX", "_", 4, "aux"),
        (4, "not", "not", "PART", "_", 5, "neg"),
        (5, "bark", "bark", "VERB", "_", 0, "root"),
    ])
    out, log = convert_neg(sentence)
    assert out.words[0].deprel == "det"
    assert out.words[0].feats.has("Polarity", "Neg")
    assert out.words[3].deprel == "advmod"
    assert out.words[3].feats.has("Polarity", "Neg")
    assert all(e.confidence == HEURISTIC for e in log.entries)


def test_convert_neg_identity_without_neg():
    sentence = make_sentence([(1, "go", "go", "VERB", "_", 0, "root")])
    out, log = convert_neg(sentence)
    assert len(log) == 0
    assert heads_and_deprels(out) == heads_and_deprels(sentence)


GAPPING_V1 = [
    (1, "she", "she", "PRON", "_", 2, "nsubj"),
    (2, "drank", "drink", "VERB", "_", 0, "root"),
    (3, "coffee", "coffee", "NOUN", "_", 2, "obj"),
    (4, "and", "and", "CCONJ", "_", 2, "cc"),
    (5, "he", "he", "PRON", "_", 1, "remnant"),
    (6, "tea", "tea", "NOUN", "_", 3, "remnant"),
]


def test_remnant_to_orphan_gapping():
    out, log = convert_remnant_to_orphan(make_sentence(GAPPING_V1))
    assert heads_and_deprels(out) == [
        (1, 2, "nsubj"), (2, 0, "root"), (3, 2, "obj"),
        (4, 5, "cc"), (5, 2, "conj"), (6, 5, "orphan")]
    assert all(e.confidence == HEURISTIC for e in log.entries)
    build_tree(out)


def test_remnant_identity_without_remnant():
    sentence = make_sentence(BLT_V1)
    out, log = convert_remnant_to_orphan(sentence)
    assert heads_and_deprels(out) == heads_and_deprels(sentence)
    assert len(log) == 0


def test_remnant_obliqueness_promotes_obl_over_advmod():
    # gapped clause whose correlates play obl and advmod roles
    sentence = make_sentence([
        (1, "she", "she", "PRON", "_", 2, "nsubj"),
        (2, "went", "go", "VERB", "_", 0, "root"),
        (3, "to", "to", "ADP", "_", 4, "case"),
        (4, "Paris", "Paris", "PROPN", "_", 2, "obl"),
        (5, "yesterday", "yesterday", "ADV", "_", 2, "advmod"),
        (6, "and", "and", "CCONJ", "_", 2, "cc"),
        (7, "to", "to", "ADP", "_", 8, "case"),
        (8, "Rome", "Rome", "PROPN", "_", 4, "remnant"),
        (9, "today", "today", "ADV", "_", 5, "remnant"),
    ])
    out, _ = convert_remnant_to_orphan(sentence)
    assert heads_and_deprels(out) == [
        (1, 2, "nsubj"), (2, 0, "root"), (3, 4, "case"), (4, 2, "obl"),
        (5, 2, "advmod"), (6, 8, "cc"), (7, 8, "case"),
        (8, 2, "conj"), (9, 8, "orphan")]


def test_remnant_unpairable_is_left_untouched():
    # remnant pointing at the root: no counterpart structure to pair with
    sentence = make_sentence([
        (1, "went", "go", "VERB", "_", 0, "root"),
        (2, "zz", "zz", "X", "_", 1, "remnant"),
    ])
    out, log = convert_remnant_to_orphan(sentence)
    assert heads_and_deprels(out) == heads_and_deprels(sentence)
    assert [e.confidence for e in log.entries] == [MANUAL_REVIEW]


def test_convert_cop_aux_with_config():
    registry = Registry.from_config_text("cop.lemmas = be")
    sentence = make_sentence([
        (1, "it", "it", "PRON", "_", 3, "nsubj"),
        (2, "is", "be", "VERB", "_", 3, "cop"),
        (3, "fine", "fine", "ADJ", "_", 0, "root"),
        (4, "seems", "seem", "VERB", "_", 3, "cop"),
    ])
    out, log = convert_cop_aux(sentence, registry.cop_lemmas)
    assert out.words[1].upos == "AUX"
    assert out.words[3].upos == "VERB"  # unlisted: untouched, flagged
    confidences = sorted(e.confidence for e in log.entries)
    assert confidences == [HEURISTIC, MANUAL_REVIEW]


def test_converter_pair_files_match():
    v1, _ = parse_file(fixture_path("convert_v1.conllu"))
    with open(fixture_path("convert_v2.conllu"), encoding="utf-8") as handle:
        expected = handle.read()
    converted, log = convert_v1_to_v2(v1)
    assert serialize(converted) == expected
    assert len(log) > 0


def test_converter_idempotent_on_v2():
    v2, _ = parse_file(fixture_path("convert_v2.conllu"))
    converted, log = convert_v1_to_v2(v2)
    assert serialize(converted) == serialize(v2)
    assert len(log) == 0


def test_already_v2_golden_examples_unchanged():
    document, _ = parse_file(fixture_path("examples.conllu"))
    converted, log = convert_v1_to_v2(document)
    assert serialize(converted) == serialize(document)
    assert len(log) == 0


def test_mixed_file_only_v1_sentences_mutated():
    with open(fixture_path("convert_v1.conllu"), encoding="utf-8") as handle:
        v1_text = handle.read()
    with open(fixture_path("convert_v2.conllu"), encoding="utf-8") as handle:
        v2_text = handle.read()
    from udkit.conllu import parse_document
    mixed, _ = parse_document(v1_text + v2_text)
    converted, _ = convert_v1_to_v2(mixed)
    assert serialize(converted) == v2_text + v2_text


def test_conversion_preserves_tokens_and_tree():
    v1, _ = parse_file(fixture_path("convert_v1.conllu"))
    converted, _ = convert_v1_to_v2(v1)
    for before, after in zip(v1.sentences, converted.sentences):
        assert [w.form for w in before.words] == [w.form for w in after.words]
        assert [w.lemma for w in before.words] == [w.lemma for w in after.words]
        assert len(before.words) == len(after.words)
        build_tree(after)


def test_log_completeness_matches_structural_diff():
    v1, _ = parse_file(fixture_path("convert_v1.conllu"))
    converted, log = convert_v1_to_v2(v1)
    logged = {}
    for entry in log.entries:
        if entry.confidence == MANUAL_REVIEW:
            continue
        field = entry.old.split("=", 1)[0]
        logged.setdefault((entry.sentence_id, entry.node, field), []).append(entry)

    for before, after in zip(v1.sentences, converted.sentences):
        sid = before.sent_id
        for old_word, new_word in zip(before.words, after.words):
            node = str(old_word.index)
            for name, old_value, new_value in (
                    ("upos", old_word.upos, new_word.upos),
                    ("head", old_word.head, new_word.head),
                    ("deprel", old_word.deprel, new_word.deprel),
                    ("feats", old_word.feats.render(), new_word.feats.render())):
                changed = old_value != new_value
                has_log = (sid, node, name) in logged
                assert changed == has_log, (sid, node, name, old_value, new_value)
                if changed and name in ("upos", "head", "deprel"):
                    entry = logged[(sid, node, name)][-1]
                    assert entry.new == f"{name}={new_value}"


def test_full_pipeline_output_is_v2_clean():
    from udkit.validate import validate_document
    v1, _ = parse_file(fixture_path("convert_v1.conllu"))
    converted, _ = convert_v1_to_v2(v1)
    report = validate_document(converted, max_level=3)
    legacy = [d for d in report.diagnostics if d.code in ("DEPREL_LEGACY", "UPOS_LEGACY")]
    assert legacy == []
    assert report.valid


def test_log_tsv_format():
    v1, _ = parse_file(fixture_path("convert_v1.conllu"))
    _, log = convert_v1_to_v2(v1)
    lines = log.to_tsv().splitlines()
    assert len(lines) == len(log.entries)
    assert all(len(line.split("\t")) == 6 for line in lines)


def test_convert_sentence_pipeline_order_dobj_before_split():
    # dobj must become obj before the nmod/obl split looks at labels
    sentence = make_sentence([
        (1, "she", "she", "PRON", "_", 2, "nsubj"),
        (2, "reads", "read", "VERB", "_", 0, "root"),
        (3, "books", "book", "NOUN", "_", 2, "dobj"),
        (4, "at", "at", "ADP", "_", 5, "case"),
        (5, "home", "home", "NOUN", "_", 2, "nmod"),
    ])
    out, _ = convert_sentence(sentence)
    assert out.words[2].deprel == "obj"
    assert out.words[4].deprel == "obl"
