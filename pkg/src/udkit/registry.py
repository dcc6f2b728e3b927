"""Closed inventories for UD v2: part-of-speech tags, relations, features,
plus the v1-to-v2 rename tables and the extension-config loader.

Everything ships as data tables so that language-specific extensions come
from a declaration file rather than code changes. A loaded Registry is
immutable and safe to share across workers.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace

from .conllu import SpacePolicy

# ---------------------------------------------------------------------------
# Part-of-speech tags (closed list of 17; no runtime additions)

UPOS_TAGS: tuple[str, ...] = (
    "ADJ", "ADP", "ADV", "AUX", "CCONJ", "DET", "INTJ", "NOUN", "NUM",
    "PART", "PRON", "PROPN", "PUNCT", "SCONJ", "SYM", "VERB", "X",
)
_UPOS_SET = frozenset(UPOS_TAGS)

LEGACY_UPOS_TAGS = frozenset({"CONJ"})


def is_universal_upos(tag: str) -> bool:
    """True iff ``tag`` is one of the 17 universal tags. Total function."""
    return tag in _UPOS_SET


# ---------------------------------------------------------------------------
# Syntactic relations (closed taxonomy of 37, in six groups)

RELATION_GROUPS: dict[str, tuple[str, ...]] = {
    "core": ("nsubj", "csubj", "ccomp", "iobj", "obj", "xcomp"),
    "non-core": ("advcl", "advmod", "aux", "cop", "discourse",
                 "dislocated", "expl", "mark", "obl", "vocative"),
    "nominal": ("acl", "amod", "appos", "case", "clf", "det", "nmod", "nummod"),
    "linking": ("cc", "conj", "list", "parataxis"),
    "mwe": ("compound", "fixed", "flat"),
    "special": ("dep", "goeswith", "orphan", "punct", "reparandum", "root"),
}

UNIVERSAL_RELATIONS: frozenset[str] = frozenset(
    name for group in RELATION_GROUPS.values() for name in group)

# Relations that existed in UD v1 only; the parser tolerates them so v1
# files load, the v2 validator rejects them.
LEGACY_RELATIONS = frozenset({
    "dobj", "nsubjpass", "csubjpass", "auxpass",
    "mwe", "name", "foreign", "remnant", "neg",
})

# Legal only in the enhanced (DEPS) graph, never as a basic deprel.
ENHANCED_ONLY_RELATIONS = frozenset({"ref"})

# Subtypes shown in the universal documentation itself; extension files can
# declare more per language.
BUILTIN_SUBTYPES: dict[str, frozenset[str]] = {
    "nsubj": frozenset({"pass", "xsubj"}),
    "csubj": frozenset({"pass"}),
    "aux": frozenset({"pass"}),
    "acl": frozenset({"relcl"}),
    "flat": frozenset({"name", "foreign"}),
}

_SUBTYPE_SEGMENT_RE = re.compile(r"[a-z0-9]+$")


class UnknownUniversalRelation(ValueError):
    def __init__(self, label: str, base: str):
        super().__init__(f"{label!r}: {base!r} is not a universal relation")
        self.base = base


class MalformedSubtype(ValueError):
    def __init__(self, label: str, reason: str):
        super().__init__(f"{label!r}: {reason}")


@dataclass(frozen=True)
class Relation:
    """A universal relation label plus optional subtype segments."""

    base: str
    subtypes: tuple[str, ...] = ()

    @property
    def label(self) -> str:
        return ":".join((self.base,) + self.subtypes)

    def __str__(self) -> str:
        return self.label


def _enhanced_segment_ok(segment: str) -> bool:
    # augmented segments may carry lowercase unicode letters, digits and
    # underscores joining multiword case markers
    return bool(segment) and all(
        c == "_" or (c.isalnum() and not c.isupper()) for c in segment)


def parse_relation(label: str, enhanced: bool = False) -> Relation:
    """Split a relation label into universal base and subtype.

    Basic labels allow one ``[a-z0-9]+`` subtype segment. The enhanced
    grammar additionally accepts the ``ref`` base, a second segment and
    underscores inside segments (for case-augmented labels such as
    ``nmod:in_front_of``).
    """
    if not label:
        raise MalformedSubtype(label, "empty label")
    parts = label.split(":")
    base, segments = parts[0], tuple(parts[1:])
    inventory = UNIVERSAL_RELATIONS | ENHANCED_ONLY_RELATIONS if enhanced else UNIVERSAL_RELATIONS
    if base not in inventory:
        raise UnknownUniversalRelation(label, base)
    max_segments = 2 if enhanced else 1
    if len(segments) > max_segments:
        raise MalformedSubtype(label, f"more than {max_segments} subtype segment(s)")
    for segment in segments:
        if enhanced:
            if not _enhanced_segment_ok(segment):
                raise MalformedSubtype(label, f"bad subtype segment {segment!r}")
        elif not _SUBTYPE_SEGMENT_RE.fullmatch(segment):
            raise MalformedSubtype(label, f"bad subtype segment {segment!r}")
    return Relation(base, segments)


# ---------------------------------------------------------------------------
# Morphological features

_NOUN_CLASS_PATTERN = r"[A-Z][a-z]*[1-9][0-9]*"


@dataclass(frozen=True)
class FeatureSpec:
    """One feature with its legal values.

    ``value_pattern`` admits open-ended value families (NounClass sets like
    Bantu1..23 or Wol1..12) in addition to the enumerated values.
    """

    name: str
    values: frozenset[str]
    universal: bool = True
    kind: str = "inflectional"
    value_pattern: str | None = None

    def allows(self, value: str) -> bool:
        if value in self.values:
            return True
        if self.value_pattern and re.fullmatch(self.value_pattern, value):
            return True
        return False


def _spec(name: str, values: str, kind: str = "inflectional",
          pattern: str | None = None) -> FeatureSpec:
    return FeatureSpec(name=name, values=frozenset(values.split()),
                       kind=kind, value_pattern=pattern)


_UNIVERSAL_FEATURE_TABLE: tuple[FeatureSpec, ...] = (
    _spec("Animacy", "Anim Hum Inan Nhum"),
    _spec("Aspect", "Hab Imp Iter Perf Prog Prosp"),
    _spec("Case",
          "Abe Abl Abs Acc Add Ade All Ben Cau Cmp Cns Com Dat Del Dis Ela "
          "Equ Erg Ess Gen Ill Ine Ins Lat Loc Nom Par Per Sub Sup Tem Ter "
          "Tra Voc"),
    _spec("Clusivity", "Ex In"),
    _spec("Definite", "Com Cons Def Ind Spec"),
    _spec("Degree", "Abs Cmp Equ Pos Sup"),
    _spec("Evident", "Fh Nfh"),
    _spec("Gender", "Com Fem Masc Neut"),
    _spec("Mood", "Adm Cnd Des Imp Ind Irr Jus Nec Opt Pot Prp Qot Sub"),
    _spec("NounClass", "", pattern=_NOUN_CLASS_PATTERN),
    _spec("Number", "Coll Count Dual Grpa Grpl Inv Pauc Plur Ptan Sing Tri"),
    _spec("Person", "0 1 2 3 4"),
    _spec("Polarity", "Neg Pos"),
    _spec("Polite", "Elev Form Humb Infm"),
    _spec("Tense", "Fut Imp Past Pqp Pres"),
    _spec("VerbForm", "Conv Fin Gdv Ger Inf Part Sup Vnoun"),
    _spec("Voice", "Act Antip Cau Dir Inv Mid Pass Rcp"),
    _spec("Abbr", "Yes", kind="lexical"),
    _spec("Foreign", "Yes", kind="lexical"),
    _spec("NumType", "Card Dist Frac Mult Ord Range Sets", kind="lexical"),
    _spec("Poss", "Yes", kind="lexical"),
    _spec("PronType", "Art Dem Emp Exc Ind Int Neg Prs Rcp Rel Tot", kind="lexical"),
    _spec("Reflex", "Yes", kind="lexical"),
    _spec("Typo", "Yes", kind="lexical"),
)

UNIVERSAL_FEATURES: dict[str, FeatureSpec] = {s.name: s for s in _UNIVERSAL_FEATURE_TABLE}

_FEAT_NAME_RE = re.compile(r"[A-Z][A-Za-z0-9]*$")
_FEAT_VALUE_RE = re.compile(r"[A-Z0-9][A-Za-z0-9]*$")


class MalformedFeature(ValueError):
    def __init__(self, name: str, value: str):
        super().__init__(f"malformed feature {name}={value}")


# lookup_feature classifications
UNIVERSAL_OK = "universal-ok"
UNIVERSAL_UNKNOWN_VALUE = "universal-unknown-value"
NON_UNIVERSAL = "non-universal"
V1_LEGACY = "v1-legacy"


@dataclass(frozen=True)
class FeatureLookup:
    status: str
    rename: tuple[str, str] | None = None  # (new name, new value)


# ---------------------------------------------------------------------------
# v1 -> v2 rename tables


@dataclass(frozen=True)
class RenameTable:
    relation_renames: dict[str, str]
    feature_renames: dict[str, str]
    value_renames: dict[tuple[str, str], str]
    upos_renames: dict[str, str]


DEFAULT_RENAMES = RenameTable(
    relation_renames={
        "dobj": "obj",
        "nsubjpass": "nsubj:pass",
        "csubjpass": "csubj:pass",
        "auxpass": "aux:pass",
        "mwe": "fixed",
        "name": "flat:name",
        "foreign": "flat:foreign",
    },
    feature_renames={"Negative": "Polarity"},
    value_renames={
        ("Aspect", "Pro"): "Prosp",
        ("VerbForm", "Trans"): "Conv",
        ("Definite", "Red"): "Cons",
    },
    upos_renames={"CONJ": "CCONJ"},
)


def lookup_feature(name: str, value: str) -> FeatureLookup:
    """Classify one feature=value pair against the universal inventory.

    Returns universal-ok / universal-unknown-value / non-universal, or
    v1-legacy together with the v2 rename target. Raises MalformedFeature
    when name or value breaks the capitalized-alphanumeric shape.
    """
    if not _FEAT_NAME_RE.fullmatch(name) or not _FEAT_VALUE_RE.fullmatch(value):
        raise MalformedFeature(name, value)
    if name in DEFAULT_RENAMES.feature_renames:
        return FeatureLookup(V1_LEGACY, (DEFAULT_RENAMES.feature_renames[name], value))
    spec = UNIVERSAL_FEATURES.get(name)
    if spec is None:
        return FeatureLookup(NON_UNIVERSAL)
    if spec.allows(value):
        return FeatureLookup(UNIVERSAL_OK)
    if (name, value) in DEFAULT_RENAMES.value_renames:
        return FeatureLookup(V1_LEGACY, (name, DEFAULT_RENAMES.value_renames[(name, value)]))
    return FeatureLookup(UNIVERSAL_UNKNOWN_VALUE)


# ---------------------------------------------------------------------------
# Registry and extension config


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class Registry:
    """Inventories plus per-language extensions from a config file.

    Read-only after construction; consult it from any number of workers.
    """

    extra_features: dict[str, FeatureSpec] = field(default_factory=dict)
    subtypes: dict[str, frozenset[str]] = field(default_factory=lambda: dict(BUILTIN_SUBTYPES))
    part_lemmas: frozenset[str] = frozenset()
    cop_lemmas: frozenset[str] = frozenset()
    space_policy: SpacePolicy = SpacePolicy("forbid")
    genres: tuple[str, ...] = ()
    renames: RenameTable = DEFAULT_RENAMES

    @classmethod
    def default(cls) -> "Registry":
        return cls()

    def feature_spec(self, name: str) -> FeatureSpec | None:
        spec = UNIVERSAL_FEATURES.get(name)
        if spec is not None:
            return spec
        return self.extra_features.get(name)

    def subtype_declared(self, base: str, segment: str) -> bool:
        return segment in self.subtypes.get(base, frozenset())

    @classmethod
    def from_config_text(cls, text: str) -> "Registry":
        """Parse a ``section.key = value1|value2`` declaration file."""
        extra_features: dict[str, FeatureSpec] = {}
        subtypes = {base: set(segs) for base, segs in BUILTIN_SUBTYPES.items()}
        part_lemmas: set[str] = set()
        cop_lemmas: set[str] = set()
        genres: list[str] = []
        space_mode = "forbid"
        space_forms: set[str] = set()
        space_patterns: list[str] = []

        for line_no, raw in enumerate(text.split("\n"), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            m = re.fullmatch(r"([a-z]+)\.([A-Za-z0-9_]+)\s*=\s*(.*)", line)
            if not m:
                raise ConfigError(f"line {line_no}: expected 'section.key = values', got {line!r}")
            section, key, value_text = m.groups()
            values = [v.strip() for v in value_text.split("|")] if value_text.strip() else []
            if section == "features":
                extra_features[key] = FeatureSpec(
                    name=key, values=frozenset(values), universal=False, kind="extension")
            elif section == "subtypes":
                subtypes.setdefault(key, set()).update(values)
            elif section == "part" and key == "lemmas":
                part_lemmas.update(values)
            elif section == "cop" and key == "lemmas":
                cop_lemmas.update(values)
            elif section == "space" and key == "policy":
                if len(values) != 1 or values[0] not in SpacePolicy.MODES:
                    raise ConfigError(f"line {line_no}: space.policy must be one of "
                                      f"{', '.join(SpacePolicy.MODES)}")
                space_mode = values[0]
            elif section == "space" and key == "forms":
                space_forms.update(values)
            elif section == "space" and key == "patterns":
                for pattern in values:
                    try:
                        re.compile(pattern)
                    except re.error as exc:
                        raise ConfigError(f"line {line_no}: bad pattern {pattern!r}: {exc}")
                space_patterns.extend(values)
            elif section == "stats" and key == "genres":
                genres.extend(values)
            else:
                raise ConfigError(f"line {line_no}: unknown setting {section}.{key}")

        return cls(
            extra_features=extra_features,
            subtypes={base: frozenset(segs) for base, segs in subtypes.items()},
            part_lemmas=frozenset(part_lemmas),
            cop_lemmas=frozenset(cop_lemmas),
            space_policy=SpacePolicy(space_mode, frozenset(space_forms),
                                     tuple(space_patterns)),
            genres=tuple(genres),
        )

    @classmethod
    def from_config_file(cls, path: str) -> "Registry":
        with open(path, encoding="utf-8") as handle:
            return cls.from_config_text(handle.read())
