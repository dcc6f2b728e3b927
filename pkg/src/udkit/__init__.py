"""udkit: treebank engineering toolkit for Universal Dependencies CoNLL-U files."""

__version__ = "0.1.0"

from .conllu import (  # noqa: F401
    ParsedDocument,
    ParseIssue,
    SpacePolicy,
    check_space_policy,
    parse_document,
    parse_file,
    serialize,
    serialize_sentence,
)
from .convert import ConversionLog, convert_sentence, convert_v1_to_v2  # noqa: F401
from .enhance import EnhanceOptions, enhance, enhance_document  # noqa: F401
from .model import (  # noqa: F401
    EmptyNode,
    EnhancedGraph,
    FeatureBag,
    MultiwordTokenSpan,
    NodeId,
    Sentence,
    SyntacticWord,
    build_tree,
    enhanced_graph,
    is_projective,
)
from .registry import Registry, is_universal_upos, lookup_feature, parse_relation  # noqa: F401
from .validate import Diagnostic, ValidationReport, validate_document  # noqa: F401
