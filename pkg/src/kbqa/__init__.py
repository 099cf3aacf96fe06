"""Multi-tenant question answering over small knowledge bases.

The pipeline parses a question into a dependency structure, extracts
entity/class/literal mentions, builds a query graph, attaches candidate
predicates to its edges, grounds the graph against the knowledge base,
and renders the best grounding as a conjunctive query.  Answering is
progressive: exact queries first, then approximate rewrites, then a
language-model fallback whose output is flagged as unverified.
"""

from .answering import (
    Answer,
    DatasetRuntime,
    LlmClient,
    PipelineTrace,
    STAGE_APPROXIMATE,
    STAGE_EXACT,
    STAGE_LLM,
    answer,
    answer_payload,
    rewrite_approximate,
)
from .config import (
    AppConfig,
    DatasetDescriptor,
    LlmConfig,
    PipelineDefaults,
    ServiceBinding,
    load_config,
    load_descriptor,
)
from .errors import (
    ConfigError,
    DatasetNotFound,
    DuplicateId,
    EmptyDataset,
    EmptyQuestion,
    KbqaError,
    LlmUnavailable,
    NoMatch,
    NoNodes,
    ParseError,
    RemoteServiceUnavailable,
    UnknownPlaceholder,
    UnsupportedFeature,
)
from .gateway import Registry, app_from_config, build_app, build_runtime
from .graph import QueryEdge, QueryGraph, QueryNode, build as build_graph
from .matcher import CandidateQuery, GroundedGraph, match, match_all
from .nodes import Kind, MentionCandidate, build_lexicon, extract_nodes
from .relations import (
    PredicateDictionary,
    build_predicate_dictionary,
    extract_relations,
)
from .sparql import SparqlQuery, parse as parse_sparql, render, validate_query
from .store import ResultSet, TripleStore, load_triples
from .structure import (
    SemanticStructure,
    Token,
    ingest_conllu,
    parse as parse_question,
)
from .terms import Iri, Literal, Term, Variable

__version__ = "0.1.0"

__all__ = [
    "Answer",
    "AppConfig",
    "CandidateQuery",
    "ConfigError",
    "DatasetDescriptor",
    "DatasetNotFound",
    "DatasetRuntime",
    "DuplicateId",
    "EmptyDataset",
    "EmptyQuestion",
    "GroundedGraph",
    "Iri",
    "KbqaError",
    "Kind",
    "Literal",
    "LlmClient",
    "LlmConfig",
    "LlmUnavailable",
    "MentionCandidate",
    "NoMatch",
    "NoNodes",
    "ParseError",
    "PipelineDefaults",
    "PipelineTrace",
    "QueryEdge",
    "QueryGraph",
    "QueryNode",
    "Registry",
    "RemoteServiceUnavailable",
    "ResultSet",
    "STAGE_APPROXIMATE",
    "STAGE_EXACT",
    "STAGE_LLM",
    "SemanticStructure",
    "ServiceBinding",
    "SparqlQuery",
    "Term",
    "Token",
    "TripleStore",
    "UnknownPlaceholder",
    "UnsupportedFeature",
    "Variable",
    "answer",
    "answer_payload",
    "app_from_config",
    "build_app",
    "build_graph",
    "build_lexicon",
    "build_predicate_dictionary",
    "build_runtime",
    "extract_nodes",
    "extract_relations",
    "ingest_conllu",
    "load_config",
    "load_descriptor",
    "load_triples",
    "match",
    "match_all",
    "parse_question",
    "parse_sparql",
    "render",
    "rewrite_approximate",
    "validate_query",
    "PredicateDictionary",
]
