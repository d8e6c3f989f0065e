"""Jargon style patching for retrieval-based chatbots."""

from ._core import (
    Candidate,
    ContextTable,
    ContractViolation,
    EmbeddingTable,
    Engine,
    Index,
    InputError,
    Lexicon,
    NgramModel,
    align,
    build_context_table,
    distinct_n,
    fold,
    followup_overlap,
    generate_candidates,
    nearest_keywords,
    rewrite,
    rsa,
    tokenize,
    trigger_threshold,
)

__all__ = [
    "Candidate",
    "ContextTable",
    "ContractViolation",
    "EmbeddingTable",
    "Engine",
    "Index",
    "InputError",
    "Lexicon",
    "NgramModel",
    "align",
    "build_context_table",
    "distinct_n",
    "fold",
    "followup_overlap",
    "generate_candidates",
    "nearest_keywords",
    "rewrite",
    "rsa",
    "tokenize",
    "trigger_threshold",
]
