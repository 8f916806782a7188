"""Governed execution of interaction-tree programs."""

from ._govtree import (
    ParseError,
    canonical_directive,
    conformance,
    diff,
    directive_capability,
    operators,
    program_caps,
    run,
    sha256_hex,
    verify_ledger,
)

__all__ = [
    "ParseError",
    "canonical_directive",
    "conformance",
    "diff",
    "directive_capability",
    "operators",
    "program_caps",
    "run",
    "sha256_hex",
    "verify_ledger",
]
