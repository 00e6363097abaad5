"""Fragment splicing: replace an L1 span with its aligned L2 fragment."""

from __future__ import annotations

from dataclasses import dataclass

from csforge.alignment import AlignedPair, l2_cut_range
from csforge.classify import SwitchType
from csforge.tokenization import (
    TaggedSentence,
    Token,
    detect_sentence_boundaries,
    detokenize,
)


class InvalidPlanError(ValueError):
    """The plan's spans are not delimited by permissible switch points."""


@dataclass(frozen=True, slots=True)
class SwitchPlan:
    """Which L1 token range to replace and which L2 range to splice in."""

    span: tuple[int, int]
    l2_span: tuple[int, int]
    cs_type: SwitchType = SwitchType.INTRA_SENTENTIAL


def splice(pair: AlignedPair, plan: SwitchPlan) -> TaggedSentence:
    """Build L1[:start] ++ L2[l2_start:l2_end] ++ L1[end:].

    Both span ends must be permissible boundaries and the L2 span must
    be one their alignment actually licenses; anything else raises
    InvalidPlanError. Language tags ride along from the source tokens.
    """
    start, end = plan.span
    l2_start, l2_end = plan.l2_span
    n, m = len(pair.l1.tokens), len(pair.l2.tokens)

    if not (0 <= start < end <= n):
        raise InvalidPlanError(f"empty or out-of-range L1 span {plan.span}")
    if not (0 <= l2_start < l2_end <= m):
        raise InvalidPlanError(f"empty or out-of-range L2 span {plan.l2_span}")

    for boundary, cut in ((start, l2_start), (end, l2_end)):
        valid = l2_cut_range(pair, boundary)
        if valid is None:
            raise InvalidPlanError(f"L1 boundary {boundary} is not permissible")
        lo, hi = valid
        if not lo <= cut <= hi:
            raise InvalidPlanError(
                f"L2 cut {cut} incompatible with L1 boundary {boundary} (allowed {lo}..{hi})"
            )

    pieces = (
        list(pair.l1.tokens[:start])
        + list(pair.l2.tokens[l2_start:l2_end])
        + list(pair.l1.tokens[end:])
    )
    surfaces = [t.surface for t in pieces]
    source = detokenize(surfaces)

    tokens = []
    pos = 0
    for piece in pieces:
        at = source.index(piece.surface, pos)
        tokens.append(Token(piece.surface, piece.language, at, at + len(piece.surface)))
        pos = at + len(piece.surface)
    return TaggedSentence(source, tuple(tokens), detect_sentence_boundaries(surfaces))
