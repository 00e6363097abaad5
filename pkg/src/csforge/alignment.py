"""Aligned sentence pairs and permissible switch points.

A boundary k in the L1 sentence is a permissible switch point when some
L2 boundary k' splits the links cleanly: everything aligned left of k
lies left of k', everything right lies right. Crossing links rule a
boundary out; this is the word-order equivalence test.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from csforge.tokenization import TaggedSentence


@dataclass(frozen=True, slots=True, order=True)
class AlignmentLink:
    """One token-level correspondence between the L1 and L2 sentences."""

    l1_index: int
    l2_index: int


@dataclass(frozen=True, slots=True)
class AlignedPair:
    """An L1 sentence, its L2 translation, and their alignment links.

    null_l2 lists L2 tokens with no L1 counterpart (pro-drop insertions
    and the like); they never constrain switch points but are recorded
    so splicing can account for every L2 token.
    """

    l1: TaggedSentence
    l2: TaggedSentence
    links: frozenset[AlignmentLink]
    null_l2: frozenset[int] = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        n, m = len(self.l1.tokens), len(self.l2.tokens)
        linked_l2 = set()
        for link in self.links:
            if not 0 <= link.l1_index < n:
                raise ValueError(f"l1_index {link.l1_index} out of range")
            if not 0 <= link.l2_index < m:
                raise ValueError(f"l2_index {link.l2_index} out of range")
            linked_l2.add(link.l2_index)
        for j in self.null_l2:
            if not 0 <= j < m:
                raise ValueError(f"null_l2 index {j} out of range")
            if j in linked_l2:
                raise ValueError(f"null_l2 index {j} is linked")


@dataclass(frozen=True, slots=True)
class SwitchPoint:
    """L1 boundary k (between tokens k-1 and k) with its minimal L2 cut."""

    boundary: int
    l2_cut: int


def permissible_boundaries(pair: AlignedPair) -> list[SwitchPoint]:
    """All L1 boundaries no crossing link straddles, with minimal L2 cuts.

    For boundary k the candidate L2 cut must exceed every l2_index linked
    left of k and not exceed any linked at or right of k; such a cut
    exists iff max(left) < min(right). Runs in O(n + m + links).
    """
    n, m = len(pair.l1.tokens), len(pair.l2.tokens)

    # prefix_max[k]: largest l2_index among links with l1_index < k, -1 if none.
    prefix_max = [-1] * (n + 1)
    # suffix_min[k]: smallest l2_index among links with l1_index >= k, m if none.
    suffix_min = [m] * (n + 1)
    for link in pair.links:
        k = link.l1_index
        prefix_max[k + 1] = max(prefix_max[k + 1], link.l2_index)
        suffix_min[k] = min(suffix_min[k], link.l2_index)
    for k in range(1, n + 1):
        prefix_max[k] = max(prefix_max[k], prefix_max[k - 1])
    for k in range(n - 1, -1, -1):
        suffix_min[k] = min(suffix_min[k], suffix_min[k + 1])

    points = []
    for k in range(n + 1):
        if prefix_max[k] < suffix_min[k]:
            points.append(SwitchPoint(boundary=k, l2_cut=prefix_max[k] + 1))
    return points


def l2_cut_range(pair: AlignedPair, boundary: int) -> tuple[int, int] | None:
    """Inclusive range of L2 cuts compatible with an L1 boundary, or None."""
    n, m = len(pair.l1.tokens), len(pair.l2.tokens)
    if not 0 <= boundary <= n:
        raise ValueError(f"boundary {boundary} out of range")
    lo, hi = -1, m
    for link in pair.links:
        if link.l1_index < boundary:
            lo = max(lo, link.l2_index)
        else:
            hi = min(hi, link.l2_index)
    if lo + 1 > hi:
        return None
    return (lo + 1, hi)


def heuristic_align(l1: TaggedSentence, l2: TaggedSentence) -> AlignedPair:
    """Fallback aligner for fixtures: longest common subsequence over
    casefolded surfaces, so shared words and cognates link monotonically.

    Real alignments should come from the input data or the generation
    model; this exists so constraint checks have something to work with
    when neither supplies one.
    """
    a = [t.surface.casefold() for t in l1.tokens]
    b = [t.surface.casefold() for t in l2.tokens]
    n, m = len(a), len(b)
    lcs = [[0] * (m + 1) for _ in range(n + 1)]
    for i in range(n - 1, -1, -1):
        for j in range(m - 1, -1, -1):
            if a[i] == b[j]:
                lcs[i][j] = 1 + lcs[i + 1][j + 1]
            else:
                lcs[i][j] = max(lcs[i + 1][j], lcs[i][j + 1])
    links = set()
    i = j = 0
    while i < n and j < m:
        if a[i] == b[j]:
            links.add(AlignmentLink(i, j))
            i += 1
            j += 1
        elif lcs[i + 1][j] >= lcs[i][j + 1]:
            i += 1
        else:
            j += 1
    linked = {l.l2_index for l in links}
    return AlignedPair(
        l1=l1,
        l2=l2,
        links=frozenset(links),
        null_l2=frozenset(j for j in range(m) if j not in linked),
    )
