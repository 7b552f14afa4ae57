"""Inverse-frequency tag weighting and correlation between weighting functions.

The three inverse frequencies transplant the idf idea onto the three
folksonomy dimensions: ln(|R|/rf), ln(|U|/uf), ln(|B|/bf), with totals
counting annotated entities only.  Natural log throughout; every downstream
ranking decision is base-invariant.
"""

from __future__ import annotations

import enum
import math
from collections.abc import Sequence

from .errors import DegenerateInputError, UnknownTagError
from .folksonomy import Folksonomy
from .representation import (RepresentationScheme, Selection, Weighting,
                             represent_resource)
from .vectors import FeatureVector, Vocabulary

__all__ = [
    "InverseFrequencyKind", "inverse_frequency", "weight_resource",
    "pearson", "spearman", "fractional_ranks", "correlate_weightings",
]


class InverseFrequencyKind(enum.Enum):
    IRF = "irf"
    IUF = "iuf"
    IBF = "ibf"
    NONE = "none"   # plain tag frequency


def inverse_frequency(tag: str, f: Folksonomy, kind: InverseFrequencyKind) -> float:
    """Inverse frequency of a tag over the chosen dimension; NONE is 1."""
    if kind is InverseFrequencyKind.NONE:
        return 1.0
    try:
        q = f.tag_frequencies[tag]
    except KeyError:
        raise UnknownTagError(tag) from None
    if kind is InverseFrequencyKind.IRF:
        return math.log(f.n_resources / q.rf)
    if kind is InverseFrequencyKind.IUF:
        return math.log(f.n_users / q.uf)
    return math.log(f.n_bookmarks / q.bf)


def weight_resource(f: Folksonomy, resource: str,
                    kind: InverseFrequencyKind,
                    vocab: Vocabulary) -> FeatureVector:
    """tf * ixf vector: per-resource annotator count times inverse frequency.

    A tag saturating its dimension gets weight 0 and is dropped; with
    kind=NONE this equals the weighted full-tagging-activity representation.
    """
    base = represent_resource(
        f, resource, RepresentationScheme(Weighting.WEIGHTED, Selection.FTA), vocab)
    if kind is InverseFrequencyKind.NONE:
        return base
    entries = [
        (fid, w * inverse_frequency(vocab.id_to_token[fid], f, kind))
        for fid, w in base.entries.items()
    ]
    return FeatureVector.from_items(entries, len(vocab))


def pearson(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Product-moment correlation coefficient."""
    n = len(xs)
    if n != len(ys):
        raise ValueError(f"length mismatch: {n} vs {len(ys)}")
    if n < 2:
        raise DegenerateInputError("need at least 2 points")
    mx = math.fsum(xs) / n
    my = math.fsum(ys) / n
    dx = [x - mx for x in xs]
    dy = [y - my for y in ys]
    vx = math.fsum(d * d for d in dx)
    vy = math.fsum(d * d for d in dy)
    if vx == 0.0 or vy == 0.0:
        raise DegenerateInputError("zero variance input")
    return math.fsum(a * b for a, b in zip(dx, dy)) / math.sqrt(vx * vy)


def fractional_ranks(xs: Sequence[float]) -> list[float]:
    """1-based ranks with ties given the average of their positions."""
    order = sorted(range(len(xs)), key=lambda i: xs[i])
    ranks = [0.0] * len(xs)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and xs[order[j + 1]] == xs[order[i]]:
            j += 1
        mean_rank = (i + j) / 2 + 1
        for pos in range(i, j + 1):
            ranks[order[pos]] = mean_rank
        i = j + 1
    return ranks


def spearman(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Rank correlation: pearson over fractional ranks."""
    if len(xs) != len(ys):
        raise ValueError(f"length mismatch: {len(xs)} vs {len(ys)}")
    return pearson(fractional_ranks(xs), fractional_ranks(ys))


_PAIRS = [
    (InverseFrequencyKind.IRF, InverseFrequencyKind.IUF),
    (InverseFrequencyKind.IRF, InverseFrequencyKind.IBF),
    (InverseFrequencyKind.IUF, InverseFrequencyKind.IBF),
]


def correlate_weightings(f: Folksonomy) -> dict:
    """Pearson r and Spearman rho between the three inverse frequencies.

    Computed over the per-tag value sequences for every tag in the corpus,
    in sorted tag order.
    """
    tags = sorted(f.tag_frequencies)
    if len(tags) < 2:
        raise DegenerateInputError("need at least 2 tags to correlate weightings")
    series = {
        kind: [inverse_frequency(t, f, kind) for t in tags]
        for kind in (InverseFrequencyKind.IRF, InverseFrequencyKind.IUF,
                     InverseFrequencyKind.IBF)
    }
    report = {}
    for a, b in _PAIRS:
        report[f"{a.value}-{b.value}"] = {
            "r": pearson(series[a], series[b]),
            "rho": spearman(series[a], series[b]),
        }
    return report
