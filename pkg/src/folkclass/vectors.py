"""Sparse feature vectors and vocabularies.

A feature vector is a sparse map from integer feature id to a real weight;
zero weights are never stored.  A vocabulary gives the dense id space
(0..n-1, assigned in lexicographic token order) together with per-token
document frequencies.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Mapping
from dataclasses import dataclass

__all__ = ["FeatureVector", "Vocabulary", "build_vocabulary",
           "write_vector_lines", "read_vector_lines"]


@dataclass(frozen=True)
class FeatureVector:
    """Sparse vector: feature id -> weight, with the vocabulary size it lives in."""

    entries: dict[int, float]
    dim: int

    def __post_init__(self):
        for fid, w in self.entries.items():
            if w == 0.0:
                raise ValueError(f"zero weight stored for feature {fid}")
            if not (0 <= fid < self.dim):
                raise ValueError(f"feature id {fid} outside dimensionality {self.dim}")

    @staticmethod
    def from_items(items: Iterable[tuple[int, float]], dim: int) -> "FeatureVector":
        """Build a vector, silently dropping zero weights."""
        return FeatureVector({fid: w for fid, w in items if w != 0.0}, dim)

    def dot(self, other: Mapping[int, float]) -> float:
        a, b = self.entries, other
        if len(a) > len(b):
            a, b = b, a
        return sum(w * b[fid] for fid, w in a.items() if fid in b)

    def norm(self) -> float:
        return math.sqrt(sum(w * w for w in self.entries.values()))

    def __len__(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class Vocabulary:
    """Dense token <-> id mapping with document frequencies.

    Ids are assigned 0..n-1 in lexicographic token order so that two runs
    over the same corpus produce identical feature spaces.
    """

    token_to_id: dict[str, int]
    id_to_token: list[str]
    doc_frequency: dict[str, int]
    n_documents: int

    def __len__(self) -> int:
        return len(self.id_to_token)

    def __contains__(self, token: str) -> bool:
        return token in self.token_to_id

    def id_of(self, token: str) -> int:
        return self.token_to_id[token]

    def idf(self, token: str) -> float:
        """ln(|D| / df(token)); 0 for a token present in every document."""
        return math.log(self.n_documents / self.doc_frequency[token])


def build_vocabulary(documents: Iterable[Iterable[str]],
                     min_df_fraction: float = 0.0) -> Vocabulary:
    """Build a vocabulary from token collections, one collection per document.

    Tokens occurring in fewer than ceil(min_df_fraction * |D|) documents are
    excluded.  Repeated tokens within one document count once toward the
    document frequency.
    """
    if not 0.0 <= min_df_fraction < 1.0:
        raise ValueError(f"min_df_fraction must be in [0, 1), got {min_df_fraction}")
    df: dict[str, int] = {}
    n_docs = 0
    for doc in documents:
        n_docs += 1
        for token in set(doc):
            df[token] = df.get(token, 0) + 1
    threshold = math.ceil(min_df_fraction * n_docs)
    kept = sorted(t for t, f in df.items() if f >= threshold)
    return Vocabulary(
        token_to_id={t: i for i, t in enumerate(kept)},
        id_to_token=kept,
        doc_frequency={t: df[t] for t in kept},
        n_documents=n_docs,
    )


def write_vector_lines(vectors: Mapping[str, FeatureVector]) -> Iterable[str]:
    """Serialize as `key<TAB>id:weight id:weight ...` with round-trip precision."""
    for key in vectors:
        fv = vectors[key]
        pairs = " ".join(f"{fid}:{float(w)!r}" for fid, w in sorted(fv.entries.items()))
        yield f"{key}\t{pairs}"


def read_vector_lines(lines: Iterable[str],
                      dim: int | None = None) -> dict[str, FeatureVector]:
    """Parse vector lines; infers dimensionality as max id + 1 when not given."""
    parsed: list[tuple[str, dict[int, float]]] = []
    max_id = -1
    for line in lines:
        line = line.rstrip("\n")
        if not line:
            continue
        key, _, rest = line.partition("\t")
        entries = {}
        for pair in rest.split():
            fid, _, w = pair.rpartition(":")
            entries[int(fid)] = float(w)
        if entries:
            max_id = max(max_id, max(entries))
        parsed.append((key, entries))
    if dim is None:
        dim = max_id + 1
    return {key: FeatureVector.from_items(entries.items(), dim)
            for key, entries in parsed}
