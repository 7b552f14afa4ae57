"""Experiment orchestration: seeded size sweeps with run averaging.

The labeled corpus is split once per experiment by a stable content hash of
the resource id (default 40% test), so the test partition is identical for
every size and run.  For each training-set size, `runs` seeded random
labeled subsets are drawn (seed = base + run index), a classifier is
trained per subset, and per-run plus mean accuracy are reported.  Reports
embed the fully resolved configuration and all seeds, so a report can be
reproduced bit for bit.
"""

from __future__ import annotations

import hashlib
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import InsufficientDataError
from .folksonomy import CategoryAssignment, Folksonomy
from .representation import RepresentationScheme, Selection, Weighting, represent_resource
from .svm import LabeledDataset, TrainConfig, evaluate_accuracy, train
from .committees import MarginTable, combine, predict_committee_batch
from .vectors import FeatureVector, Vocabulary, build_vocabulary
from .weighting import InverseFrequencyKind, weight_resource

__all__ = [
    "Member", "ExperimentSpec", "hash_split", "run_experiment",
    "run_topk_sweep", "parse_flat_config", "format_flat_config",
]

Member = RepresentationScheme | InverseFrequencyKind


@dataclass(frozen=True)
class ExperimentSpec:
    """What to represent, how to train, and the sweep protocol."""

    member: Member = field(
        default_factory=lambda: RepresentationScheme(Weighting.WEIGHTED, Selection.FTA))
    train: TrainConfig = field(default_factory=TrainConfig)
    sizes: tuple[int, ...] = (50,)
    runs: int = 6
    base_seed: int = 0
    level: str = "top"
    committee: tuple[Member, ...] | None = None
    test_fraction: float = 0.4
    min_df_fraction: float = 0.0

    def __post_init__(self):
        if self.runs < 1:
            raise ValueError(f"runs must be >= 1, got {self.runs}")
        if self.level not in ("top", "second"):
            raise ValueError(f"level must be 'top' or 'second', got {self.level!r}")
        if not 0.0 < self.test_fraction < 1.0:
            raise ValueError(f"test_fraction must be in (0, 1), got {self.test_fraction}")
        if not self.sizes or any(s < 1 for s in self.sizes):
            raise ValueError(f"sizes must be positive, got {self.sizes}")
        if self.committee is not None and len(self.committee) == 0:
            raise ValueError("committee member list must not be empty")


def _member_name(member: Member) -> str:
    if isinstance(member, RepresentationScheme):
        return member.name
    return f"tf-{member.value}" if member is not InverseFrequencyKind.NONE else "tf"


def _vectorize(f: Folksonomy, resource: str, member: Member,
               vocab: Vocabulary) -> FeatureVector:
    if isinstance(member, RepresentationScheme):
        return represent_resource(f, resource, member, vocab)
    return weight_resource(f, resource, member, vocab)


def hash_split(resources: Iterable[str], test_fraction: float,
               ) -> tuple[list[str], list[str]]:
    """Deterministic (train, test) partition keyed on a hash of the id."""
    train_part, test_part = [], []
    cut = int(test_fraction * 10 ** 6)
    for r in sorted(resources):
        bucket = int.from_bytes(hashlib.sha256(r.encode()).digest()[:8], "big") % 10 ** 6
        (test_part if bucket < cut else train_part).append(r)
    return train_part, test_part


def _label_map(labels: Iterable[CategoryAssignment], level: str) -> dict[str, str]:
    out = {}
    for a in labels:
        value = a.top if level == "top" else a.second
        if value is not None:
            out[a.resource] = value
    return out


_MAX_SAMPLE_RETRIES = 100


def _sample_covering(pool: Sequence[str], size: int, label_of: dict[str, str],
                     categories: Sequence[str], rng: np.random.Generator,
                     ) -> tuple[list[str], int]:
    """Random subset of `size` resources containing every category at least once."""
    if size < len(categories):
        raise InsufficientDataError(
            f"size {size} cannot cover all {len(categories)} categories")
    for retry in range(_MAX_SAMPLE_RETRIES):
        chosen = [pool[i] for i in rng.choice(len(pool), size=size, replace=False)]
        if {label_of[r] for r in chosen} == set(categories):
            return chosen, retry
    raise InsufficientDataError(
        f"could not draw a size-{size} subset covering all categories")


def run_experiment(spec: ExperimentSpec, f: Folksonomy,
                   labels: Iterable[CategoryAssignment]) -> dict:
    """Training-size sweep with seeded run averaging on a fixed test partition."""
    label_of = _label_map(labels, spec.level)
    pool = sorted(r for r in label_of if r in f.resource_tag_weights)
    if not pool:
        raise InsufficientDataError("no labeled annotated resources")
    categories = sorted({label_of[r] for r in pool})
    cat_id = {c: i for i, c in enumerate(categories)}
    train_pool, test_pool = hash_split(pool, spec.test_fraction)
    for size in spec.sizes:
        if size > len(train_pool):
            raise InsufficientDataError(
                f"size {size} exceeds the {len(train_pool)} resources "
                "available for training")

    members = list(spec.committee) if spec.committee else [spec.member]
    vocab = build_vocabulary(
        (list(f.resource_tag_weights[r]) for r in train_pool),
        spec.min_df_fraction)

    vectors: dict[str, dict[str, FeatureVector]] = {
        _member_name(m): {r: _vectorize(f, r, m, vocab) for r in pool}
        for m in members
    }
    test_labels = [cat_id[label_of[r]] for r in test_pool]

    def test_dataset(member_name: str) -> LabeledDataset:
        vs = vectors[member_name]
        return LabeledDataset(
            [(vs[r], cid) for r, cid in zip(test_pool, test_labels)],
            categories, len(vocab))

    results = []
    for size in spec.sizes:
        run_rows = []
        for run in range(spec.runs):
            seed = spec.base_seed + run
            rng = np.random.default_rng(seed)
            chosen, retries = _sample_covering(
                train_pool, size, label_of, categories, rng)
            cfg = replace(spec.train, seed=seed)
            if spec.committee:
                tables = []
                for m in members:
                    vs = vectors[_member_name(m)]
                    ds = LabeledDataset(
                        [(vs[r], cat_id[label_of[r]]) for r in chosen],
                        categories, len(vocab))
                    model = train(ds, cfg)
                    scores = np.array([model.margins(vs[r]) for r in test_pool])
                    tables.append(MarginTable(tuple(test_pool),
                                              tuple(categories), scores))
                summed, _ = combine(tables, normalize=True)
                predicted = predict_committee_batch(summed)
                correct = sum(1 for p, cid in zip(predicted, test_labels)
                              if cat_id[p] == cid)
                accuracy = correct / len(test_pool)
            else:
                name = _member_name(spec.member)
                vs = vectors[name]
                ds = LabeledDataset(
                    [(vs[r], cat_id[label_of[r]]) for r in chosen],
                    categories, len(vocab))
                model = train(ds, cfg)
                accuracy = evaluate_accuracy(model, test_dataset(name))
            run_rows.append({"run": run, "seed": seed, "accuracy": accuracy,
                             "resampled": retries})
        results.append({
            "size": size,
            "runs": run_rows,
            "mean_accuracy": sum(r["accuracy"] for r in run_rows) / len(run_rows),
        })

    return {
        "meta": {
            "kind": "experiment",
            "member": _member_name(spec.member),
            "committee": [_member_name(m) for m in spec.committee]
            if spec.committee else None,
            "train": dict(spec.train.__dict__),
            "sizes": list(spec.sizes),
            "runs": spec.runs,
            "base_seed": spec.base_seed,
            "level": spec.level,
            "partition": {"policy": "sha256-bucket", "test_fraction": spec.test_fraction},
            "min_df_fraction": spec.min_df_fraction,
        },
        "data": {
            "n_labeled": len(pool),
            "n_train_pool": len(train_pool),
            "n_test": len(test_pool),
            "categories": categories,
            "vocabulary_size": len(vocab),
        },
        "results": results,
    }


_TREND_TOLERANCE = 0.02


def run_topk_sweep(spec: ExperimentSpec, f: Folksonomy,
                   labels: Iterable[CategoryAssignment],
                   k_values: Sequence[int]) -> dict:
    """Accuracy table over top-K cutoffs of the count-weighted scheme, plus FTA.

    Each size row carries a flag telling whether mean accuracy is
    non-decreasing (within a small tolerance) as K grows toward the full
    tag set.
    """
    if any(k < 1 for k in k_values):
        raise ValueError(f"k values must be >= 1, got {list(k_values)}")
    labels = list(labels)
    rows = []
    for k in sorted(k_values):
        member = RepresentationScheme(Weighting.WEIGHTED, Selection.TOP_K, k)
        report = run_experiment(replace(spec, member=member, committee=None), f, labels)
        rows.append({"k": k, "results": report["results"]})
    fta_report = run_experiment(
        replace(spec, member=RepresentationScheme(Weighting.WEIGHTED, Selection.FTA),
                committee=None),
        f, labels)
    trend = []
    for i, size in enumerate(spec.sizes):
        curve = [row["results"][i]["mean_accuracy"] for row in rows]
        curve.append(fta_report["results"][i]["mean_accuracy"])
        non_decreasing = all(b >= a - _TREND_TOLERANCE
                             for a, b in zip(curve, curve[1:]))
        trend.append({"size": size, "non_decreasing": non_decreasing})
    return {
        "meta": {"kind": "topk-sweep", "k_values": sorted(k_values),
                 "trend_tolerance": _TREND_TOLERANCE,
                 "base": fta_report["meta"]},
        "data": fta_report["data"],
        "results": {"topk": rows, "fta": fta_report["results"],
                    "accuracy_trend": trend},
    }


def parse_flat_config(lines: Iterable[str]) -> dict[str, str]:
    """Parse `key = value` lines; '#' starts a comment, blanks are skipped."""
    out: dict[str, str] = {}
    for raw in lines:
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ValueError(f"expected 'key = value', got {raw.rstrip()!r}")
        out[key.strip()] = value.strip()
    return out


def format_flat_config(config: dict[str, str]) -> str:
    return "".join(f"{k} = {v}\n" for k, v in config.items())
