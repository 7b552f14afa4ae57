"""Sparse linear multiclass classification.

Trains linear category separators by stochastic subgradient descent on the
primal hinge objectives, with step size 1/(lambda*t), lambda = 1/(C*l), and
tail iterate averaging.  The bias is realized as a constant appended
feature, so it takes part in the regularizer.  Three multiclass schemes:

* native     -- joint objective 0.5*sum_m ||w_m||^2
                + C * sum_i sum_{m != y_i} max(0, 2 - (s_{y_i} - s_m))^d
* one-vs-all -- k binary hyperplanes, decision argmax_m (w_m.x + b_m)
* one-vs-one -- k(k-1)/2 pairwise hyperplanes, decision by majority vote,
                ties by summed signed margins, then lowest category id

The hinge exponent d defaults to 1; d=2 is accepted behind the config flag.
Margins are plain float arrays of length k; prediction is argmax with
lowest-id tie-break.  Training is deterministic under a fixed seed.
"""

from __future__ import annotations

import json
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

import numpy as np

from .vectors import FeatureVector

__all__ = [
    "TrainConfig", "LabeledDataset", "LinearModel", "OneVsOneModel",
    "train", "train_native", "train_binary", "train_one_vs_all",
    "train_one_vs_one", "self_train_2step", "SelfTrainResult",
    "predict_margins", "predict", "predict_all", "evaluate_accuracy",
    "objective_value", "native_objective", "native_gradient",
    "binary_objective", "binary_gradient",
    "model_to_json", "model_from_json",
]

SCHEMES = ("native", "one-vs-all", "one-vs-one")

MODEL_FORMAT = "folkclass-model/1"


@dataclass(frozen=True)
class TrainConfig:
    penalty: float = 1.0       # C
    epochs: int = 100
    seed: int = 0
    scheme: str = "native"
    hinge_exponent: int = 1    # d; 2 enables the squared hinge

    def __post_init__(self):
        if self.penalty <= 0:
            raise ValueError(f"penalty must be > 0, got {self.penalty}")
        if self.epochs < 1:
            raise ValueError(f"epochs must be >= 1, got {self.epochs}")
        if self.scheme not in SCHEMES:
            raise ValueError(f"unknown scheme {self.scheme!r}; expected one of {SCHEMES}")
        if self.hinge_exponent not in (1, 2):
            raise ValueError(f"hinge_exponent must be 1 or 2, got {self.hinge_exponent}")


class LabeledDataset:
    """Instances (sparse vector, category id) over dense ids 0..k-1."""

    def __init__(self, instances: Sequence[tuple[FeatureVector, int]],
                 categories: Sequence[str], n_features: int | None = None):
        if len(categories) < 2:
            raise ValueError(f"need at least 2 categories, got {len(categories)}")
        self.instances = list(instances)
        self.categories = list(categories)
        k = len(categories)
        for fv, cid in self.instances:
            if not 0 <= cid < k:
                raise ValueError(f"category id {cid} outside 0..{k - 1}")
        if n_features is None:
            n_features = max((max(fv.entries, default=-1)
                              for fv, _ in self.instances), default=-1) + 1
        self.n_features = n_features

    def __len__(self) -> int:
        return len(self.instances)

    @property
    def k(self) -> int:
        return len(self.categories)

    def category_counts(self) -> list[int]:
        counts = [0] * self.k
        for _, cid in self.instances:
            counts[cid] += 1
        return counts

    def to_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """Dense (n, d+1) matrix with a trailing all-ones bias column, and labels."""
        n, d = len(self.instances), self.n_features
        X = np.zeros((n, d + 1))
        y = np.zeros(n, dtype=np.int64)
        for row, (fv, cid) in enumerate(self.instances):
            for fid, w in fv.entries.items():
                if fid < d:
                    X[row, fid] = w
            X[row, d] = 1.0
            y[row] = cid
        return X, y


def _densify(fv: FeatureVector, d: int) -> np.ndarray:
    x = np.zeros(d + 1)
    for fid, w in fv.entries.items():
        if fid < d:
            x[fid] = w
    x[d] = 1.0
    return x


@dataclass(frozen=True)
class LinearModel:
    """Per-category weight vectors and biases; margins are w_m.x + b_m."""

    weights: np.ndarray            # (k, d)
    biases: np.ndarray             # (k,)
    categories: tuple[str, ...]
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if not (np.isfinite(self.weights).all() and np.isfinite(self.biases).all()):
            raise ValueError("model has non-finite parameters")

    @property
    def k(self) -> int:
        return len(self.categories)

    @property
    def n_features(self) -> int:
        return self.weights.shape[1]

    def augmented(self) -> np.ndarray:
        """Weights with the bias as a trailing column, the trained parameterization."""
        return np.hstack([self.weights, self.biases[:, None]])

    def margins(self, fv: FeatureVector) -> np.ndarray:
        out = self.biases.astype(float).copy()
        for fid, w in fv.entries.items():
            if fid < self.weights.shape[1]:
                out += w * self.weights[:, fid]
        return out

    def signed_margin(self, fv: FeatureVector) -> float:
        """w.x + b of the positive side; only meaningful for binary models."""
        if self.k != 2:
            raise ValueError("signed margin is defined for binary models only")
        return float(self.margins(fv)[1])

    def predict(self, fv: FeatureVector) -> int:
        return int(np.argmax(self.margins(fv)))


@dataclass(frozen=True)
class OneVsOneModel:
    """Pairwise binary models; predicts the category with most pairwise wins."""

    categories: tuple[str, ...]
    pairs: tuple[tuple[int, int], ...]
    models: tuple[LinearModel, ...]
    meta: dict = field(default_factory=dict)

    @property
    def k(self) -> int:
        return len(self.categories)

    def margins(self, fv: FeatureVector) -> np.ndarray:
        """Per-category summed signed margins over all pairwise models."""
        out = np.zeros(self.k)
        for (a, b), m in zip(self.pairs, self.models):
            s = m.signed_margin(fv)
            out[b] += s
            out[a] -= s
        return out

    def predict(self, fv: FeatureVector) -> int:
        votes = np.zeros(self.k, dtype=np.int64)
        sums = np.zeros(self.k)
        for (a, b), m in zip(self.pairs, self.models):
            s = m.signed_margin(fv)
            votes[b if s > 0 else a] += 1
            sums[b] += s
            sums[a] -= s
        best = max(range(self.k), key=lambda c: (votes[c], sums[c], -c))
        return best


Model = LinearModel | OneVsOneModel


def _check_no_empty_category(dataset: LabeledDataset) -> None:
    for cid, count in enumerate(dataset.category_counts()):
        if count == 0:
            raise ValueError(
                f"category {dataset.categories[cid]!r} has no training instances")


def _hinge_coef(gaps: np.ndarray, d_exp: int) -> np.ndarray:
    """Derivative of hinge^d w.r.t. the gap, elementwise, zero where inactive."""
    active = gaps > 0.0
    if d_exp == 1:
        return active.astype(float)
    return 2.0 * np.where(active, gaps, 0.0)


def _sgd_native(X: np.ndarray, y: np.ndarray, k: int, cfg: TrainConfig) -> np.ndarray:
    """Tail-averaged stochastic subgradient descent on the joint objective."""
    n, dim = X.shape
    lam = 1.0 / (cfg.penalty * n)
    W = np.zeros((k, dim))
    W_sum = np.zeros((k, dim))
    rng = np.random.default_rng(cfg.seed)
    total = cfg.epochs * n
    tail_start = total - (total // 2)   # average the final half of the iterates
    t = 0
    for _ in range(cfg.epochs):
        for i in rng.permutation(n):
            t += 1
            x = X[i]
            yi = y[i]
            scores = W @ x
            gaps = 2.0 - (scores[yi] - scores)
            gaps[yi] = 0.0
            coef = _hinge_coef(gaps, cfg.hinge_exponent)
            eta = 1.0 / (lam * t)
            W *= 1.0 - 1.0 / t
            nz = coef.nonzero()[0]
            if nz.size:
                W[nz] -= np.outer(eta * coef[nz], x)
                W[yi] += eta * coef[nz].sum() * x
            if t >= tail_start:
                W_sum += W
    return W_sum / (total - tail_start + 1)


def _sgd_binary(X: np.ndarray, ydec: np.ndarray, cfg: TrainConfig) -> np.ndarray:
    """Same optimizer on the binary hinge max(0, 1 - y*(w.x))^d."""
    n, dim = X.shape
    lam = 1.0 / (cfg.penalty * n)
    w = np.zeros(dim)
    w_sum = np.zeros(dim)
    rng = np.random.default_rng(cfg.seed)
    total = cfg.epochs * n
    tail_start = total - (total // 2)
    t = 0
    for _ in range(cfg.epochs):
        for i in rng.permutation(n):
            t += 1
            x = X[i]
            gap = 1.0 - ydec[i] * (w @ x)
            eta = 1.0 / (lam * t)
            w *= 1.0 - 1.0 / t
            if gap > 0.0:
                coef = 1.0 if cfg.hinge_exponent == 1 else 2.0 * gap
                w += eta * coef * ydec[i] * x
            if t >= tail_start:
                w_sum += w
    return w_sum / (total - tail_start + 1)


def _model_meta(cfg: TrainConfig, scheme: str) -> dict:
    return {"scheme": scheme, "penalty": cfg.penalty, "epochs": cfg.epochs,
            "seed": cfg.seed, "hinge_exponent": cfg.hinge_exponent}


def train_native(dataset: LabeledDataset, cfg: TrainConfig) -> LinearModel:
    """Joint multiclass training over all k categories at once."""
    _check_no_empty_category(dataset)
    X, y = dataset.to_arrays()
    W = _sgd_native(X, y, dataset.k, cfg)
    return LinearModel(weights=W[:, :-1], biases=W[:, -1],
                       categories=tuple(dataset.categories),
                       meta=_model_meta(cfg, "native"))


def train_binary(dataset: LabeledDataset, cfg: TrainConfig) -> LinearModel:
    """Single-hyperplane training; category id 1 is the positive side."""
    if dataset.k != 2:
        raise ValueError(f"binary training needs exactly 2 categories, got {dataset.k}")
    _check_no_empty_category(dataset)
    X, y = dataset.to_arrays()
    ydec = np.where(y == 1, 1.0, -1.0)
    w = _sgd_binary(X, ydec, cfg)
    W = np.vstack([-w, w])
    return LinearModel(weights=W[:, :-1], biases=W[:, -1],
                       categories=tuple(dataset.categories),
                       meta=_model_meta(cfg, "binary"))


def train_one_vs_all(dataset: LabeledDataset, cfg: TrainConfig) -> LinearModel:
    """k binary problems (category m against the rest), decision by argmax margin."""
    _check_no_empty_category(dataset)
    X, y = dataset.to_arrays()
    rows = []
    for m in range(dataset.k):
        ydec = np.where(y == m, 1.0, -1.0)
        rows.append(_sgd_binary(X, ydec, cfg))
    W = np.vstack(rows)
    return LinearModel(weights=W[:, :-1], biases=W[:, -1],
                       categories=tuple(dataset.categories),
                       meta=_model_meta(cfg, "one-vs-all"))


def train_one_vs_one(dataset: LabeledDataset, cfg: TrainConfig) -> OneVsOneModel:
    """k(k-1)/2 pairwise problems on pair-restricted instances."""
    _check_no_empty_category(dataset)
    X, y = dataset.to_arrays()
    pairs = [(a, b) for a in range(dataset.k) for b in range(a + 1, dataset.k)]
    models = []
    for a, b in pairs:
        mask = (y == a) | (y == b)
        Xp = X[mask]
        ydec = np.where(y[mask] == b, 1.0, -1.0)
        w = _sgd_binary(Xp, ydec, cfg)
        W = np.vstack([-w, w])
        models.append(LinearModel(
            weights=W[:, :-1], biases=W[:, -1],
            categories=(dataset.categories[a], dataset.categories[b]),
            meta=_model_meta(cfg, "binary")))
    return OneVsOneModel(categories=tuple(dataset.categories),
                         pairs=tuple(pairs), models=tuple(models),
                         meta=_model_meta(cfg, "one-vs-one"))


def train(dataset: LabeledDataset, cfg: TrainConfig) -> Model:
    if cfg.scheme == "native":
        return train_native(dataset, cfg)
    if cfg.scheme == "one-vs-all":
        return train_one_vs_all(dataset, cfg)
    return train_one_vs_one(dataset, cfg)


@dataclass(frozen=True)
class SelfTrainResult:
    model: Model
    pseudo_label_counts: dict[str, int]


def self_train_2step(labeled: LabeledDataset,
                     unlabeled: Sequence[FeatureVector],
                     cfg: TrainConfig) -> SelfTrainResult:
    """Two-step semi-supervised training.

    Step 1 trains on the labeled set, step 2 labels every unlabeled vector
    with that model's predictions, step 3 retrains the same scheme on the
    union.  With no unlabeled data the returned model is the supervised one.
    """
    first = train(labeled, cfg)
    pseudo = [(fv, first.predict(fv)) for fv in unlabeled]
    counts = {c: 0 for c in labeled.categories}
    for _, cid in pseudo:
        counts[labeled.categories[cid]] += 1
    union = LabeledDataset(list(labeled.instances) + pseudo,
                           labeled.categories, labeled.n_features)
    final = train(union, cfg)
    return SelfTrainResult(model=final, pseudo_label_counts=counts)


def predict_margins(model: Model, fv: FeatureVector) -> np.ndarray:
    """Per-category margins; unknown feature ids are dropped silently."""
    return model.margins(fv)


def predict(model: Model, fv: FeatureVector) -> int:
    return model.predict(fv)


def predict_all(model: Model, fvs: Iterable[FeatureVector]) -> list[int]:
    return [model.predict(fv) for fv in fvs]


def evaluate_accuracy(model: Model, test: LabeledDataset) -> float:
    """Fraction of correct predictions; every instance weighs the same."""
    if len(test) == 0:
        raise ValueError("empty test set")
    correct = sum(1 for fv, cid in test.instances if model.predict(fv) == cid)
    return correct / len(test)


# --- exact primal objectives and their (sub)gradients, on augmented arrays ---

def native_objective(W: np.ndarray, X: np.ndarray, y: np.ndarray,
                     C: float, d_exp: int = 1) -> float:
    """0.5*||W||^2 + C * sum_i sum_{m != y_i} max(0, 2 - (s_{y_i} - s_m))^d."""
    scores = X @ W.T
    idx = np.arange(len(y))
    gaps = 2.0 - (scores[idx, y][:, None] - scores)
    gaps[idx, y] = 0.0
    hinge = np.maximum(gaps, 0.0)
    return 0.5 * float((W * W).sum()) + C * float((hinge ** d_exp).sum())


def native_gradient(W: np.ndarray, X: np.ndarray, y: np.ndarray,
                    C: float, d_exp: int = 1) -> np.ndarray:
    """Gradient of native_objective; a subgradient at hinge kinks."""
    scores = X @ W.T
    idx = np.arange(len(y))
    gaps = 2.0 - (scores[idx, y][:, None] - scores)
    gaps[idx, y] = 0.0
    coef = _hinge_coef(gaps, d_exp)          # (n, k)
    G = coef.T @ X                           # rows m: sum_i coef_im x_i
    onehot = np.zeros_like(coef)
    onehot[idx, y] = coef.sum(axis=1)
    G -= onehot.T @ X                        # rows y_i: -sum_m coef_im x_i
    return W + C * G


def binary_objective(w: np.ndarray, X: np.ndarray, ydec: np.ndarray,
                     C: float, d_exp: int = 1) -> float:
    """0.5*||w||^2 + C * sum_i max(0, 1 - y_i w.x_i)^d with y in {-1, +1}."""
    hinge = np.maximum(0.0, 1.0 - ydec * (X @ w))
    return 0.5 * float(w @ w) + C * float((hinge ** d_exp).sum())


def binary_gradient(w: np.ndarray, X: np.ndarray, ydec: np.ndarray,
                    C: float, d_exp: int = 1) -> np.ndarray:
    gaps = 1.0 - ydec * (X @ w)
    coef = _hinge_coef(gaps, d_exp)
    return w - C * ((coef * ydec) @ X)


def objective_value(model: Model, dataset: LabeledDataset, cfg: TrainConfig) -> float:
    """Exact primal objective of the configured scheme at the model's weights.

    The bias column is part of the weight vector (appended-feature
    parameterization), so it is included in the regularizer.
    """
    X, y = dataset.to_arrays()
    C, d_exp = cfg.penalty, cfg.hinge_exponent
    if cfg.scheme == "native":
        if not isinstance(model, LinearModel):
            raise TypeError("native objective needs a LinearModel")
        return native_objective(model.augmented(), X, y, C, d_exp)
    if cfg.scheme == "one-vs-all":
        if not isinstance(model, LinearModel):
            raise TypeError("one-vs-all objective needs a LinearModel")
        total = 0.0
        for m in range(model.k):
            ydec = np.where(y == m, 1.0, -1.0)
            total += binary_objective(model.augmented()[m], X, ydec, C, d_exp)
        return total
    if not isinstance(model, OneVsOneModel):
        raise TypeError("one-vs-one objective needs a OneVsOneModel")
    total = 0.0
    for (a, b), sub in zip(model.pairs, model.models):
        mask = (y == a) | (y == b)
        ydec = np.where(y[mask] == b, 1.0, -1.0)
        total += binary_objective(sub.augmented()[1], X[mask], ydec, C, d_exp)
    return total


# --- serialization ---

def model_to_json(model: Model) -> str:
    if isinstance(model, LinearModel):
        doc = {
            "format": MODEL_FORMAT,
            "kind": "linear",
            "categories": list(model.categories),
            "weights": model.weights.tolist(),
            "biases": model.biases.tolist(),
            "meta": model.meta,
        }
    else:
        doc = {
            "format": MODEL_FORMAT,
            "kind": "one-vs-one",
            "categories": list(model.categories),
            "pairs": [list(p) for p in model.pairs],
            "sub_models": [
                {"categories": list(m.categories),
                 "weights": m.weights.tolist(),
                 "biases": m.biases.tolist(),
                 "meta": m.meta}
                for m in model.models
            ],
            "meta": model.meta,
        }
    return json.dumps(doc)


def model_from_json(text: str) -> Model:
    doc = json.loads(text)
    if doc.get("format") != MODEL_FORMAT:
        raise ValueError(f"unsupported model format {doc.get('format')!r}")
    if doc["kind"] == "linear":
        return LinearModel(weights=np.array(doc["weights"], dtype=float),
                           biases=np.array(doc["biases"], dtype=float),
                           categories=tuple(doc["categories"]),
                           meta=doc.get("meta", {}))
    subs = tuple(
        LinearModel(weights=np.array(s["weights"], dtype=float),
                    biases=np.array(s["biases"], dtype=float),
                    categories=tuple(s["categories"]),
                    meta=s.get("meta", {}))
        for s in doc["sub_models"])
    return OneVsOneModel(categories=tuple(doc["categories"]),
                         pairs=tuple((p[0], p[1]) for p in doc["pairs"]),
                         models=subs, meta=doc.get("meta", {}))
