"""Dataset containers, label bookkeeping and run configuration.

A :class:`DomainDataset` keeps two label channels. ``labels`` is the
training-visible channel and is only populated for source data. Target
ground truth, when known, lives in ``eval_labels``, which nothing on the
prediction path is allowed to read; it exists purely so metrics can be
computed afterwards.
"""

from dataclasses import dataclass, field, replace

import numpy as np

LABELING_MODES = ("ncp", "sp", "fused")
SELECTION_MODES = ("none", "all", "progressive")


def _frozen_array(values, dtype) -> np.ndarray:
    a = np.array(values, dtype=dtype)
    a.setflags(write=False)
    return a


def _check_label_vector(labels, n: int, channel: str) -> np.ndarray:
    labels = np.asarray(labels)
    if labels.ndim != 1 or labels.shape[0] != n:
        raise ValueError(f"{channel} must be a length-{n} vector, got shape {labels.shape}")
    if not np.issubdtype(labels.dtype, np.integer):
        if not np.all(labels == labels.astype(int)):
            raise ValueError(f"{channel} must be integers")
    if (labels < 0).any():
        raise ValueError(f"{channel} must be nonnegative class ids")
    return labels.astype(int)


@dataclass(frozen=True)
class DomainDataset:
    """Column-major feature matrix for one domain plus optional labels."""

    features: np.ndarray
    labels: np.ndarray | None = None
    eval_labels: np.ndarray | None = None
    domain: str = "source"

    def __post_init__(self):
        feats = np.array(self.features, dtype=float)
        if feats.ndim != 2:
            raise ValueError(f"features must be a 2-D matrix, got ndim={feats.ndim}")
        if feats.shape[1] < 1:
            raise ValueError("dataset needs at least one sample")
        if not np.isfinite(feats).all():
            raise ValueError("features contain non-finite entries")
        feats.setflags(write=False)
        object.__setattr__(self, "features", feats)
        if self.domain not in ("source", "target"):
            raise ValueError(f"domain must be 'source' or 'target', got {self.domain!r}")
        for channel in ("labels", "eval_labels"):
            values = getattr(self, channel)
            if values is not None:
                checked = _check_label_vector(values, feats.shape[1], channel)
                object.__setattr__(self, channel, _frozen_array(checked, int))

    @property
    def dim(self) -> int:
        return self.features.shape[0]

    @property
    def n_samples(self) -> int:
        return self.features.shape[1]

    def without_eval_labels(self) -> "DomainDataset":
        return replace(self, eval_labels=None)


@dataclass(frozen=True)
class PseudoLabelSet:
    """Per-target-sample triplets (index, predicted class, confidence)."""

    indices: np.ndarray
    classes: np.ndarray
    confidences: np.ndarray

    def __post_init__(self):
        idx = _frozen_array(np.asarray(self.indices, dtype=int), int)
        cls = _frozen_array(np.asarray(self.classes, dtype=int), int)
        conf = _frozen_array(np.asarray(self.confidences, dtype=float), float)
        if not (idx.shape == cls.shape == conf.shape) or idx.ndim != 1:
            raise ValueError("indices, classes and confidences must be aligned vectors")
        if np.unique(idx).size != idx.size:
            raise ValueError("target indices must be unique")
        if conf.size and (not np.isfinite(conf).all() or conf.min() < 0 or conf.max() > 1):
            raise ValueError("confidences must be finite and within [0, 1]")
        if (cls < 0).any():
            raise ValueError("class ids must be nonnegative")
        object.__setattr__(self, "indices", idx)
        object.__setattr__(self, "classes", cls)
        object.__setattr__(self, "confidences", conf)

    def __len__(self) -> int:
        return self.indices.size

    @staticmethod
    def empty() -> "PseudoLabelSet":
        return PseudoLabelSet(np.array([], dtype=int), np.array([], dtype=int),
                              np.array([], dtype=float))


@dataclass(frozen=True)
class ClassPartition:
    """Target indices grouped by pseudo-label class."""

    indices_by_class: tuple

    @property
    def counts(self) -> np.ndarray:
        return np.array([idx.size for idx in self.indices_by_class], dtype=int)


def partition_by_class(pl: PseudoLabelSet, n_classes: int) -> ClassPartition:
    groups = []
    for c in range(n_classes):
        rows = np.flatnonzero(pl.classes == c)
        groups.append(pl.indices[rows])
    return ClassPartition(indices_by_class=tuple(groups))


@dataclass(frozen=True)
class RunConfig:
    """Adaptation hyperparameters; echoed verbatim into results and reports."""

    pca_dim: int
    subspace_dim: int = 128
    iterations: int = 10
    labeling: str = "fused"
    selection: str = "progressive"
    seed: int = 0

    def __post_init__(self):
        if self.pca_dim < 1:
            raise ValueError(f"pca_dim must be positive, got {self.pca_dim}")
        if not 1 <= self.subspace_dim <= self.pca_dim:
            raise ValueError(
                f"subspace_dim must satisfy 1 <= subspace_dim <= pca_dim, "
                f"got {self.subspace_dim} vs pca_dim={self.pca_dim}"
            )
        if self.iterations < 1:
            raise ValueError(f"iterations must be >= 1, got {self.iterations}")
        if self.labeling not in LABELING_MODES:
            raise ValueError(f"labeling must be one of {LABELING_MODES}, got {self.labeling!r}")
        if self.selection not in SELECTION_MODES:
            raise ValueError(f"selection must be one of {SELECTION_MODES}, got {self.selection!r}")

    def to_dict(self) -> dict:
        return {
            "pca_dim": self.pca_dim,
            "subspace_dim": self.subspace_dim,
            "iterations": self.iterations,
            "labeling": self.labeling,
            "selection": self.selection,
            "seed": self.seed,
        }


@dataclass(frozen=True)
class ValidatedPair:
    """A source/target pair with dense 0-based labels and a shared class count."""

    source: DomainDataset
    target: DomainDataset
    n_classes: int
    label_names: tuple = field(default_factory=tuple)


def validate_pair(src: DomainDataset, tgt: DomainDataset) -> ValidatedPair:
    """Check pair consistency and dictionary-encode labels to dense 0-based ids.

    The class vocabulary is the union of source labels and target evaluation
    labels; every class must have at least one source sample, otherwise its
    prototype would be undefined.
    """
    if src.labels is None:
        raise ValueError("source dataset must be fully labeled")
    if tgt.labels is not None:
        raise ValueError(
            "target dataset must not carry training labels; "
            "ground truth belongs in eval_labels"
        )
    if src.dim != tgt.dim:
        raise ValueError(
            f"feature dimension mismatch: source d={src.dim}, target d={tgt.dim}"
        )
    vocab = np.unique(src.labels)
    for extra in (src.eval_labels, tgt.eval_labels):
        if extra is not None:
            vocab = np.unique(np.concatenate([vocab, extra]))
    label_names = tuple(int(x) for x in vocab)
    present = set(np.unique(src.labels).tolist())
    missing = [name for name in label_names if name not in present]
    if missing:
        raise ValueError(
            f"source has no samples for class(es) {missing} out of "
            f"{len(label_names)}; class prototypes would be undefined"
        )
    encode = {name: dense for dense, name in enumerate(label_names)}
    src_labels = np.array([encode[int(y)] for y in src.labels], dtype=int)
    new_src = replace(src, labels=src_labels,
                      eval_labels=None if src.eval_labels is None else
                      np.array([encode[int(y)] for y in src.eval_labels], dtype=int))
    new_tgt = tgt if tgt.eval_labels is None else replace(
        tgt, eval_labels=np.array([encode[int(y)] for y in tgt.eval_labels], dtype=int))
    return ValidatedPair(source=new_src, target=new_tgt,
                         n_classes=len(label_names), label_names=label_names)
