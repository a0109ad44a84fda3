"""Label-mask primitives: connected components, confusion counts, boundaries.

A mask is a 2D grid of small integer label IDs (0 = background). Ground
truth and predictions share this representation; every metric in the
package consumes the types defined here.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

CONNECTIVITIES = (4, 8)


class LabelMask:
    """Immutable 2D grid of label IDs.

    Label IDs are non-negative and capped at 255 so masks round-trip
    through 8-bit grayscale image files. The pixel grid is row-major
    (``labels[row, col]``) and read-only after construction, so instances
    are safe to share across threads.
    """

    __slots__ = ("_labels",)

    def __init__(self, labels):
        arr = np.asarray(labels)
        if arr.ndim != 2:
            raise ValueError(f"mask must be 2D, got shape {arr.shape}")
        if arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError("mask must have positive width and height")
        if arr.dtype == bool:
            arr = arr.astype(np.uint8)
        if not np.issubdtype(arr.dtype, np.integer):
            raise ValueError(f"mask labels must be integers, got dtype {arr.dtype}")
        if int(arr.min()) < 0 or int(arr.max()) > 255:
            raise ValueError("label IDs must lie in [0, 255]")
        copy = arr.astype(np.uint8, copy=True)
        copy.setflags(write=False)
        self._labels = copy

    @property
    def labels(self) -> np.ndarray:
        """Read-only (height, width) uint8 array of label IDs."""
        return self._labels

    @property
    def height(self) -> int:
        return self._labels.shape[0]

    @property
    def width(self) -> int:
        return self._labels.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self._labels.shape

    def label_values(self) -> tuple[int, ...]:
        """Sorted tuple of the non-zero labels present in the mask."""
        present = np.unique(self._labels)
        return tuple(int(v) for v in present if v != 0)

    def count(self, label: int) -> int:
        return int(np.count_nonzero(self._labels == label))

    def __eq__(self, other):
        if not isinstance(other, LabelMask):
            return NotImplemented
        return np.array_equal(self._labels, other._labels)

    def __hash__(self):
        return hash((self.shape, self._labels.tobytes()))

    def __repr__(self):
        return f"LabelMask({self.width}x{self.height}, labels={self.label_values()})"


@dataclass(frozen=True)
class ConfusionCounts:
    """Per-label pixel confusion counts for one ground-truth/prediction pair."""

    tp: int
    fp: int
    fn: int
    tn: int

    def __post_init__(self):
        if min(self.tp, self.fp, self.fn, self.tn) < 0:
            raise ValueError("confusion counts must be non-negative")

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.fn + self.tn


class Segment:
    """One connected component of one label: pixel set, area, bounding box."""

    __slots__ = ("label", "area", "bbox", "_rows", "_cols", "_pixels")

    def __init__(self, label: int, rows, cols):
        rows = np.asarray(rows, dtype=np.intp)
        cols = np.asarray(cols, dtype=np.intp)
        if rows.size == 0 or rows.shape != cols.shape:
            raise ValueError("segment needs matching, non-empty coordinate arrays")
        self.label = int(label)
        self.area = int(rows.size)
        self.bbox = (int(rows.min()), int(cols.min()), int(rows.max()), int(cols.max()))
        rows.setflags(write=False)
        cols.setflags(write=False)
        self._rows = rows
        self._cols = cols
        self._pixels = None

    @property
    def pixels(self) -> frozenset:
        """Set of (row, col) coordinates; built lazily."""
        if self._pixels is None:
            self._pixels = frozenset(zip(self._rows.tolist(), self._cols.tolist()))
        return self._pixels

    def coordinate_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """Row and column index arrays, in row-major pixel order."""
        return self._rows, self._cols

    def __repr__(self):
        return f"Segment(label={self.label}, area={self.area}, bbox={self.bbox})"


@dataclass(frozen=True)
class BoundarySet:
    """Boundary pixels of one label's region."""

    label: int
    points: frozenset


def _check_same_shape(gt: LabelMask, pred: LabelMask):
    if gt.shape != pred.shape:
        raise ValueError(
            f"mask dimension mismatch: ground truth is {gt.width}x{gt.height}, "
            f"prediction is {pred.width}x{pred.height}"
        )


def _find(parent, x):
    root = x
    while parent[root] != root:
        root = parent[root]
    while parent[x] != root:
        parent[x], x = root, parent[x]
    return root


def _union(parent, a, b):
    ra, rb = _find(parent, a), _find(parent, b)
    if ra != rb:
        if ra > rb:
            ra, rb = rb, ra
        parent[rb] = ra


def _label_binary(binary: np.ndarray, connectivity: int) -> tuple[np.ndarray, int]:
    """Two-pass union-find labeling of a boolean image.

    Runs of set pixels within each row are the unit of work: the first
    pass unions runs that touch runs of the previous row, the second pass
    paints resolved component IDs. Returns (component image, count) with
    IDs 1..count assigned in order of first appearance (row-major).
    """
    h, w = binary.shape
    comp = np.zeros((h, w), dtype=np.int32)
    if not binary.any():
        return comp, 0

    # One padding column per row keeps runs from crossing row ends when the
    # grid is scanned flat.
    padded = np.zeros((h, w + 1), dtype=bool)
    padded[:, :w] = binary
    flat = padded.ravel().astype(np.int8)
    d = np.diff(flat, prepend=np.int8(0))
    start_idx = np.flatnonzero(d == 1)
    end_idx = np.flatnonzero(d == -1)

    stride = w + 1
    run_row = (start_idx // stride).tolist()
    run_s = (start_idx % stride).tolist()
    run_e = (end_idx % stride).tolist()
    n_runs = len(run_s)

    parent = list(range(n_runs))
    reach = 1 if connectivity == 8 else 0

    prev_lo = prev_hi = 0
    prev_row = -2
    i = 0
    while i < n_runs:
        row = run_row[i]
        hi = i
        while hi < n_runs and run_row[hi] == row:
            hi += 1
        if row == prev_row + 1:
            j = prev_lo
            for k in range(i, hi):
                s, e = run_s[k], run_e[k]
                while j < prev_hi and run_e[j] + reach <= s:
                    j += 1
                jj = j
                while jj < prev_hi and run_s[jj] < e + reach:
                    _union(parent, k, jj)
                    jj += 1
        prev_lo, prev_hi, prev_row = i, hi, row
        i = hi

    next_id = 0
    final: dict[int, int] = {}
    for k in range(n_runs):
        root = _find(parent, k)
        cid = final.get(root)
        if cid is None:
            next_id += 1
            cid = next_id
            final[root] = cid
        comp[run_row[k], run_s[k]:run_e[k]] = cid
    return comp, next_id


def component_label_image(mask: LabelMask, label: int, connectivity: int = 8) -> tuple[np.ndarray, int]:
    """Array-level view of the components of one label.

    Returns (comp, n) where comp is an int32 image with 0 outside the
    label's pixels and component IDs 1..n inside. Component IDs follow
    row-major first appearance, not the sorted order used by
    :func:`connected_components`.
    """
    if label <= 0:
        raise ValueError("label must be positive")
    if connectivity not in CONNECTIVITIES:
        raise ValueError(f"connectivity must be 4 or 8, got {connectivity}")
    return _label_binary(mask.labels == label, connectivity)


def _component_groups(comp: np.ndarray, n: int):
    """Group the pixels of a component image and order components.

    Returns (idx_sorted, starts, counts, perm): all flat pixel indices
    grouped by component (each group in row-major order), group start
    offsets and sizes, and the component order sorted by bounding-box
    (min_row, min_col) with the first top-row pixel column as a
    deterministic tiebreak. Component k+1 owns
    ``idx_sorted[starts[k]:starts[k] + counts[k]]``.
    """
    w = comp.shape[1]
    flat = comp.ravel()
    idx = np.flatnonzero(flat)
    cids = flat[idx]
    order = np.argsort(cids, kind="stable")
    idx_sorted = idx[order]
    counts = np.bincount(cids, minlength=n + 1)[1:].astype(np.intp)
    starts = np.zeros(n, dtype=np.intp)
    np.cumsum(counts[:-1], out=starts[1:])

    cols = idx_sorted % w
    min_rows = idx_sorted[starts] // w  # flat order puts the topmost pixel first
    min_cols = np.minimum.reduceat(cols, starts)
    first_cols = cols[starts]
    perm = np.lexsort((first_cols, min_cols, min_rows))
    return idx_sorted, starts, counts, perm


def connected_components(mask: LabelMask, label: int, connectivity: int = 8) -> list[Segment]:
    """Extract the maximal connected components of one label.

    Segments partition the label's pixel set exactly and come back sorted
    by the (min_row, min_col) of their bounding boxes. A label absent from
    the mask yields an empty list.
    """
    comp, n = component_label_image(mask, label, connectivity)
    if n == 0:
        return []
    idx_sorted, starts, counts, perm = _component_groups(comp, n)
    w = mask.width
    segments = []
    for k in perm:
        chunk = idx_sorted[starts[k]:starts[k] + counts[k]]
        segments.append(Segment(label, chunk // w, chunk % w))
    return segments


def confusion_counts(gt: LabelMask, pred: LabelMask, label: int) -> ConfusionCounts:
    """Pixel-level confusion counts for one label (0 allowed: background)."""
    _check_same_shape(gt, pred)
    g = gt.labels == label
    p = pred.labels == label
    tp = int(np.count_nonzero(g & p))
    fp = int(np.count_nonzero(p) - tp)
    fn = int(np.count_nonzero(g) - tp)
    tn = int(g.size) - tp - fp - fn
    return ConfusionCounts(tp=tp, fp=fp, fn=fn, tn=tn)


def fp_mask(gt: LabelMask, pred: LabelMask, label: int) -> LabelMask:
    """Binary mask of the label's false-positive pixels (pred minus gt).

    The per-label set difference, not a full XOR: false negatives are
    excluded on purpose, since downstream weighting counts FP pixels only.
    """
    _check_same_shape(gt, pred)
    out = (pred.labels == label) & (gt.labels != label)
    return LabelMask(out.astype(np.uint8))


def boundary(mask: LabelMask, label: int) -> BoundarySet:
    """Region pixels with at least one 4-neighbor outside the region.

    The image border counts as outside. An absent label gives an empty
    BoundarySet; callers decide whether that is an error.
    """
    if label <= 0:
        raise ValueError("label must be positive")
    region = mask.labels == label
    if not region.any():
        return BoundarySet(label=label, points=frozenset())
    padded = np.pad(region, 1, constant_values=False)
    surrounded = (
        padded[:-2, 1:-1] & padded[2:, 1:-1] & padded[1:-1, :-2] & padded[1:-1, 2:]
    )
    rows, cols = np.nonzero(region & ~surrounded)
    return BoundarySet(label=label, points=frozenset(zip(rows.tolist(), cols.tolist())))
