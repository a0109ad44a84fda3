import numpy as np

from segeval import LabelMask

# One line per acceptance criterion, echoed after the run so the
# pass/fail verdicts stay visible even with output capture on.
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def random_mask(rng, height, width, n_labels, density=0.5):
    """Random label grid: background vs uniformly chosen labels."""
    arr = rng.randint(1, n_labels + 1, size=(height, width)).astype(np.uint8)
    arr[rng.rand(height, width) >= density] = 0
    return arr


def random_pair(rng, max_size=64, max_labels=3):
    """One (gt, pred, labels) fuzz case mixing the interesting regimes."""
    h = rng.randint(1, max_size + 1)
    w = rng.randint(1, max_size + 1)
    n_labels = rng.randint(1, max_labels + 1)
    gt = random_mask(rng, h, w, n_labels)
    roll = rng.rand()
    if roll < 0.1:
        pred = gt.copy()
    elif roll < 0.2:
        pred = np.zeros_like(gt)
    elif roll < 0.6:
        pred = gt.copy()
        flips = rng.rand(h, w) < 0.15
        pred[flips] = rng.randint(0, n_labels + 1, size=int(flips.sum()))
    else:
        pred = random_mask(rng, h, w, n_labels)
    labels = list(range(1, n_labels + 1))
    return LabelMask(gt), LabelMask(pred), labels
