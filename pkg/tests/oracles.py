"""Independent reference implementations used as test oracles.

These are deliberately naive: plain loops, exact rationals where that is
cheap, and no shared code with the package.
"""

from fractions import Fraction


def fuse_reference(keyword_degrees, raw_weights):
    """Local max then per-class weighted sum.

    keyword_degrees[j] is a list of keyword degree lists for sub-unit j
    (possibly empty); raw_weights[c][j] are unnormalised nonnegative weights.
    Computed in exact rational arithmetic, returned as floats.
    """
    n_classes = len(raw_weights)
    local = []
    for kws in keyword_degrees:
        if kws:
            local.append([max(Fraction(k[c]) for k in kws) for c in range(n_classes)])
        else:
            local.append([Fraction(0)] * n_classes)
    fused = []
    for c in range(n_classes):
        row = [Fraction(w) for w in raw_weights[c]]
        total = sum(row)
        value = sum(w / total * local[j][c] for j, w in enumerate(row))
        fused.append(float(min(max(value, Fraction(0)), Fraction(1))))
    return fused


def mean_abs_dev(originals, perturbed):
    devs = [abs(Fraction(a) - Fraction(b)) for a, b in zip(originals, perturbed)]
    return float(1 - sum(devs) / len(devs))


def indicator_tally(deltas, labels, band=1e-9):
    hits = 0
    for d, y in zip(deltas, labels):
        s = 0 if abs(d) < band else (1 if d > 0 else -1)
        if s == y:
            hits += 1
    return hits / len(deltas)


def confusion_f1(predictions, gold):
    labels = sorted(set(gold))
    f1s = []
    for c in labels:
        tp = fp = fn = 0
        for p, g in zip(predictions, gold):
            if g == c and p == c:
                tp += 1
            elif g != c and p == c:
                fp += 1
            elif g == c and p != c:
                fn += 1
        precision = Fraction(tp, tp + fp) if tp + fp else Fraction(0)
        recall = Fraction(tp, tp + fn) if tp + fn else Fraction(0)
        f1s.append(2 * precision * recall / (precision + recall) if precision + recall else Fraction(0))
    return float(sum(f1s) / len(f1s))


def edit_distance_recursive(a, b):
    from functools import lru_cache

    @lru_cache(maxsize=None)
    def d(i, j):
        if i == 0:
            return j
        if j == 0:
            return i
        return min(d(i - 1, j) + 1, d(i, j - 1) + 1, d(i - 1, j - 1) + (a[i - 1] != b[j - 1]))

    return d(len(a), len(b))
