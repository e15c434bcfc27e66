"""Pure-numpy versions of the kernels in ``_kernels_numba``.

Same signatures and bit-identical results; the tree is walked breadth-first so
each level is one vectorised box test instead of a Python loop per node.
"""

import numpy as np

NONE = 0
TYPE_ONE = 1
TYPE_TWO = 2
CONTAINED = 3

PRUNE_SLACK = 1e-6


def seg_circle_vec(ax, ay, bx, by, cx, cy, r, eps):
    """Vectorised segment/circle classification; returns ``(kind, l1, l2)``."""
    fx = ax - cx
    fy = ay - cy
    gx = bx - cx
    gy = by - cy
    r2 = r * r
    ina = fx * fx + fy * fy <= r2
    inb = gx * gx + gy * gy <= r2
    dx = bx - ax
    dy = by - ay
    a = dx * dx + dy * dy
    degenerate = a == 0.0
    with np.errstate(divide="ignore", invalid="ignore"):
        proj = -(fx * dx + fy * dy) / a
        cr = fx * dy - fy * dx
        h = r2 - cr * cr / a
        s1 = np.sqrt(np.maximum(h, 0.0) / a)
        s2 = np.sqrt(h / a)

    kind = np.zeros(np.shape(a), dtype=np.int64)
    l1 = np.zeros(np.shape(a))
    l2 = np.zeros(np.shape(a))

    kind[degenerate & ina] = CONTAINED
    live = ~degenerate
    kind[live & ina & inb] = CONTAINED

    one = live & (ina ^ inb)
    lam = np.where(ina, proj + s1, proj - s1)
    kind[one] = TYPE_ONE
    l1[one] = np.clip(lam[one], 0.0, 1.0)

    two = live & ~ina & ~inb & (proj > 0.0) & (proj < 1.0) & (h > eps * r2)
    kind[two] = TYPE_TWO
    l1[two] = np.clip(proj[two] - s2[two], 0.0, 1.0)
    l2[two] = np.clip(proj[two] + s2[two], 0.0, 1.0)
    return kind, l1, l2


def seg_circle(ax, ay, bx, by, cx, cy, r, eps):
    kind, l1, l2 = seg_circle_vec(np.float64(ax), np.float64(ay), np.float64(bx),
                                  np.float64(by), cx, cy, r, eps)
    return int(kind), float(l1), float(l2)


def _node_ranges(ids, size):
    depth = np.floor(np.log2(ids)).astype(np.int64)
    # log2 of exact powers of two is exact, but guard against rounding anyway
    depth = np.where((1 << (depth + 1)) <= ids, depth + 1, depth)
    span = size >> depth
    lo = (ids - (1 << depth)) * span
    return lo, lo + span


def _ranges_to_indices(lo, hi):
    if lo.size == 0:
        return np.empty(0, dtype=np.int64)
    return np.concatenate([np.arange(a, b, dtype=np.int64) for a, b in zip(lo, hi)])


def _walk(boxes, size, cx, cy, r2, lim):
    """Breadth-first pruning walk.

    Returns ``(leaf_segments, inside_nodes, visited)`` where ``inside_nodes``
    are nodes whose whole box lies in the closed disk.
    """
    frontier = np.array([1], dtype=np.int64)
    leaves, inside_nodes = [], []
    visited = 0
    while frontier.size:
        visited += frontier.size
        b = boxes[frontier]
        dx = np.maximum(np.maximum(b[:, 0] - cx, cx - b[:, 2]), 0.0)
        dy = np.maximum(np.maximum(b[:, 1] - cy, cy - b[:, 3]), 0.0)
        keep = dx * dx + dy * dy <= lim
        fx = np.maximum(cx - b[:, 0], b[:, 2] - cx)
        fy = np.maximum(cy - b[:, 1], b[:, 3] - cy)
        inside = keep & (fx * fx + fy * fy <= r2)
        inside_nodes.append(frontier[inside])
        rest = frontier[keep & ~inside]
        leaf = rest >= size
        leaves.append(rest[leaf] - size)
        inner = rest[~leaf]
        frontier = np.concatenate([2 * inner, 2 * inner + 1])
    return np.concatenate(leaves), np.concatenate(inside_nodes), visited


def _classify(nodes, segs, cx, cy, r, eps):
    a = nodes[segs]
    b = nodes[segs + 1]
    return seg_circle_vec(a[:, 0], a[:, 1], b[:, 0], b[:, 1], cx, cy, r, eps)


def query_circle(boxes, size, nodes, cx, cy, r, eps, touching):
    n = nodes.shape[0] - 1
    r2 = r * r
    segs, inside_nodes, visited = _walk(boxes, size, cx, cy, r2, r2 * (1.0 + PRUNE_SLACK))
    segs = np.sort(segs)
    kind, _, _ = _classify(nodes, segs, cx, cy, r, eps)
    hit = (kind == TYPE_ONE) | (kind == TYPE_TWO)
    if touching:
        hit |= kind == CONTAINED
        lo, hi = _node_ranges(inside_nodes, size)
        extra = _ranges_to_indices(lo, np.minimum(hi, n))
        return np.union1d(segs[hit], extra).astype(np.int64), visited
    return segs[hit], visited


def query_endpoints(boxes, size, nodes, cx, cy, r):
    n = nodes.shape[0] - 1
    r2 = r * r
    segs, inside_nodes, visited = _walk(boxes, size, cx, cy, r2, r2)
    lo, hi = _node_ranges(inside_nodes, size)
    cand = np.concatenate([segs, segs + 1, _ranges_to_indices(lo, np.minimum(hi, n) + 1)])
    cand = np.unique(cand)
    ex = nodes[cand, 0] - cx
    ey = nodes[cand, 1] - cy
    return cand[ex * ex + ey * ey <= r2], visited


def naive_circle(nodes, cx, cy, r, eps, touching):
    segs = np.arange(nodes.shape[0] - 1, dtype=np.int64)
    kind, _, _ = _classify(nodes, segs, cx, cy, r, eps)
    hit = (kind == TYPE_ONE) | (kind == TYPE_TWO)
    if touching:
        hit |= kind == CONTAINED
    return segs[hit]


def disk_stamps(boxes, size, nodes, prefix, etime, centers, r, eps, use_index):
    n = nodes.shape[0] - 1
    k = centers.shape[0]
    r2 = r * r
    lim = r2 * (1.0 + PRUNE_SLACK)
    all_segs = np.arange(n, dtype=np.int64)
    chunks = []
    offsets = np.zeros(k + 1, dtype=np.int64)
    visited = 0
    bad = -1
    for i in range(k):
        cx = centers[i, 0]
        cy = centers[i, 1]
        if use_index:
            segs, _, v = _walk(boxes, size, cx, cy, r2, lim)
            visited += v
            segs = np.sort(segs)
        else:
            segs = all_segs
        kind, l1, l2 = _classify(nodes, segs, cx, cy, r, eps)
        t0 = prefix[segs]
        et = etime[segs]
        pair = np.stack([t0 + l1 * et, t0 + l2 * et], axis=1)
        take = np.stack([(kind == TYPE_ONE) | (kind == TYPE_TWO), kind == TYPE_TWO], axis=1)
        mid = pair[take]
        ex0 = nodes[0, 0] - cx
        ey0 = nodes[0, 1] - cy
        exn = nodes[n, 0] - cx
        eyn = nodes[n, 1] - cy
        head = [0.0] if ex0 * ex0 + ey0 * ey0 <= r2 else []
        tail = [prefix[n]] if exn * exn + eyn * eyn <= r2 else []
        s = np.concatenate([np.array(head), mid, np.array(tail)])
        if s.size % 2 == 1 and bad < 0:
            bad = i
        chunks.append(s)
        offsets[i + 1] = offsets[i] + s.size
    stamps = np.concatenate(chunks) if chunks else np.empty(0)
    return stamps.astype(np.float64), offsets, visited, bad
