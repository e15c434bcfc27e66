"""numba-compiled hot loops: segment/circle classification and tree traversal.

The tree is an implicit heap over ``size`` (a power of two) leaves.  Node 1 is
the root, node ``i`` has children ``2i`` and ``2i + 1`` and leaf ``size + j``
holds segment ``j``.  ``boxes[i] = (xmin, ymin, xmax, ymax)``; padding leaves
carry an inverted box so every distance test rejects them.
"""

import math

import numpy as np
from numba import njit

NONE = 0
TYPE_ONE = 1
TYPE_TWO = 2
CONTAINED = 3

# Outer box test is loosened by this relative amount so floating-point noise in
# the leaf test can never make the index miss a segment the naive scan reports.
PRUNE_SLACK = 1e-6


@njit(cache=True)
def seg_circle(ax, ay, bx, by, cx, cy, r, eps):
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
    if a == 0.0:
        if ina:
            return CONTAINED, 0.0, 0.0
        return NONE, 0.0, 0.0
    if ina and inb:
        return CONTAINED, 0.0, 0.0
    proj = -(fx * dx + fy * dy) / a
    cr = fx * dy - fy * dx
    h = r2 - cr * cr / a
    if ina or inb:
        if h < 0.0:
            h = 0.0
        s = math.sqrt(h / a)
        lam = proj + s if ina else proj - s
        lam = min(max(lam, 0.0), 1.0)
        return TYPE_ONE, lam, 0.0
    if proj <= 0.0 or proj >= 1.0 or h <= eps * r2:
        return NONE, 0.0, 0.0
    s = math.sqrt(h / a)
    l1 = min(max(proj - s, 0.0), 1.0)
    l2 = min(max(proj + s, 0.0), 1.0)
    return TYPE_TWO, l1, l2


@njit(cache=True)
def _grow_int(buf, idx):
    # make ``buf[idx]`` writable; everything already in ``buf`` is kept
    if idx < buf.shape[0]:
        return buf
    size = buf.shape[0]
    while size <= idx:
        size *= 2
    out = np.empty(size, dtype=buf.dtype)
    out[:buf.shape[0]] = buf
    return out


@njit(cache=True)
def _grow_float(buf, idx):
    # make ``buf[idx]`` writable; everything already in ``buf`` is kept
    if idx < buf.shape[0]:
        return buf
    size = buf.shape[0]
    while size <= idx:
        size *= 2
    out = np.empty(size, dtype=buf.dtype)
    out[:buf.shape[0]] = buf
    return out


@njit(cache=True)
def _box_d2(boxes, i, cx, cy):
    dx = max(boxes[i, 0] - cx, cx - boxes[i, 2], 0.0)
    dy = max(boxes[i, 1] - cy, cy - boxes[i, 3], 0.0)
    return dx * dx + dy * dy


@njit(cache=True)
def _box_far2(boxes, i, cx, cy):
    fx = max(cx - boxes[i, 0], boxes[i, 2] - cx)
    fy = max(cy - boxes[i, 1], boxes[i, 3] - cy)
    return fx * fx + fy * fy


@njit(cache=True)
def query_circle(boxes, size, nodes, cx, cy, r, eps, touching):
    """Segments crossing the circle (or, with ``touching``, meeting the disk).

    Returns ``(indices, visited)``, indices ascending.
    """
    n = nodes.shape[0] - 1
    r2 = r * r
    lim = r2 * (1.0 + PRUNE_SLACK)
    out = np.empty(16, dtype=np.int64)
    cnt = 0
    visited = 0
    stack = np.empty((128, 3), dtype=np.int64)
    stack[0, 0] = 1
    stack[0, 1] = 0
    stack[0, 2] = size
    top = 1
    while top > 0:
        top -= 1
        node = stack[top, 0]
        lo = stack[top, 1]
        hi = stack[top, 2]
        visited += 1
        if _box_d2(boxes, node, cx, cy) > lim:
            continue
        if _box_far2(boxes, node, cx, cy) <= r2:
            if touching:
                for j in range(lo, min(hi, n)):
                    out = _grow_int(out, cnt)
                    out[cnt] = j
                    cnt += 1
            continue
        if node >= size:
            kind, l1, l2 = seg_circle(nodes[lo, 0], nodes[lo, 1], nodes[lo + 1, 0],
                                      nodes[lo + 1, 1], cx, cy, r, eps)
            if kind == TYPE_ONE or kind == TYPE_TWO or (touching and kind == CONTAINED):
                out = _grow_int(out, cnt)
                out[cnt] = lo
                cnt += 1
            continue
        mid = (lo + hi) // 2
        stack[top, 0] = 2 * node + 1
        stack[top, 1] = mid
        stack[top, 2] = hi
        stack[top + 1, 0] = 2 * node
        stack[top + 1, 1] = lo
        stack[top + 1, 2] = mid
        top += 2
    return out[:cnt].copy(), visited


@njit(cache=True)
def query_endpoints(boxes, size, nodes, cx, cy, r):
    """Node indices within distance ``r`` of ``(cx, cy)``; ascending."""
    n = nodes.shape[0] - 1
    r2 = r * r
    out = np.empty(16, dtype=np.int64)
    cnt = 0
    visited = 0
    stack = np.empty((128, 3), dtype=np.int64)
    stack[0, 0] = 1
    stack[0, 1] = 0
    stack[0, 2] = size
    top = 1
    while top > 0:
        top -= 1
        node = stack[top, 0]
        lo = stack[top, 1]
        hi = stack[top, 2]
        visited += 1
        if _box_d2(boxes, node, cx, cy) > r2:
            continue
        if _box_far2(boxes, node, cx, cy) <= r2 or node >= size:
            last = min(hi, n)
            for v in range(lo, last + 1):
                if cnt > 0 and out[cnt - 1] >= v:
                    continue
                ex = nodes[v, 0] - cx
                ey = nodes[v, 1] - cy
                if ex * ex + ey * ey <= r2:
                    out = _grow_int(out, cnt)
                    out[cnt] = v
                    cnt += 1
            continue
        mid = (lo + hi) // 2
        stack[top, 0] = 2 * node + 1
        stack[top, 1] = mid
        stack[top, 2] = hi
        stack[top + 1, 0] = 2 * node
        stack[top + 1, 1] = lo
        stack[top + 1, 2] = mid
        top += 2
    return out[:cnt].copy(), visited


@njit(cache=True)
def naive_circle(nodes, cx, cy, r, eps, touching):
    n = nodes.shape[0] - 1
    out = np.empty(16, dtype=np.int64)
    cnt = 0
    for j in range(n):
        kind, l1, l2 = seg_circle(nodes[j, 0], nodes[j, 1], nodes[j + 1, 0],
                                  nodes[j + 1, 1], cx, cy, r, eps)
        if kind == TYPE_ONE or kind == TYPE_TWO or (touching and kind == CONTAINED):
            out = _grow_int(out, cnt)
            out[cnt] = j
            cnt += 1
    return out[:cnt].copy()


@njit(cache=True)
def _emit(stamps, cnt, kind, l1, l2, t0, et):
    if kind == TYPE_ONE:
        stamps = _grow_float(stamps, cnt)
        stamps[cnt] = t0 + l1 * et
        cnt += 1
    elif kind == TYPE_TWO:
        stamps = _grow_float(stamps, cnt + 1)
        stamps[cnt] = t0 + l1 * et
        stamps[cnt + 1] = t0 + l2 * et
        cnt += 2
    return stamps, cnt


@njit(cache=True)
def disk_stamps(boxes, size, nodes, prefix, etime, centers, r, eps, use_index):
    """Boundary-crossing path times for every disk, flattened.

    Returns ``(stamps, offsets, visited, bad)``: disk ``i`` owns
    ``stamps[offsets[i]:offsets[i + 1]]`` (even length, sorted) and ``bad`` is
    the first disk with an odd stamp count, or -1.
    """
    n = nodes.shape[0] - 1
    k = centers.shape[0]
    r2 = r * r
    lim = r2 * (1.0 + PRUNE_SLACK)
    total_t = prefix[n]
    stamps = np.empty(64, dtype=np.float64)
    offsets = np.zeros(k + 1, dtype=np.int64)
    cnt = 0
    visited = 0
    bad = -1
    stack = np.empty((128, 3), dtype=np.int64)
    for i in range(k):
        cx = centers[i, 0]
        cy = centers[i, 1]
        start = cnt
        ex = nodes[0, 0] - cx
        ey = nodes[0, 1] - cy
        if ex * ex + ey * ey <= r2:
            stamps = _grow_float(stamps, cnt)
            stamps[cnt] = 0.0
            cnt += 1
        if use_index:
            stack[0, 0] = 1
            stack[0, 1] = 0
            stack[0, 2] = size
            top = 1
            while top > 0:
                top -= 1
                node = stack[top, 0]
                lo = stack[top, 1]
                hi = stack[top, 2]
                visited += 1
                if _box_d2(boxes, node, cx, cy) > lim:
                    continue
                if _box_far2(boxes, node, cx, cy) <= r2:
                    continue
                if node >= size:
                    kind, l1, l2 = seg_circle(nodes[lo, 0], nodes[lo, 1], nodes[lo + 1, 0],
                                              nodes[lo + 1, 1], cx, cy, r, eps)
                    stamps, cnt = _emit(stamps, cnt, kind, l1, l2, prefix[lo], etime[lo])
                    continue
                mid = (lo + hi) // 2
                stack[top, 0] = 2 * node + 1
                stack[top, 1] = mid
                stack[top, 2] = hi
                stack[top + 1, 0] = 2 * node
                stack[top + 1, 1] = lo
                stack[top + 1, 2] = mid
                top += 2
        else:
            for j in range(n):
                kind, l1, l2 = seg_circle(nodes[j, 0], nodes[j, 1], nodes[j + 1, 0],
                                          nodes[j + 1, 1], cx, cy, r, eps)
                if kind == TYPE_ONE or kind == TYPE_TWO:
                    stamps, cnt = _emit(stamps, cnt, kind, l1, l2, prefix[j], etime[j])
        ex = nodes[n, 0] - cx
        ey = nodes[n, 1] - cy
        if ex * ex + ey * ey <= r2:
            stamps = _grow_float(stamps, cnt)
            stamps[cnt] = total_t
            cnt += 1
        if (cnt - start) % 2 == 1 and bad < 0:
            bad = i
        offsets[i + 1] = cnt
    return stamps[:cnt].copy(), offsets, visited, bad
