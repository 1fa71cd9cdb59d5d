"""Compiled inner loops for the dictionary matcher.

Class ids: 0 = non-alphanumeric character absent from every term,
1 = alphanumeric character absent from every term, 2 = collapsible
(whitespace or hyphen), 3.. = characters that occur in some term.
"""

from __future__ import annotations

import numba
import numpy as np

SPACE = 2


@numba.njit(nogil=True, cache=True)
def collapse_classes(cps, seg_bounds, class_table, out_classes, out_bounds):
    """Map code points to classes and collapse collapsible runs per segment.

    Writes folded classes into ``out_classes`` and the folded segment
    boundaries into ``out_bounds`` (length nseg + 1).
    """
    j = 0
    nseg = seg_bounds.shape[0] - 1
    for g in range(nseg):
        out_bounds[g] = j
        prev_space = False
        for i in range(seg_bounds[g], seg_bounds[g + 1]):
            c = class_table[cps[i]]
            if c == SPACE:
                if prev_space:
                    continue
                prev_space = True
            else:
                prev_space = False
            out_classes[j] = c
            j += 1
    out_bounds[nseg] = j
    return j


@numba.njit(nogil=True, cache=True)
def scan_segments(classes, bounds, delta, term_of, dict_link, term_len, alnum,
                  out_seg, out_start, out_end, out_term):
    """Run the automaton over each folded segment.

    Reports every boundary-respecting occurrence as (segment, start, end,
    term) with offsets relative to the segment.  Returns the number of
    occurrences found, which may exceed the output capacity; the caller
    retries with larger buffers in that case.
    """
    cap = out_seg.shape[0]
    k = 0
    nseg = bounds.shape[0] - 1
    for g in range(nseg):
        lo = bounds[g]
        hi = bounds[g + 1]
        s = 0
        for i in range(lo, hi):
            s = delta[s, classes[i]]
            t = s
            while t > 0:
                ti = term_of[t]
                if ti >= 0:
                    st = i - term_len[ti] + 1
                    if (st == lo or not alnum[classes[st - 1]]) and (
                        i + 1 == hi or not alnum[classes[i + 1]]
                    ):
                        if k < cap:
                            out_seg[k] = g
                            out_start[k] = st - lo
                            out_end[k] = i + 1 - lo
                            out_term[k] = ti
                        k += 1
                t = dict_link[t]
    return k


def run(cps, seg_bounds, class_table, delta, term_of, dict_link, term_len, alnum):
    """Fold, scan and keep the longest match at each start position.

    Returns four int arrays (segment, start, end, term) sorted by
    (segment, start).
    """
    n = cps.shape[0]
    nseg = seg_bounds.shape[0] - 1
    classes = np.empty(n, dtype=np.uint16)
    bounds = np.empty(nseg + 1, dtype=np.int64)
    collapse_classes(cps, seg_bounds, class_table, classes, bounds)
    cap = max(256, n // 8)
    while True:
        seg = np.empty(cap, dtype=np.int64)
        start = np.empty(cap, dtype=np.int64)
        end = np.empty(cap, dtype=np.int64)
        term = np.empty(cap, dtype=np.int32)
        k = scan_segments(classes, bounds, delta, term_of, dict_link, term_len, alnum,
                          seg, start, end, term)
        if k <= cap:
            break
        cap = k
    seg, start, end, term = seg[:k], start[:k], end[:k], term[:k]
    if k == 0:
        return seg, start, end, term
    order = np.lexsort((-end, start, seg))
    seg, start, end, term = seg[order], start[order], end[order], term[order]
    keep = np.ones(k, dtype=np.bool_)
    keep[1:] = (seg[1:] != seg[:-1]) | (start[1:] != start[:-1])
    return seg[keep], start[keep], end[keep], term[keep]
