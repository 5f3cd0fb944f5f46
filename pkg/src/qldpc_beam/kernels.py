"""Min-sum message-passing kernels.

Two implementations of the same flooding schedule:

``minsum_loops``
    explicit loops, compiled with numba when available;
``minsum_numpy``
    vectorized segment reductions, no compiler needed.

``minsum`` is whichever one :mod:`qldpc_beam._accel` selected.  Both take
the Tanner arrays of :class:`qldpc_beam.problem.TannerGraph`, the working
(pre-flipped) syndrome and a 0/1 ``masked`` flag per column, and return
``(converged, iters_run, messages, sum_llr, posterior, hard)``.  ``hard``
is zero on masked columns; ``sum_llr`` and ``posterior`` are NaN there.
"""

import numpy as np

from ._accel import HAVE_NUMBA, njit


def _minsum_loops(col_ptr, edge_row, edge_col, row_ptr, row_edges, prior, msgs, masked, synd,
                  max_iters, msg_max, scale):
    num_cols = col_ptr.shape[0] - 1
    num_rows = row_ptr.shape[0] - 1
    num_edges = edge_row.shape[0]

    E = msgs.copy()
    D = np.zeros(num_edges)
    sum_llr = np.zeros(num_cols)
    posterior = np.zeros(num_cols)
    hard = np.zeros(num_cols, dtype=np.uint8)
    for j in range(num_cols):
        if masked[j]:
            sum_llr[j] = np.nan
            posterior[j] = np.nan

    converged = False
    iters = 0
    for t in range(1, max_iters + 1):
        iters = t
        # detector -> error
        for i in range(num_rows):
            min1 = np.inf
            min2 = np.inf
            arg = -1
            neg = int(synd[i])
            for k in range(row_ptr[i], row_ptr[i + 1]):
                e = row_edges[k]
                if masked[edge_col[e]]:
                    continue
                v = E[e]
                a = abs(v)
                if v < 0.0:
                    neg ^= 1
                if a < min1:
                    min2 = min1
                    min1 = a
                    arg = e
                elif a < min2:
                    min2 = a
            for k in range(row_ptr[i], row_ptr[i + 1]):
                e = row_edges[k]
                if masked[edge_col[e]]:
                    continue
                other = min2 if e == arg else min1
                if other == np.inf:
                    mag = msg_max
                else:
                    mag = scale * other
                    if mag > msg_max:
                        mag = msg_max
                flip = neg ^ (1 if E[e] < 0.0 else 0)
                D[e] = -mag if flip else mag

        # error -> detector, posterior, hard decision
        for j in range(num_cols):
            if masked[j]:
                continue
            # sum incoming first, then add the prior: same rounding as the numpy path
            acc = 0.0
            for e in range(col_ptr[j], col_ptr[j + 1]):
                acc += D[e]
            tot = prior[j] + acc
            posterior[j] = tot
            sum_llr[j] += tot
            hard[j] = 1 if tot <= 0.0 else 0
            for e in range(col_ptr[j], col_ptr[j + 1]):
                v = tot - D[e]
                if v > msg_max:
                    v = msg_max
                elif v < -msg_max:
                    v = -msg_max
                E[e] = v

        ok = True
        for i in range(num_rows):
            par = int(synd[i])
            for k in range(row_ptr[i], row_ptr[i + 1]):
                par ^= hard[edge_col[row_edges[k]]]
            if par:
                ok = False
                break
        if ok:
            converged = True
            break

    return converged, iters, E, sum_llr, posterior, hard


minsum_loops = njit(_minsum_loops)


def _padded_slots(ptr, ids):
    """Segment table ``(num_segments, max_len)`` of ``ids`` with ``-1`` padding."""
    lens = np.diff(ptr)
    width = int(lens.max()) if lens.size else 0
    table = np.full((lens.size, width), -1, dtype=np.int64)
    pos = np.arange(ids.size) - np.repeat(ptr[:-1], lens)
    table[np.repeat(np.arange(lens.size), lens), pos] = ids
    return table


def minsum_numpy(col_ptr, edge_row, edge_col, row_ptr, row_edges, prior, msgs, masked, synd,
                 max_iters, msg_max, scale):
    num_cols = col_ptr.shape[0] - 1
    masked_b = np.asarray(masked).astype(bool)
    live_edge = ~masked_b[edge_col]
    synd_i = np.asarray(synd).astype(np.int64) & 1

    rows = _padded_slots(row_ptr, row_edges)
    row_live = (rows >= 0) & live_edge[np.maximum(rows, 0)]
    cols = _padded_slots(col_ptr, np.arange(edge_col.size, dtype=np.int64))
    col_live = (cols >= 0) & live_edge[np.maximum(cols, 0)]
    rows_safe = np.maximum(rows, 0)
    cols_safe = np.maximum(cols, 0)
    has_rows = rows.shape[1] > 0

    E = np.array(msgs, dtype=np.float64, copy=True)
    D = np.zeros_like(E)
    sum_llr = np.where(masked_b, np.nan, 0.0)
    posterior = sum_llr.copy()
    hard = np.zeros(num_cols, dtype=np.uint8)
    converged = False
    iters = 0
    for t in range(1, max_iters + 1):
        iters = t
        if has_rows:
            Ev = E[rows_safe]
            absv = np.where(row_live, np.abs(Ev), np.inf)
            negv = (row_live & (Ev < 0.0)).astype(np.int64)
            # argmin returns the first minimum, matching the strict < in the loop kernel
            arg = np.argmin(absv, axis=1)
            ridx = np.arange(absv.shape[0])
            min1 = absv[ridx, arg]
            absv[ridx, arg] = np.inf
            min2 = absv.min(axis=1)
            is_arg = np.zeros(rows.shape, dtype=bool)
            is_arg[ridx, arg] = True
            other = np.where(is_arg, min2[:, None], min1[:, None])
            with np.errstate(invalid="ignore"):
                mag = np.where(np.isinf(other), msg_max, np.minimum(scale * other, msg_max))
            neg_par = (negv.sum(axis=1) + synd_i) & 1
            flip = (neg_par[:, None] ^ negv).astype(bool)
            vals = np.where(flip, -mag, mag)
            D[rows[row_live]] = vals[row_live]

        acc = np.zeros(num_cols)
        for k in range(cols.shape[1]):
            acc = acc + np.where(col_live[:, k], D[cols_safe[:, k]], 0.0)
        tot = prior + acc
        E = np.where(live_edge, np.clip(tot[edge_col] - D, -msg_max, msg_max), E)
        posterior = np.where(masked_b, np.nan, tot)
        sum_llr = sum_llr + posterior
        hard = ((tot <= 0.0) & ~masked_b).astype(np.uint8)

        if has_rows:
            picked = np.where(rows >= 0, hard[edge_col[rows_safe]], 0).astype(np.int64)
            parity = (picked.sum(axis=1) + synd_i) & 1
        else:
            parity = synd_i
        if not parity.any():
            converged = True
            break

    return converged, iters, E, sum_llr, posterior, hard


if HAVE_NUMBA:
    BACKEND = "numba"
    minsum = minsum_loops
else:
    BACKEND = "numpy"
    minsum = minsum_numpy
