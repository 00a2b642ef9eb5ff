"""Compiled hot-path kernels for the scheduling engine.

All simulation state lives in preallocated numpy arrays owned by the Python
env object; every kernel here is an ``@njit`` function mutating those arrays
in place. Scalars that kernels must update are packed into ``meta``:

    meta[0] = clock            (integer simulation time)
    meta[1] = ops_remaining    (unallocated operation count)
    meta[2] = heap_size        (live entries in the future-event heap)

The event heap holds absolute completion times strictly greater than the
clock, one per busy machine at most; equal times are merged when popped.

Step status codes: OK and DONE for accepted actions, ILLEGAL for a rejected
action (state untouched), DEADLOCK when rule ablation allowed a wait that
paused every remaining job with no future arrival to release one.
"""

from __future__ import annotations

import numpy as np
from numba import njit

STATUS_OK = 0
STATUS_DONE = 1
STATUS_ILLEGAL = 2
STATUS_DEADLOCK = 3

META_CLOCK = 0
META_OPS = 1
META_HEAP = 2


@njit(cache=True)
def _heap_push(heap, size, value):
    i = size
    heap[i] = value
    while i > 0:
        parent = (i - 1) >> 1
        if heap[parent] <= heap[i]:
            break
        heap[parent], heap[i] = heap[i], heap[parent]
        i = parent
    return size + 1


@njit(cache=True)
def _heap_pop(heap, size):
    top = heap[0]
    size -= 1
    heap[0] = heap[size]
    i = 0
    while True:
        left = 2 * i + 1
        if left >= size:
            break
        child = left
        right = left + 1
        if right < size and heap[right] < heap[left]:
            child = right
        if heap[i] <= heap[child]:
            break
        heap[i], heap[child] = heap[child], heap[i]
        i = child
    return top, size


@njit(cache=True)
def _any_allocatable(op_mach, next_op, job_busy, mach_busy, paused, clock):
    J, M = op_mach.shape
    for j in range(J):
        k = next_op[j]
        if (
            k < M
            and job_busy[j] <= clock
            and not paused[j]
            and mach_busy[op_mach[j, k]] <= clock
        ):
            return True
    return False


@njit(cache=True)
def mask_kernel(
    op_mach,
    op_dur,
    next_op,
    job_busy,
    mach_busy,
    paused,
    meta,
    nonfinal,
    rule_future_work,
    rule_caps,
    rule_pending,
    machines_cap,
    jobs_cap,
    out_mask,
):
    """Fill out_mask (length J+1): per-job allocatability plus the wait flag."""
    J, M = op_mach.shape
    clock = meta[META_CLOCK]
    heap_size = meta[META_HEAP]

    base = np.empty(J, np.bool_)
    any_base = False
    for j in range(J):
        k = next_op[j]
        ok = (
            k < M
            and job_busy[j] <= clock
            and not paused[j]
            and mach_busy[op_mach[j, k]] <= clock
        )
        base[j] = ok
        if ok:
            any_base = True

    # A job at its last operation yields to a mid-route job wanting the same
    # machine; mid-route jobs are never suppressed, so one pass suffices.
    if nonfinal and any_base:
        mach_has_midroute = np.zeros(M, np.bool_)
        for j in range(J):
            if base[j] and next_op[j] < M - 1:
                mach_has_midroute[op_mach[j, next_op[j]]] = True
        for j in range(J):
            keep = base[j]
            if keep and next_op[j] == M - 1 and mach_has_midroute[op_mach[j, M - 1]]:
                keep = False
            out_mask[j] = keep
    else:
        for j in range(J):
            out_mask[j] = base[j]

    # Waiting is only offered as an alternative to allocating: with no
    # allocatable job the engine advances time on its own instead.
    wait = any_base
    # An empty event queue can never support an advance; disabling this rule
    # (ablation only) lets a wait run the queue dry, which the step reports
    # as a deadlock.
    if wait and rule_pending and heap_size == 0:
        wait = False

    if wait and rule_caps:
        n_jobs = 0
        mach_seen = np.zeros(M, np.bool_)
        n_mach = 0
        for j in range(J):
            if out_mask[j]:
                n_jobs += 1
                m = op_mach[j, next_op[j]]
                if not mach_seen[m]:
                    mach_seen[m] = True
                    n_mach += 1
        if n_mach >= machines_cap or n_jobs >= jobs_cap:
            wait = False

    if wait and rule_future_work:
        # Every machine with an allocatable job needs a new mid-route job
        # arriving strictly sooner than its shortest allocatable operation.
        dmin = np.empty(M, np.int64)
        has_candidate = np.zeros(M, np.bool_)
        for j in range(J):
            if base[j]:
                m = op_mach[j, next_op[j]]
                d = op_dur[j, next_op[j]]
                if not has_candidate[m] or d < dmin[m]:
                    dmin[m] = d
                has_candidate[m] = True
        for m in range(M):
            if not has_candidate[m]:
                continue
            found = False
            for i in range(J):
                if job_busy[i] <= clock:
                    continue  # not running: cannot newly arrive
                k2 = next_op[i]
                if k2 >= M - 1:
                    continue  # no upcoming op, or upcoming op is the job's last
                if op_mach[i, k2] == m and job_busy[i] - clock < dmin[m]:
                    found = True
                    break
            if not found:
                wait = False
                break

    out_mask[J] = wait


@njit(cache=True)
def features_kernel(
    op_mach,
    op_dur,
    next_op,
    job_busy,
    mach_busy,
    gap_last,
    idle_acc,
    rem_unalloc,
    meta,
    max_op,
    max_job_total,
    total_dur,
    mask,
    out,
):
    """Fill the (J, 7) feature matrix.

    Columns: allocatable flag; remaining run time of the job's active op;
    fraction of ops allocated; remaining work; wait until the next op's
    machine frees; idle since the job's last completed op; cumulative idle.
    Time-valued columns are scaled by instance aggregates so every entry
    stays within [0, 1].
    """
    J, M = op_mach.shape
    clock = meta[META_CLOCK]
    for j in range(J):
        k = next_op[j]
        rem_run = job_busy[j] - clock
        if rem_run < 0:
            rem_run = 0
        out[j, 0] = 1.0 if mask[j] else 0.0
        out[j, 1] = rem_run / max_op
        out[j, 2] = k / M
        out[j, 3] = (rem_unalloc[j] + rem_run) / max_job_total
        if k < M:
            wait_m = mach_busy[op_mach[j, k]] - clock
            if wait_m < 0:
                wait_m = 0
            out[j, 4] = wait_m / max_op
        else:
            out[j, 4] = 0.0
        if k < M and job_busy[j] <= clock:
            gap_now = clock - job_busy[j]
            out[j, 5] = gap_now / total_dur
            out[j, 6] = (idle_acc[j] + gap_now) / total_dur
        else:
            # Active or fully allocated: freeze at the last recorded gap.
            out[j, 5] = gap_last[j] / total_dur
            out[j, 6] = idle_acc[j] / total_dur


@njit(cache=True)
def observe_kernel(
    op_mach,
    op_dur,
    next_op,
    job_busy,
    mach_busy,
    paused,
    gap_last,
    idle_acc,
    rem_unalloc,
    meta,
    nonfinal,
    rule_future_work,
    rule_caps,
    rule_pending,
    machines_cap,
    jobs_cap,
    max_op,
    max_job_total,
    total_dur,
    out_mask,
    out_feat,
):
    """Fill the action mask and the feature matrix in one pass."""
    mask_kernel(
        op_mach,
        op_dur,
        next_op,
        job_busy,
        mach_busy,
        paused,
        meta,
        nonfinal,
        rule_future_work,
        rule_caps,
        rule_pending,
        machines_cap,
        jobs_cap,
        out_mask,
    )
    features_kernel(
        op_mach,
        op_dur,
        next_op,
        job_busy,
        mach_busy,
        gap_last,
        idle_acc,
        rem_unalloc,
        meta,
        max_op,
        max_job_total,
        total_dur,
        out_mask,
        out_feat,
    )


@njit(cache=True)
def step_kernel(
    op_mach,
    op_dur,
    next_op,
    job_busy,
    gap_last,
    idle_acc,
    rem_unalloc,
    mach_busy,
    paused,
    started,
    heap,
    meta,
    action,
    nonfinal,
    rule_future_work,
    rule_caps,
    rule_pending,
    machines_cap,
    jobs_cap,
    max_op,
    max_job_total,
    total_dur,
    holes_out,
    out_mask,
    out_feat,
):
    """Apply one action. Returns (reward_raw, elapsed, status).

    Allocation books the operation at the current clock. Waiting pauses every
    currently allocatable job and advances until a new job becomes
    allocatable. Either way the engine then advances through future events
    while no job is allocatable, so callers always observe a state with at
    least one legal job action, or the finished schedule with the clock at
    the final completion (charging trailing idle on every machine). On
    return (unless the action was rejected) out_mask and out_feat hold the
    observation of the resulting state.
    """
    J, M = op_mach.shape
    mask_kernel(
        op_mach,
        op_dur,
        next_op,
        job_busy,
        mach_busy,
        paused,
        meta,
        nonfinal,
        rule_future_work,
        rule_caps,
        rule_pending,
        machines_cap,
        jobs_cap,
        out_mask,
    )
    if action < 0 or action > J or not out_mask[action]:
        for m in range(M):
            holes_out[m] = 0
        return 0, 0, STATUS_ILLEGAL

    t0 = meta[META_CLOCK]
    clock = t0
    alloc = 0
    if action < J:
        j = action
        k = next_op[j]
        m = op_mach[j, k]
        p = op_dur[j, k]
        gap = clock - job_busy[j]
        idle_acc[j] += gap
        gap_last[j] = gap
        started[j, k] = clock
        job_busy[j] = clock + p
        mach_busy[m] = clock + p
        meta[META_HEAP] = _heap_push(heap, meta[META_HEAP], clock + p)
        next_op[j] = k + 1
        rem_unalloc[j] -= p
        meta[META_OPS] -= 1
        # Any allocation readmits the jobs parked on this machine by a wait.
        for i in range(J):
            if paused[i] and next_op[i] < M and op_mach[i, next_op[i]] == m:
                paused[i] = False
        alloc = p
    else:
        # Park every allocatable job; only a later arrival may release them.
        for i in range(J):
            k2 = next_op[i]
            if (
                k2 < M
                and job_busy[i] <= clock
                and not paused[i]
                and mach_busy[op_mach[i, k2]] <= clock
            ):
                paused[i] = True

    # Advance through future events while nothing is allocatable.
    status = STATUS_OK
    while not _any_allocatable(op_mach, next_op, job_busy, mach_busy, paused, clock):
        if meta[META_HEAP] == 0:
            if meta[META_OPS] == 0:
                status = STATUS_DONE
            else:
                status = STATUS_DEADLOCK
            break
        t, size = _heap_pop(heap, meta[META_HEAP])
        while size > 0 and heap[0] == t:
            _, size = _heap_pop(heap, size)
        meta[META_HEAP] = size
        clock = t
    meta[META_CLOCK] = clock

    elapsed = clock - t0
    total_holes = 0
    for m in range(M):
        overlap = mach_busy[m] - t0
        if overlap > elapsed:
            overlap = elapsed
        if overlap < 0:
            overlap = 0
        h = elapsed - overlap
        holes_out[m] = h
        total_holes += h

    observe_kernel(
        op_mach,
        op_dur,
        next_op,
        job_busy,
        mach_busy,
        paused,
        gap_last,
        idle_acc,
        rem_unalloc,
        meta,
        nonfinal,
        rule_future_work,
        rule_caps,
        rule_pending,
        machines_cap,
        jobs_cap,
        max_op,
        max_job_total,
        total_dur,
        out_mask,
        out_feat,
    )
    return alloc - total_holes, elapsed, status
