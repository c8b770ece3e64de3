"""Pure-Python word kernels.

Reference implementation of the routines in ``_ckernels.pyx``; used when the
compiled extension is unavailable or ``BETACYL_PURE=1`` is set.  Every
function takes a sequence of nonnegative ints and returns plain Python
objects, matching the compiled versions exactly.
"""


def z_function(w):
    """Z-array: ``z[i]`` is the length of the longest common prefix of
    ``w[i:]`` and ``w``.  By convention ``z[0] = len(w)``."""
    n = len(w)
    z = [0] * n
    if n == 0:
        return z
    z[0] = n
    left = right = 0
    for i in range(1, n):
        if i < right:
            k = z[i - left]
            if k < right - i:
                z[i] = k
                continue
            k = right - i
        else:
            k = 0
        while i + k < n and w[k] == w[i + k]:
            k += 1
        z[i] = k
        if i + k > right:
            left, right = i, i + k
    return z


def prefix_function(w):
    """KMP failure array: ``pi[j]`` is the longest proper border of ``w[:j+1]``."""
    n = len(w)
    pi = [0] * n
    k = 0
    for j in range(1, n):
        while k and w[j] != w[k]:
            k = pi[k - 1]
        if w[j] == w[k]:
            k += 1
        pi[j] = k
    return pi


def is_self_admissible(w):
    n = len(w)
    z = z_function(w)
    for i in range(1, n):
        k = z[i]
        if k < n - i and w[i + k] > w[k]:
            return False
    return True


def shifts_dominated(w, ref, start):
    """True iff ``w[i:] <= ref[:n-i]`` lexicographically for every
    ``start <= i < n``.  ``ref`` must have length >= ``len(w)``."""
    n = len(w)
    if n == 0:
        return True
    # LCP of each suffix of w against ref via Z on ref[:n] + sentinel + w.
    s = list(ref[:n]) + [-1] + list(w)
    z = z_function(s)
    off = n + 1
    for i in range(start, n):
        k = z[off + i]
        if k < n - i and w[i + k] > ref[k]:
            return False
    return True


def recurrence_times(w):
    """Recurrence time of every prefix: entry ``j`` is tau(w[:j+1])."""
    pi = prefix_function(w)
    return [j + 1 - pi[j] for j in range(len(w))]


def first_nonzero_from(w):
    """``nxt[i]`` = smallest ``j >= i`` with ``w[j] != 0``, or ``len(w)``."""
    n = len(w)
    nxt = [n] * (n + 1)
    for i in range(n - 1, -1, -1):
        nxt[i] = i if w[i] else nxt[i + 1]
    return nxt
