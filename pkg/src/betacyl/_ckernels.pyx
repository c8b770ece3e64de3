# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled word kernels.  Semantics identical to ``_pykernels``."""

from cpython.mem cimport PyMem_Malloc, PyMem_Free


cdef long* _load(object w, Py_ssize_t n) except NULL:
    cdef long* buf = <long*> PyMem_Malloc((n + 1) * sizeof(long))
    if buf == NULL:
        raise MemoryError()
    cdef Py_ssize_t i = 0
    for x in w:
        buf[i] = x
        i += 1
    return buf


cdef void _z(const long* w, Py_ssize_t n, Py_ssize_t* z) nogil:
    cdef Py_ssize_t i, k, left = 0, right = 0
    if n == 0:
        return
    z[0] = n
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
            left = i
            right = i + k


def z_function(w):
    cdef Py_ssize_t n = len(w)
    cdef long* buf = _load(w, n)
    cdef Py_ssize_t* z = <Py_ssize_t*> PyMem_Malloc((n + 1) * sizeof(Py_ssize_t))
    try:
        _z(buf, n, z)
        return [z[i] for i in range(n)]
    finally:
        PyMem_Free(buf)
        PyMem_Free(z)


def prefix_function(w):
    cdef Py_ssize_t n = len(w)
    cdef long* buf = _load(w, n)
    cdef Py_ssize_t* pi = <Py_ssize_t*> PyMem_Malloc((n + 1) * sizeof(Py_ssize_t))
    cdef Py_ssize_t j, k = 0
    try:
        if n:
            pi[0] = 0
        for j in range(1, n):
            while k and buf[j] != buf[k]:
                k = pi[k - 1]
            if buf[j] == buf[k]:
                k += 1
            pi[j] = k
        return [pi[j] for j in range(n)]
    finally:
        PyMem_Free(buf)
        PyMem_Free(pi)


def is_self_admissible(w):
    cdef Py_ssize_t n = len(w)
    cdef long* buf = _load(w, n)
    cdef Py_ssize_t* z = <Py_ssize_t*> PyMem_Malloc((n + 1) * sizeof(Py_ssize_t))
    cdef Py_ssize_t i, k
    cdef bint ok = True
    try:
        _z(buf, n, z)
        for i in range(1, n):
            k = z[i]
            if k < n - i and buf[i + k] > buf[k]:
                ok = False
                break
        return ok
    finally:
        PyMem_Free(buf)
        PyMem_Free(z)


def shifts_dominated(w, ref, Py_ssize_t start):
    cdef Py_ssize_t n = len(w)
    if n == 0:
        return True
    cdef Py_ssize_t m = 2 * n + 1
    cdef long* s = <long*> PyMem_Malloc((m + 1) * sizeof(long))
    cdef Py_ssize_t* z = <Py_ssize_t*> PyMem_Malloc((m + 1) * sizeof(Py_ssize_t))
    cdef Py_ssize_t i, k, off = n + 1
    cdef bint ok = True
    if s == NULL or z == NULL:
        PyMem_Free(s)
        PyMem_Free(z)
        raise MemoryError()
    try:
        for i in range(n):
            s[i] = ref[i]
        s[n] = -1
        i = 0
        for x in w:
            s[off + i] = x
            i += 1
        _z(s, m, z)
        for i in range(start, n):
            k = z[off + i]
            if k < n - i and s[off + i + k] > s[k]:
                ok = False
                break
        return ok
    finally:
        PyMem_Free(s)
        PyMem_Free(z)


def recurrence_times(w):
    cdef Py_ssize_t j
    pi = prefix_function(w)
    return [j + 1 - pi[j] for j in range(len(pi))]


def first_nonzero_from(w):
    cdef Py_ssize_t n = len(w)
    cdef long* buf = _load(w, n)
    cdef Py_ssize_t i
    nxt = [n] * (n + 1)
    cdef Py_ssize_t cur = n
    try:
        for i in range(n - 1, -1, -1):
            if buf[i]:
                cur = i
            nxt[i] = cur
        return nxt
    finally:
        PyMem_Free(buf)
