# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled Fock key kernels; same contract as ``_fockpy``."""


def fock_create(tuple key, long n, long i):
    cdef Py_ssize_t pos, size = len(key)
    cdef long m, j
    cdef tuple part = (n, i)
    for pos in range(size):
        m, j = key[pos]
        if m < n or (m == n and j > i):
            return key[:pos] + (part,) + key[pos:]
    return key + (part,)


def fock_annihilate(tuple key, long m):
    cdef list out = []
    cdef Py_ssize_t pos = 0, end, n = len(key)
    cdef long mm, j, mj, jj
    while pos < n:
        mm, j = key[pos]
        if mm < m:
            break
        if mm == m:
            end = pos + 1
            while end < n:
                mj, jj = key[end]
                if mj != m or jj != j:
                    break
                end += 1
            out.append((j, end - pos, key[:pos] + key[pos + 1:]))
            pos = end
        else:
            pos += 1
    return out


def fock_degree(tuple key):
    cdef long s = 0, n, i
    for n, i in key:
        s += n
    return s


cdef list _partitions(long total, long colors, long n0, long i0):
    cdef list out, rest
    cdef long n, i
    cdef tuple part
    if total == 0:
        return [()]
    out = []
    for n in range(min(total, n0), 0, -1):
        for i in range(colors):
            if n == n0 and i < i0:
                continue
            part = ((n, i),)
            rest = _partitions(total - n, colors, n, i)
            for r in rest:
                out.append(part + r)
    return out


def colored_partitions(long total, long colors, largest=None):
    cdef long n0, i0
    if largest is None:
        n0, i0 = total, 0
    else:
        n0, i0 = largest
    return _partitions(total, colors, n0, i0)
