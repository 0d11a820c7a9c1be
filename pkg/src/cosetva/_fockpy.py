"""Pure-Python Fock key kernels.

A Fock key is a tuple of parts ``(n, i)`` meaning beta_i(-n), sorted by
descending ``n`` then ascending ``i``.  The compiled module ``_fockc``
provides the same functions.
"""


def fock_create(key, n, i):
    """Key of beta_i(-n) * key (coefficient 1)."""
    part = (n, i)
    for pos, (m, j) in enumerate(key):
        if m < n or (m == n and j > i):
            return key[:pos] + (part,) + key[pos:]
    return key + (part,)


def fock_annihilate(key, m):
    """Contractions of a mode-m annihilator with ``key``.

    Returns a list of ``(j, count, newkey)``: the key contains ``count``
    copies of part ``(m, j)`` and ``newkey`` has one of them removed.
    """
    out = []
    pos = 0
    n = len(key)
    while pos < n:
        mm, j = key[pos]
        if mm < m:
            break
        if mm == m:
            end = pos
            while end < n and key[end] == (m, j):
                end += 1
            out.append((j, end - pos, key[:pos] + key[pos + 1:]))
            pos = end
        else:
            pos += 1
    return out


def fock_degree(key):
    s = 0
    for n, _ in key:
        s += n
    return s


def colored_partitions(total, colors, largest=None):
    """All keys of degree ``total`` with parts coloured by ``range(colors)``."""
    if largest is None:
        largest = (total, 0)
    if total == 0:
        return [()]
    out = []
    n0, i0 = largest
    for n in range(min(total, n0), 0, -1):
        for i in range(colors):
            if n == n0 and i < i0:
                continue
            for rest in colored_partitions(total - n, colors, (n, i)):
                out.append(((n, i),) + rest)
    return out
