"""Exact sparse linear algebra on dict vectors.

Vectors are plain mappings from hashable, mutually comparable keys to exact
scalars.  Elimination is deterministic: inputs are processed in the given
order and pivots are chosen by a fixed key order.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Hashable, Iterable, Mapping, Sequence

__all__ = ["axpy", "scaled", "Echelon", "nullspace", "span_basis", "coordinates"]


def axpy(acc: dict, vec: Mapping, c=1) -> dict:
    """acc += c * vec, in place, dropping zeros."""
    if c == 1:
        for k, v in vec.items():
            x = acc.get(k)
            s = v if x is None else x + v
            if s:
                acc[k] = s
            elif x is not None:
                del acc[k]
    else:
        if not c:
            return acc
        for k, v in vec.items():
            x = acc.get(k)
            t = v * c
            s = t if x is None else x + t
            if s:
                acc[k] = s
            elif x is not None:
                del acc[k]
    return acc


def scaled(vec: Mapping, c) -> dict:
    if not c:
        return {}
    if c == 1:
        return dict(vec)
    return {k: v * c for k, v in vec.items() if v * c}


class Echelon:
    """Incrementally maintained reduced row echelon form.

    Each stored row has coefficient 1 at its pivot and zero at every other
    pivot.  The pivot of a new row is its largest key under ``order``.
    """

    def __init__(self, order: Callable | None = None):
        self.order = order or (lambda k: k)
        self.rows: dict = {}

    def __len__(self):
        return len(self.rows)

    def reduce(self, vec: Mapping) -> dict:
        out = dict(vec)
        for p, row in self.rows.items():
            c = out.get(p)
            if c:
                axpy(out, row, -c)
        return out

    def add(self, vec: Mapping):
        """Insert vec; returns the new pivot, or None if vec was dependent."""
        r = self.reduce(vec)
        if not r:
            return None
        p = max(r, key=self.order)
        inv = _inv(r[p])
        r = {k: v * inv for k, v in r.items()}
        for q, row in self.rows.items():
            c = row.get(p)
            if c:
                axpy(row, r, -c)
        self.rows[p] = r
        return p

    def contains(self, vec: Mapping) -> bool:
        return not self.reduce(vec)

    def basis(self):
        """Rows sorted by pivot order (deterministic)."""
        return [self.rows[p] for p in sorted(self.rows, key=self.order)]

    def pivots(self):
        return sorted(self.rows, key=self.order)


def span_basis(vectors: Iterable[Mapping], order: Callable | None = None):
    ech = Echelon(order)
    for v in vectors:
        ech.add(v)
    return ech


def nullspace(columns: Sequence[Hashable], images: Callable[[Hashable], Mapping], order: Callable | None = None):
    """Kernel of the linear map sending basis key ``columns[j]`` to ``images(columns[j])``.

    Returns a list of kernel vectors (dicts over ``columns``) in reduced
    echelon form with respect to ``order`` on the input keys.
    """
    reduced = []  # (pivot, image, combination)
    kernel = Echelon(order)
    for col in columns:
        img = dict(images(col))
        comb = {col: 1}
        for p, pimg, pcomb in reduced:
            c = img.get(p)
            if c:
                axpy(img, pimg, -c)
                axpy(comb, pcomb, -c)
        if not img:
            kernel.add(comb)
            continue
        try:
            p = min(img)
        except TypeError:
            p = min(img, key=repr)
        inv = _inv(img[p])
        img = {k: v * inv for k, v in img.items()}
        comb = {k: v * inv for k, v in comb.items()}
        reduced.append((p, img, comb))
    return kernel.basis()


def _inv(x):
    if isinstance(x, int):
        return Fraction(1, x)
    if hasattr(x, "inverse"):
        return x.inverse()
    return 1 / x


def coordinates(ech: Echelon, vec: Mapping) -> dict:
    """Coordinates of vec in the echelon basis (keyed by pivot); raises if vec is outside the span."""
    r = dict(vec)
    coords = {}
    for p in ech.pivots():
        c = r.get(p)
        if c:
            coords[p] = c
            axpy(r, ech.rows[p], -c)
    if r:
        raise ValueError("vector is not in the span")
    return coords
