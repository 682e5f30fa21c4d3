from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

import numpy as np

from .geom import normalize, point_index
from .gf import FieldSpec


@dataclass(eq=False)
class PointSet:
    """Normalised, deduplicated points in lexicographic order, with provenance."""

    F: FieldSpec
    points: np.ndarray
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        P = np.atleast_2d(np.asarray(self.points, dtype=np.int64))
        if P.size == 0:
            self.points = P.reshape(0, P.shape[-1] if P.ndim == 2 else 0)
            return
        P = normalize(self.F, P)
        _, first = np.unique(point_index(self.F, P), return_index=True)
        self.points = P[first]

    @property
    def m(self) -> int:
        return self.points.shape[1]

    def __len__(self):
        return self.points.shape[0]

    def __iter__(self):
        return iter(self.points)

    def codes(self):
        return point_index(self.F, self.points)

    def contains(self, P):
        P = normalize(self.F, P)
        return np.isin(point_index(self.F, P), self.codes())

    def __contains__(self, P):
        return bool(self.contains(P)[0])

    def union(self, other: PointSet, **prov) -> PointSet:
        return PointSet(self.F, np.concatenate([self.points, other.points]), {**self.provenance, **prov})

    def with_points(self, P, **prov) -> PointSet:
        return PointSet(self.F, P, {**self.provenance, **prov})

    def digest(self) -> str:
        h = hashlib.sha256()
        h.update(f"{self.F.p},{self.F.k};".encode())
        h.update(np.ascontiguousarray(self.points).tobytes())
        return h.hexdigest()[:16]

    def __eq__(self, other):
        return (
            isinstance(other, PointSet)
            and other.F is self.F
            and np.array_equal(other.points, self.points)
        )

    def __repr__(self):
        src = self.provenance.get("construction", "?")
        return f"PointSet({len(self)} points in PG({self.m - 1},{self.F.q}), {src})"
