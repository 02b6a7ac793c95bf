"""Discretized curves with Euclidean and certified metric lengths."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError


@dataclass
class PolylineCurve:
    """A curve stored as an ordered list of vertices.

    ``euclidean_length`` is the sum of segment lengths.  The optional
    ``certified_metric_length`` is filled in by the length certifier and is
    always an upper bound for the metric length of the polyline.
    """

    vertices: list[complex]
    certified_metric_length: float | None = None
    euclidean_length: float = field(init=False)

    def __post_init__(self):
        if len(self.vertices) < 2:
            raise DomainError("a polyline needs at least two vertices")
        arr = np.asarray(self.vertices, dtype=complex)
        if not np.all(np.isfinite(arr)):
            raise DomainError("non-finite vertex in polyline")
        self.vertices = [complex(v) for v in arr]
        self._array = arr
        self.euclidean_length = float(np.abs(np.diff(arr)).sum())

    @property
    def start(self) -> complex:
        return self.vertices[0]

    @property
    def end(self) -> complex:
        return self.vertices[-1]

    def as_array(self) -> np.ndarray:
        return self._array

    @staticmethod
    def segment(a: complex, b: complex) -> "PolylineCurve":
        return PolylineCurve([a, b])

    @staticmethod
    def constant(z: complex) -> "PolylineCurve":
        return PolylineCurve([z, z])


def segment_point_distance(a: complex, b: complex, p: complex) -> float:
    """Euclidean distance from point ``p`` to the segment ``[a, b]``."""
    d = b - a
    dd = d.real * d.real + d.imag * d.imag
    if dd == 0.0:
        return abs(p - a)
    t = ((p - a).real * d.real + (p - a).imag * d.imag) / dd
    t = min(1.0, max(0.0, t))
    return abs(p - (a + t * d))


def polyline_point_distance(curve: PolylineCurve, p: complex) -> float:
    return min(
        segment_point_distance(a, b, p)
        for a, b in zip(curve.vertices, curve.vertices[1:])
    )
