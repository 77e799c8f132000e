"""Closed-form model spaces: exact distances and uniform samplers.

Each model exposes three capabilities used throughout the package:

* ``sample_points(rng, count)`` -- i.i.d. draws from the uniform
  (normalized Riemannian / Lebesgue) measure, as a (count, D) float array;
* ``pair_distance(p, q)`` -- exact distance, broadcasting over leading
  axes of two feature arrays;
* ``validate_point(p)`` -- raise PointNotOnModel if p is off the model.

The batch helper ``sample_distance_matrices`` is the hot path of the
sampling engine: it draws m independent n-tuples and returns the m
distance matrices in one vectorized pass.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .errors import InvalidDescriptor, PointNotOnModel
from .metric import DistanceMatrix, validate

TWO_PI = 2.0 * math.pi
_POINT_TOL = 1e-12


def _circle_arc(a, b):
    """Geodesic distance of two angles on the unit circle (diameter pi)."""
    d = np.abs(a - b)
    return np.minimum(d, TWO_PI - d)


@dataclass(frozen=True)
class CircleGeodesic:
    """Geodesic circle of diameter ``diameter`` (unit circle: diameter pi)."""

    diameter: float = math.pi

    def sample_points(self, rng, count):
        return rng.uniform(0.0, TWO_PI, size=(count, 1))

    def pair_distance(self, p, q):
        return _circle_arc(p[..., 0], q[..., 0]) * (self.diameter / math.pi)

    def validate_point(self, p):
        p = np.asarray(p, dtype=float)
        if p.shape[-1] != 1 or not np.isfinite(p).all():
            raise PointNotOnModel("circle points are single finite angles")


@dataclass(frozen=True)
class SphereGeodesic:
    """Unit m-sphere with geodesic (arc length) distance, range [0, pi]."""

    m: int = 2

    def sample_points(self, rng, count):
        v = rng.standard_normal(size=(count, self.m + 1))
        return v / np.linalg.norm(v, axis=-1, keepdims=True)

    def pair_distance(self, p, q):
        # unit-vector inner products overshoot [-1, 1] by ~1e-16: clamp
        dot = np.clip(np.sum(p * q, axis=-1), -1.0, 1.0)
        return np.arccos(dot)

    def validate_point(self, p):
        p = np.asarray(p, dtype=float)
        if p.shape[-1] != self.m + 1:
            raise PointNotOnModel(f"expected a vector in R^{self.m + 1}")
        if np.abs(np.linalg.norm(p, axis=-1) - 1.0).max() > _POINT_TOL:
            raise PointNotOnModel("sphere point is not a unit vector")


@dataclass(frozen=True)
class SphereEuclidean:
    """Unit m-sphere with chordal (Euclidean) distance, range [0, 2]."""

    m: int = 2

    def sample_points(self, rng, count):
        v = rng.standard_normal(size=(count, self.m + 1))
        return v / np.linalg.norm(v, axis=-1, keepdims=True)

    def pair_distance(self, p, q):
        return np.linalg.norm(p - q, axis=-1)

    def validate_point(self, p):
        SphereGeodesic(self.m).validate_point(p)


@dataclass(frozen=True)
class TorusL2:
    """Product of two unit geodesic circles with the l2 product metric."""

    def sample_points(self, rng, count):
        return rng.uniform(0.0, TWO_PI, size=(count, 2))

    def pair_distance(self, p, q):
        d1 = _circle_arc(p[..., 0], q[..., 0])
        d2 = _circle_arc(p[..., 1], q[..., 1])
        return np.sqrt(d1 * d1 + d2 * d2)

    def validate_point(self, p):
        p = np.asarray(p, dtype=float)
        if p.shape[-1] != 2 or not np.isfinite(p).all():
            raise PointNotOnModel("torus points are angle pairs")


@dataclass(frozen=True)
class ModelSurface:
    """Complete simply connected surface of constant curvature kappa != 0.

    kappa > 0: the sphere of radius 1/sqrt(kappa) in R^3, sampled uniformly.
    kappa < 0: the hyperboloid model (x1 > 0); the surface is unbounded, so
    sampling is uniform w.r.t. hyperbolic area on the geodesic disk of
    radius ``disk_radius`` around the apex (default pi/sqrt(-kappa)).
    """

    kappa: float
    disk_radius: float = field(default=0.0)

    def __post_init__(self):
        if self.kappa == 0:
            raise InvalidDescriptor("kappa must be nonzero; use EuclideanDisk for flat space")
        if self.kappa < 0 and self.disk_radius <= 0:
            object.__setattr__(self, "disk_radius", math.pi / math.sqrt(-self.kappa))

    def sample_points(self, rng, count):
        if self.kappa > 0:
            r = 1.0 / math.sqrt(self.kappa)
            v = rng.standard_normal(size=(count, 3))
            return r * v / np.linalg.norm(v, axis=-1, keepdims=True)
        s = math.sqrt(-self.kappa)
        a = 1.0 / s
        # geodesic polar area element ~ sinh(s r): invert its CDF
        u = rng.uniform(0.0, 1.0, size=count)
        smax = math.cosh(s * self.disk_radius) - 1.0
        sr = np.arccosh(1.0 + u * smax)
        theta = rng.uniform(0.0, TWO_PI, size=count)
        pts = np.empty((count, 3))
        pts[:, 0] = a * np.cosh(sr)
        pts[:, 1] = a * np.sinh(sr) * np.cos(theta)
        pts[:, 2] = a * np.sinh(sr) * np.sin(theta)
        return pts

    def pair_distance(self, p, q):
        if self.kappa > 0:
            dot = self.kappa * np.sum(p * q, axis=-1)
            return np.arccos(np.clip(dot, -1.0, 1.0)) / math.sqrt(self.kappa)
        mink = -p[..., 0] * q[..., 0] + p[..., 1] * q[..., 1] + p[..., 2] * q[..., 2]
        dot = self.kappa * mink
        return np.arccosh(np.maximum(dot, 1.0)) / math.sqrt(-self.kappa)

    def validate_point(self, p):
        p = np.asarray(p, dtype=float)
        if p.shape[-1] != 3:
            raise PointNotOnModel("model surface points live in R^3")
        if self.kappa > 0:
            form = np.sum(p * p, axis=-1)
        else:
            form = -p[..., 0] ** 2 + p[..., 1] ** 2 + p[..., 2] ** 2
            if np.min(p[..., 0]) <= 0:
                raise PointNotOnModel("hyperboloid points need x1 > 0")
        # the quadratic form cancels terms of size |p|^2, so the achievable
        # accuracy scales with them (hyperboloid points grow with the disk)
        scale = max(1.0, abs(1.0 / self.kappa), float(np.max(np.sum(p * p, axis=-1))))
        if np.abs(form - 1.0 / self.kappa).max() > _POINT_TOL * scale:
            raise PointNotOnModel("point does not satisfy the quadric equation")


@dataclass(frozen=True)
class EuclideanDisk:
    """Closed ball of radius R in R^m with the Euclidean metric."""

    m: int = 2
    radius: float = 1.0

    def sample_points(self, rng, count):
        v = rng.standard_normal(size=(count, self.m))
        v /= np.linalg.norm(v, axis=-1, keepdims=True)
        r = self.radius * rng.uniform(0.0, 1.0, size=(count, 1)) ** (1.0 / self.m)
        return v * r

    def pair_distance(self, p, q):
        return np.linalg.norm(p - q, axis=-1)

    def validate_point(self, p):
        p = np.asarray(p, dtype=float)
        if p.shape[-1] != self.m:
            raise PointNotOnModel(f"expected a vector in R^{self.m}")
        if np.linalg.norm(p, axis=-1).max() > self.radius * (1 + 1e-12):
            raise PointNotOnModel("point is outside the disk")


SpaceModel = Union[
    CircleGeodesic, SphereGeodesic, SphereEuclidean, TorusL2, ModelSurface, EuclideanDisk
]


def distance(model: SpaceModel, p, q) -> float:
    """Exact distance between two validated points of the model."""
    model.validate_point(p)
    model.validate_point(q)
    return float(model.pair_distance(np.asarray(p, float), np.asarray(q, float)))


def sample(model: SpaceModel, rng: np.random.Generator, count: int) -> np.ndarray:
    """``count`` i.i.d. uniform draws; deterministic given the generator state."""
    if count < 0:
        raise InvalidDescriptor("count must be >= 0")
    return model.sample_points(rng, count)


def distance_matrix(model: SpaceModel, points) -> DistanceMatrix:
    """Pairwise distance matrix of a point list, validated."""
    pts = np.asarray(points, dtype=float)
    model.validate_point(pts)
    d = model.pair_distance(pts[:, None, :], pts[None, :, :])
    np.fill_diagonal(d, 0.0)
    return validate(d)


def sample_distance_matrices(model: SpaceModel, rng, count: int, n: int):
    """Draw ``count`` n-tuples and their distance matrices in one pass.

    Returns (points, mats) with shapes (count, n, D) and (count, n, n).
    Tuple entries are sampled with replacement (independent draws), which
    is exactly the n-fold product of the uniform measure.
    """
    pts = model.sample_points(rng, count * n)
    pts = pts.reshape(count, n, -1)
    mats = model.pair_distance(pts[:, :, None, :], pts[:, None, :, :])
    idx = np.arange(n)
    mats[:, idx, idx] = 0.0
    return pts, mats


# ---------------------------------------------------------------------------
# Compact descriptor strings, e.g. "s1", "s1:lambda=3.5", "sphere:m=2",
# "sphere-e:m=2", "torus", "mk:kappa=-1:R=3.14159", "disk:m=2:R=1".
# ---------------------------------------------------------------------------

def parse_space(text: str) -> SpaceModel:
    parts = text.strip().split(":")
    name, opts = parts[0].lower(), parts[1:]
    kv = {}
    for opt in opts:
        if "=" not in opt:
            raise InvalidDescriptor(f"malformed option {opt!r} in {text!r}")
        k, v = opt.split("=", 1)
        kv[k.strip().lower()] = float(v)
    try:
        if name == "s1":
            return CircleGeodesic(diameter=kv.pop("lambda", math.pi))
        if name == "s1-e":
            return SphereEuclidean(m=1)
        if name == "sphere":
            return SphereGeodesic(m=int(kv.pop("m", 2)))
        if name in ("sphere-e", "s2-e"):
            return SphereEuclidean(m=int(kv.pop("m", 2)))
        if name == "torus":
            return TorusL2()
        if name == "mk":
            return ModelSurface(kappa=kv.pop("kappa"), disk_radius=kv.pop("r", 0.0))
        if name == "disk":
            return EuclideanDisk(m=int(kv.pop("m", 2)), radius=kv.pop("r", 1.0))
    except KeyError as exc:
        raise InvalidDescriptor(f"missing option {exc} for space {name!r}") from None
    raise InvalidDescriptor(f"unknown space {name!r}")


def space_descriptor(model: SpaceModel) -> str:
    """Inverse of parse_space, used in sample sidecar files."""
    if isinstance(model, CircleGeodesic):
        return "s1" if model.diameter == math.pi else f"s1:lambda={model.diameter:g}"
    if isinstance(model, SphereGeodesic):
        return f"sphere:m={model.m}"
    if isinstance(model, SphereEuclidean):
        return "s1-e" if model.m == 1 else f"sphere-e:m={model.m}"
    if isinstance(model, TorusL2):
        return "torus"
    if isinstance(model, ModelSurface):
        if model.kappa > 0:
            return f"mk:kappa={model.kappa:g}"
        return f"mk:kappa={model.kappa:g}:R={model.disk_radius:g}"
    if isinstance(model, EuclideanDisk):
        return f"disk:m={model.m}:R={model.radius:g}"
    return type(model).__name__


def is_angular(model) -> bool:
    """True when distances are angles (plots get pi/4 axis ticks)."""
    return isinstance(model, (CircleGeodesic, SphereGeodesic, TorusL2)) or (
        isinstance(model, ModelSurface) and model.kappa > 0
    )
