"""Holomorphic self-maps of the unit disk and seeded samplers for S_a.

Every variant is a self-map of the disk by construction and extends
continuously to the closed disk, so ``boundary(theta)`` is the plain
formula evaluated on the circle.
"""
import numpy as np

from .errors import InvalidArgumentError

#: radius of the disk in which sampled Blaschke zeros are placed
ZERO_RADIUS = 0.8
_MAX_REJECTIONS = 200


class SchurMap:
    """Base class; subclasses implement ``__call__`` on arrays."""

    kind = "schur"
    #: True when |psi*| = 1 everywhere on the circle
    is_inner = False

    def __call__(self, z):
        raise NotImplementedError

    @property
    def value_at_zero(self):
        return self._v0

    def _cache_v0(self):
        self._v0 = complex(self(np.zeros(1, dtype=complex))[0])

    def boundary(self, theta):
        return self(np.exp(1j * np.asarray(theta, dtype=float)))

    def to_dict(self):
        raise NotImplementedError

    def __repr__(self):
        return f"{type(self).__name__}({self.to_dict()})"


class Scale(SchurMap):
    kind = "scale"

    def __init__(self, r):
        r = float(r)
        if not 0.0 < r < 1.0:
            raise InvalidArgumentError(f"scale factor must lie in (0, 1), got {r}")
        self.r = r
        self._v0 = 0j

    def __call__(self, z):
        return self.r * np.asarray(z, dtype=complex)

    def to_dict(self):
        return {"kind": "scale", "r": self.r}


class Automorphism(SchurMap):
    """``z -> lam (a - z) / (1 - conj(a) z)`` with ``lam = exp(i angle)``."""

    kind = "automorphism"
    is_inner = True

    def __init__(self, a, angle=0.0):
        a = complex(a)
        if abs(a) >= 1.0:
            raise InvalidArgumentError("automorphism parameter must satisfy |a| < 1")
        self.a = a
        self.angle = float(angle)
        self.lam = np.exp(1j * self.angle)
        self._v0 = self.lam * a

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        return self.lam * (self.a - z) / (1.0 - np.conj(self.a) * z)

    def to_dict(self):
        return {"kind": "automorphism", "a": [self.a.real, self.a.imag],
                "angle": self.angle}


class FiniteBlaschke(SchurMap):
    """``z -> lam prod_k (z - a_k) / (1 - conj(a_k) z)`` with ``lam = exp(i angle)``."""

    kind = "blaschke"
    is_inner = True

    def __init__(self, zeros, angle=0.0):
        zeros = np.atleast_1d(np.asarray(zeros, dtype=complex))
        if zeros.size == 0:
            raise InvalidArgumentError("a finite Blaschke map needs at least one zero")
        if np.any(np.abs(zeros) >= 1.0):
            raise InvalidArgumentError("Blaschke zeros must lie in the open disk")
        self.zeros = zeros
        self.angle = float(angle)
        self.lam = np.exp(1j * self.angle)
        self._cache_v0()

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        out = np.full(z.shape, self.lam, dtype=complex)
        for a in self.zeros:
            out = out * (z - a) / (1.0 - np.conj(a) * z)
        return out

    def to_dict(self):
        return {"kind": "blaschke",
                "zeros": [[a.real, a.imag] for a in self.zeros],
                "angle": self.angle}


class PostScaled(SchurMap):
    """``z -> s * inner(z)`` with ``0 < s <= 1``."""

    kind = "post_scaled"

    def __init__(self, inner, s):
        s = float(s)
        if not 0.0 < s <= 1.0:
            raise InvalidArgumentError(f"shrink factor must lie in (0, 1], got {s}")
        self.inner = inner
        self.s = s
        self.is_inner = inner.is_inner and s == 1.0
        self._v0 = s * inner.value_at_zero

    def __call__(self, z):
        return self.s * self.inner(z)

    def to_dict(self):
        return {"kind": "post_scaled", "map": self.inner.to_dict(), "s": self.s}


class Composition(SchurMap):
    """``outer o inner``."""

    kind = "compose"

    def __init__(self, outer, inner):
        self.outer = outer
        self.inner = inner
        self.is_inner = outer.is_inner and inner.is_inner
        self._v0 = complex(outer(np.array([inner.value_at_zero]))[0])

    def __call__(self, z):
        return self.outer(self.inner(z))

    def to_dict(self):
        return {"kind": "compose", "outer": self.outer.to_dict(),
                "inner": self.inner.to_dict()}


def scale_map(r):
    """``psi(z) = r z``."""
    return Scale(r)


def identity_map():
    """The identity, as the one-zero Blaschke map with its zero at 0."""
    return FiniteBlaschke([0.0])


def schur_compose(phi, psi):
    """``phi o psi``."""
    return Composition(phi, psi)


def containment_radius(phi, a, n=720):
    """``max |phi|`` over ``n`` points of the circle ``|z| = a``.

    By the maximum principle this bounds ``|phi(psi(0))|`` for every
    ``psi`` in S_a, i.e. ``{phi o psi} ⊂ S_b`` with this ``b``.
    """
    theta = 2.0 * np.pi * np.arange(n) / n
    return float(np.max(np.abs(phi(a * np.exp(1j * theta)))))


def _uniform_disk(rng, radius):
    return radius * np.sqrt(rng.uniform()) * np.exp(2j * np.pi * rng.uniform())


def _random_angle(rng):
    return 2.0 * np.pi * rng.uniform()


def _pulled_blaschke(rng, a, max_degree):
    degree = int(rng.integers(1, max_degree + 1))
    zeros = [_uniform_disk(rng, ZERO_RADIUS) for _ in range(degree)]
    B = FiniteBlaschke(zeros, _random_angle(rng))
    beta = B.value_at_zero
    target = _uniform_disk(rng, a)
    # Automorphism(beta) sends beta to 0, Automorphism(target) sends 0 to target
    return Composition(Automorphism(target), Composition(Automorphism(beta), B))


def _draw(rng, kind, a, max_degree):
    if kind == 0:
        return Scale(rng.uniform(0.05, 0.95))
    if kind == 1:
        return Automorphism(_uniform_disk(rng, a), _random_angle(rng))
    if kind == 2:
        return _pulled_blaschke(rng, a, max_degree)
    if kind == 3:
        base = _draw(rng, int(rng.integers(1, 3)), a, max_degree)
        return PostScaled(base, rng.uniform(0.5, 0.999))
    first = _draw(rng, int(rng.integers(0, 4)), a, max_degree)
    second = _draw(rng, int(rng.integers(0, 4)), a, max_degree)
    return Composition(first, second)


def sample_family(a, count, seed, max_degree=3):
    """Deterministic sample of ``count`` maps with ``|psi(0)| <= a``.

    Kinds cycle through scale maps, automorphisms, Blaschke products pulled
    back into ``|w| <= a`` by automorphisms, post-scaled maps and pairwise
    compositions. Compositions that leave S_a are redrawn.
    """
    a = float(a)
    if not 0.0 <= a < 1.0:
        raise InvalidArgumentError(f"a must lie in [0, 1), got {a}")
    if count < 1:
        raise InvalidArgumentError("count must be >= 1")
    if max_degree < 1:
        raise InvalidArgumentError("max_degree must be >= 1")
    rng = np.random.default_rng(seed)
    maps = []
    for i in range(count):
        kind = i % 5
        for _ in range(_MAX_REJECTIONS):
            psi = _draw(rng, kind, a, max_degree)
            if abs(psi.value_at_zero) <= a:
                break
        else:
            # fall back to a scale map, which always lies in S_a
            psi = Scale(rng.uniform(0.05, 0.95))
        maps.append(psi)
    return maps


def map_from_dict(d):
    """Inverse of ``SchurMap.to_dict``."""
    kind = d["kind"]
    if kind == "scale":
        return Scale(d["r"])
    if kind == "automorphism":
        return Automorphism(complex(*d["a"]), d.get("angle", 0.0))
    if kind == "blaschke":
        return FiniteBlaschke([complex(*z) for z in d["zeros"]], d.get("angle", 0.0))
    if kind == "post_scaled":
        return PostScaled(map_from_dict(d["map"]), d["s"])
    if kind == "compose":
        return Composition(map_from_dict(d["outer"]), map_from_dict(d["inner"]))
    raise InvalidArgumentError(f"unknown Schur map kind {kind!r}")
