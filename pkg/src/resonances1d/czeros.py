"""Zeros of entire functions in rectangles via the argument principle.

Counting is done by summing phase increments along the boundary with
adaptive refinement (no step may exceed pi/2); location by recursive
bisection on winding counts followed by Newton polish with a
central-difference derivative, so any user-supplied entire function works.
Rectangles, not disks: tiling a half-plane and dodging zero chains that hug
the real axis is easier with axis-aligned subdivision.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import (
    BoundaryZero,
    MaxZerosExceeded,
    PhaseStepTooLarge,
)
from .potential import Potential
from .scattering import xhat


@dataclass(frozen=True)
class Rect:
    """Axis-aligned rectangle given by two opposite corners."""

    lo: complex  # lower-left
    hi: complex  # upper-right

    def __post_init__(self):
        if not (self.lo.real < self.hi.real and self.lo.imag < self.hi.imag):
            raise ValueError("empty rectangle %s .. %s" % (self.lo, self.hi))

    @property
    def center(self):
        return (self.lo + self.hi) / 2

    @property
    def width(self):
        return self.hi.real - self.lo.real

    @property
    def height(self):
        return self.hi.imag - self.lo.imag

    @property
    def diag(self):
        return abs(self.hi - self.lo)

    def contains(self, z, margin=0.0):
        return (
            self.lo.real - margin <= z.real <= self.hi.real + margin
            and self.lo.imag - margin <= z.imag <= self.hi.imag + margin
        )

    def dilated(self, factor):
        c = self.center
        return Rect(c + (self.lo - c) * factor, c + (self.hi - c) * factor)

    def boundary_points(self, ts):
        """Map parameters in [0,1) to boundary points, counterclockwise."""
        ts = np.asarray(ts) % 1.0
        x0, x1 = self.lo.real, self.hi.real
        y0, y1 = self.lo.imag, self.hi.imag
        w, h = x1 - x0, y1 - y0
        per = 2 * (w + h)
        s = ts * per
        out = np.empty(s.shape, dtype=complex)
        m0 = s < w
        out[m0] = x0 + s[m0] + 1j * y0
        m1 = (s >= w) & (s < w + h)
        out[m1] = x1 + 1j * (y0 + (s[m1] - w))
        m2 = (s >= w + h) & (s < 2 * w + h)
        out[m2] = x1 - (s[m2] - w - h) + 1j * y1
        m3 = s >= 2 * w + h
        out[m3] = x0 + 1j * (y1 - (s[m3] - 2 * w - h))
        return out


@dataclass(frozen=True)
class Zero:
    location: complex
    multiplicity: int
    refined_residual: float
    converged: bool = True


@dataclass(frozen=True)
class ZeroSet:
    zeros: tuple
    function_tag: str = ""

    @property
    def locations(self):
        return np.array([z.location for z in self.zeros], dtype=complex)

    @property
    def halfplane_counts(self):
        locs = self.locations
        if len(locs) == 0:
            return (0, 0)
        return (int(np.sum(locs.imag > 0)), int(np.sum(locs.imag < 0)))

    def total_multiplicity(self):
        return sum(z.multiplicity for z in self.zeros)

    def to_json(self, radius=None):
        d = {
            "zeros": [
                {"re": z.location.real, "im": z.location.imag,
                 "mult": z.multiplicity, "residual": z.refined_residual,
                 "converged": z.converged}
                for z in self.zeros
            ],
            "function": self.function_tag,
        }
        if radius is not None:
            d["radius"] = radius
        return d

    def save(self, path, radius=None):
        with open(path, "w") as fh:
            json.dump(self.to_json(radius), fh, indent=2)


def _phase_winding(f, rect, n_boundary, max_evals=200_000):
    ts = np.linspace(0.0, 1.0, n_boundary, endpoint=False)
    ts = np.concatenate([ts, [1.0]])
    fs = np.asarray(f(rect.boundary_points(ts)), dtype=complex)
    scale = np.max(np.abs(fs))
    if scale == 0 or np.min(np.abs(fs)) < 1e-9 * scale:
        raise BoundaryZero("function vanishes (or nearly) on the contour")
    for _ in range(60):
        with np.errstate(invalid="ignore", divide="ignore"):
            steps = np.angle(fs[1:] / fs[:-1])
        bad = np.abs(steps) > np.pi / 2
        if not np.any(bad):
            return int(np.round(np.sum(steps) / (2 * np.pi)))
        if len(ts) > max_evals:
            raise PhaseStepTooLarge("phase refinement budget exhausted")
        mid_t = (ts[:-1][bad] + ts[1:][bad]) / 2
        mid_f = np.asarray(f(rect.boundary_points(mid_t)), dtype=complex)
        if np.min(np.abs(mid_f)) < 1e-9 * scale:
            raise BoundaryZero("function vanishes (or nearly) on the contour")
        ts = np.insert(ts, np.nonzero(bad)[0] + 1, mid_t)
        fs = np.insert(fs, np.nonzero(bad)[0] + 1, mid_f)
    raise PhaseStepTooLarge("phase steps above pi/2 after maximum refinement")


def winding_number(f, rect: Rect, n_boundary: int = 256) -> int:
    """Zeros (with multiplicity) of f inside rect, by the argument principle.

    A near-boundary zero triggers up to three dilation retries by a factor
    1 + 1e-6 before BoundaryZero is raised.
    """
    last = None
    for attempt in range(4):
        try:
            return _phase_winding(f, rect, n_boundary)
        except BoundaryZero as exc:
            last = exc
            rect = rect.dilated(1 + 1e-6)
    raise last


def _newton(f, z0, scale):
    """Polish a root; the residual is the relative size of the last step.

    The last Newton correction estimates the remaining location error, so
    the criterion stays meaningful even when |f| near the root bottoms out
    at an evaluation-noise floor far above the true zero value.
    """
    z = complex(z0)
    err = np.inf
    for _ in range(60):
        if abs(z - z0) > 10.0 * scale:
            # runaway iterate: stop before f is probed far outside its
            # intended domain (windowed transforms guard large Im k)
            return z, np.inf, False
        h = 1e-6 * (1.0 + abs(z))
        fp = (f(np.array([z + h])) - f(np.array([z - h])))[0] / (2 * h)
        fz = f(np.array([z]))[0]
        if fp == 0:
            return z, err, False
        step = fz / fp
        z = z - step
        err = abs(step) / (1.0 + abs(z))
        if err < 1e-12:
            return z, err, True
    return z, err, err < 1e-11


def _circle_winding(f, center, radius, n=64):
    for attempt in range(4):
        th = np.linspace(0, 2 * np.pi, n + 1)
        pts = center + radius * np.exp(1j * th)
        fs = np.asarray(f(pts), dtype=complex)
        if np.min(np.abs(fs)) > 1e-12 * np.max(np.abs(fs)):
            steps = np.angle(fs[1:] / fs[:-1])
            if np.all(np.abs(steps) <= np.pi / 2):
                return int(np.round(np.sum(steps) / (2 * np.pi)))
            n *= 4
        else:
            radius *= 1.37
    return 1


def find_zeros(f, rect: Rect, max_zeros: int = 200,
               function_tag: str = "") -> ZeroSet:
    """Locate all zeros of f in rect: bisection on counts + Newton polish."""
    total = winding_number(f, rect)
    if total == 0:
        return ZeroSet((), function_tag)
    if total > max_zeros:
        raise MaxZerosExceeded("%d zeros counted, max_zeros=%d" % (total, max_zeros))
    scale0 = rect.diag
    found = []
    stack = [(rect, total)]
    while stack:
        box, count = stack.pop()
        if count == 0:
            continue
        tiny = box.diag < max(1e-9 * scale0, 1e-12)
        if count == 1 or tiny:
            z, resid, ok = _newton(f, box.center, scale0)
            # accept roots a hair past the box seam (the counting contours
            # are dilated by 1e-6, so a zero lying on a cut may be owned by
            # the box it just escaped) but nothing farther afield; once the
            # box has shrunk to rounding scale the polished root is the
            # best locator even a few diameters out
            margin = 3.0 * box.diag if tiny else 1e-5 * box.diag
            inside = (box.contains(z, margin=margin)
                      and rect.contains(z, margin=1e-9 * scale0))
            if ok and inside and resid < 1e-9:
                mult = count if tiny and count > 1 else _circle_winding(
                    f, z, max(1e-4, 1e-6 * scale0)
                )
                found.append(Zero(z, max(mult, 1), resid, True))
                continue
            if tiny:
                found.append(Zero(box.center, count, resid, False))
                continue
            # polish failed or left the box: keep bisecting
        children = _split_counted(f, box, count)
        stack.extend(children)
    return _finalize(found, f, rect, total, function_tag, scale0)


def _split_counted(f, box, count):
    """Split the box in two; nudge the cut if a zero obstructs it."""
    fracs = (0.5, 0.5 + 1.3e-3, 0.5 - 2.7e-3, 0.5 + 7.9e-3,
             0.5 - 1.7e-2, 0.5 + 4.3e-2, 0.37, 0.61)
    long_first = box.width >= box.height
    for vertical_cut in (long_first, not long_first):
        for frac in fracs:
            c0, c1 = _split_axis(box, frac, vertical_cut)
            try:
                n0 = winding_number(f, c0)
            except (BoundaryZero, PhaseStepTooLarge):
                continue
            n1 = count - n0
            if n1 < 0:
                continue
            return [(c0, n0), (c1, n1)]
    raise BoundaryZero("could not place a zero-free cut through the box")


def _split_axis(box: Rect, frac, vertical_cut):
    if vertical_cut:
        xm = box.lo.real + frac * box.width
        return [Rect(box.lo, complex(xm, box.hi.imag)),
                Rect(complex(xm, box.lo.imag), box.hi)]
    ym = box.lo.imag + frac * box.height
    return [Rect(box.lo, complex(box.hi.real, ym)),
            Rect(complex(box.lo.real, ym), box.hi)]


def _finalize(found, f, rect, total, function_tag, scale0):
    # dedup by pairwise distance
    kept = []
    for z in sorted(found, key=lambda z: (z.location.real, z.location.imag)):
        if all(abs(z.location - w.location) > 1e-7 * scale0 for w in kept):
            kept.append(z)
    return ZeroSet(tuple(kept), function_tag)


def resonances(V: Potential, radius: float, tile: float = 3.0) -> ZeroSet:
    """All zeros of xhat with |k| <= radius in the open lower half-plane."""
    f = lambda k: xhat(V, k)
    zs = _search_halfplane(f, radius, lower=True, tile=tile, tag="xhat")
    return zs


def bound_states(V: Potential):
    """Zeros of xhat in the open upper half-plane and the energies -kappa^2."""
    vmin = min(V.values)
    kmax = float(np.sqrt(max(0.0, -vmin))) + 1.0
    f = lambda k: xhat(V, k)
    # slightly asymmetric so midpoint cuts avoid the imaginary axis,
    # where every bound-state zero of a real potential sits
    rect = Rect(complex(-kmax - 0.0137, 1e-7), complex(kmax, kmax))
    zs = find_zeros(f, rect, max_zeros=500, function_tag="xhat")
    energies = [-(z.location.imag ** 2) for z in zs.zeros]
    return zs, energies


def _search_halfplane(f, radius, lower, tile, tag):
    zeros = []
    eps = 1e-9
    x_edges = np.arange(-radius - 0.137, radius + tile, tile)
    if lower:
        y_edges = np.arange(-radius - 0.137, 0.0, tile)
        y_edges = np.append(y_edges, -eps)
    else:
        y_edges = np.arange(eps, radius + tile, tile)
    for x0, x1 in zip(x_edges, x_edges[1:]):
        for y0, y1 in zip(y_edges, y_edges[1:]):
            if min(abs(complex(x0, y0)), abs(complex(x1, y1)),
                   abs(complex(x0, y1)), abs(complex(x1, y0))) > radius * 1.05:
                continue
            zs = find_zeros(f, Rect(complex(x0, y0), complex(x1, y1)),
                            max_zeros=500, function_tag=tag)
            zeros.extend(zs.zeros)
    kept = []
    for z in sorted(zeros, key=lambda z: (z.location.real, z.location.imag)):
        if abs(z.location) > radius:
            continue
        if lower and not z.location.imag < -eps:
            continue
        if not lower and not z.location.imag > eps:
            continue
        if all(abs(z.location - w.location) > 1e-7 for w in kept):
            kept.append(z)
    return ZeroSet(tuple(kept), tag)


def conjugate_symmetry_defect(zs: ZeroSet) -> float:
    """Max distance from each zero to the reflected set under k -> -conj(k)."""
    locs = zs.locations
    if len(locs) == 0:
        return 0.0
    refl = -np.conj(locs)
    d = np.abs(locs[:, None] - refl[None, :])
    return float(np.max(np.min(d, axis=1)))
