"""Zeros of Eisenstein's periodic completion of the zeta function.

``zeta_hat(z) = zeta~(z) - pi conj(z) / A`` is doubly periodic with one
simple pole per cell.  Its Wirtinger derivatives are known in closed form
(d/dz = -wp~(z), d/dconj(z) = -pi/A), so Newton's method on the real
2x2 system converges quadratically from a modest seed grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .elliptic import SigmaEvaluator
from .errors import IncompleteCensus, OnContour, PoleAt
from .lattice import reduce_points, voronoi_vertices

NEWTON_MAX_ITER = 50
DEDUP_RTOL = 1e-6


@dataclass(frozen=True)
class ZeroRecord:
    position: complex
    winding: int
    kind: str  # "holomorphic" | "antiholomorphic"
    residual_norm: float
    multiplicity: int = 1

    def to_json(self) -> dict:
        return {
            "position": [self.position.real, self.position.imag],
            "winding": self.winding,
            "kind": self.kind,
            "residualNorm": self.residual_norm,
            "multiplicity": self.multiplicity,
        }


@dataclass
class Census:
    zeros: list[ZeroRecord]
    n_holo: int
    n_anti: int
    winding_sum: int

    def to_json(self) -> dict:
        return {
            "zeros": [z.to_json() for z in self.zeros],
            "census": {"nHolo": self.n_holo, "nAnti": self.n_anti, "windingSum": self.winding_sum},
        }


def _newton_batch(ev: SigmaEvaluator, z0: np.ndarray):
    """Damped Newton on Re/Im of zeta_hat for a batch of seeds."""
    b = -math.pi / ev.area
    z = z0.astype(complex).copy()
    f = ev.eisenstein_completion(z, on_pole="nan")
    alive = np.isfinite(f)
    scale = abs(ev.basis.omega1)
    for _ in range(NEWTON_MAX_ITER):
        a = -np.asarray(ev.wp_modified(z, on_pole="nan"))
        det = np.abs(a) ** 2 - b * b
        step = (-f * np.conj(a) + np.conj(f) * b) / np.where(det == 0, np.nan, det)
        step = np.where(alive & np.isfinite(step), step, 0)
        # cap the step at one cell size so no seed jumps wildly
        big = np.abs(step) > scale
        step = np.where(big, step * scale / np.maximum(np.abs(step), 1e-300), step)
        trial = z + step
        ft = ev.eisenstein_completion(trial, on_pole="nan")
        worse = ~(np.abs(ft) <= np.abs(f))
        for _ in range(8):
            if not np.any(worse & alive):
                break
            step = np.where(worse, 0.5 * step, step)
            trial = z + step
            ft_new = ev.eisenstein_completion(trial, on_pole="nan")
            ft = np.where(worse, ft_new, ft)
            worse = worse & ~(np.abs(ft) <= np.abs(f))
        z = np.where(alive, trial, z)
        f = np.where(alive, ft, f)
        alive = alive & np.isfinite(f)
        done = np.abs(step) < 1e-15 * scale
        if np.all(done | ~alive):
            break
    return z, f, alive


def _classify(ev: SigmaEvaluator, z: complex):
    a = abs(complex(ev.wp_modified(z)))
    b = math.pi / ev.area
    return (1, "holomorphic") if a > b else (-1, "antiholomorphic")


def _mod_distance(ev: SigmaEvaluator, z1, z2):
    zr, _, _ = reduce_points(ev.basis, np.asarray(z1) - np.asarray(z2))
    return np.abs(zr)


def find_completion_zeros(ev: SigmaEvaluator, grid_n: int = 16, check: bool = True) -> Census:
    """Locate and classify the zeros of zeta_hat in one primitive cell.

    Seeds Newton from a grid_n x grid_n grid over the cell, reduces the
    converged points into the Voronoi cell and deduplicates them modulo
    the lattice.  Raises IncompleteCensus when the windings of the found
    zeros and the pole (-1) do not cancel.
    """
    if grid_n < 16:
        raise ValueError("grid_n must be >= 16")
    w1, w2 = ev.basis.omega1, ev.basis.omega2
    s = (np.arange(grid_n) + 0.5) / grid_n
    ss, tt = np.meshgrid(s, s, indexing="ij")
    seeds = (2 * ss - 1) * w1 + (2 * tt - 1) * w2
    z, f, ok = _newton_batch(ev, seeds.ravel())

    scale = abs(w1)
    tol = 1e-11 / scale
    ok = ok & (np.abs(f) < tol)
    zr, _, _ = reduce_points(ev.basis, z[ok])
    found: list[complex] = []
    for c in zr:
        c = complex(c)
        if all(_mod_distance(ev, c, d) > DEDUP_RTOL * scale for d in found):
            found.append(c)

    half_periods = [ev.basis.omega1, ev.basis.omega2, ev.basis.omega3]
    records = []
    for c in found:
        wind, kind = _classify(ev, c)
        resid = abs(complex(ev.eisenstein_completion(c)))
        merged = kind == "antiholomorphic" and any(
            _mod_distance(ev, c, h) < DEDUP_RTOL * scale for h in half_periods
        )
        # an antiholomorphic zero sitting on a half-period means the two
        # antiholomorphic zeros have absorbed a holomorphic one (rectangular
        # and nearly rectangular cells)
        records.append(ZeroRecord(c, wind, kind, resid, 3 if merged else 1))
    records.sort(key=lambda r: (r.kind != "holomorphic", round(r.position.real, 9), round(r.position.imag, 9)))

    n_holo = sum(r.kind == "holomorphic" for r in records)
    n_anti = len(records) - n_holo
    winding_sum = sum(r.winding for r in records) - 1
    census = Census(records, n_holo, n_anti, winding_sum)
    if check and winding_sum != 0:
        raise IncompleteCensus(
            f"winding sum {winding_sum} != 0 ({n_holo} holomorphic, {n_anti} antiholomorphic); "
            "retry with a denser grid",
            records,
        )
    return census


def winding_number(ev: SigmaEvaluator, center: complex, radius: float, samples: int = 256) -> int:
    """Winding of arg zeta_hat around a circle."""
    if samples < 64:
        raise ValueError("samples must be >= 64")
    t = np.arange(samples + 1) * (2 * math.pi / samples)
    pts = center + radius * np.exp(1j * t)
    try:
        vals = np.asarray(ev.eisenstein_completion(pts))
    except PoleAt as exc:
        raise OnContour(str(exc)) from exc
    if np.any(np.abs(vals) < 1e-10):
        raise OnContour(f"zeta_hat vanishes on the circle |z - {center}| = {radius}")
    return contour_winding(vals)


def cell_winding(ev: SigmaEvaluator, samples_per_edge: int = 512, offset: complex | None = None) -> int:
    """Winding of zeta_hat around one cell boundary; periodicity forces 0."""
    if offset is None:
        offset = (0.0123 + 0.0371j) * abs(ev.basis.omega1)
    vals = np.asarray(ev.eisenstein_completion(cell_boundary(ev, samples_per_edge, offset)))
    if np.any(np.abs(vals) < 1e-10):
        raise OnContour("zeta_hat vanishes on the cell boundary; shift the offset")
    return contour_winding(vals)


def contour_winding(vals) -> int:
    """Winding count of a closed sampled curve (first point repeated last)."""
    dphi = np.diff(np.angle(vals))
    dphi = (dphi + math.pi) % (2 * math.pi) - math.pi
    return int(round(float(np.sum(dphi)) / (2 * math.pi)))


def cell_boundary(ev: SigmaEvaluator, samples_per_edge: int, offset: complex = 0j):
    """Closed counterclockwise parallelogram around one cell, corners at offset +- omega1 +- omega2."""
    w1, w2 = ev.basis.omega1, ev.basis.omega2
    if ev.basis.orientation < 0:
        w1, w2 = w2, w1
    c0 = offset - w1 - w2
    t = np.arange(samples_per_edge) / samples_per_edge
    edges = [
        c0 + 2 * w1 * t,
        c0 + 2 * w1 + 2 * w2 * t,
        c0 + 2 * w1 + 2 * w2 - 2 * w1 * t,
        c0 + 2 * w2 - 2 * w2 * t,
    ]
    return np.concatenate(edges + [np.array([c0])])


@dataclass
class VoronoiReport:
    vertices: list[complex]
    distances: list[float] = field(default_factory=list)
    max_discrepancy: float = 0.0

    def to_json(self) -> dict:
        return {
            "vertices": [[v.real, v.imag] for v in self.vertices],
            "distances": self.distances,
            "maxDiscrepancy": self.max_discrepancy,
        }


def voronoi_comparison(ev: SigmaEvaluator, census: Census | None = None) -> VoronoiReport:
    """Distance from each antiholomorphic zero to the nearest Voronoi vertex (mod lattice)."""
    if census is None:
        census = find_completion_zeros(ev)
    verts = voronoi_vertices(ev.basis)
    dists = []
    for r in census.zeros:
        if r.kind != "antiholomorphic":
            continue
        d = min(float(_mod_distance(ev, r.position, v)) for v in verts)
        dists.append(d)
    return VoronoiReport(verts, dists, max(dists) if dists else 0.0)
