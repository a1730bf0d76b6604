"""Argument reduction and migration for the modified sigma function.

The product is only ever evaluated at a point ``z_red`` in the Voronoi
cell of the origin.  The value at ``z = z_red + L`` is recovered from

    sigma(z_red + L) = xi(L) * exp((pi conj(L) / A) (z_red + L/2)) * sigma(z_red)

which is applied in one closed-form step.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NotCommensurate
from .lattice import Lattice, LatticeVector, lattice_coordinates, parity, reduce_points

COMPENSATE_ABOVE = 1e3
COMMENSURATE_TOL = 1e-9


@dataclass(frozen=True)
class MigrationFactor:
    """sigma(z) = parity * exp(exponent) * sigma(z_red)."""

    parity: int
    exponent: complex
    steps: int = 1
    shift: LatticeVector = LatticeVector(0, 0)

    def apply(self, value_at_reduced: complex) -> complex:
        return self.parity * np.exp(self.exponent) * value_at_reduced

    @property
    def log(self) -> complex:
        """log(parity * exp(exponent)) with parity folded into the imaginary part."""
        return self.exponent + (0j if self.parity > 0 else 1j * math.pi)


def _exponent(lat: Lattice, zr, L):
    return (math.pi / lat.area) * np.conj(L) * (zr + 0.5 * L)


def _exponent_compensated(lat: Lattice, zr: complex, m: int, n: int) -> complex:
    # conj(L) (zr + L/2) = conj(L) zr + |L|^2 / 2, summed exactly from
    # its component products
    w1, w2 = lat.omega1, lat.omega2
    lx = [2 * m * w1.real, 2 * n * w2.real]
    ly = [2 * m * w1.imag, 2 * n * w2.imag]
    # Re(conj(L) zr) = Lx zr.x + Ly zr.y ; Im = Lx zr.y - Ly zr.x
    re_parts = [v * zr.real for v in lx] + [v * zr.imag for v in ly]
    im_parts = [v * zr.imag for v in lx] + [-v * zr.real for v in ly]
    half_norm = [0.5 * a * b for a in lx for b in lx] + [0.5 * a * b for a in ly for b in ly]
    re = math.fsum(re_parts + half_norm)
    im = math.fsum(im_parts)
    return (math.pi / lat.area) * complex(re, im)


def migration_arrays(lat: Lattice, z):
    """Vectorized migration data in the basis of ``lat``.

    Returns ``(z_red, parity, exponent, m, n)`` with
    ``z = z_red + 2 m omega1 + 2 n omega2``.
    """
    z = np.asarray(z, dtype=complex)
    zr, m, n = reduce_points(lat, z)
    L = lat.point(m, n)
    xi = np.where((m % 2 == 0) & (n % 2 == 0), 1, -1)
    expo = np.asarray(_exponent(lat, zr, L), dtype=complex)
    big = np.abs(expo) > COMPENSATE_ABOVE
    if np.any(big):
        expo = expo.copy()
        for idx in zip(*np.nonzero(big)) if expo.ndim else [()]:
            expo[idx] = _exponent_compensated(lat, complex(zr[idx]), int(m[idx]), int(n[idx]))
    return zr, xi, expo, m, n


def _basis(ev) -> Lattice:
    # accepts a SigmaEvaluator (uses its reduced basis) or a bare Lattice
    return getattr(ev, "basis", ev)


def migrate_sigma(ev, z: complex, stepwise: bool = False):
    """Reduce ``z`` and return ``(z_red, MigrationFactor)``.

    ``ev`` is a SigmaEvaluator or the lattice basis to reduce in.
    ``stepwise=True`` walks the translation one primitive step at a time;
    it exists to cross-check the closed-form step.
    """
    lat = _basis(ev)
    zr, xi, expo, m, n = migration_arrays(lat, complex(z))
    zr, m, n = complex(zr), int(m), int(n)
    if not stepwise:
        return zr, MigrationFactor(int(xi), complex(expo), 1 if (m or n) else 0, LatticeVector(m, n))
    return zr, _stepwise(lat, zr, m, n)


def _stepwise(lat: Lattice, zr: complex, m: int, n: int) -> MigrationFactor:
    cur = zr
    sign = 1
    expo = 0j
    steps = 0
    for count, step in ((m, 2 * lat.omega1), (n, 2 * lat.omega2)):
        d = step if count > 0 else -step
        for _ in range(abs(count)):
            expo += (math.pi / lat.area) * d.conjugate() * (cur + 0.5 * d)
            cur += d
            sign = -sign
            steps += 1
    return MigrationFactor(sign, expo, steps, LatticeVector(m, n))


def migrate_with_known_order(ev, z: complex, p: int):
    """Migration for a point with ``p * z`` in the lattice.

    The lattice coordinates of ``p * z`` are rounded to integers (M, N), and
    both ``z_red`` and the translation are rebuilt from small integers,
    so no cancellation error from ``z - L`` enters.
    """
    if p < 1:
        raise ValueError("p must be >= 1")
    lat = _basis(ev)
    z = complex(z)
    a, b = lattice_coordinates(lat, p * z)
    big_m, big_n = int(np.rint(a)), int(np.rint(b))
    miss = abs(p * z - complex(lat.point(big_m, big_n)))
    if miss > COMMENSURATE_TOL * abs(lat.omega1):
        raise NotCommensurate(f"{p}*z is {miss:.3g} away from the lattice")
    _, v = _reduce_scalar(lat, z)
    # residue coordinates of z_red, exactly (M - p m)/p, (N - p n)/p
    rm, rn = big_m - p * v.m, big_n - p * v.n
    zr = (2 * rm * lat.omega1 + 2 * rn * lat.omega2) / p
    L = complex(lat.point(v.m, v.n))
    expo = _exponent_compensated(lat, zr, v.m, v.n) if abs(L) ** 2 > COMPENSATE_ABOVE else complex(
        _exponent(lat, zr, L)
    )
    return zr, MigrationFactor(parity(v), expo, 1 if (v.m or v.n) else 0, v)


def _reduce_scalar(lat, z):
    zr, m, n = reduce_points(lat, z)
    return complex(zr), LatticeVector(int(m), int(n))
