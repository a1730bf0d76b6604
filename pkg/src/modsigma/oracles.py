"""Independent slow evaluations used to cross-check the fast paths.

None of these share code with the theta-product evaluator or with the
closed-form invariant series; they sum the defining lattice sums directly
or use the additive theta series.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

from .lattice import Lattice


def _lattice_block(lat: Lattice, cutoff: int):
    m = np.arange(-cutoff, cutoff + 1)
    mm, nn = np.meshgrid(m, m, indexing="ij")
    pts = 2 * mm * lat.omega1 + 2 * nn * lat.omega2
    keep = (mm != 0) | (nn != 0)
    return pts[keep], np.maximum(np.abs(mm), np.abs(nn))[keep]


def zeta_lattice_sum_oracle(lat: Lattice, z, cutoff: int) -> complex:
    """Truncated absolutely convergent sum for the original zeta function.

    ``1/z + sum' z**3 / (L**2 (z**2 - L**2))`` over max(|m|, |n|) <= cutoff,
    in the basis of ``lat`` as given.
    """
    if cutoff < 1:
        raise ValueError("cutoff must be >= 1")
    z = complex(z)
    pts, _ = _lattice_block(lat, cutoff)
    l2 = pts * pts
    z2 = z * z
    terms = z2 * z / (l2 * (z2 - l2))
    # termwise odd in z, so the truncated sum is exactly odd
    return 1 / z + complex(np.sum(terms))


def gamma2k_shell_sum(lat: Lattice, k: int, cutoff: int, boundary_weight: float = 1.0) -> complex:
    """Direct sum of L**(-2k) over max(|m|, |n|) <= cutoff.

    ``boundary_weight`` scales the outermost shell; 0.5 gives a
    trapezoid-like truncation whose error is a clean power series in
    1/cutoff, suitable for Richardson extrapolation.
    """
    total = 0j
    for s in range(1, cutoff + 1):
        shell = _shell(lat, s)
        contrib = complex(np.sum(shell ** (-2 * k)))
        total += boundary_weight * contrib if s == cutoff else contrib
    return total


def _shell(lat: Lattice, s: int):
    r = np.arange(-s, s + 1)
    top = 2 * r * lat.omega1 + 2 * s * lat.omega2
    bottom = 2 * r * lat.omega1 - 2 * s * lat.omega2
    r2 = np.arange(-s + 1, s)
    right = 2 * s * lat.omega1 + 2 * r2 * lat.omega2
    left = -2 * s * lat.omega1 + 2 * r2 * lat.omega2
    return np.concatenate([top, bottom, right, left])


def _theta1_series_ratio(tau: complex, terms: int = 40) -> complex:
    """theta1'''(0|tau) / theta1'(0|tau) from the additive series."""
    q = cmath.exp(1j * math.pi * tau)
    num = 0j
    den = 0j
    for n in range(terms):
        w = (-1) ** n * q ** (n * (n + 1))
        num += w * (2 * n + 1) ** 3
        den += w * (2 * n + 1)
    return -num / den


def eta_theta_series(lat: Lattice, i: int = 1) -> complex:
    """zeta(omega_i) from theta1'''(0)/theta1'(0) in a basis starting at omega_i.

    ``eta_1 = -(pi**2 / (12 omega_1)) theta1'''(0|tau) / theta1'(0|tau)``;
    the partner half-period is flipped so that Im(tau) > 0.
    """
    wi = lat.half_period(i)
    partner = lat.half_period(2 if i == 1 else 1)
    tau = partner / wi
    if tau.imag < 0:
        tau = -tau
    if tau.imag < 0.05:
        raise ValueError("theta series oracle needs a reasonably reduced basis")
    return -(math.pi**2 / (12 * wi)) * _theta1_series_ratio(tau)


def gamma2_theta_oracle(lat: Lattice) -> complex:
    """gamma2 = (eta_1 - pi conj(omega_1)/A) / omega_1 with eta_1 from the theta series."""
    w1 = lat.omega1
    return (eta_theta_series(lat, 1) - math.pi * w1.conjugate() / lat.area) / w1
