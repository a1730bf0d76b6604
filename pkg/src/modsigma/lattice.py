"""Complex lattices with a half-period basis.

A lattice is stored by its half-periods ``omega1``, ``omega2``; lattice
vectors are ``L = 2*m*omega1 + 2*n*omega2``.  Nothing here normalizes the
orientation of the basis: ``Im(omega2/omega1)`` may have either sign.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.special import zeta as _riemann_zeta

from .errors import ConvergenceFailure, DegenerateBasis, NotUnimodular

GAMMA2_MAX_TERMS = 10_000
GAMMA2_RTOL = 1e-17
GAMMA2K_MAX_TERMS = 10_000
_TIE_RTOL = 1e-12


@dataclass(frozen=True)
class LatticeVector:
    """The lattice vector ``2*m*omega1 + 2*n*omega2``."""

    m: int
    n: int

    @property
    def parity(self) -> int:
        return parity(self)

    def value(self, lat: "Lattice") -> complex:
        return 2 * self.m * lat.omega1 + 2 * self.n * lat.omega2


def parity(v: LatticeVector) -> int:
    """+1 if half of the vector is itself a lattice vector, else -1."""
    return 1 if (v.m % 2 == 0 and v.n % 2 == 0) else -1


@dataclass(frozen=True)
class Lattice:
    omega1: complex
    omega2: complex

    def __post_init__(self):
        w1, w2 = complex(self.omega1), complex(self.omega2)
        object.__setattr__(self, "omega1", w1)
        object.__setattr__(self, "omega2", w2)
        if w1 == 0 or w2 == 0:
            raise DegenerateBasis("half-periods must be nonzero")
        if not (math.isfinite(abs(w1)) and math.isfinite(abs(w2))):
            raise DegenerateBasis("half-periods must be finite")
        # relative test so that tiny/huge lattices are treated alike
        if abs((w1.conjugate() * w2).imag) <= 1e-14 * abs(w1) * abs(w2):
            raise DegenerateBasis(f"collinear half-periods {w1!r}, {w2!r}")

    @property
    def omega3(self) -> complex:
        return -(self.omega1 + self.omega2)

    def half_period(self, i: int) -> complex:
        if i == 1:
            return self.omega1
        if i == 2:
            return self.omega2
        if i == 3:
            return self.omega3
        raise ValueError(f"half-period index must be 1, 2 or 3, got {i!r}")

    @property
    def area(self) -> float:
        w1, w2 = self.omega1, self.omega2
        return 2 * abs(w1.conjugate() * w2 - w2.conjugate() * w1)

    @property
    def tau(self) -> complex:
        return self.omega2 / self.omega1

    @property
    def orientation(self) -> int:
        return 1 if self.tau.imag > 0 else -1

    @cached_property
    def reduced(self) -> "Lattice":
        return reduce_basis(self)

    # invariants are cached from the reduced basis, where every series
    # converges geometrically
    @cached_property
    def gamma2(self) -> complex:
        return gamma2(self.reduced)

    @cached_property
    def gamma4(self) -> complex:
        return gamma2k(self, 2)

    @cached_property
    def gamma6(self) -> complex:
        return gamma2k(self, 3)

    def point(self, m, n):
        """Lattice vector(s) 2*m*omega1 + 2*n*omega2 (array friendly)."""
        return 2 * np.asarray(m) * self.omega1 + 2 * np.asarray(n) * self.omega2

    def to_json(self) -> dict:
        return {
            "omega1": [self.omega1.real, self.omega1.imag],
            "omega2": [self.omega2.real, self.omega2.imag],
        }

    @classmethod
    def from_json(cls, data: dict) -> "Lattice":
        w1, w2 = data["omega1"], data["omega2"]
        return cls(complex(w1[0], w1[1]), complex(w2[0], w2[1]))


def lattice_from_basis(omega1: complex, omega2: complex) -> Lattice:
    """Build a lattice and eagerly compute its cached invariants."""
    lat = Lattice(omega1, omega2)
    lat.gamma2, lat.gamma4, lat.gamma6
    return lat


def square_lattice(scale: float = 1.0) -> Lattice:
    return Lattice(0.5 * scale, 0.5j * scale)


def hexagonal_lattice(scale: float = 1.0) -> Lattice:
    return Lattice(0.5 * scale, 0.5 * scale * cmath.exp(1j * math.pi / 3))


def random_lattice(rng: np.random.Generator, aspect=(0.2, 5.0)) -> Lattice:
    """A random lattice with |tau| log-uniform in ``aspect`` and random orientation."""
    lo, hi = aspect
    r = math.exp(rng.uniform(math.log(lo), math.log(hi)))
    theta = rng.uniform(0.15 * math.pi, 0.85 * math.pi)
    if rng.random() < 0.5:
        theta = -theta
    w1 = 0.5 * cmath.exp(1j * rng.uniform(-math.pi, math.pi))
    return Lattice(w1, w1 * r * cmath.exp(1j * theta))


def _positive_nome(tau: complex) -> complex:
    """exp(i*pi*tau) for the sign of tau with Im(tau) > 0.

    The weight-2 and weight-2k sums are even in tau (the n-sum runs over
    both signs), so both orientations share the same series.
    """
    if tau.imag < 0:
        tau = -tau
    return cmath.exp(1j * math.pi * tau)


def gamma2(lat: Lattice, max_terms: int = GAMMA2_MAX_TERMS) -> complex:
    """Lattice invariant gamma2, evaluated in the basis of ``lat`` as given.

    Uses the Eisenstein-ordered sum with each inner m-sum in closed form,
    ``sum_m (m + x)**-2 = pi**2 / sin(pi x)**2``.  The result is basis
    independent; convergence speed is not, so reduce the basis first when
    ``|Im tau|`` is small.
    """
    w1 = lat.omega1
    p2 = _positive_nome(lat.tau) ** 2
    total = 0j
    pk = 1.0 + 0j
    for _ in range(max_terms):
        pk *= p2
        # 1/sin(n pi tau)**2 in a form that never overflows
        term = -4 * pk / (1 - pk) ** 2
        total += term
        if abs(term) < GAMMA2_RTOL * max(abs(1 / 3 + 2 * total), 1.0):
            break
    else:
        raise ConvergenceFailure(
            f"gamma2 series did not converge in {max_terms} terms (|q|^2={abs(p2):.6g}); "
            "reduce the basis first"
        )
    big_gamma2 = (math.pi / (2 * w1)) ** 2 * (1 / 3 + 2 * total)
    return big_gamma2 - (math.pi / lat.area) * (w1.conjugate() / w1)


def gamma2k(lat: Lattice, k: int, max_terms: int = GAMMA2K_MAX_TERMS) -> complex:
    """sum over nonzero L of L**(-2k), for k >= 2.

    Evaluated through the Lambert series of the weight-2k Eisenstein series
    in the reduced basis.  :func:`modsigma.oracles.gamma2k_shell_sum` is the
    direct lattice sum used to cross-check it.
    """
    if k < 2:
        raise ValueError("gamma2k needs k >= 2 (k = 1 is gamma2)")
    red = lat.reduced if isinstance(lat, Lattice) else reduce_basis(lat)
    x = _positive_nome(red.tau) ** 2
    s = 0j
    xn = 1.0 + 0j
    for n in range(1, max_terms + 1):
        xn *= x
        term = n ** (2 * k - 1) * xn / (1 - xn)
        s += term
        if abs(term) < 1e-18 * max(abs(s), 1.0):
            break
    else:
        raise ConvergenceFailure(f"gamma{2 * k} Lambert series did not converge")
    g2k = 2 * _riemann_zeta(2 * k) + 2 * (2j * math.pi) ** (2 * k) / math.factorial(2 * k - 1) * s
    return complex(g2k / (2 * red.omega1) ** (2 * k))


def eta_modified(lat: Lattice, i: int) -> complex:
    """pi * conj(omega_i) / A."""
    return math.pi * lat.half_period(i).conjugate() / lat.area


def eta_original(lat: Lattice, i: int) -> complex:
    """zeta(omega_i) = gamma2 * omega_i + pi * conj(omega_i) / A."""
    return lat.gamma2 * lat.half_period(i) + eta_modified(lat, i)


def modular_transform(lat: Lattice, a: int, b: int, c: int, d: int) -> Lattice:
    """Basis change omega1' = a*omega1 + b*omega2, omega2' = c*omega1 + d*omega2."""
    det = a * d - b * c
    if abs(det) != 1:
        raise NotUnimodular(f"det = {det}")
    w1, w2 = lat.omega1, lat.omega2
    return Lattice(a * w1 + b * w2, c * w1 + d * w2)


def _gauss_reduce(w1: complex, w2: complex):
    """Gauss pair reduction; returns reduced (w1, w2) and the integer matrix M
    with (w1', w2') = M @ (w1, w2)."""
    mat = np.array([[1, 0], [0, 1]], dtype=np.int64)
    if abs(w1) > abs(w2):
        w1, w2 = w2, w1
        mat = mat[::-1].copy()
    while True:
        k = round((w2 * w1.conjugate()).real / abs(w1) ** 2)
        if k:
            w2 = w2 - k * w1
            mat[1] -= k * mat[0]
        if abs(w2) < abs(w1):
            w1, w2 = w2, w1
            mat = mat[::-1].copy()
            continue
        break
    # obtuse superbase: omega3 = -(omega1 + omega2) must be the short diagonal
    if (w1.conjugate() * w2).real > 0:
        w2 = -w2
        mat[1] = -mat[1]
    return w1, w2, mat


def reduce_basis(lat: Lattice) -> Lattice:
    """Equivalent basis with |omega1| <= |omega2| <= |omega3|.

    +-omega1, +-omega2, +-omega3 then lie on the boundary of the Voronoi
    cell of the origin.  The returned basis may have either orientation.
    """
    w1, w2, _ = _gauss_reduce(lat.omega1, lat.omega2)
    return Lattice(w1, w2)


def reduction_matrix(lat: Lattice) -> np.ndarray:
    """Integer matrix M with (reduced.omega1, reduced.omega2) = M @ (omega1, omega2)."""
    return _gauss_reduce(lat.omega1, lat.omega2)[2]


def lattice_coordinates(lat: Lattice, z):
    """Real (a, b) with z = 2*a*omega1 + 2*b*omega2."""
    z = np.asarray(z, dtype=complex)
    v1, v2 = 2 * lat.omega1, 2 * lat.omega2
    det = (v1.conjugate() * v2).imag
    a = -(np.conj(v2) * z).imag / det
    b = (np.conj(v1) * z).imag / det
    return a, b


def reduce_points(lat: Lattice, z):
    """Vectorized :func:`reduce_point`: returns (z_red, m, n) arrays."""
    z = np.asarray(z, dtype=complex)
    red = lat.reduced
    mat = reduction_matrix(lat)
    v1, v2 = 2 * red.omega1, 2 * red.omega2
    a, b = lattice_coordinates(red, z)
    a0, b0 = np.rint(a), np.rint(b)
    base = z - a0 * v1 - b0 * v2

    scale = abs(red.omega1)
    best = np.full(z.shape, np.nan + 0j)
    best_d = np.full(z.shape, np.inf)
    best_da = np.zeros(z.shape)
    best_db = np.zeros(z.shape)
    for da in (-1, 0, 1):
        for db in (-1, 0, 1):
            cand = base - da * v1 - db * v2
            d = np.abs(cand)
            tie = np.abs(d - best_d) <= _TIE_RTOL * scale
            lex = (cand.real < best.real - _TIE_RTOL * scale) | (
                (np.abs(cand.real - best.real) <= _TIE_RTOL * scale) & (cand.imag < best.imag)
            )
            better = (~tie & (d < best_d)) | (tie & lex)
            best = np.where(better, cand, best)
            best_d = np.where(better, d, best_d)
            best_da = np.where(better, da, best_da)
            best_db = np.where(better, db, best_db)
    ar = (a0 + best_da).astype(np.int64)
    br = (b0 + best_db).astype(np.int64)
    m = ar * mat[0, 0] + br * mat[1, 0]
    n = ar * mat[0, 1] + br * mat[1, 1]
    return best, m, n


def reduce_point(lat: Lattice, z: complex):
    """Reduce z into the Voronoi cell of the origin.

    Returns ``(z_red, v)`` with ``z = z_red + v.value(lat)``.  On cell
    boundaries the representative with lexicographically smallest
    (Re, Im) wins.
    """
    zr, m, n = reduce_points(lat, complex(z))
    return complex(zr), LatticeVector(int(m), int(n))


def voronoi_vertices(lat: Lattice) -> list[complex]:
    """Vertices of the Voronoi cell of the origin (6, or 4 for rectangular lattices)."""
    red = lat.reduced
    rel = [2 * red.omega1, 2 * red.omega2, 2 * red.omega3]
    rel = rel + [-v for v in rel]
    rel.sort(key=lambda v: cmath.phase(v))
    verts = []
    for k in range(len(rel)):
        a, b = rel[k], rel[(k + 1) % len(rel)]
        c = _circumcenter(a, b)
        if not any(abs(c - v) < 1e-12 * abs(red.omega1) for v in verts):
            verts.append(c)
    return verts


def _circumcenter(a: complex, b: complex) -> complex:
    """Circumcenter of the triangle (0, a, b)."""
    d = 2 * (a.conjugate() * b).imag
    return 1j * (abs(a) ** 2 * b - abs(b) ** 2 * a) / d
