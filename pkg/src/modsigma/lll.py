"""Lowest-Landau-level wavefunctions on a torus built from the modified sigma.

Single-particle states are

    psi(z) = exp(conj(K) z) prod_i sigma~(z - w_i) exp(-|z|^2 / 4 l^2)

with A = 2 pi N_phi l^2 and sum(w_i) = K A / pi.  Values are accumulated
as complex logarithms; the ``*_psi`` convenience functions exponentiate
and may under/overflow a few cells away from the origin.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from .analysis import cell_boundary, contour_winding
from .elliptic import SigmaEvaluator
from .errors import (
    ConstraintViolation,
    CountMismatch,
    NearZeroDivision,
    ParticleCountMismatch,
    SingularBasis,
)
from .lattice import Lattice, LatticeVector, parity

K_CONSTRAINT_TOL = 1e-10
_LOG_TINY = math.log(1e-300)
_LOG_SINGULAR = math.log(1e-250)


@dataclass(frozen=True)
class WavefunctionSpec:
    lattice: Lattice
    n_phi: int
    zeros: tuple
    boundary_k: complex

    def __post_init__(self):
        object.__setattr__(self, "zeros", tuple(complex(w) for w in self.zeros))
        object.__setattr__(self, "boundary_k", complex(self.boundary_k))
        if self.n_phi < 1:
            raise ValueError("n_phi must be >= 1")
        if len(self.zeros) != self.n_phi:
            raise CountMismatch(f"{len(self.zeros)} zeros for N_phi = {self.n_phi}")

    @property
    def ell(self) -> float:
        return math.sqrt(self.lattice.area / (2 * math.pi * self.n_phi))

    @cached_property
    def evaluator(self) -> SigmaEvaluator:
        return SigmaEvaluator(self.lattice)

    def to_json(self) -> dict:
        return {
            "lattice": self.lattice.to_json(),
            "nPhi": self.n_phi,
            "zeros": [[w.real, w.imag] for w in self.zeros],
            "K": [self.boundary_k.real, self.boundary_k.imag],
        }

    @classmethod
    def from_json(cls, data: dict, check: bool = True) -> "WavefunctionSpec":
        lat = Lattice.from_json(data["lattice"])
        zeros = [complex(a, b) for a, b in data["zeros"]]
        if "K" not in data:
            return spec_from_zeros(lat, int(data["nPhi"]), zeros)
        k = complex(*data["K"])
        return spec_with_k(lat, int(data["nPhi"]), zeros, k, check=check)


def spec_from_zeros(lat: Lattice, n_phi: int, zeros: Sequence[complex]) -> WavefunctionSpec:
    """Spec with K derived from the zeros: K = pi sum(w) / A."""
    if len(zeros) != n_phi:
        raise CountMismatch(f"{len(zeros)} zeros for N_phi = {n_phi}")
    k = math.pi * complex(sum(complex(w) for w in zeros)) / lat.area
    return WavefunctionSpec(lat, n_phi, tuple(zeros), k)


def spec_with_k(lat: Lattice, n_phi: int, zeros, k: complex, check: bool = True) -> WavefunctionSpec:
    spec = WavefunctionSpec(lat, n_phi, tuple(zeros), k)
    if check:
        miss = abs(sum(spec.zeros) - k * lat.area / math.pi)
        if miss > K_CONSTRAINT_TOL * abs(lat.omega1):
            raise ConstraintViolation(f"|sum(w) - K A / pi| = {miss:.3g}")
    return spec


def log_f(spec: WavefunctionSpec, z):
    """log of the holomorphic factor exp(conj(K) z) prod sigma~(z - w_i)."""
    z = np.asarray(z, dtype=complex)
    ev = spec.evaluator
    out = np.conj(spec.boundary_k) * z
    for w in spec.zeros:
        out = out + ev.log_sigma_modified(z - w)
    return out


def log_psi(spec: WavefunctionSpec, z):
    z = np.asarray(z, dtype=complex)
    gauss = (np.conj(z) * z).real / (4 * spec.ell**2)
    out = log_f(spec, z) - gauss
    return out if out.ndim else complex(out)


def single_particle_psi(spec: WavefunctionSpec, z):
    return np.exp(log_psi(spec, z))


def _log_boundary_factor(spec: WavefunctionSpec, z, L: complex, xi: int):
    k = spec.boundary_k
    sign = 1j * math.pi if (xi < 0 and spec.n_phi % 2) else 0
    return sign + (k.conjugate() * L - k * L.conjugate()) + (
        L.conjugate() * z - L * np.conj(z)
    ) / (4 * spec.ell**2)


def boundary_residual(spec: WavefunctionSpec, z: complex, v: LatticeVector) -> float:
    """|psi(z + L) / (predicted factor * psi(z)) - 1| for L = v in the basis of spec.lattice."""
    z = complex(z)
    L = v.value(spec.lattice)
    lp = log_psi(spec, z)
    if lp.real < _LOG_TINY:
        raise NearZeroDivision(f"|psi(z)| below 1e-300 at z={z!r}; resample")
    r = log_psi(spec, z + L) - lp - _log_boundary_factor(spec, z, L, parity(v))
    return float(abs(np.expm1(r)))


def zero_count(spec: WavefunctionSpec, samples_per_edge: int | None = None, offset: complex | None = None) -> int:
    """Winding of f around the boundary of one fundamental cell."""
    ev = spec.evaluator
    if offset is None:
        offset = (0.0123 + 0.0371j) * abs(ev.basis.omega1)
    if samples_per_edge is None:
        samples_per_edge = 256 * spec.n_phi
    path = cell_boundary(ev, samples_per_edge, offset)
    phase = np.asarray(log_f(spec, path)).imag
    return contour_winding(np.exp(1j * phase))


@dataclass(frozen=True)
class ManyBodyConfig:
    positions: tuple
    center_of_mass: complex = field(init=False)

    def __post_init__(self):
        pos = tuple(complex(p) for p in self.positions)
        object.__setattr__(self, "positions", pos)
        object.__setattr__(self, "center_of_mass", complex(sum(pos)))


def log_filled_state(spec: WavefunctionSpec, config: ManyBodyConfig) -> complex:
    """log Psi for the filled level, up to an overall constant."""
    zs = config.positions
    n = spec.n_phi
    if len(zs) != n:
        raise ParticleCountMismatch(f"{len(zs)} particles for N_phi = {n}")
    ev = spec.evaluator
    k = spec.boundary_k
    w_big = k * spec.lattice.area / math.pi
    big_z = config.center_of_mass
    out = k.conjugate() * big_z + ev.log_sigma_modified(big_z - w_big)
    for i in range(n):
        for j in range(i + 1, n):
            out += ev.log_sigma_modified(zs[i] - zs[j])
    gauss = sum(abs(z) ** 2 for z in zs) * math.pi * n / (2 * spec.lattice.area)
    return complex(out - gauss)


def filled_state_psi(spec: WavefunctionSpec, config: ManyBodyConfig) -> complex:
    return complex(np.exp(log_filled_state(spec, config)))


def slater_family(spec: WavefunctionSpec) -> list[WavefunctionSpec]:
    """N_phi single-particle states sharing the boundary condition of ``spec``.

    Member k has every zero translated by 2 (k-1) omega1 / N_phi; the total
    shift is a lattice vector, which leaves the boundary phase unchanged.
    """
    n = spec.n_phi
    shift = 2 * spec.lattice.omega1 / n
    return [spec_from_zeros(spec.lattice, n, [w + k * shift for w in spec.zeros]) for k in range(n)]


def slater_determinant_oracle(family: Sequence[WavefunctionSpec], config: ManyBodyConfig) -> complex:
    """det[psi_k(z_j)] over a family of N_phi single-particle specs.

    Rows are rescaled by their largest entry before the determinant and
    the scale restored afterwards to keep the magnitude representable.
    """
    zs = np.array(config.positions)
    n = len(family)
    if len(zs) != n:
        raise ParticleCountMismatch(f"{len(zs)} particles for {n} orbitals")
    logs = np.array([np.atleast_1d(log_psi(s, zs)) for s in family])
    shift = logs.real.max(axis=1, keepdims=True)
    mat = np.exp(logs - shift)
    det = np.linalg.det(mat)
    if det == 0:
        return 0j
    return complex(np.exp(np.log(complex(det)) + shift.sum()))


def check_independent(family: Sequence[WavefunctionSpec], rng: np.random.Generator, trials: int = 10) -> None:
    """Raise SingularBasis if the family's determinant is tiny on every trial config."""
    lat = family[0].lattice
    n = len(family)
    for _ in range(trials):
        cfg = random_config(lat, n, rng)
        d = slater_determinant_oracle(family, cfg)
        if d != 0 and math.log(abs(d)) > _LOG_SINGULAR:
            return
    raise SingularBasis("determinant below 1e-250 on every trial configuration")


def random_config(lat: Lattice, n: int, rng: np.random.Generator) -> ManyBodyConfig:
    s = rng.uniform(-0.5, 0.5, n)
    t = rng.uniform(-0.5, 0.5, n)
    return ManyBodyConfig(tuple(2 * s * lat.omega1 + 2 * t * lat.omega2))
