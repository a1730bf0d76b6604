"""Modified (and original) Weierstrass functions from the theta1 product.

Everything is evaluated at the Voronoi-reduced argument in a reduced
basis and carried back to ``z`` by quasiperiodicity (see
:mod:`modsigma.reduce`).  All evaluator methods accept scalars or numpy
arrays and return the same shape.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import ConvergenceFailure, PoleAt
from .lattice import Lattice, eta_modified
from .oracles import zeta_lattice_sum_oracle  # noqa: F401  (public re-export)
from .reduce import migration_arrays

MAX_PRODUCT_TERMS = 512
_UNIT_ROUNDOFF = 2.0**-53
POLE_TOL = 1e-12


@dataclass(frozen=True)
class ThetaContext:
    """Nome data for tau.  ``nome`` is q or 1/q, whichever has modulus < 1;
    the product is symmetric under q -> 1/q so either orientation works."""

    tau: complex

    def __post_init__(self):
        object.__setattr__(self, "tau", complex(self.tau))
        if self.tau.imag == 0:
            raise ValueError("Im(tau) must be nonzero")

    @property
    def q(self) -> complex:
        return cmath.exp(1j * math.pi * self.tau)

    @property
    def q_abs(self) -> float:
        return math.exp(-math.pi * self.tau.imag)

    @cached_property
    def nome(self) -> complex:
        t = self.tau if self.tau.imag > 0 else -self.tau
        return cmath.exp(1j * math.pi * t)

    def terms_needed(self, u) -> int:
        """Smallest n with |q|^(2n) (2 + 2|cos 2u|) < 2**-53, maximized over u."""
        u = np.asarray(u, dtype=complex)
        # |cos 2u| <= cosh(2 Im u); this bound never overflows
        log_c = np.log(2.0) + np.logaddexp(0.0, np.log(np.cosh(np.minimum(2 * np.abs(u.imag), 700))))
        log_c = float(np.max(log_c)) if log_c.size else math.log(4.0)
        rate = -2 * math.log(abs(self.nome))
        n = max(1, math.ceil((log_c - math.log(_UNIT_ROUNDOFF)) / rate))
        if n > MAX_PRODUCT_TERMS:
            raise ConvergenceFailure(f"theta product needs {n} terms (|q|={abs(self.nome):.6g})")
        return n


def _sinc(u):
    small = np.abs(u) < 1e-4
    safe = np.where(small, 1.0, u)
    u2 = u * u
    return np.where(small, 1 - u2 / 6 + u2 * u2 / 120, np.sin(safe) / safe)


def _product(ctx: ThetaContext, u, nterms: int, order: int = 0):
    """prod_n D_n / (1 - p^2n)^2 and the first ``order`` u-derivatives of
    sum_n log D_n, with D_n = 1 - 2 p^2n cos 2u + p^4n."""
    p2 = ctx.nome**2
    c2 = np.cos(2 * u)
    s2 = np.sin(2 * u)
    prod = np.ones_like(u)
    d1 = np.zeros_like(u)
    d2 = np.zeros_like(u)
    pk = 1.0 + 0j
    for _ in range(nterms):
        pk *= p2
        dn = 1 - 2 * pk * c2 + pk * pk
        prod = prod * (dn / (1 - pk) ** 2)
        if order >= 1:
            d1 = d1 + 4 * pk * s2 / dn
        if order >= 2:
            d2 = d2 + (8 * pk * c2 * dn - 16 * pk * pk * s2 * s2) / (dn * dn)
    return prod, d1, d2


def theta1(ctx: ThetaContext, u):
    """theta1(u|tau) / theta1'(0|tau): odd, slope 1 at 0, zeros at m pi + n pi tau."""
    u = np.asarray(u, dtype=complex)
    prod, _, _ = _product(ctx, u, ctx.terms_needed(u))
    out = np.sin(u) * prod
    return out if out.ndim else complex(out)


def theta1_logderiv(ctx: ThetaContext, u):
    """theta1'(u) / theta1(u) from the differentiated product."""
    u = np.asarray(u, dtype=complex)
    _, d1, _ = _product(ctx, u, ctx.terms_needed(u), order=1)
    out = 1 / np.tan(u) + d1
    return out if out.ndim else complex(out)


def _scalar(x):
    x = np.asarray(x)
    return complex(x) if x.ndim == 0 else x


class SigmaEvaluator:
    """Evaluates the modified Weierstrass functions of one lattice.

    The user's basis is kept in ``lattice`` (it labels omega_i for the
    symmetric variants); the product runs in the reduced basis ``basis``.
    """

    def __init__(self, lattice: Lattice):
        self.lattice = lattice
        self.basis = lattice.reduced
        self.theta = ThetaContext(self.basis.tau)
        self.area = lattice.area
        self.eta_mod1 = math.pi * self.basis.omega1.conjugate() / self.area
        self._k = math.pi / (2 * self.basis.omega1)
        self._pole_radius = POLE_TOL * abs(self.basis.omega1)

    def __repr__(self):
        return f"SigmaEvaluator({self.lattice!r})"

    @cached_property
    def gamma2(self) -> complex:
        return self.lattice.gamma2

    # -- reduced-cell kernels ------------------------------------------------

    def _u(self, zr):
        return self._k * zr

    def product_terms(self, z) -> int:
        """Number of product factors used to evaluate at ``z`` (after reduction)."""
        zr, *_ = migration_arrays(self.basis, z)
        return self.theta.terms_needed(self._u(zr))

    def _sigma_cell(self, zr):
        u = self._u(zr)
        prod, _, _ = _product(self.theta, u, self.theta.terms_needed(u))
        w1 = self.basis.omega1
        return zr * np.exp(self.eta_mod1 * zr * zr / (2 * w1)) * _sinc(u) * prod

    def _log_sigma_cell(self, zr):
        u = self._u(zr)
        prod, _, _ = _product(self.theta, u, self.theta.terms_needed(u))
        w1 = self.basis.omega1
        with np.errstate(divide="ignore"):
            return np.log(zr) + self.eta_mod1 * zr * zr / (2 * w1) + np.log(_sinc(u) * prod)

    def _check_poles(self, z, zr, on_pole):
        hit = np.abs(zr) < self._pole_radius
        if np.any(hit):
            if on_pole == "raise":
                z_hit = np.asarray(z)[hit] if np.ndim(z) else z
                zz = complex(np.ravel(z_hit)[0])
                zrr = complex(np.ravel(np.asarray(zr)[hit] if np.ndim(zr) else zr)[0])
                raise PoleAt(zz, zz - zrr)
        return hit

    # -- sigma -----------------------------------------------------------

    def log_sigma_modified(self, z):
        """Complex log of the modified sigma function (imaginary part unwrapped).

        Stays finite where the plain value over/underflows; ``-inf`` real
        part at lattice points.
        """
        zr, xi, expo, _, _ = migration_arrays(self.basis, z)
        out = self._log_sigma_cell(zr) + expo + np.where(xi < 0, 1j * math.pi, 0)
        return _scalar(out)

    def sigma_modified(self, z):
        """Modified sigma; may overflow for |z| much larger than the cell."""
        zr, xi, expo, _, _ = migration_arrays(self.basis, z)
        return _scalar(xi * np.exp(expo) * self._sigma_cell(zr))

    def sigma_original(self, z):
        z = np.asarray(z, dtype=complex)
        return _scalar(np.exp(0.5 * self.gamma2 * z * z) * self.sigma_modified(z))

    # -- zeta and wp -----------------------------------------------------

    def zeta_modified(self, z, on_pole: str = "raise"):
        """sigma'/sigma with the gamma2 z term removed; simple poles of residue 1."""
        z = np.asarray(z, dtype=complex)
        zr, _, _, m, n = migration_arrays(self.basis, z)
        hit = self._check_poles(z, zr, on_pole)
        zr_safe = np.where(hit, self.basis.omega1, zr)
        u = self._u(zr_safe)
        _, d1, _ = _product(self.theta, u, self.theta.terms_needed(u), order=1)
        L = self.basis.point(m, n)
        val = self.eta_mod1 * zr_safe / self.basis.omega1 + self._k * (1 / np.tan(u) + d1)
        val = val + math.pi * np.conj(L) / self.area
        return _scalar(np.where(hit, complex(np.inf, np.inf), val))

    def zeta_original(self, z, on_pole: str = "raise"):
        z = np.asarray(z, dtype=complex)
        return _scalar(self.zeta_modified(z, on_pole) + self.gamma2 * z)

    def wp_modified(self, z, on_pole: str = "raise"):
        """-d/dz of the modified zeta; doubly periodic, ~ 1/z**2 + gamma2 at 0."""
        z = np.asarray(z, dtype=complex)
        zr, *_ = migration_arrays(self.basis, z)
        hit = self._check_poles(z, zr, on_pole)
        zr_safe = np.where(hit, self.basis.omega1, zr)
        u = self._u(zr_safe)
        _, _, d2 = _product(self.theta, u, self.theta.terms_needed(u), order=2)
        csc2 = 1 / np.sin(u) ** 2
        val = -self.eta_mod1 / self.basis.omega1 - self._k**2 * (-csc2 + d2)
        return _scalar(np.where(hit, complex(np.inf, np.inf), val))

    def wp_original(self, z, on_pole: str = "raise"):
        return _scalar(np.asarray(self.wp_modified(z, on_pole)) - self.gamma2)

    # -- derived functions ---------------------------------------------------

    def sigma_symmetric(self, i: int, z):
        """exp(-eta~_i z) sigma(z + omega_i) / sigma(omega_i); even, 1 at z = 0.

        ``i`` labels the half-periods of the user's basis (omega3 = -omega1 - omega2).
        """
        z = np.asarray(z, dtype=complex)
        wi = self.lattice.half_period(i)
        eta_i = eta_modified(self.lattice, i)
        log_ratio = self.log_sigma_modified(z + wi) - self.log_sigma_modified(wi)
        out = np.exp(-eta_i * z + log_ratio)
        return _scalar(np.where(z == 0, 1.0 + 0j, out))

    def eisenstein_completion(self, z, on_pole: str = "raise"):
        """zeta~(z) - pi conj(z) / A: doubly periodic, not holomorphic."""
        z = np.asarray(z, dtype=complex)
        return _scalar(self.zeta_modified(z, on_pole) - math.pi * np.conj(z) / self.area)

    def log_z_quasi(self, z):
        z = np.asarray(z, dtype=complex)
        return _scalar(self.log_sigma_modified(z) - 0.5 * math.pi * (np.conj(z) * z).real / self.area)

    def z_quasi(self, z):
        """sigma~(z) exp(-pi |z|^2 / 2A); its modulus is lattice periodic."""
        z = np.asarray(z, dtype=complex)
        return _scalar(self.sigma_modified(z) * np.exp(-0.5 * math.pi * (np.conj(z) * z).real / self.area))

    def laurent_gamma(self, k: int) -> complex:
        """Coefficient gamma_2k of the modified Laurent series (k = 1 gives gamma2)."""
        from .lattice import gamma2k

        return self.gamma2 if k == 1 else gamma2k(self.lattice, k)


def sigma_evaluator(lattice: Lattice) -> SigmaEvaluator:
    return SigmaEvaluator(lattice)
