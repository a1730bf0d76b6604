"""Identity suite run by ``modsigma selftest`` over random lattices."""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .elliptic import SigmaEvaluator
from .lattice import Lattice, LatticeVector, eta_modified, modular_transform, random_lattice
from .lll import boundary_residual, spec_from_zeros
from .oracles import eta_theta_series

IDENTITIES = ("legendre", "eta", "quasiperiodicity", "modular", "derivative", "boundary")

TOLERANCES = {
    "legendre": 1e-12,
    "eta": 1e-10,
    "quasiperiodicity": 1e-11,
    "modular": 1e-10,
    "derivative": 1e-6,
    "boundary": 1e-9,
}

_GENERATORS = ((0, -1, 1, 0), (1, 1, 0, 1), (1, -1, 0, 1))


@dataclass
class IdentityResult:
    name: str
    worst: float = 0.0
    failures: list = field(default_factory=list)
    checked: int = 0


def random_unimodular(rng: np.random.Generator, max_len: int = 10):
    """Product of up to ``max_len`` random S / T / T^-1 generators."""
    a, b, c, d = 1, 0, 0, 1
    for _ in range(int(rng.integers(1, max_len + 1))):
        e, f, g, h = _GENERATORS[int(rng.integers(len(_GENERATORS)))]
        a, b, c, d = e * a + f * c, e * b + f * d, g * a + h * c, g * b + h * d
    return a, b, c, d


def cell_points(lat: Lattice, rng: np.random.Generator, n: int, margin: float = 0.15):
    """Random points of the reduced cell, kept away from the poles and half-periods."""
    red = lat.reduced
    out = []
    scale = abs(red.omega1)
    specials = [0, red.omega1, -red.omega1, red.omega2, -red.omega2, red.omega3, -red.omega3]
    while len(out) < n:
        s, t = rng.uniform(-0.5, 0.5, 2)
        z = 2 * s * red.omega1 + 2 * t * red.omega2
        if min(abs(z - p) for p in specials) > margin * scale:
            out.append(complex(z))
    return np.array(out)


def check_lattice(lat: Lattice, seed: int, perturb_gamma2: float = 0.0) -> dict:
    """All identity residuals for one lattice, normalized by their tolerances' units."""
    rng = np.random.default_rng(seed)
    ev = SigmaEvaluator(lat)
    A = lat.area
    out = {}

    s = lat.orientation
    legendre = eta_modified(lat, 1) * lat.omega2 - eta_modified(lat, 2) * lat.omega1
    out["legendre"] = abs(legendre - s * 0.5j * math.pi)

    # zeta~(omega_i) against pi conj(omega_i)/A, and the theta-series eta_i
    # minus gamma2 omega_i against the same target
    g2 = lat.gamma2 + perturb_gamma2
    red = lat.reduced
    worst = 0.0
    for i in (1, 2, 3):
        wi = red.half_period(i)
        target = math.pi * wi.conjugate() / A
        worst = max(worst, abs(complex(ev.zeta_modified(wi)) - target) * abs(wi))
        worst = max(worst, abs(eta_theta_series(red, i) - g2 * wi - target) * abs(wi))
    out["eta"] = worst

    z = cell_points(lat, rng, 4)
    worst = 0.0
    for m, n in ((1, 0), (0, 1), (1, 1), (-2, 3)):
        L = 2 * m * lat.omega1 + 2 * n * lat.omega2
        xi = LatticeVector(m, n).parity
        lhs = np.asarray(ev.sigma_modified(z + L))
        rhs = xi * np.exp((math.pi * np.conj(L) / A) * (z + 0.5 * L)) * np.asarray(ev.sigma_modified(z))
        worst = max(worst, float(np.max(np.abs(lhs / rhs - 1))))
    out["quasiperiodicity"] = worst

    other = SigmaEvaluator(modular_transform(lat, *random_unimodular(rng)))
    w = 2.5 * z
    out["modular"] = float(np.max(np.abs(np.asarray(other.sigma_modified(w)) / np.asarray(ev.sigma_modified(w)) - 1)))

    h = 1e-5
    ls_p, ls_m = np.asarray(ev.log_sigma_modified(z + h)), np.asarray(ev.log_sigma_modified(z - h))
    dlog = ls_p - ls_m
    dlog = dlog.real + 1j * ((dlog.imag + math.pi) % (2 * math.pi) - math.pi)
    zeta = np.asarray(ev.zeta_modified(z))
    dzeta = (np.asarray(ev.zeta_modified(z + h)) - np.asarray(ev.zeta_modified(z - h))) / (2 * h)
    wp = np.asarray(ev.wp_modified(z))
    out["derivative"] = max(
        float(np.max(np.abs(dlog / (2 * h) - zeta) / np.abs(zeta))),
        float(np.max(np.abs(-dzeta - wp) / np.abs(wp))),
    )

    n_phi = int(rng.integers(1, 5))
    zeros = cell_points(lat, rng, n_phi, margin=0.0)
    spec = spec_from_zeros(lat, n_phi, list(zeros))
    zb = cell_points(lat, rng, 1)[0]
    out["boundary"] = max(boundary_residual(spec, zb, v) for v in (LatticeVector(1, 0), LatticeVector(0, 1)))
    return out


def run_selftest(n_lattices: int = 100, seed: int = 42, perturb_gamma2: float = 0.0, threads: int | None = None):
    """Run the identity suite; returns (all_passed, results by identity, lattices)."""
    rng = np.random.default_rng(seed)
    lattices = [random_lattice(rng) for _ in range(n_lattices)]
    seeds = [int(s) for s in rng.integers(0, 2**31, n_lattices)]
    if threads is None:
        threads = int(os.environ.get("SIGMA_LATTICE_THREADS", "1") or 1)
    jobs = list(zip(lattices, seeds))

    def work(job):
        lat, s = job
        return check_lattice(lat, s, perturb_gamma2)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(work, jobs))
    else:
        rows = [work(j) for j in jobs]

    results = {name: IdentityResult(name) for name in IDENTITIES}
    for lat, row in zip(lattices, rows):
        for name in IDENTITIES:
            r = results[name]
            r.checked += 1
            val = row[name]
            r.worst = max(r.worst, val)
            if not val < TOLERANCES[name]:
                r.failures.append((lat, val))
    ok = all(not r.failures for r in results.values())
    return ok, results, lattices


def format_table(results) -> str:
    lines = [f"{'identity':<18}{'status':<8}{'passed':>10}{'worst':>14}{'tol':>10}"]
    for name in IDENTITIES:
        r = results[name]
        status = "PASS" if not r.failures else "FAIL"
        passed = f"{r.checked - len(r.failures)}/{r.checked}"
        lines.append(f"{name:<18}{status:<8}{passed:>10}{r.worst:>14.3e}{TOLERANCES[name]:>10.0e}")
    for name in IDENTITIES:
        for lat, val in results[name].failures[:5]:
            lines.append(f"FAILED {name}: residual {val:.3e} on lattice {lat.to_json()}")
    return "\n".join(lines)
