"""Named numerical invariants behind the ``radwig check`` command.

Every invariant measures one residual; it passes when the residual is at
most its tolerance.  The registry doubles as the machine-checkable record
of the operator algebra: the canonical commutators, the adjoint action of
the scale displacement, the annihilation of the ground state, and the
delta-normalisation of the displacement trace kernel (measured in smeared
form, since delta functions are not grid objects).
"""

from dataclasses import dataclass

import numpy as np

from .grids import Grid1D
from .operators import apply_displacement, apply_pr, expectation
from .special import laguerre_assoc
from .states import (SchwingerLabel, WavefunctionR, WavefunctionV,
                     dilaton_coherent, dilaton_vacuum, radial_wavefunction,
                     vbar_schwinger_l0)
from .wigner import (WIGNER_LOWER_BOUND, marginal_position, s_smooth,
                     schwinger_density, wigner_from_density, wigner_l0_grid)

__all__ = ["InvariantResult", "available_invariants", "run_invariants"]


@dataclass
class InvariantResult:
    name: str
    description: str
    measured: float
    tolerance: float
    passed: bool

    def as_dict(self) -> dict:
        return {
            "invariant": self.name,
            "description": self.description,
            "measured": self.measured,
            "tolerance": self.tolerance,
            "pass": self.passed,
        }


def _l2(samples: np.ndarray, spacing: float) -> float:
    return float(np.sqrt(np.sum(np.abs(samples) ** 2) * spacing))


def _gaussian_suite():
    """Smooth, strongly edge-decayed log-radius test states."""
    grid = Grid1D(-10.0, 10.0, 2001)
    v = grid.points
    states = [
        WavefunctionV(grid, dilaton_vacuum("vbar", v)),
        dilaton_coherent(0.4 + 0.3j, grid),
        dilaton_coherent(-0.6 + 0.8j, grid),
        WavefunctionV(grid, (2.0 / np.pi) ** 0.25 * np.exp(-((v + 0.5) ** 2))),
    ]
    two_bump = np.exp(-((v - 1.2) ** 2) / 2) + 0.7j * np.exp(-((v + 1.0) ** 2) / 2)
    two_bump /= np.sqrt(np.sum(np.abs(two_bump) ** 2) * grid.spacing)
    states.append(WavefunctionV(grid, two_bump))
    return grid, states


def _radial_suite():
    # the window below r_min holds ~2e-5 of the (exact) closed-form mass
    r = np.linspace(0.004, 10.0, 2500)
    labels = [(0, 0), (1, 0), (1, 1), (2, 1)]
    return r, [WavefunctionR(r, radial_wavefunction(SchwingerLabel(l, m), r),
                             norm_tol=1e-4)
               for l, m in labels]


def _check_laguerre_recurrence() -> float:
    rng = np.random.default_rng(20210)
    worst = 0.0
    for _ in range(200):
        n = int(rng.integers(2, 21))
        alpha = float(rng.choice([0.0, 1.0, 2.0, 3.0]))
        x = float(rng.uniform(0.0, 50.0))
        ln = laguerre_assoc(n, alpha, x).value
        l1 = laguerre_assoc(n - 1, alpha, x).value
        l2 = laguerre_assoc(n - 2, alpha, x).value
        resid = n * ln - (2 * n - 1 + alpha - x) * l1 + (n - 1 + alpha) * l2
        scale = max(abs(n * ln), abs((2 * n - 1 + alpha - x) * l1),
                    abs((n - 1 + alpha) * l2), 1e-300)
        worst = max(worst, abs(resid) / scale)
    return worst


def _check_laguerre_derivative() -> float:
    rng = np.random.default_rng(20211)
    step = 1e-6
    worst = 0.0
    for _ in range(200):
        n = int(rng.integers(1, 16))
        alpha = float(rng.choice([0.0, 1.0, 2.0]))
        x = float(rng.uniform(0.1, 20.0))
        fd = (laguerre_assoc(n, alpha, x + step).value
              - laguerre_assoc(n, alpha, x - step).value) / (2 * step)
        exact = -laguerre_assoc(n - 1, alpha + 1.0, x).value
        worst = max(worst, abs(fd - exact) / max(1.0, abs(exact)))
    return worst


def _check_orthonormality() -> float:
    grid = Grid1D(-12.0, 4.0, 1601)
    v = grid.points
    psis = [vbar_schwinger_l0(l, v) for l in range(6)]
    worst = 0.0
    for i in range(6):
        for j in range(6):
            val = np.sum(psis[i] * psis[j]) * grid.spacing
            worst = max(worst, abs(val - (1.0 if i == j else 0.0)))
    return float(worst)


def _check_weyl_commutator() -> float:
    grid, states = _gaussian_suite()
    v = grid.points
    worst = 0.0
    for psi in states:
        p_psi = apply_pr(psi)
        vp = WavefunctionV(grid, v * psi.samples, norm_tol=None)
        resid = v * p_psi - apply_pr(vp) - 1j * psi.samples
        worst = max(worst, _l2(resid, grid.spacing))
    return worst


def _check_dilation_commutator() -> float:
    r, states = _radial_suite()
    h = r[1] - r[0]
    worst = 0.0
    for psi in states:
        p_psi = apply_pr(psi)
        rp = WavefunctionR(r, r * psi.samples, norm_tol=None)
        resid = r * p_psi - apply_pr(rp) - 1j * r * psi.samples
        worst = max(worst, float(np.sqrt(np.sum(r * np.abs(resid) ** 2) * h)))
    return worst


def _check_vacuum_annihilation() -> float:
    grid = Grid1D(-10.0, 10.0, 2001)
    v = grid.points
    psi = WavefunctionV(grid, dilaton_vacuum("vbar", v))
    resid = (v * psi.samples + 1j * apply_pr(psi)) / np.sqrt(2.0)
    return _l2(resid, grid.spacing)


def _check_exponentiated_dilation() -> float:
    grid, states = _gaussian_suite()
    worst = 0.0
    for sigma in (-1.0, -0.5, 0.5, 1.0):
        psi = states[1]
        before = expectation("R", psi).real
        after = expectation("R", apply_displacement(0.0, -sigma, psi)).real
        worst = max(worst, abs(after - np.exp(sigma) * before) / abs(before))
    return worst


def _check_displacement_r_adjoint() -> float:
    grid, states = _gaussian_suite()
    psi = states[2]
    before = expectation("R", psi).real
    worst = 0.0
    for lam in (-1.0, -0.3, 0.5, 1.0):
        for mu in (-1.0, -0.4, 0.7, 1.0):
            after = expectation("R", apply_displacement(lam, mu, psi)).real
            worst = max(worst, abs(after - np.exp(-mu) * before) / abs(before))
    return worst


def _check_displacement_pr_adjoint() -> float:
    grid, states = _gaussian_suite()
    psi = states[1]
    before = expectation("Pr", psi).real
    worst = 0.0
    for lam in (-1.0, -0.3, 0.5, 1.0):
        for mu in (-1.0, 0.4, 1.0):
            after = expectation("Pr", apply_displacement(lam, mu, psi)).real
            worst = max(worst, abs(after - (before + lam)))
    return worst


def _check_displacement_composition() -> float:
    grid, states = _gaussian_suite()
    worst = 0.0
    for mu1, mu2 in ((0.3, 0.5), (-0.4, 0.9), (1.0, -1.0)):
        for psi in states[:3]:
            once = apply_displacement(0.0, mu1 + mu2, psi).samples
            twice = apply_displacement(0.0, mu1, apply_displacement(0.0, mu2, psi)).samples
            worst = max(worst, _l2(once - twice, grid.spacing))
    return worst


def _check_pr_self_adjoint() -> float:
    grid, states = _gaussian_suite()
    h = grid.spacing
    worst = 0.0
    for i in range(len(states)):
        for j in range(i + 1, len(states)):
            phi, psi = states[i], states[j]
            lhs = np.sum(np.conj(phi.samples) * apply_pr(psi)) * h
            rhs = np.sum(np.conj(apply_pr(phi)) * psi.samples) * h
            worst = max(worst, abs(lhs - rhs))
    return worst


def _check_trace_kernel() -> float:
    """Smeared delta-normalisation of the displacement trace.

    Tr[D(l, m) D^dag(l', m')] is a product of delta functions, so it is
    probed with narrow Gaussian packets: summing the packet matrix
    elements over packet centres yields a kernel peaked at (l, m) whose
    double integral must equal 2 pi times the packet autocorrelation
    area, independent of m.  Returns the relative deviation from that
    prediction (worst over two mu values).
    """
    grid = Grid1D(-10.0, 10.0, 2001)
    v = grid.points
    h = grid.spacing
    width = 0.05
    centers = np.arange(-2.0, 2.0001, 0.2)
    packets = []
    for c in centers:
        g = (np.pi * width ** 2) ** -0.25 * np.exp(-((v - c) ** 2) / (2 * width ** 2))
        g = g / np.sqrt(np.sum(g ** 2) * h)
        packets.append(WavefunctionV(grid, g))
    c_step = centers[1] - centers[0]

    def smeared(lam, mu, lam_p, mu_p):
        total = 0.0 + 0.0j
        for g in packets:
            x = apply_displacement(-lam_p, -mu_p, g)       # D^dag(lam', mu')
            x = apply_displacement(lam, mu, x)
            total += np.sum(np.conj(g.samples) * x.samples) * h
        return total * c_step

    expected = 2.0 * np.pi * 2.0 * width * np.sqrt(np.pi)
    lam0 = 0.7
    worst = 0.0
    for mu0 in (0.2, 0.6):
        etas = np.linspace(-2.5 * np.pi, 2.5 * np.pi, 158)
        t_eta = np.array([smeared(lam0, mu0, lam0 + e, mu0) for e in etas])
        gaps = np.linspace(-0.4, 0.4, 41)
        t_gap = np.array([smeared(lam0, mu0, lam0, mu0 - d) for d in gaps])
        peak = smeared(lam0, mu0, lam0, mu0)
        measured = (np.trapezoid(t_eta, etas) * np.trapezoid(t_gap, gaps) / peak).real
        worst = max(worst, abs(measured / expected - 1.0))
    return worst


def _check_wigner_cross_route() -> float:
    gamma = Grid1D(-3.0, 2.0, 51)
    delta = Grid1D(-4.0, 4.0, 41)
    rho = schwinger_density(1)
    dens = wigner_from_density(rho, gamma, delta)
    closed = wigner_l0_grid(1, gamma, delta)
    return float(np.abs(dens.values - closed.values).max())


def _check_wigner_normalization() -> float:
    gamma = Grid1D(-12.0, 2.0, 701)
    delta = Grid1D(-26.0, 26.0, 1041)
    w = wigner_l0_grid(1, gamma, delta, allow_deep_tail=True)
    return abs(w.total() - 1.0)


def _check_wigner_marginal() -> float:
    gamma = Grid1D(-12.0, 2.0, 701)
    delta = Grid1D(-26.0, 26.0, 1041)
    w = wigner_l0_grid(2, gamma, delta, allow_deep_tail=True)
    marg = marginal_position(w)
    exact = vbar_schwinger_l0(2, gamma.points) ** 2
    return float(np.abs(marg - exact).max())


def _check_wigner_bound() -> float:
    gamma = Grid1D(-3.0, 2.0, 126)
    delta = Grid1D(-4.0, 4.0, 81)
    excess = 0.0
    for l in range(4):
        w = wigner_l0_grid(l, gamma, delta)
        excess = max(excess, WIGNER_LOWER_BOUND - w.min_value())
    return max(0.0, excess)


def _check_wigner_negativity() -> float:
    """Shallowest minimum among l = 1..3; must lie below -1e-3."""
    gamma = Grid1D(-3.0, 2.0, 126)
    delta = Grid1D(-4.0, 4.0, 81)
    return max(wigner_l0_grid(l, gamma, delta).min_value() for l in (1, 2, 3))


def _check_husimi_nonnegative() -> float:
    gamma = Grid1D(-11.0, 6.0, 681)
    delta = Grid1D(-12.0, 12.0, 481)
    w = wigner_l0_grid(1, gamma, delta, allow_deep_tail=True)
    q = s_smooth(w, -1.0)
    margin = 6.5 * np.sqrt(0.5)
    gi = (gamma.points > gamma.min + margin) & (gamma.points < gamma.max - margin)
    di = (delta.points > delta.min + margin) & (delta.points < delta.max - margin)
    interior_min = q.values[np.ix_(gi, di)].min()
    return max(0.0, -float(interior_min))


_REGISTRY = [
    ("laguerre-recurrence",
     "three-term recurrence residual, random degrees and arguments",
     1e-10, _check_laguerre_recurrence),
    ("laguerre-derivative",
     "d/dx L_n^a = -L_{n-1}^{a+1} against central differences",
     1e-6, _check_laguerre_derivative),
    ("schwinger-orthonormality",
     "<l,0|l',0> = delta_{ll'} for l, l' <= 5",
     1e-8, _check_orthonormality),
    ("weyl-commutator",
     "L2 residual of ([v, P] - i) psi on the smooth test suite",
     1e-6, _check_weyl_commutator),
    ("dilation-commutator",
     "L2 residual of ([r, P] - i r) psi in the r basis",
     1e-6, _check_dilation_commutator),
    ("vacuum-annihilation",
     "L2 norm of (v + iP) |vacuum> / sqrt(2)",
     1e-6, _check_vacuum_annihilation),
    ("exponentiated-dilation",
     "<r> scales by e^sigma under the exponentiated momentum",
     1e-6, _check_exponentiated_dilation),
    ("displacement-r-adjoint",
     "<r> -> e^{-mu} <r> under D(lam, mu), relative",
     1e-6, _check_displacement_r_adjoint),
    ("displacement-pr-adjoint",
     "<P> -> <P> + lam under D(lam, mu)",
     1e-6, _check_displacement_pr_adjoint),
    ("displacement-composition",
     "D(0, mu1) D(0, mu2) = D(0, mu1 + mu2), L2 discrepancy",
     1e-8, _check_displacement_composition),
    ("pr-self-adjoint",
     "<phi|P psi> = <P phi|psi> on decayed pairs",
     1e-8, _check_pr_self_adjoint),
    ("displacement-trace-kernel",
     "smeared Tr[D D'^dag] integrates to 2 pi x packet area, any mu",
     5e-2, _check_trace_kernel),
    ("wigner-cross-route",
     "density-matrix route equals the closed form for l = 1",
     1e-5, _check_wigner_cross_route),
    ("wigner-normalization",
     "phase-space integral of W_1 equals 1",
     1e-6, _check_wigner_normalization),
    ("wigner-marginal",
     "delta-marginal of W_2 equals the position density",
     1e-5, _check_wigner_marginal),
    ("wigner-bound",
     "W stays above -1/pi",
     1e-6, _check_wigner_bound),
    ("wigner-negativity",
     "min of W_l for l = 1..3 (passes below -1e-3)",
     -1e-3, _check_wigner_negativity),
    ("husimi-nonnegativity",
     "ordering -1 smoothing is nonnegative (grid interior)",
     1e-9, _check_husimi_nonnegative),
]


def available_invariants() -> list:
    return [name for name, _, _, _ in _REGISTRY]


def run_invariants(names=None, tolerance_scale: float = 1.0) -> list:
    """Measure the selected invariants (all by default).

    ``tolerance_scale`` multiplies every tolerance, which is mainly a
    hook for forcing the failure path.
    """
    selected = set(names) if names is not None else None
    unknown = (selected or set()) - set(available_invariants())
    if unknown:
        raise KeyError(f"unknown invariants: {sorted(unknown)}")
    results = []
    for name, description, tol, fn in _REGISTRY:
        if selected is not None and name not in selected:
            continue
        measured = float(fn())
        tol_eff = tol * tolerance_scale
        results.append(InvariantResult(
            name=name, description=description, measured=measured,
            tolerance=tol_eff, passed=measured <= tol_eff))
    return results
