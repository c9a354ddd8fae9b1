"""Closed-form states of the radial problem in the r and log-radius bases.

Conventions (hbar = 1 throughout):

* ``r`` basis: kets normalised against the measure ``r dr``, so a state
  psi(r) satisfies  integral r |psi(r)|^2 dr = 1.
* ``vbar`` basis: the log-radius coordinate vbar = ln r with rescaled
  kets such that the inner product is a plain delta(vbar - vbar') and the
  measure is ``dvbar``.  A state converts between the two pictures via
  psi_vbar(vbar) = exp(vbar) * psi_r(exp(vbar)).
"""

import warnings
from fractions import Fraction

import numpy as np
from scipy.interpolate import PchipInterpolator

from .errors import DomainError, TruncationWarning, ValidationError
from .grids import Grid1D
from .special import laguerre_log, log_factorial

__all__ = [
    "WavefunctionV", "WavefunctionR", "SchwingerLabel",
    "radial_wavefunction", "to_vbar", "vbar_schwinger_l0",
    "dilaton_vacuum", "dilaton_coherent", "default_vbar_grid",
]

_SQRT2 = np.sqrt(2.0)
_VACUUM_NORM = np.pi ** -0.25


def default_vbar_grid() -> Grid1D:
    """Default log-radius axis: [-9.5, 4] at spacing 0.01.

    Wide enough that every bound state used in this package (oscillator
    radial levels up to l ~ 40 and moderately displaced Gaussians) keeps
    its tail mass outside the window below 1e-8; the slowly decaying
    exp(vbar) left tail of the oscillator states is what forces the deep
    negative end.
    """
    return Grid1D(-9.5, 4.0, 1351)


class WavefunctionV:
    """Complex state samples over a uniform log-radius grid.

    Normalisation convention: sum(|psi|^2) * spacing == 1 within
    ``norm_tol`` (pass ``norm_tol=None`` to skip the check for raw
    intermediate data).
    """

    def __init__(self, grid: Grid1D, samples, *, norm_tol=1e-6, meta=None):
        samples = np.asarray(samples, dtype=complex)
        if samples.shape != (grid.n_points,):
            raise ValidationError(
                f"samples shape {samples.shape} does not match grid length {grid.n_points}")
        if not np.all(np.isfinite(samples)):
            raise ValidationError("wavefunction samples must be finite")
        self.grid = grid
        self.samples = samples
        self.meta = dict(meta) if meta else {}
        if norm_tol is not None:
            n = self.norm()
            if abs(n - 1.0) > norm_tol:
                raise ValidationError(
                    f"state norm {n} deviates from 1 by more than {norm_tol}")

    def norm(self) -> float:
        return float(np.sum(np.abs(self.samples) ** 2) * self.grid.spacing)

    def probability_density(self) -> np.ndarray:
        return np.abs(self.samples) ** 2


class WavefunctionR:
    """Complex state samples over strictly positive radii.

    The radius samples may be non-uniform (log spacing is fine).
    Normalisation uses the radial measure: trapezoid of r |psi|^2 over r.
    """

    def __init__(self, r, samples, *, norm_tol=1e-6, meta=None):
        r = np.asarray(r, dtype=float)
        samples = np.asarray(samples, dtype=complex)
        if r.ndim != 1 or r.size < 2:
            raise ValidationError("need at least two radius samples")
        if samples.shape != r.shape:
            raise ValidationError("samples and radii must have the same length")
        if np.any(r <= 0):
            raise DomainError("radii must be strictly positive")
        if np.any(np.diff(r) <= 0):
            raise ValidationError("radii must be strictly increasing")
        if not np.all(np.isfinite(samples)):
            raise ValidationError("wavefunction samples must be finite")
        self.r = r
        self.samples = samples
        self.meta = dict(meta) if meta else {}
        if norm_tol is not None:
            n = self.norm()
            if abs(n - 1.0) > norm_tol:
                raise ValidationError(
                    f"state norm {n} deviates from 1 by more than {norm_tol}")

    def norm(self) -> float:
        return float(np.trapezoid(self.r * np.abs(self.samples) ** 2, self.r))

    @property
    def spacing(self) -> float:
        """Uniform spacing, or raise if the radii are not uniform."""
        d = np.diff(self.r)
        if not np.allclose(d, d[0], rtol=1e-9, atol=0.0):
            raise ValidationError("radius samples are not uniformly spaced")
        return float(d[0])


class SchwingerLabel:
    """Angular-momentum label (l, m) of a 2D oscillator level.

    Stored internally as the circular-mode occupation numbers
    ``n_plus = l + m`` and ``n_minus = l - m`` so that half-integer labels
    stay exact; ``l`` and ``m`` are exposed as `fractions.Fraction`.

    Half-integer labels (odd total quanta) are valid inputs everywhere but
    are exercised far less by the closed-form cross-checks, which only
    reach integer l at m = 0; ``experimental`` flags them.
    """

    def __init__(self, l, m, beta: float = 1.0):
        lf, mf = Fraction(l), Fraction(m)
        n_plus, n_minus = lf + mf, lf - mf
        if n_plus.denominator != 1 or n_minus.denominator != 1:
            raise DomainError(f"l+m and l-m must be integers, got l={l}, m={m}")
        if n_plus < 0 or n_minus < 0:
            raise DomainError(f"l+m and l-m must be nonnegative, got l={l}, m={m}")
        if beta <= 0:
            raise DomainError(f"length scale beta must be positive, got {beta}")
        self.n_plus = int(n_plus)
        self.n_minus = int(n_minus)
        self.beta = float(beta)

    @classmethod
    def from_occupations(cls, n_plus: int, n_minus: int, beta: float = 1.0):
        return cls(Fraction(n_plus + n_minus, 2), Fraction(n_plus - n_minus, 2), beta)

    @property
    def l(self) -> Fraction:
        return Fraction(self.n_plus + self.n_minus, 2)

    @property
    def m(self) -> Fraction:
        return Fraction(self.n_plus - self.n_minus, 2)

    @property
    def experimental(self) -> bool:
        """True for half-integer (l, m), which only the Fock pipeline reaches."""
        return (self.n_plus + self.n_minus) % 2 == 1

    def __eq__(self, other):
        return (isinstance(other, SchwingerLabel)
                and (self.n_plus, self.n_minus, self.beta)
                == (other.n_plus, other.n_minus, other.beta))

    def __hash__(self):
        return hash((self.n_plus, self.n_minus, self.beta))

    def __repr__(self):
        return f"SchwingerLabel(l={self.l}, m={self.m}, beta={self.beta})"


def radial_wavefunction(label: SchwingerLabel, r):
    """Radial eigenfunction R_{l,m}(r) of the 2D isotropic oscillator.

    R_{l,m}(r) = beta * sqrt(2 (l-|m|)! / (l+|m|)!) (beta r)^{2|m|}
                 * exp(-beta^2 r^2 / 2) * L_{l-|m|}^{2|m|}(beta^2 r^2)
                 * (-1)^{l-|m|}

    normalised so that  integral r R^2 dr = 1.  Assembled in the log
    domain so large degrees and radii never overflow.  Accepts a scalar
    or an array of radii; r must be strictly positive.
    """
    r_arr = np.asarray(r, dtype=float)
    scalar = r_arr.ndim == 0
    r_arr = np.atleast_1d(r_arr)
    if np.any(r_arr <= 0) or not np.all(np.isfinite(r_arr)):
        raise DomainError("radius must be strictly positive and finite")

    degree = min(label.n_plus, label.n_minus)      # l - |m|
    m2 = abs(label.n_plus - label.n_minus)         # 2 |m|
    beta = label.beta
    x = (beta * r_arr) ** 2

    lag_log, lag_sign = laguerre_log(degree, float(m2), x)
    log_pref = (np.log(beta)
                + 0.5 * (np.log(2.0) + log_factorial(degree)
                         - log_factorial(degree + m2)))
    exponent = log_pref + m2 * np.log(beta * r_arr) - x / 2.0 + lag_log
    sign = lag_sign * (-1.0) ** degree
    with np.errstate(over="ignore"):
        out = sign * np.exp(exponent)
    return float(out[0]) if scalar else out


def vbar_schwinger_l0(l: int, vbar):
    """Log-radius wavefunction of the zero-angular-momentum level l.

    <vbar | l, 0> = sqrt(2) e^{vbar} e^{-e^{2 vbar}/2} L_l(e^{2 vbar}) (-1)^l

    (hbar = 1, beta = 1).  Evaluated log-safely, so arguments up to
    vbar ~ +10 simply underflow to 0 instead of overflowing.  Accepts a
    scalar or array.
    """
    if l < 0 or l != int(l):
        raise DomainError(f"l must be a nonnegative integer, got {l}")
    v = np.asarray(vbar, dtype=float)
    scalar = v.ndim == 0
    v = np.atleast_1d(v)
    x = np.exp(2.0 * v)
    lag_log, lag_sign = laguerre_log(int(l), 0.0, x)
    exponent = 0.5 * np.log(2.0) + v - x / 2.0 + lag_log
    out = lag_sign * (-1.0) ** int(l) * np.exp(exponent)
    return float(out[0]) if scalar else out


def dilaton_vacuum(basis: str, point):
    """Ground state annihilated by (vbar + i P) / sqrt(2).

    In the vbar basis this is the unit-norm Gaussian
    pi^{-1/4} exp(-vbar^2 / 2); in the r basis it is the log-normal-like
    profile (pi^{-1/4} / r) exp(-(ln r)^2 / 2), unit-norm against r dr.
    Accepts a scalar or array ``point``.
    """
    p = np.asarray(point, dtype=float)
    scalar = p.ndim == 0
    p = np.atleast_1d(p)
    if basis == "vbar":
        out = _VACUUM_NORM * np.exp(-p ** 2 / 2.0)
    elif basis == "r":
        if np.any(p <= 0):
            raise DomainError("radius must be strictly positive")
        lnr = np.log(p)
        out = _VACUUM_NORM / p * np.exp(-lnr ** 2 / 2.0)
    else:
        raise DomainError(f"basis must be 'vbar' or 'r', got {basis!r}")
    return float(out[0]) if scalar else out


def dilaton_coherent(alpha: complex, grid: Grid1D) -> WavefunctionV:
    """Displaced vacuum D(alpha)|0> sampled on ``grid``.

    The displacement exp(alpha a^dag - alpha* a) with
    a = (vbar + i P)/sqrt(2) splits into a phase, a momentum boost and a
    translation, giving the minimum-uncertainty Gaussian

        pi^{-1/4} exp(i p0 (vbar - v0/2) - (vbar - v0)^2 / 2)

    with v0 = sqrt(2) Re alpha and p0 = sqrt(2) Im alpha, so
    <vbar> = v0, <P> = p0 and both spreads equal 1/sqrt(2).  Warns if the
    grid holds less than 1 - 1e-8 of the probability.
    """
    alpha = complex(alpha)
    v0 = _SQRT2 * alpha.real
    p0 = _SQRT2 * alpha.imag
    from scipy.special import erfc
    lost = 0.5 * (erfc(grid.max - v0) + erfc(v0 - grid.min))
    if lost > 1e-8:
        warnings.warn(
            f"grid [{grid.min}, {grid.max}] holds only {1 - lost:.10f} of the "
            "coherent-state probability", TruncationWarning, stacklevel=2)
    v = grid.points
    samples = _VACUUM_NORM * np.exp(1j * p0 * (v - v0 / 2.0) - (v - v0) ** 2 / 2.0)
    tol = max(1e-6, 10.0 * lost)
    return WavefunctionV(grid, samples, norm_tol=tol,
                         meta={"alpha": alpha, "lost_mass": float(lost)})


def to_vbar(psi_r, target: Grid1D) -> WavefunctionV:
    """Re-express an r-basis state in the rescaled log-radius basis.

    psi_vbar(vbar) = exp(vbar) * psi_r(exp(vbar)); the change of variables
    dvbar = dr / r absorbs the radial measure, so the norm carries over.

    Parameters
    ----------
    psi_r : WavefunctionR or callable
        Sampled state (interpolated with a monotone cubic, which cannot
        ring near r = 0) or a closed-form callable evaluated exactly.
    target : Grid1D
        Log-radius axis for the output.

    Target points with exp(vbar) outside the sampled radii are filled
    with zeros and flagged; if no target point is covered at all this is
    an error.
    """
    v = target.points
    r_t = np.exp(v)

    if callable(psi_r):
        samples = np.exp(v) * np.asarray(psi_r(r_t), dtype=complex)
        return WavefunctionV(target, samples)

    inside = (r_t >= psi_r.r[0]) & (r_t <= psi_r.r[-1])
    if not np.any(inside):
        raise DomainError(
            "target log-radius range does not overlap the sampled radii")
    meta = {}
    if not np.all(inside):
        warnings.warn(
            f"{int(np.sum(~inside))} target points fall outside the sampled "
            "radii and were set to zero", TruncationWarning, stacklevel=2)
        meta["clipped"] = True
    interp_re = PchipInterpolator(psi_r.r, psi_r.samples.real)
    interp_im = PchipInterpolator(psi_r.r, psi_r.samples.imag)
    samples = np.zeros(target.n_points, dtype=complex)
    samples[inside] = np.exp(v[inside]) * (
        interp_re(r_t[inside]) + 1j * interp_im(r_t[inside]))
    return WavefunctionV(target, samples, norm_tol=1e-4, meta=meta)
