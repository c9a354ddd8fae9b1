import numpy as np
import pytest
from scipy.integrate import quad
from scipy.special import k0

from radwig import (DensityMatrixV, DomainError, Grid1D, GridAlignmentError,
                    GridMismatchError, TruncationError, UnsupportedOrderError,
                    ValidationError, WavefunctionV, WignerGrid,
                    default_vbar_grid, dilaton_coherent, dilaton_vacuum,
                    marginal_momentum, marginal_position, momentum_transform,
                    overlap, s_smooth, schwinger_density, vbar_schwinger_l0,
                    wigner_from_density, wigner_l0_closed, wigner_l0_grid)

GAMMA = Grid1D(-3.0, 2.0, 126)
DELTA = Grid1D(-4.0, 4.0, 81)


@pytest.fixture(scope="module")
def vacuum_rho():
    grid = Grid1D(-8.0, 8.0, 1601)
    psi = WavefunctionV(grid, dilaton_vacuum("vbar", grid.points))
    return DensityMatrixV.from_pure(psi)


# ------------------------------------------------------ density matrices

def test_density_matrix_validation():
    grid = Grid1D(-1.0, 1.0, 3)
    good = np.diag([1.0, 1.0, 1.0]) / 3.0
    rho = DensityMatrixV(grid, good)
    assert rho.trace == pytest.approx(1.0)
    assert rho.min_eigenvalue() >= -1e-12
    bad_herm = good + 1e-5 * np.array([[0, 1j, 0], [0, 0, 0], [0, 0, 0]])
    with pytest.raises(ValidationError):
        DensityMatrixV(grid, bad_herm)
    with pytest.raises(ValidationError):
        DensityMatrixV(grid, 2.0 * good)


def test_density_matrix_mixture_is_psd():
    grid = Grid1D(-8.0, 8.0, 401)
    states = [
        WavefunctionV(grid, dilaton_vacuum("vbar", grid.points)),
        dilaton_coherent(0.4, grid),
    ]
    rho = DensityMatrixV.from_mixture([0.25, 0.75], states)
    assert rho.trace == pytest.approx(1.0, abs=1e-12)
    assert rho.min_eigenvalue() >= -1e-8
    with pytest.raises(ValidationError):
        DensityMatrixV.from_mixture([0.5, 0.2], states)


# ----------------------------------------------- density-matrix route

def test_vacuum_wigner_is_gaussian(vacuum_rho):
    gamma = Grid1D(-4.0, 4.0, 161)
    delta = Grid1D(-4.0, 4.0, 161)
    w = wigner_from_density(vacuum_rho, gamma, delta)
    gg, dd = np.meshgrid(gamma.points, delta.points, indexing="ij")
    oracle = np.exp(-gg ** 2 - dd ** 2) / np.pi
    assert np.abs(w.values - oracle).max() < 1e-6
    assert w.meta["max_imag"] < 1e-8


def test_density_route_matches_closed_form():
    rho = schwinger_density(0)
    w_dens = wigner_from_density(rho, GAMMA, DELTA)
    w_closed = wigner_l0_grid(0, GAMMA, DELTA)
    assert np.abs(w_dens.values - w_closed.values).max() < 1e-6


def test_alignment_error_without_interpolation():
    rho = schwinger_density(0)
    bad = Grid1D(-3.0 + 0.0013, 2.0, 126)
    with pytest.raises(GridAlignmentError):
        wigner_from_density(rho, bad, DELTA)
    outside = Grid1D(-11.0, 2.0, 14)
    with pytest.raises(GridAlignmentError):
        wigner_from_density(rho, outside, DELTA)


# ------------------------------------------------------ closed form

def test_point_value_bessel_oracle():
    ours = wigner_l0_closed(0, 0.0, 0.0)
    bessel = 2.0 / np.pi * k0(1.0)
    brute, _ = quad(lambda u: np.exp(-np.cosh(u)), 0, 30, limit=200)
    brute *= 2.0 / np.pi  # full line, and the overall 1/pi
    assert ours == pytest.approx(bessel, abs=1e-10)
    assert ours == pytest.approx(brute, abs=1e-8)
    assert ours == pytest.approx(0.268032, abs=1e-6)


def test_scalar_matches_grid():
    rng = np.random.default_rng(5)
    for l in range(4):
        w = wigner_l0_grid(l, GAMMA, DELTA)
        for _ in range(5):
            i = int(rng.integers(0, GAMMA.n_points))
            j = int(rng.integers(0, DELTA.n_points))
            scalar = wigner_l0_closed(l, GAMMA.points[i], DELTA.points[j])
            assert scalar == pytest.approx(w.values[i, j], abs=1e-8)


def test_sine_component_vanishes():
    # even modulus in the integration variable: the sine transform is zero
    for gamma, delta in [(0.0, 1.0), (-0.5, 2.5), (0.7, 0.3)]:
        z = np.exp(2 * gamma)
        from radwig.special import laguerre_log

        def even_part(eps, z=z):
            log_p, s_p = laguerre_log(2, 0.0, np.array([z * np.exp(2 * eps)]))
            log_m, s_m = laguerre_log(2, 0.0, np.array([z * np.exp(-2 * eps)]))
            return float(s_p[0] * s_m[0]
                         * np.exp(-z * np.cosh(2 * eps) + log_p[0] + log_m[0]))

        full, _ = quad(even_part, -6.0, 6.0, weight="sin", wvar=2 * delta,
                       limit=200)
        assert abs(full) < 1e-10


def test_closed_form_even_in_delta():
    w = wigner_l0_grid(2, GAMMA, Grid1D(-3.0, 3.0, 121))
    assert np.abs(w.values - w.values[:, ::-1]).max() < 1e-12


def test_gamma_guard():
    deep = Grid1D(-8.0, 2.0, 201)
    with pytest.raises(DomainError):
        wigner_l0_grid(0, deep, DELTA)
    with pytest.raises(DomainError):
        wigner_l0_closed(0, -7.0, 0.0)
    w = wigner_l0_grid(0, deep, DELTA, allow_deep_tail=True)
    assert np.isfinite(w.values).all()


def test_normalization_single_level():
    gamma = Grid1D(-12.0, 2.0, 701)
    delta = Grid1D(-26.0, 26.0, 1041)
    w = wigner_l0_grid(1, gamma, delta, allow_deep_tail=True)
    assert w.total() == pytest.approx(1.0, abs=1e-6)


def test_degree_cap():
    with pytest.raises(DomainError):
        wigner_l0_closed(65, 0.0, 0.0)


# -------------------------------------------------------- marginals

def test_position_marginal_matches_state_density():
    # the exp(2 gamma) left tail carries ~6e-6 of mass below gamma = -6,
    # so the unit-integral check needs the deep window
    gamma = Grid1D(-12.0, 2.0, 701)
    delta = Grid1D(-26.0, 26.0, 1041)
    for l in (0, 2):
        w = wigner_l0_grid(l, gamma, delta, allow_deep_tail=True)
        marg = marginal_position(w)
        oracle = vbar_schwinger_l0(l, gamma.points) ** 2
        assert np.abs(marg - oracle).max() < 1e-5
        assert np.trapezoid(marg, gamma.points) == pytest.approx(1.0, abs=1e-6)


def test_vacuum_marginals_gaussian(vacuum_rho):
    gamma = Grid1D(-8.0, 8.0, 321)
    delta = Grid1D(-8.0, 8.0, 321)
    w = wigner_from_density(vacuum_rho, gamma, delta)
    pos = marginal_position(w)
    mom = marginal_momentum(w)
    oracle = np.pi ** -0.5 * np.exp(-gamma.points ** 2)
    assert np.abs(pos - oracle).max() < 1e-6
    assert np.abs(mom - oracle).max() < 1e-6


def test_momentum_marginal_matches_fourier_density():
    gamma = Grid1D(-13.0, 2.0, 751)
    delta = Grid1D(-4.0, 4.0, 321)
    w = wigner_l0_grid(1, gamma, delta, allow_deep_tail=True)
    marg = marginal_momentum(w)
    vgrid = Grid1D(-13.0, 2.0, 1501)
    psi = WavefunctionV(vgrid, vbar_schwinger_l0(1, vgrid.points),
                        norm_tol=1e-5)
    with pytest.warns(UserWarning):
        tilde = momentum_transform(psi, delta)
    assert np.abs(marg - np.abs(tilde) ** 2).max() < 1e-5


def test_momentum_marginal_even_for_real_state():
    gamma = Grid1D(-12.0, 2.0, 701)
    delta = Grid1D(-6.0, 6.0, 241)
    w = wigner_l0_grid(3, gamma, delta, allow_deep_tail=True)
    mom = marginal_momentum(w)
    assert np.abs(mom - mom[::-1]).max() < 1e-8


def test_marginal_truncation_error():
    w = wigner_l0_grid(1, GAMMA, Grid1D(-2.0, 2.0, 81))
    with pytest.raises(TruncationError):
        marginal_position(w)
    narrow_gamma = wigner_l0_grid(1, Grid1D(-1.0, 1.0, 51),
                                  Grid1D(-4.0, 4.0, 161))
    with pytest.raises(TruncationError):
        marginal_momentum(narrow_gamma)


# ---------------------------------------------------------- overlap

@pytest.fixture(scope="module")
def overlap_grids():
    gamma = Grid1D(-5.0, 2.0, 351)
    delta = Grid1D(-13.0, 13.0, 1041)
    return {l: wigner_l0_grid(l, gamma, delta) for l in range(2)}


def test_overlap_purity_and_orthogonality(overlap_grids):
    assert overlap(overlap_grids[0], overlap_grids[0]) == pytest.approx(
        1.0, abs=1e-5)
    assert overlap(overlap_grids[0], overlap_grids[1]) == pytest.approx(
        0.0, abs=1e-5)
    assert overlap_grids[0].meta["overlap_factor"] == pytest.approx(
        2.0 * np.pi)


def test_overlap_vacuum_coherent():
    # |<0|alpha>|^2 = e^{-|alpha|^2}; alpha = 2 displaces the log-radius
    # Gaussian by 2 sqrt(2)
    grid = Grid1D(-8.0, 8.0, 1601)
    gamma = Grid1D(-6.0, 6.0, 601)
    delta = Grid1D(-6.0, 6.0, 601)
    rho0 = DensityMatrixV.from_pure(
        WavefunctionV(grid, dilaton_vacuum("vbar", grid.points)))
    rho_a = DensityMatrixV.from_pure(dilaton_coherent(2.0, grid))
    w0 = wigner_from_density(rho0, gamma, delta)
    wa = wigner_from_density(rho_a, gamma, delta)
    got = overlap(w0, wa)
    psi0 = dilaton_vacuum("vbar", grid.points)
    psia = dilaton_coherent(2.0, grid).samples
    braket = np.abs(np.sum(np.conj(psi0) * psia) * grid.spacing) ** 2
    assert got == pytest.approx(np.exp(-4.0), abs=1e-5)
    assert got == pytest.approx(braket, abs=1e-5)
    assert got == pytest.approx(0.018316, abs=1e-5)


def test_overlap_grid_mismatch(overlap_grids):
    other = wigner_l0_grid(0, GAMMA, DELTA)
    with pytest.raises(GridMismatchError):
        overlap(overlap_grids[0], other)


# ------------------------------------------------------- negativity

def test_negativity_and_lower_bound():
    for l in range(4):
        w = wigner_l0_grid(l, GAMMA, DELTA)
        assert w.min_value() >= -1.0 / np.pi - 1e-6
        if l >= 1:
            assert w.min_value() < -1e-3


# -------------------------------------------------------- smoothing

def test_s_smooth_identity_and_refusal():
    w = wigner_l0_grid(1, GAMMA, DELTA)
    same = s_smooth(w, 0.0)
    assert np.array_equal(same.values, w.values)
    with pytest.raises(UnsupportedOrderError):
        s_smooth(w, 0.5)


def test_s_smooth_mass_preservation(vacuum_rho):
    gamma = Grid1D(-8.0, 8.0, 321)
    delta = Grid1D(-8.0, 8.0, 321)
    w = wigner_from_density(vacuum_rho, gamma, delta)
    q = s_smooth(w, -1.0)
    assert q.total() == pytest.approx(w.total(), abs=1e-8)
    assert q.meta["s"] == -1.0


def test_s_smooth_husimi_nonnegative():
    gamma = Grid1D(-11.0, 6.0, 681)
    delta = Grid1D(-12.0, 12.0, 481)
    w = wigner_l0_grid(1, gamma, delta, allow_deep_tail=True)
    q = s_smooth(w, -1.0)
    margin = 6.5 * np.sqrt(0.5)
    gi = (gamma.points > gamma.min + margin) & (gamma.points < gamma.max - margin)
    di = (delta.points > delta.min + margin) & (delta.points < delta.max - margin)
    assert q.values[np.ix_(gi, di)].min() >= -1e-9
    # the unsmoothed function is deeply negative there
    assert w.values[np.ix_(gi, di)].min() < -1e-3


def test_s_smooth_vacuum_against_analytic_convolution(vacuum_rho):
    # variance 1/2 (vacuum) + 1/2 (kernel) per axis: the peak 1/pi
    # Gaussian widens into (1/2pi) e^{-(g^2+d^2)/2}
    gamma = Grid1D(-8.0, 8.0, 321)
    delta = Grid1D(-8.0, 8.0, 321)
    w = wigner_from_density(vacuum_rho, gamma, delta)
    q = s_smooth(w, -1.0)
    gg, dd = np.meshgrid(gamma.points, delta.points, indexing="ij")
    oracle = np.exp(-(gg ** 2 + dd ** 2) / 2.0) / (2.0 * np.pi)
    assert np.abs(q.values - oracle).max() < 1e-6


# ------------------------------------------------------- WignerGrid

def test_wigner_grid_validation():
    with pytest.raises(ValidationError):
        WignerGrid(GAMMA, DELTA, np.zeros((3, 3)))
    vals = np.zeros((GAMMA.n_points, DELTA.n_points))
    vals[0, 0] = np.nan
    with pytest.raises(ValidationError):
        WignerGrid(GAMMA, DELTA, vals)
