"""Closed-form mode analysis checked against exact rationals and dense oracles."""
import numpy as np
import pytest

from robinlab import (DDParams, bound_margins, build_grid,
                      build_subdomain_system, cj_eigenvalue, corollary_rate,
                      fd_eigenvalue, mode_coefficients, omega, omega_max,
                      reduction_spectrum, sine_basis_vector, theta_star,
                      tilde_lambda, von_neumann_advisor, von_neumann_rho)
from robinlab.grid_fem import assemble_a0
from robinlab.spectral import (COTH_1, mode_arrays, sine_basis_matrix,
                               tilde_lambda_all, von_neumann_rho_via_omega,
                               z_bracket)


def zero_field(x, y):
    return np.zeros_like(np.asarray(x, dtype=float))


def canonical_params(n, theta=3.0 / 7.0):
    return DDParams(gamma1=1.0, gamma2=64.0 * 2 * n, theta=theta)


def test_fd_eigenvalue_values():
    assert fd_eigenvalue(1, 1) == pytest.approx(2.0, abs=1e-15)
    assert fd_eigenvalue(2, 3) == pytest.approx(2.0, abs=1e-15)
    assert fd_eigenvalue(2000, 2000) > 3.99
    with pytest.raises(ValueError):
        fd_eigenvalue(0, 3)
    with pytest.raises(ValueError):
        fd_eigenvalue(4, 3)


def test_sine_basis_single_node():
    assert np.allclose(sine_basis_vector(1, 1), [1.0], atol=1e-15)
    with pytest.raises(ValueError):
        sine_basis_vector(0, 3)
    with pytest.raises(ValueError):
        sine_basis_vector(4, 3)


def test_sine_basis_orthogonal_and_involutory():
    phi = sine_basis_matrix(3)
    assert np.abs(phi.T @ phi - np.eye(3)).max() < 1e-14
    assert np.abs(phi - phi.T).max() < 1e-15
    assert np.abs(phi @ phi - np.eye(3)).max() < 1e-14


def test_sine_basis_diagonalizes_second_difference():
    m = 7
    A = 2.0 * np.eye(m) - np.eye(m, k=1) - np.eye(m, k=-1)
    phi = sine_basis_matrix(m)
    lam = fd_eigenvalue(np.arange(1, m + 1), m)
    assert np.abs(phi @ A @ phi - np.diag(lam)).max() < 1e-12


def test_tilde_lambda_single_mode_exact():
    assert tilde_lambda(1, 1) == pytest.approx(0.25, abs=1e-16)
    with pytest.raises(ValueError):
        tilde_lambda(0, 2)
    with pytest.raises(ValueError):
        tilde_lambda(4, 2)


def test_tilde_lambda_all_matches_scalar():
    for n in (1, 2, 5, 9):
        allv = tilde_lambda_all(n)
        each = np.array([tilde_lambda(j, n) for j in range(1, 2 * n)])
        assert np.abs(allv - each).max() < 1e-14


def test_tilde_lambda_range():
    for n in range(1, 65):
        tl = tilde_lambda_all(n)
        assert tl.min() > 1.0 / 8.0
        assert tl.max() < 1.0


def test_tilde_lambda_matches_dense_trace_inverse():
    # B0 = R A0^{-1} R^T must be diagonal in the sine basis with entries
    # tilde_lambda_j
    n = 8
    grid = build_grid(n)
    m = grid.n_interface
    A0 = assemble_a0(grid).to_dense()
    rhs = np.zeros((n * m, m))
    rhs[-m:, :] = np.eye(m)
    B0 = np.linalg.solve(A0, rhs)[-m:, :]
    phi = sine_basis_matrix(m)
    D = phi @ B0 @ phi
    assert np.abs(np.diag(D) - tilde_lambda_all(n)).max() < 1e-10
    assert np.abs(D - np.diag(np.diag(D))).max() < 1e-10


def test_mode_coefficients_single_mode_exact():
    c = mode_coefficients(1, 1)
    assert c.lambda_fd == pytest.approx(2.0, abs=1e-15)
    assert c.tilde_lambda == pytest.approx(0.25, abs=1e-16)
    assert c.a == pytest.approx(1.0 / 12.0, abs=1e-16)
    assert c.b == pytest.approx(0.5, abs=1e-16)
    # the margin driving the sharp quadratic bound
    assert 3.0 * c.a - c.b == pytest.approx(-0.25, abs=1e-15)
    assert -0.25 < -7.0 / 64.0


def test_mode_coefficient_ranges():
    # a_j stays well above h/24 for every mode (the h/12 shortcut seen in
    # hand derivations overshoots; the true small-h floor is (1-2 sqrt2/3) h)
    for n in (8, 32):
        h = 1.0 / (2 * n)
        _, _, a, b = mode_arrays(n)
        assert a.min() > h / 24.0
        assert a.max() <= h
        assert b.max() <= 7.0 / 8.0
        assert b.min() > 0.0


def test_cj_hand_value():
    c = mode_coefficients(1, 1)
    assert cj_eigenvalue(c, 1.0, 128.0) == pytest.approx(-305.0 / 469.0, abs=1e-15)
    assert c.c == pytest.approx(-305.0 / 469.0, abs=1e-15)


def test_cj_zero_when_first_factor_vanishes():
    c = mode_coefficients(1, 2)
    gamma1 = c.b / c.a
    assert cj_eigenvalue(c, gamma1, 7.0) == pytest.approx(0.0, abs=1e-15)
    with pytest.raises(ValueError):
        cj_eigenvalue(c, -1.0, 7.0)


def test_cj_interval_canonical_weights():
    for n in range(1, 257):
        _, _, a, b = mode_arrays(n)
        g1, g2 = 1.0, 64.0 * 2 * n
        c = ((g1 * a - b) / (g1 * a + b)) * ((g2 * a - b) / (g2 * a + b))
        assert c.max() < -0.5
        assert c.min() > -1.0


def test_reduction_spectrum_single_mode():
    vals, radius = reduction_spectrum(1, canonical_params(1))
    assert vals.shape == (1,)
    assert vals[0] == pytest.approx(187.0 / 3283.0, abs=1e-15)
    assert radius == pytest.approx(0.05696, abs=5e-6)
    assert radius <= 1.0 / 7.0


def test_reduction_spectrum_theta_zero_is_cj():
    n = 3
    params = DDParams(gamma1=1.0, gamma2=64.0 * 2 * n, theta=0.0)
    vals, _ = reduction_spectrum(n, params)
    _, _, a, b = mode_arrays(n)
    g2 = params.gamma2
    c = ((a - b) / (a + b)) * ((g2 * a - b) / (g2 * a + b))
    assert np.abs(vals - c).max() < 1e-15


def test_one_sweep_matrix_diagonalized_by_sine_basis():
    # theta I + (1-theta) C_g2 C_g1 assembled with dense inversion must
    # equal Phi diag(theta + (1-theta) c_j) Phi entrywise
    for n in range(1, 9):
        grid = build_grid(n)
        m = grid.n_interface
        system = build_subdomain_system(grid, zero_field, "left")
        Mg = system.interface_mass.to_dense()
        for params in (canonical_params(n), DDParams(2.5, 40.0, 0.2)):
            gsum = params.gamma1 + params.gamma2

            def robin_to_robin(gamma):
                A = system.robin_matrix(gamma).to_dense()
                rhs = np.zeros((A.shape[0], m))
                rhs[-m:, :] = Mg
                traces = np.linalg.solve(A, rhs)[-m:, :]
                return -np.eye(m) + gsum * traces

            sweep = (params.theta * np.eye(m)
                     + (1.0 - params.theta)
                     * robin_to_robin(params.gamma2) @ robin_to_robin(params.gamma1))
            vals, _ = reduction_spectrum(n, params)
            phi = sine_basis_matrix(m)
            assert np.abs(sweep - phi @ np.diag(vals) @ phi).max() < 1e-9


def test_omega_zeros_and_maximum():
    z0, w0 = omega_max(3.0, 3.0)
    assert z0 == 3.0
    assert w0 == 0.0
    z0, w0 = omega_max(1.0, 4.0)
    assert z0 == pytest.approx(2.0, abs=1e-15)
    assert w0 == pytest.approx(1.0 / 9.0, abs=1e-15)
    assert omega(1.0, 1.0, 4.0) == 0.0
    assert omega(4.0, 1.0, 4.0) == 0.0
    with pytest.raises(ValueError):
        omega_max(0.0, 1.0)


def test_omega_sampled_maximizer_and_monotonicity():
    gamma1, gamma2 = 1.0, 64.0
    z0, w0 = omega_max(gamma1, gamma2)
    z = np.geomspace(1e-3, 1e6, 1000)
    w = omega(z, gamma1, gamma2)
    assert w.max() <= w0 + 1e-15
    left = omega(z[z <= z0], gamma1, gamma2)
    right = omega(z[z >= z0], gamma1, gamma2)
    assert np.all(np.diff(left) > 0.0)
    assert np.all(np.diff(right) < 0.0)


def test_theta_star_values():
    assert theta_star(0.0, 0.0) == (0.0, 0.0)
    theta0, value = theta_star(0.0, 1.0)
    assert theta0 == pytest.approx(1.0 / 3.0, abs=1e-15)
    assert value == pytest.approx(1.0 / 3.0, abs=1e-15)
    _, value = theta_star(0.7, 0.7)
    assert value == 0.0


def test_theta_star_is_minimax_on_sampled_grid():
    thetas = np.linspace(0.0, 1.0, 1000)
    for a, b in ((0.0, 1.0), (0.3, 0.7), (0.05, 2.4)):
        theta0, value = theta_star(a, b)
        rho = np.maximum(np.abs(thetas - (1.0 - thetas) * a),
                         np.abs(thetas - (1.0 - thetas) * b))
        assert np.all(rho >= value - 1e-12)
        # the sampled minimum comes within grid resolution of the optimum
        assert rho.min() <= value + 5e-3 * (1.0 + a + b)
        at0 = max(abs(theta0 - (1.0 - theta0) * a), abs(theta0 - (1.0 - theta0) * b))
        assert at0 == pytest.approx(value, abs=1e-14)


def test_von_neumann_forms_agree():
    rng = np.random.default_rng(7)
    for _ in range(100):
        k = 10.0 ** rng.uniform(-2, 4)
        gamma1 = 10.0 ** rng.uniform(-2, 2)
        gamma2 = 10.0 ** rng.uniform(-2, 2)
        theta = rng.uniform(0.0, 0.99)
        r1 = von_neumann_rho(k, gamma1, gamma2, theta)
        r2 = von_neumann_rho_via_omega(k, gamma1, gamma2, theta)
        assert abs(r1 - r2) < 1e-12


def test_von_neumann_rho_at_matched_weights():
    k = 2.0
    z = k / np.tanh(k)
    for theta in (0.0, 0.3, 0.8):
        assert von_neumann_rho(k, z, z, theta) == pytest.approx(theta, abs=1e-14)


def test_von_neumann_large_k_asymptote():
    k = 1e5
    gamma1, gamma2 = 1.0, 2.0
    for theta in (0.0, 3.0 / 7.0):
        rho = von_neumann_rho(k, gamma1, gamma2, theta)
        approx = 1.0 - 2.0 * (1.0 - theta) * (gamma1 + gamma2) / k
        assert abs(rho - approx) < 1e-6
        assert rho < 1.0


def test_advisor_small_gamma1():
    for gamma1 in (1e-6, 1e-2, 0.5):
        for K in (2.0, 10.0):
            gamma2, theta, bound = von_neumann_advisor(K, gamma1)
            assert gamma2 > K / np.tanh(K)
            assert 0.0 <= theta < 1.0 / 3.0
            assert bound < 1.0 / 3.0
            k = np.linspace(1.0, K, 2000)
            rho = von_neumann_rho(k, gamma1, gamma2, theta)
            assert np.abs(rho).max() <= bound + 1e-12


def test_advisor_boundary_gamma1_matches_primary_branch():
    K = 5.0
    gamma2, theta, bound = von_neumann_advisor(K, COTH_1)
    _, w0 = omega_max(COTH_1, gamma2)
    assert theta == pytest.approx(w0 / (2.0 + w0), abs=1e-15)
    assert bound == pytest.approx(theta, abs=1e-15)


def test_advisor_flat_branch_no_damping():
    # weights close together push the symbol maximum under zeta, where
    # damping cannot help
    gamma1, K = 10.0, 1.5
    gamma2, theta, bound = von_neumann_advisor(K, gamma1)
    zeta = (gamma1 - COTH_1) / (gamma1 + COTH_1)
    assert theta == 0.0
    assert bound == pytest.approx(zeta, abs=1e-15)
    k = np.linspace(1.0, K, 2000)
    assert np.abs(von_neumann_rho(k, gamma1, gamma2, theta)).max() <= bound + 1e-12


def test_advisor_shifted_branch():
    gamma1, K = 1.4, 10.0
    gamma2, theta, bound = von_neumann_advisor(K, gamma1)
    zeta = (gamma1 - COTH_1) / (gamma1 + COTH_1)
    _, w0 = omega_max(gamma1, gamma2)
    assert w0 > zeta
    assert theta == pytest.approx((w0 - zeta) / (2.0 + w0 - zeta), abs=1e-15)
    assert bound == pytest.approx((w0 + zeta) / (2.0 + w0 - zeta), abs=1e-15)
    k = np.linspace(1.0, K, 4000)
    assert np.abs(von_neumann_rho(k, gamma1, gamma2, theta)).max() <= bound + 1e-12


def test_advisor_rejects_bad_band():
    with pytest.raises(ValueError):
        von_neumann_advisor(0.5, 1.0)
    with pytest.raises(ValueError):
        von_neumann_advisor(10.0, -1.0)
    with pytest.raises(ValueError):
        von_neumann_advisor(10.0, 1.0, gamma2_factor=1.0)


def test_corollary_rate_piecewise():
    sevenths = [corollary_rate(i / 7.0) for i in range(7)]
    want = [1.0, 5.0 / 7.0, 3.0 / 7.0, 1.0 / 7.0, 5.0 / 14.0, 8.0 / 14.0, 11.0 / 14.0]
    assert np.abs(np.array(sevenths) - np.array(want)).max() < 1e-15
    assert corollary_rate(3.0 / 7.0) == pytest.approx(1.0 / 7.0, abs=1e-15)
    with pytest.raises(ValueError):
        corollary_rate(1.5)


def test_bound_margins_single_mode():
    report = bound_margins(1)
    assert report.margins.shape == (1,)
    assert report.margins[0] == pytest.approx(-0.25, abs=1e-15)
    assert report.strictly_decreasing
    assert report.below_sharp_quadratic
    assert report.below_linear is None


def test_bound_margins_linear_regime():
    report = bound_margins(11)
    assert report.below_linear
    assert report.margins[0] < -0.049 / 22.0
    big = bound_margins(1024)
    assert big.strictly_decreasing
    assert big.below_linear
    assert big.below_sharp_quadratic


def test_z_bracket_containment():
    for n in (1, 4, 32, 128):
        z, (lo, hi) = z_bracket(n)
        assert z.min() >= lo - 1e-12
        assert z.max() <= hi + 1e-12
    z, (lo, hi) = z_bracket(1)
    # single mode: z = b/a = 6, inside [3 + 7/32, 21]
    assert z[0] == pytest.approx(6.0, abs=1e-14)
    assert lo == pytest.approx(3.0 + 7.0 / 32.0, abs=1e-15)
    assert hi == pytest.approx(21.0, abs=1e-13)
