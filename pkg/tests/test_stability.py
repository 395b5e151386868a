import json

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from eamchain import (
    Case,
    ChainConfig,
    Deformation,
    Ordering,
    StabilityCoefficients,
    ToyFamilyParams,
    coefficients,
    compare_recon,
    compare_volume,
    counterexample_check,
    fourier_modes,
    hessian,
    lambda_atomistic,
    lambda_recon,
    lambda_volume,
    make_toy_potentials,
    min_eigenvalue,
    mode_displacement,
    s_star,
)
from eamchain.potentials import check_assumption_signs


def synthetic(A, B, C, D, B_tilde=0.0):
    zero = 0.0
    return StabilityCoefficients(
        F=1.0, A_hat=zero, A_tilde=A, A=A, B=B, B_tilde=B_tilde, C=C, D=D, G1=zero, G2=zero,
        phi2_F=zero, phi2_2F=zero, rho1_F=zero, rho1_2F=zero, rho2_F=zero, rho2_2F=zero,
    )


params = st.tuples(st.floats(0.5, 8.0), st.floats(0.5, 5.0), st.floats(0.0, 5.0))
strains = st.floats(0.75, 1.6)


class TestCoefficients:
    def test_pair_only_chain(self, pair_only):
        c = coefficients(pair_only, 1.0)
        assert c.A_hat == 0.0
        assert c.B == -c.phi2_2F
        assert c.C == c.D == 0.0 and c.B_tilde == 0.0
        assert c.A == c.A_tilde == pytest.approx(c.phi2_F + 4 * c.phi2_2F)

    def test_sum_is_exact(self, toy):
        c = coefficients(toy, 1.07)
        assert c.A == c.A_hat + c.A_tilde

    @pytest.mark.parametrize("F", [0.95, 1.0, 1.1, 1.15])
    def test_condition_from_sign_pattern(self, toy, F):
        assert check_assumption_signs(toy, F).all_hold
        c = coefficients(toy, F)
        assert c.C > 0 and c.D < 0 and 8 * abs(c.D) <= c.C

    @settings(max_examples=60, deadline=None)
    @given(pr=params, F=strains)
    def test_recon_slope_never_positive(self, pr, F):
        c = coefficients(make_toy_potentials(ToyFamilyParams(*pr)), F)
        assert c.B_tilde <= 0

    @settings(max_examples=60, deadline=None)
    @given(pr=params, F=strains)
    def test_B_minus_B_tilde_identity(self, pr, F):
        c = coefficients(make_toy_potentials(ToyFamilyParams(*pr)), F)
        a, b = c.rho1_F, c.rho1_2F
        rhs = c.B_tilde - (c.phi2_2F + c.G2 * (16 * b * b + 8 * a * b) + 2 * c.G1 * c.rho2_2F)
        assert c.B == pytest.approx(rhs, rel=1e-12, abs=1e-12 * c.B_scale)

    @pytest.mark.parametrize("k", [1, 3, 8])
    def test_mode_rayleigh_quotients(self, toy, k):
        # independent check of A, B, C, D through the assembled Hessian
        N = 8
        c = coefficients(toy, 1.0)
        H = hessian("a", Deformation.uniform(ChainConfig(N, 1.0)), toy)
        u = mode_displacement(k, N)
        s = fourier_modes(N)[k - 1]
        assert u @ H @ u == pytest.approx(lambda_atomistic(c, s), rel=1e-9)

    def test_as_dict_is_json(self, toy):
        d = coefficients(toy, 1.0).as_dict()
        assert json.loads(json.dumps(d))["A"] == d["A"]


class TestEigenvalueFunctions:
    def test_endpoints(self, toy):
        c = coefficients(toy, 1.0)
        assert lambda_atomistic(c, 0.0) == c.A
        assert lambda_atomistic(c, 4.0) == pytest.approx(c.phi2_F + 2 * c.G1 * c.rho2_F, abs=1e-10)
        assert lambda_recon(c, 0.0) == lambda_volume(c) == c.A

    def test_recon_minimum_closed_form(self, toy):
        c = coefficients(toy, 1.05)
        a, b = c.rho1_F, c.rho1_2F
        lam4 = lambda_recon(c, 4.0)
        assert lam4 == pytest.approx(c.A - 4 * c.G2 * (a + 2 * b) ** 2, abs=1e-10)
        assert lam4 == pytest.approx(
            2 * c.G1 * (c.rho2_F + 4 * c.rho2_2F) + c.phi2_F + 4 * c.phi2_2F, abs=1e-10
        )

    def test_pair_only_recon_is_flat(self, pair_only):
        c = coefficients(pair_only, 1.0)
        np.testing.assert_array_equal(lambda_recon(c, np.linspace(0, 4, 9)), c.A)

    @pytest.mark.parametrize("s", [-1e-9, 4.0000001, np.nan])
    def test_out_of_range(self, toy, s):
        c = coefficients(toy, 1.0)
        with pytest.raises(ValueError):
            lambda_atomistic(c, s)
        with pytest.raises(ValueError):
            lambda_recon(c, s)

    def test_derivative_lower_bound(self, toy):
        s = np.linspace(0, 4, 1000)
        for F in (0.95, 1.0, 1.1):
            c = coefficients(toy, F)
            slope = c.B + 2 * c.C * s + 3 * c.D * s * s
            assert np.all(slope >= c.B + 0.5 * c.C * s - 1e-12 * c.B_scale)


class TestSStar:
    def test_zero_linear_coefficient(self):
        assert s_star(synthetic(1.0, 0.0, 2.0, -0.1)) == 0.0

    def test_absent_without_negative_cubic(self):
        assert s_star(synthetic(1.0, -1.0, 2.0, 0.0)) is None

    @settings(max_examples=60, deadline=None)
    @given(B=st.floats(-5, 5), C=st.floats(0.01, 5), D=st.floats(-5, -0.01))
    def test_is_local_minimum(self, B, C, D):
        c = synthetic(1.0, B, C, D)
        ss = s_star(c)
        assume(ss is not None)
        assert abs(B + 2 * C * ss + 3 * D * ss * ss) <= 1e-12 * (abs(B) + abs(C) + abs(D)) * max(1, ss * ss)
        assert 2 * C + 6 * D * ss >= -1e-12

    @pytest.mark.parametrize("F", [1.0, 1.1, 1.2])
    def test_grid_minimum(self, F):
        p = make_toy_potentials(ToyFamilyParams(1.0, 2.0, 3.0))
        c = coefficients(p, F)
        assert c.B < 0
        grid = np.linspace(0, 4, 10**6)
        cand = [lambda_atomistic(c, 4.0)]
        ss = s_star(c)
        if ss is not None:
            cand.append(lambda_atomistic(c, min(max(ss, 0.0), 4.0)))
        assert np.min(lambda_atomistic(c, grid)) == pytest.approx(min(cand), rel=1e-6)


class TestMinEigenvalue:
    def test_volume(self, toy):
        c = coefficients(toy, 1.0)
        v = min_eigenvalue(c, "volume")
        assert v.lambda_min == c.A and v.case is Case.BOUNDARY0 and v.stable

    def test_recon(self, toy):
        c = coefficients(toy, 1.0)
        for N in (None, 4, 64):
            v = min_eigenvalue(c, "recon", N)
            assert v.argmin_s == 4.0 and v.case is Case.BOUNDARY4
            assert v.lambda_min == pytest.approx(lambda_recon(c, 4.0))

    def test_positive_linear_coefficient_gives_first_mode(self, toy):
        c = coefficients(toy, 1.0)
        assert c.B > 0
        N = 16
        v = min_eigenvalue(c, "a", N)
        s1 = 4 * np.sin(np.pi / (2 * N)) ** 2
        a, b = c.rho1_F, c.rho1_2F
        expansion = c.A + c.B * s1 + c.G2 * (8 * b * b + 2 * a * b) * s1**2 - c.G2 * b * b * s1**3
        assert v.argmin_s == pytest.approx(s1, rel=1e-14)
        assert v.case is Case.BOUNDARY0
        assert v.lambda_min == pytest.approx(expansion, rel=1e-13)

    def test_discrete_approaches_continuous(self):
        p = make_toy_potentials(ToyFamilyParams(1.0, 2.0, 3.0))
        c = coefficients(p, 1.1)
        cont = min_eigenvalue(c, "a").lambda_min
        gaps = [min_eigenvalue(c, "a", N).lambda_min - cont for N in (16, 32, 64, 128)]
        assert all(g >= -1e-12 for g in gaps)
        assert all(g1 <= g0 for g0, g1 in zip(gaps, gaps[1:]))
        assert gaps[-1] <= gaps[0] / 4

    def test_small_chain_keeps_first_mode(self):
        # shallow interior dip that the two available symbols of N = 2 miss
        c = synthetic(1.0, -0.01, 1.0, -0.1)
        assert min_eigenvalue(c, "a").case is Case.INTERIOR
        v = min_eigenvalue(c, "a", 2)
        assert v.argmin_s == pytest.approx(2.0) and v.case is Case.BOUNDARY0

    @pytest.mark.parametrize(
        "coef,case",
        [((1, 0.5, 1, -0.1), Case.BOUNDARY0), ((1, -1, 0.1, -0.1), Case.BOUNDARY4),
         ((1, -0.1, 2, -0.1), Case.INTERIOR)],
    )
    def test_case_labels(self, coef, case):
        v = min_eigenvalue(synthetic(*coef), "a")
        assert v.case is case
        if case is Case.INTERIOR:
            assert v.lambda_min < lambda_atomistic(synthetic(*coef), 4.0)

    def test_stable_flag_and_json(self, toy):
        v = min_eigenvalue(coefficients(toy, 1.3), "a", 8)
        assert v.stable == (v.lambda_min > 0)
        d = json.loads(json.dumps(v.as_dict()))
        assert d["model"] == "atomistic" and d["N"] == 8

    def test_invalid_N(self, toy):
        with pytest.raises(ValueError):
            min_eigenvalue(coefficients(toy, 1.0), "a", 0)

    @settings(max_examples=200, deadline=None)
    @given(pr=params, F=strains)
    def test_case_table_against_dense_grid(self, pr, F):
        c = coefficients(make_toy_potentials(ToyFamilyParams(*pr)), F)
        assume(c.signs().all_hold)
        grid = np.linspace(0.0, 4.0, 20001)
        brute = float(np.min(lambda_atomistic(c, grid)))
        table = min_eigenvalue(c, "a").lambda_min
        assert table <= brute + 1e-12 * c.B_scale
        assert table == pytest.approx(brute, rel=1e-6, abs=1e-6 * (abs(c.A) + c.B_scale))


class TestComparisons:
    def test_volume_equal_when_B_nonnegative(self, toy):
        assert compare_volume(coefficients(toy, 1.0)) is Ordering.EQUAL

    def test_volume_smaller_when_B_negative(self):
        p = make_toy_potentials(ToyFamilyParams(1.0, 2.0, 3.0))
        assert compare_volume(coefficients(p, 1.0)) is Ordering.ATOMISTIC_SMALLER

    def test_pair_only_matches_pair_case(self, pair_only):
        c = coefficients(pair_only, 1.0)
        assert c.phi2_2F < 0 and c.B > 0
        assert compare_volume(c) is Ordering.EQUAL

    @settings(max_examples=100, deadline=None)
    @given(pr=params, F=strains)
    def test_volume_never_larger(self, pr, F):
        c = coefficients(make_toy_potentials(ToyFamilyParams(*pr)), F)
        assert compare_volume(c) is not Ordering.ATOMISTIC_LARGER

    def test_recon_negative_kappa(self, toy):
        c = coefficients(toy, 1.0)
        r = compare_recon(c)
        assert r.kappa < 0 and r.ordering is Ordering.ATOMISTIC_LARGER and r.reliable
        assert min_eigenvalue(c, "a").lambda_min > min_eigenvalue(c, "cr").lambda_min

    def test_recon_positive_kappa_gap(self):
        p = make_toy_potentials(ToyFamilyParams(1.0, 1.0, 0.3))
        c = coefficients(p, 0.8)
        r = compare_recon(c)
        assert r.kappa > 0 and r.ordering is Ordering.ATOMISTIC_SMALLER
        assert not r.reliable  # phi''(2F) > 0 here
        gap = lambda_atomistic(c, 4.0) - lambda_recon(c, 4.0)
        assert gap == pytest.approx(-4 * r.kappa, rel=1e-10)

    def test_recon_tuned_zero(self):
        F = 0.8
        base = make_toy_potentials(ToyFamilyParams(1.0, 1.0, 1.0))
        c_star = float(base.phi.d2(2 * F) * np.sqrt(base.host_density(F)) / base.rho.d2(2 * F))
        c = coefficients(make_toy_potentials(ToyFamilyParams(1.0, 1.0, c_star)), F)
        assert compare_recon(c).ordering is Ordering.EQUAL


class TestCounterexample:
    def test_pair_only_precondition_fails(self, pair_only):
        rep = counterexample_check(pair_only, 1.0, N=8)
        assert not rep.precondition_holds and rep.inequality_holds is None

    @pytest.mark.parametrize("alpha,c", [(8.0, 1.0), (4.0, 5.0)])
    def test_strict_gap(self, alpha, c):
        p = make_toy_potentials(ToyFamilyParams(alpha, 3.0, c))
        rep = counterexample_check(p, 1.0, N=32)
        assert rep.precondition_holds and rep.inequality_holds
        assert rep.margin > 1e-8
        assert rep.rayleigh_alternating == pytest.approx(rep.alternating_formula, abs=1e-10)
        assert rep.lambda_volume > rep.rayleigh_alternating
        assert rep.rayleigh_alternating >= rep.lambda_atomistic_min - 1e-12 * rep.lambda_volume
