import numpy as np
import pytest

from masbound import (
    IterationCapError,
    LtiSystem,
    OutputBox,
    Polytope,
    bound_m1_unforced,
    bound_m2_unforced,
    build_O_prefix,
    exact_t_star_forced,
    exact_t_star_unforced,
    is_redundant,
)
from conftest import make_siso, random_stable_matrix, scalar_interval_t_star, unit_box


def redundant_at_horizon(sys, box, result, t):
    """All signed output rows of time step t are implied by the returned set."""
    M = sys.C @ np.linalg.matrix_power(sys.A, t)
    if result.regime == "forced":
        from masbound import dc_gain

        H0 = dc_gain(sys)
        M = np.hstack([M, H0])
    for j in range(sys.q):
        if not is_redundant(M[j], box.y_upper[j], result.polytope):
            return False
        if not is_redundant(-M[j], box.y_lower[j], result.polytope):
            return False
    return True


class TestUnforced:
    def test_scalar_contraction(self):
        res = exact_t_star_unforced(make_siso(0.5), unit_box())
        assert res.t_star == 0
        assert res.regime == "unforced" and res.epsilon is None

    def test_negative_scalar_asymmetric(self):
        res = exact_t_star_unforced(make_siso(-0.9), OutputBox([0.1], [1.0]))
        assert res.t_star == 1

    def test_double_contraction(self):
        sys = LtiSystem(A=np.diag([0.5, 0.5]), C=np.eye(2))
        assert exact_t_star_unforced(sys, unit_box(q=2)).t_star == 0

    def test_rejects_unstable(self):
        with pytest.raises(ValueError, match="spectral radius"):
            exact_t_star_unforced(make_siso(1.0), unit_box())

    def test_cap(self):
        rho, th = 0.995, 0.7
        A = rho * np.array([[np.cos(th), np.sin(th)], [-np.sin(th), np.cos(th)]])
        sys = LtiSystem(A=A, C=[[1.0, 0.0]])
        with pytest.raises(IterationCapError):
            exact_t_star_unforced(sys, unit_box(), step_cap=2)

    def test_matches_scalar_oracle(self, rng):
        for _ in range(50):
            a = float(rng.uniform(-0.98, 0.98))
            c = float(rng.choice([-1.0, 1.0]) * rng.uniform(0.2, 3.0))
            if rng.random() < 0.5:
                y_l = y_u = 1.0
            else:
                y_l, y_u = 0.1, 1.0  # strong asymmetry
            res = exact_t_star_unforced(make_siso(a, c=c), OutputBox([y_l], [y_u]))
            assert res.t_star == scalar_interval_t_star(a, c, y_l, y_u)

    def test_certificate_two_extra_horizons(self, rng):
        for _ in range(10):
            n = int(rng.integers(1, 4))
            sys = LtiSystem(A=random_stable_matrix(rng, n, rho_max=0.9),
                            C=rng.standard_normal((1, n)))
            box = OutputBox(rng.uniform(0.3, 2.0, size=1), rng.uniform(0.3, 2.0, size=1))
            res = exact_t_star_unforced(sys, box)
            assert redundant_at_horizon(sys, box, res, res.t_star + 1)
            assert redundant_at_horizon(sys, box, res, res.t_star + 2)

    def test_returned_rows_are_non_redundant(self, rng):
        sys = LtiSystem(A=random_stable_matrix(rng, 3, rho_max=0.9),
                        C=rng.standard_normal((1, 3)))
        res = exact_t_star_unforced(sys, unit_box())
        G, h = res.polytope.G, res.polytope.h
        for i in range(G.shape[0]):
            others = [j for j in range(G.shape[0]) if j != i]
            rest = Polytope(G[others], h[others])
            assert not is_redundant(G[i], h[i], rest)

    def test_polytope_contains_origin(self, rng):
        sys = LtiSystem(A=random_stable_matrix(rng, 2), C=rng.standard_normal((1, 2)))
        res = exact_t_star_unforced(sys, unit_box())
        assert res.polytope.contains(np.zeros(2))

    def test_radial_scaling_invariance(self, rng):
        for _ in range(8):
            n = int(rng.integers(1, 4))
            sys = LtiSystem(A=random_stable_matrix(rng, n, rho_max=0.9),
                            C=rng.standard_normal((1, n)))
            lo = rng.uniform(0.3, 2.0, size=1)
            hi = rng.uniform(0.3, 2.0, size=1)
            t_ref = exact_t_star_unforced(sys, OutputBox(lo, hi)).t_star
            for k in (0.1, 10.0):
                assert exact_t_star_unforced(sys, OutputBox(k * lo, k * hi)).t_star == t_ref

    def test_bound_dominance(self, rng):
        for _ in range(10):
            n = int(rng.integers(1, 5))
            sys = LtiSystem(A=random_stable_matrix(rng, n, rho_max=0.9),
                            C=rng.standard_normal((1, n)))
            box = OutputBox(rng.uniform(0.3, 2.0, size=1), rng.uniform(0.3, 2.0, size=1))
            t_star = exact_t_star_unforced(sys, box).t_star
            assert bound_m1_unforced(sys, box).m >= t_star
            assert bound_m2_unforced(sys, box).m >= t_star

    def test_sandwich_inclusions(self, rng):
        # inscribed level set inside the admissible set inside the n-step prefix
        for _ in range(6):
            n = int(rng.integers(2, 5))
            sys = LtiSystem(A=random_stable_matrix(rng, n, rho_max=0.9),
                            C=rng.standard_normal((1, n)))
            box = unit_box()
            res = exact_t_star_unforced(sys, box)
            rep = bound_m2_unforced(sys, box)
            P = rep.diagnostics["level_set"].P
            r1 = rep.diagnostics["r1"]
            prefix = build_O_prefix(sys, box, horizon=sys.n - 1)
            for _ in range(50):
                direction = rng.standard_normal(n)
                x = direction * np.sqrt(r1 / (direction @ P @ direction))
                x *= rng.uniform(0.0, 1.0)
                assert res.polytope.contains(x, tol=1e-8)
                assert prefix.contains(x, tol=1e-8)


class TestForced:
    def test_epsilon_one_matches_unforced(self, rng):
        for _ in range(8):
            n = int(rng.integers(1, 4))
            sys = LtiSystem(
                A=random_stable_matrix(rng, n, rho_max=0.9),
                B=rng.standard_normal((n, 1)),
                C=rng.standard_normal((1, n)),
            )
            box = OutputBox(rng.uniform(0.3, 2.0, size=1), rng.uniform(0.3, 2.0, size=1))
            assert (
                exact_t_star_forced(sys, box, 1.0).t_star
                == exact_t_star_unforced(sys, box).t_star
            )

    def test_forced_at_least_unforced(self, rng):
        for _ in range(8):
            n = int(rng.integers(1, 4))
            sys = LtiSystem(
                A=random_stable_matrix(rng, n, rho_max=0.9),
                B=rng.standard_normal((n, 1)),
                C=rng.standard_normal((1, n)),
            )
            box = unit_box()
            t_forced = exact_t_star_forced(sys, box, 0.1).t_star
            t_unforced = exact_t_star_unforced(sys, box).t_star
            assert t_forced >= t_unforced

    def test_scalar_example(self):
        sys = make_siso(0.5, b=1.0)
        res = exact_t_star_forced(sys, unit_box(), 0.1)
        assert res.regime == "forced" and res.epsilon == 0.1
        assert res.t_star >= exact_t_star_unforced(sys, unit_box()).t_star

    def test_certificate(self, rng):
        for _ in range(6):
            n = int(rng.integers(1, 3))
            sys = LtiSystem(
                A=random_stable_matrix(rng, n, rho_max=0.9),
                B=rng.standard_normal((n, 1)),
                C=rng.standard_normal((1, n)),
            )
            box = unit_box()
            res = exact_t_star_forced(sys, box, 0.05)
            assert redundant_at_horizon(sys, box, res, res.t_star + 1)
            assert redundant_at_horizon(sys, box, res, res.t_star + 2)

    def test_requires_input(self):
        with pytest.raises(ValueError, match="input"):
            exact_t_star_forced(make_siso(0.5), unit_box(), 0.1)

    def test_epsilon_validated(self):
        sys = make_siso(0.5, b=1.0)
        for bad in (0.0, -0.5, 1.0001):
            with pytest.raises(ValueError):
                exact_t_star_forced(sys, unit_box(), bad)

    def test_steady_state_rows_present(self):
        sys = make_siso(0.5, b=1.0)
        res = exact_t_star_forced(sys, unit_box(), 0.25)
        # (z0, u) polytope must cap |H0 u| at (1 - eps): max 2u = 0.75
        from masbound import lp_maximize

        out = lp_maximize(np.array([0.0, 2.0]), res.polytope)
        assert out.status == "optimal"
        assert out.optimum <= 0.75 + 1e-8


class TestAsymmetryTrend:
    def test_demo_system_sweep_shape(self):
        from masbound import demo_system

        sys = demo_system()
        t_mid = exact_t_star_unforced(sys, OutputBox([1.0], [1.0])).t_star
        t_low = exact_t_star_unforced(sys, OutputBox([0.1], [1.0])).t_star
        t_high = exact_t_star_unforced(sys, OutputBox([2.0], [1.0])).t_star
        assert t_low >= t_mid
        assert t_high >= t_mid
