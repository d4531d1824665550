import json

import numpy as np
import pytest

from masbound import (
    LtiSystem,
    OutputBox,
    dc_gain,
    gamma,
    observability_matrix,
    shift_to_equilibrium,
    system_from_dict,
    validate,
)
from conftest import make_siso, random_stable_matrix, unit_box


class TestTypes:
    def test_shapes_inferred(self):
        sys = LtiSystem(A=[[0.5, 0.0], [0.0, 0.2]], C=[[1.0, 0.0]])
        assert (sys.n, sys.q, sys.m_in) == (2, 1, 0)
        assert not sys.has_input

    def test_d_defaults_to_zero(self):
        sys = LtiSystem(A=[[0.5]], B=[[1.0]], C=[[1.0]])
        assert sys.D is not None and sys.D[0, 0] == 0.0

    def test_d_without_b_rejected(self):
        with pytest.raises(ValueError, match="D given without B"):
            LtiSystem(A=[[0.5]], C=[[1.0]], D=[[1.0]])

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            LtiSystem(A=[[0.5, 0.0], [0.0, 0.5]], C=[[1.0]])

    def test_box_requires_positive_limits(self):
        with pytest.raises(ValueError, match="positive"):
            OutputBox([0.0], [1.0])
        with pytest.raises(ValueError, match="positive"):
            OutputBox([1.0], [-1.0])


class TestValidate:
    def test_scalar_ok(self):
        rep = validate(make_siso(0.5), unit_box())
        assert rep.spectral_radius == pytest.approx(0.5)
        assert rep.min_obsv_singular_value == pytest.approx(1.0)
        assert rep.stable and rep.observable and rep.ok

    def test_unobservable_mode(self):
        sys = LtiSystem(A=np.diag([0.5, 0.5]), C=[[1.0, 0.0]])
        rep = validate(sys, unit_box())
        assert not rep.observable
        assert rep.min_obsv_singular_value < 1e-4

    def test_marginally_stable_rejected(self):
        rep = validate(make_siso(1.0), unit_box())
        assert not rep.stable

    def test_threshold_is_strict(self):
        assert not validate(make_siso(0.999), unit_box()).stable
        assert validate(make_siso(0.9989), unit_box()).stable

    def test_obsv_matrix_stacking(self):
        sys = LtiSystem(A=[[0.0, 1.0], [-0.25, 1.0]], C=[[1.0, 0.0]])
        O = observability_matrix(sys)
        assert np.allclose(O, [[1.0, 0.0], [0.0, 1.0]])


class TestGamma:
    def test_symmetric(self):
        assert gamma(OutputBox([1.0], [1.0])) == 1.0

    def test_max_over_outputs(self):
        assert gamma(OutputBox([2.0, 1.0], [4.0, 1.0])) == 2.0

    def test_strong_asymmetry(self):
        assert gamma(OutputBox([0.1], [1.0])) == pytest.approx(10.0)

    def test_at_least_one_and_scaling_invariant(self, rng):
        for _ in range(50):
            q = int(rng.integers(1, 4))
            lo = rng.uniform(0.1, 5.0, size=q)
            hi = rng.uniform(0.1, 5.0, size=q)
            g = gamma(OutputBox(lo, hi))
            assert g >= 1.0
            k = float(rng.uniform(0.01, 100.0))
            assert gamma(OutputBox(k * lo, k * hi)) == pytest.approx(g)

    def test_unity_iff_symmetric(self):
        assert gamma(OutputBox([2.0, 3.0], [2.0, 3.0])) == 1.0
        assert gamma(OutputBox([2.0, 3.0], [2.0, 3.0 + 1e-6])) > 1.0


class TestDcGain:
    def test_first_order(self):
        assert dc_gain(make_siso(0.5, b=1.0))[0, 0] == pytest.approx(2.0)

    def test_feedthrough(self):
        assert dc_gain(make_siso(0.0, b=1.0, d=3.0))[0, 0] == pytest.approx(4.0)

    def test_two_state(self):
        sys = LtiSystem(A=np.diag([0.5, 0.0]), B=[[1.0], [1.0]], C=[[1.0, 1.0]])
        assert dc_gain(sys)[0, 0] == pytest.approx(3.0)

    def test_requires_input(self):
        with pytest.raises(ValueError, match="input"):
            dc_gain(make_siso(0.5))

    def test_fixed_point_identity(self, rng):
        for _ in range(20):
            n = int(rng.integers(1, 6))
            A = random_stable_matrix(rng, n)
            sys = LtiSystem(A=A, B=rng.standard_normal((n, 2)), C=rng.standard_normal((2, n)),
                            D=rng.standard_normal((2, 2)))
            u = rng.standard_normal(2)
            x_eq, y_eq = shift_to_equilibrium(sys, u)
            assert np.allclose(sys.A @ x_eq + sys.B @ u, x_eq, atol=1e-10)
            assert np.allclose(sys.C @ x_eq + sys.D @ u, dc_gain(sys) @ u, atol=1e-10)
            assert np.allclose(y_eq, dc_gain(sys) @ u, atol=1e-12)


class TestShift:
    def test_first_order(self):
        x_eq, y_eq = shift_to_equilibrium(make_siso(0.5, b=1.0), [1.0])
        assert x_eq[0] == pytest.approx(2.0)
        assert y_eq[0] == pytest.approx(2.0)

    def test_zero_input(self):
        x_eq, y_eq = shift_to_equilibrium(make_siso(0.5, b=1.0), [0.0])
        assert x_eq[0] == 0.0 and y_eq[0] == 0.0

    def test_integrator_free(self):
        x_eq, y_eq = shift_to_equilibrium(make_siso(0.0, b=2.0), [3.0])
        assert x_eq[0] == pytest.approx(6.0)
        assert y_eq[0] == pytest.approx(6.0)


class TestJsonSchema:
    def good(self):
        return {
            "A": [[0.5, 0.1], [0.0, 0.2]],
            "B": [[1.0], [0.0]],
            "C": [[1.0, 0.0]],
            "y_lower": [1.0],
            "y_upper": [2.0],
            "epsilon": 0.05,
        }

    def test_roundtrip(self):
        sys, box, eps = system_from_dict(self.good())
        assert sys.n == 2 and sys.q == 1 and sys.m_in == 1
        assert box.y_upper[0] == 2.0
        assert eps == 0.05

    def test_missing_a_names_key(self):
        obj = self.good()
        del obj["A"]
        with pytest.raises(ValueError, match="'A'"):
            system_from_dict(obj)

    def test_ragged_rows_named(self):
        obj = self.good()
        obj["A"] = [[0.5, 0.1], [0.0]]
        with pytest.raises(ValueError, match="'A'"):
            system_from_dict(obj)

    def test_non_numeric_entry_named(self):
        obj = self.good()
        obj["y_lower"] = ["one"]
        with pytest.raises(ValueError, match="'y_lower'"):
            system_from_dict(obj)

    def test_box_length_checked(self):
        obj = self.good()
        obj["y_lower"] = [1.0, 1.0]
        with pytest.raises(ValueError):
            system_from_dict(obj)

    def test_optional_keys_absent(self):
        obj = self.good()
        del obj["B"], obj["epsilon"]
        sys, box, eps = system_from_dict(obj)
        assert not sys.has_input and eps is None

    def test_file_loading(self, tmp_path):
        from masbound import load_system

        path = tmp_path / "sys.json"
        path.write_text(json.dumps(self.good()))
        sys, box, eps = load_system(path)
        assert sys.n == 2
