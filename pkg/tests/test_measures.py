import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from diversity import (
    DimensionMismatchError,
    DiscreteSphericalMeasure,
    DomainError,
    HPolytope,
    NotExtremalError,
    PreconditionError,
    SimplexKernelSpec,
    UnboundedSliceError,
    kernel_from_measure,
    l1_measure,
    measure_from_simplex_kernel,
)
from diversity.errors import SpecParseError
from diversity.measures import (
    balancing_weights,
    random_simplex_spec,
    simplex_spec_from_kernel,
    validate_measure,
)
from diversity.variants import discrete_linear_eval, minkowski_eval, simplex_closed_form_eval

R = math.sqrt(0.5)
TRIANGLE_MEASURE = DiscreteSphericalMeasure([[1, 0], [0, 1], [-R, -R]], [1, 1, math.sqrt(2)])


class TestHPolytope:
    def test_offsets_positive(self):
        with pytest.raises(DomainError):
            HPolytope([[1, 0]], [0])

    def test_shapes(self):
        with pytest.raises(DimensionMismatchError):
            HPolytope([[1, 0], [0, 1]], [1])

    def test_contains(self):
        K = HPolytope.linf_ball(2)
        assert K.contains([1, -1]) and not K.contains([1.1, 0])

    def test_scaled_normals(self):
        K = HPolytope([[2, 0], [0, 3]], [2, 6])
        np.testing.assert_allclose(K.scaled_normals(), [[1, 0], [0, 0.5]])

    def test_json_round_trip(self):
        K = HPolytope.regular_polygon(5)
        K2 = HPolytope.from_dict(K.to_dict())
        np.testing.assert_array_equal(K.normals, K2.normals)
        with pytest.raises(SpecParseError):
            HPolytope.from_dict({"normals": [[1, 0]]})


class TestValidateMeasure:
    def test_axis_pairs_ok(self):
        assert validate_measure(l1_measure(2)) == []

    def test_single_atom_imbalance(self):
        v = validate_measure(DiscreteSphericalMeasure([[1, 0]], [1]))
        assert [x.kind for x in v] == ["imbalance"]
        assert v[0].magnitude == pytest.approx(1)

    def test_triangle_ok(self):
        assert validate_measure(TRIANGLE_MEASURE) == []

    def test_reports_every_kind(self):
        nu = DiscreteSphericalMeasure([[2, 0], [0, 1]], [1, -1])
        kinds = {x.kind for x in validate_measure(nu)}
        assert kinds == {"non-unit", "nonpositive-mass", "imbalance"}

    def test_check_raises(self):
        with pytest.raises(PreconditionError):
            DiscreteSphericalMeasure([[1, 0]], [1]).check()

    def test_json_round_trip(self):
        nu = DiscreteSphericalMeasure.from_dict(TRIANGLE_MEASURE.to_dict())
        np.testing.assert_array_equal(nu.directions, TRIANGLE_MEASURE.directions)
        np.testing.assert_array_equal(nu.masses, TRIANGLE_MEASURE.masses)


class TestKernelFromMeasure:
    def test_triangle_measure(self):
        K = kernel_from_measure(TRIANGLE_MEASURE)
        m = 2 + math.sqrt(2)
        np.testing.assert_allclose(K.normals, m * TRIANGLE_MEASURE.directions)
        assert K.offsets.tolist() == [1.0, 1.0, 1.0]
        rng = np.random.default_rng(3)
        for _ in range(20):
            A = rng.uniform(-5, 5, size=(int(rng.integers(2, 8)), 2))
            assert minkowski_eval(A, K) == pytest.approx(discrete_linear_eval(A, TRIANGLE_MEASURE), abs=1e-8)

    def test_line_interval(self):
        K = kernel_from_measure(DiscreteSphericalMeasure([[1], [-1]], [1, 1]))
        np.testing.assert_allclose(K.normals, [[2], [-2]])
        np.testing.assert_allclose(K.offsets, [1, 1])

    def test_unbalanced(self):
        with pytest.raises(PreconditionError):
            kernel_from_measure(DiscreteSphericalMeasure([[1, 0], [0, 1]], [1, 1]))

    def test_dependent_support(self):
        with pytest.raises(NotExtremalError):
            kernel_from_measure(l1_measure(2))


class TestMeasureFromKernel:
    def test_triangle_kernel(self):
        nu = measure_from_simplex_kernel(HPolytope([[1, 0], [0, 1], [-1, -1]], [1, 1, 1]))
        np.testing.assert_allclose(nu.directions, [[1, 0], [0, 1], [-R, -R]], atol=1e-15)
        np.testing.assert_allclose(nu.masses, [1 / 3, 1 / 3, math.sqrt(2) / 3], atol=1e-14)

    def test_line_interval(self):
        nu = measure_from_simplex_kernel(HPolytope([[1], [-1]], [0.5, 0.5]))
        np.testing.assert_allclose(nu.directions, [[1], [-1]])
        np.testing.assert_allclose(nu.masses, [1, 1])

    def test_parallel_normals_rejected(self):
        # two distinct normals are affinely independent, but 0 is not between them
        with pytest.raises(PreconditionError):
            measure_from_simplex_kernel(HPolytope([[1, 0], [2, 0]], [1, 1]))

    def test_dependent_normals(self):
        with pytest.raises(NotExtremalError, match="not extremal"):
            measure_from_simplex_kernel(HPolytope([[1, 0], [-1, 0], [2, 0]], [1, 1, 1]))

    def test_unbounded_slice(self):
        with pytest.raises(UnboundedSliceError, match="unbounded"):
            measure_from_simplex_kernel(HPolytope([[1, 0], [0, 1]], [1, 1]))

    def test_origin_on_boundary(self):
        with pytest.raises(UnboundedSliceError):
            balancing_weights([[1, 0], [-1, 0], [0, 1]])


class TestSimplexKernelSpec:
    def test_validation(self):
        with pytest.raises(PreconditionError):
            SimplexKernelSpec([[1, 0], [-1, 0]], [0.3, 0.7])
        with pytest.raises(PreconditionError):
            SimplexKernelSpec([[1, 0], [-1, 0]], [0.5, 0.6])
        with pytest.raises(NotExtremalError):
            SimplexKernelSpec([[1, 0], [-1, 0], [2, 0]], [0.2, 0.6, 0.2])

    def test_from_normals(self):
        s = SimplexKernelSpec.from_normals([[1, 0], [0, 1], [-1, -1]])
        np.testing.assert_allclose(s.weights, [1 / 3] * 3)

    def test_json_round_trip(self):
        s = random_simplex_spec(np.random.default_rng(1), 3)
        s2 = SimplexKernelSpec.from_dict(s.to_dict())
        np.testing.assert_array_equal(s.normals, s2.normals)

    @given(st.integers(2, 5), st.integers(0, 10_000), st.data())
    @settings(max_examples=40, deadline=None)
    def test_random_specs_valid(self, dim, seed, data):
        size = data.draw(st.integers(2, dim + 1))
        s = random_simplex_spec(np.random.default_rng(seed), dim, size)
        assert np.all(s.weights > 0)
        assert abs(s.weights.sum() - 1) < 1e-12
        assert np.linalg.norm(s.weights @ s.normals) < 1e-9


class TestL1Measure:
    def test_line(self):
        nu = l1_measure(1)
        np.testing.assert_array_equal(nu.directions, [[1], [-1]])
        np.testing.assert_array_equal(nu.masses, [1, 1])

    def test_plane(self):
        nu = l1_measure(2)
        assert len(nu) == 4
        assert np.all(nu.masses @ nu.directions == 0)

    def test_bad_dim(self):
        with pytest.raises(DomainError):
            l1_measure(0)


class TestRoundTrip:
    @given(st.integers(2, 4), st.integers(0, 100_000))
    @settings(max_examples=40, deadline=None)
    def test_kernel_measure_kernel(self, dim, seed):
        rng = np.random.default_rng(seed)
        spec = random_simplex_spec(rng, dim)
        nu = measure_from_simplex_kernel(spec.kernel())
        K = kernel_from_measure(nu)
        assert np.all(K.offsets == 1.0)
        np.testing.assert_allclose(K.normals, nu.total_mass * nu.directions)
        for _ in range(20):
            A = rng.uniform(-10, 10, size=(int(rng.integers(1, 9)), dim))
            expected = simplex_closed_form_eval(A, spec)
            assert minkowski_eval(A, K) == pytest.approx(expected, abs=1e-8)
            assert discrete_linear_eval(A, nu) == pytest.approx(expected, abs=1e-8)

    def test_measure_is_unique(self):
        # the balancing weights of affinely independent normals are unique, so
        # converting a kernel twice (in any atom order) gives the same measure
        spec = random_simplex_spec(np.random.default_rng(9), 3)
        perm = [2, 0, 3, 1]
        a = measure_from_simplex_kernel(spec.kernel())
        b = measure_from_simplex_kernel(HPolytope(spec.normals[perm], np.ones(4)))
        np.testing.assert_allclose(a.masses[perm], b.masses, atol=1e-12)
        np.testing.assert_allclose(a.directions[perm], b.directions, atol=1e-12)

    def test_spec_from_kernel(self):
        s = simplex_spec_from_kernel(HPolytope([[2, 0], [0, 2], [-2, -2]], [2, 2, 2]))
        np.testing.assert_allclose(s.normals, [[1, 0], [0, 1], [-1, -1]])
