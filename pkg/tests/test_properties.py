import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from nlew.builders import evaluate
from nlew.decomposition import decompose, reconstruct
from nlew.linalg import partial_trace, partial_transpose, realignment, trace_norm
from nlew.sepmax import closed_form_wlp
from nlew.states import DensityMatrix, ppt_classify, sample_separable
from nlew.witnesses import k_term, wl_p

dims_st = st.sampled_from([(2, 2), (2, 3), (3, 2), (3, 3)])
seed_st = st.integers(0, 2**32 - 1)


@settings(max_examples=60, deadline=None)
@given(dims_st, st.integers(1, 10), seed_st)
def test_separable_states_are_ppt_and_respect_bounds(dims, k, seed):
    rho = sample_separable(dims, k, seed).state()
    assert ppt_classify(rho).is_ppt
    assert k_term(rho).value <= 1e-12
    assert trace_norm(realignment(rho.matrix, dims)) <= 1 + 1e-9


@settings(max_examples=60, deadline=None)
@given(dims_st, seed_st)
def test_partial_operations_preserve_trace(dims, seed):
    rng = np.random.default_rng(seed)
    n = dims[0] * dims[1]
    m = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    t = np.trace(m)
    assert np.isclose(np.trace(partial_trace(m, dims, "A")), t)
    assert np.isclose(np.trace(partial_trace(m, dims, "B")), t)
    assert np.isclose(np.trace(partial_transpose(m, dims)), t)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([(2, 2), (2, 3), (3, 3)]), seed_st)
def test_decomposition_round_trip(dims, seed):
    rng = np.random.default_rng(seed)
    n = dims[0] * dims[1]
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    h = a + a.conj().T
    assert np.allclose(reconstruct(decompose(h, dims)), h)


@settings(max_examples=60, deadline=None)
@given(st.floats(0.01, 1.0), st.integers(1, 10), seed_st)
def test_wnl_values_nonnegative_on_separable(p, k, seed):
    rho = sample_separable((2, 2), k, seed).state()
    w = wl_p(p)
    for kind in ("F_BASIC", "WNL1", "WNL2", "WNL3"):
        assert evaluate(kind, rho, w).value >= -1e-10


@settings(max_examples=60, deadline=None)
@given(st.floats(0.01, 1.0), st.integers(1, 10), seed_st)
def test_closed_form_bounds_separable_expectation(p, k, seed):
    rho = sample_separable((2, 2), k, seed).matrix()
    assert np.trace(wl_p(p).squared @ rho).real <= closed_form_wlp(p) + 1e-12


@settings(max_examples=40, deadline=None)
@given(seed_st)
def test_density_matrix_accepts_tiny_asymmetry(seed):
    rho = sample_separable((2, 2), 3, seed).matrix().copy()
    rho[0, 1] += 1e-12
    assert np.allclose(DensityMatrix(rho, (2, 2)).matrix, DensityMatrix(rho, (2, 2)).matrix.conj().T)
