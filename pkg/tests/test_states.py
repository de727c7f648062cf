import math
from fractions import Fraction

import numpy as np
import pytest

from nlew.linalg import DimensionError, partial_transpose
from nlew.states import (
    FAMILIES,
    DensityMatrix,
    InvalidStateError,
    ParameterRangeError,
    as_state,
    bloch_state,
    family_registry,
    make_state,
    ppt_classify,
    product_state_from_bloch,
    sample_separable,
    separable_samples,
)

from oracles import frac_det

# one interior point per parameterized family
INTERIOR = {
    "rho_st": [0.5, 0.2],
    "isotropic_2x2": [0.5],
    "mems": [0.5],
    "rho_a": [0.5],
    "isotropic_3x3": [0.5],
    "rho_b": [0.5],
    "rho_beta": [0.8],
    "rho_x": [2.0],
    "horodecki": [3.5],
}


@pytest.mark.parametrize("name", sorted(FAMILIES))
def test_every_family_builds_a_valid_state(name):
    fam = FAMILIES[name]
    rho = make_state(name, INTERIOR.get(name, []))
    assert rho.dims == fam.dims
    assert np.trace(rho.matrix).real == pytest.approx(1, abs=1e-12)
    assert np.allclose(rho.matrix, rho.matrix.conj().T)
    assert np.linalg.eigvalsh(rho.matrix)[0] >= -1e-12


def test_registry_lists_every_family():
    names = {e["family"] for e in family_registry()}
    assert names == set(FAMILIES)


def test_density_matrix_rejects_bad_input():
    with pytest.raises(InvalidStateError):
        DensityMatrix(np.eye(4) / 2, (2, 2))
    with pytest.raises(InvalidStateError):
        DensityMatrix(np.diag([1.5, -0.5, 0, 0]), (2, 2))
    with pytest.raises(InvalidStateError):
        bad = np.eye(4) / 4
        bad[0, 1] = 0.1
        DensityMatrix(bad, (2, 2))
    with pytest.raises(DimensionError):
        DensityMatrix(np.eye(4) / 4, (2, 3))
    with pytest.raises(DimensionError):
        DensityMatrix(np.eye(2) / 2, (1, 2))


def test_density_matrix_is_read_only():
    rho = make_state("phi_plus")
    with pytest.raises(ValueError):
        rho.matrix[0, 0] = 1


def test_as_state():
    rho = make_state("phi_plus")
    assert as_state(rho) is rho
    assert as_state(np.eye(4) / 4, (2, 2)).dims == (2, 2)
    with pytest.raises(ValueError):
        as_state(np.eye(4) / 4)


def test_parameter_ranges():
    with pytest.raises(ParameterRangeError):
        make_state("rho_a", [1.5])
    with pytest.raises(ParameterRangeError):
        make_state("rho_x", [0.0])
    with pytest.raises(ParameterRangeError):
        make_state("rho_beta", [0.5])
    with pytest.raises(ParameterRangeError):
        make_state("mems", [0.99])
    with pytest.raises(ParameterRangeError):
        make_state("rho_a", [])
    with pytest.raises(ParameterRangeError):
        make_state("rho_a", {"b": 0.3})
    with pytest.raises(KeyError):
        make_state("nope")


def test_named_and_positional_params_agree():
    a = make_state("rho_st", [0.5, 0.2]).matrix
    b = make_state("rho_st", {"t": 0.2, "s": 0.5}).matrix
    c = make_state("rho_st", s=0.5, t=0.2).matrix
    assert np.array_equal(a, b) and np.array_equal(a, c)


def test_rho_st_needs_s_at_least_quarter():
    with pytest.raises(InvalidStateError):
        make_state("rho_st", [0.1, 0.0])


def test_isotropic_2x2_entries():
    rho = make_state("isotropic_2x2", [1.0]).matrix
    assert np.allclose(rho, make_state("phi_plus").matrix)
    assert np.allclose(make_state("isotropic_2x2", [0.0]).matrix, np.eye(4) / 4)


def test_mems_has_trace_one_at_both_ends():
    for q in (0.0, 0.97997):
        assert np.trace(make_state("mems", [q]).matrix).real == pytest.approx(1)


def test_isotropic_3x3_limits():
    rho = make_state("isotropic_3x3", [1.0]).matrix
    assert np.linalg.matrix_rank(rho, tol=1e-10) == 1
    assert np.allclose(make_state("isotropic_3x3", [1 / 9]).matrix, np.eye(9) / 9)


@pytest.mark.parametrize(
    "name,params,label",
    [
        ("phi_plus", [], "NPT"),
        ("rho_ent", [], "NPT"),
        ("rho_2x3", [], "NPT"),
        ("rho_1", [], "NPT"),
        ("rho_b", [0.3], "NPT"),
        ("rho_beta", [0.8], "NPT"),
        ("rho_a", [0.5], "NPT"),
        ("isotropic_2x2", [1 / 3], "PPT"),
        ("isotropic_2x2", [0.34], "NPT"),
        ("rho_x", [0.5], "PPT"),
        ("rho_x", [3.0], "PPT"),
        ("horodecki", [3.5], "PPT"),
        ("horodecki", [4.5], "NPT"),
    ],
)
def test_ppt_labels(name, params, label):
    assert ppt_classify(make_state(name, params)).label == label


def test_ppt_label_matches_partial_transpose_spectrum():
    rho = make_state("isotropic_2x2", [0.6])
    lmin = np.linalg.eigvalsh(partial_transpose(rho.matrix, (2, 2)))[0]
    # isotropic_2x2 PT has min eigenvalue (1 - 3 alpha)/4
    assert lmin == pytest.approx((1 - 3 * 0.6) / 4)
    assert ppt_classify(rho).min_eigenvalue == pytest.approx(lmin)


def test_rho_1_exact_determinant_oracle():
    rows = [
        [Fraction(21, 79) + 1, 0, 0, 0],
        [0, Fraction(29, 79) + 1, Fraction(-29, 79), 0],
        [0, Fraction(-29, 79), Fraction(29, 79) + 1, 0],
        [0, 0, 0, 1],
    ]
    det_full = frac_det(rows)
    assert det_full == Fraction(100, 79) * (1 + Fraction(58, 79))
    rho = make_state("rho_1_exact").matrix
    assert np.linalg.det(np.eye(4) + rho).real == pytest.approx(float(det_full), abs=1e-14)


def test_bloch_qubit_and_qutrit():
    assert np.allclose(bloch_state([0, 0, 1]), np.diag([1, 0]))
    assert np.allclose(bloch_state([0] * 8), np.eye(3) / 3)
    with pytest.raises(InvalidStateError):
        bloch_state([1, 1, 0])
    # unit vector along diag(1,1,-2)/sqrt(3) with coefficient +1 is not PSD
    with pytest.raises(InvalidStateError):
        bloch_state([0] * 7 + [1])
    ok = bloch_state([0] * 7 + [-1])
    assert np.linalg.eigvalsh(ok)[0] >= -1e-12
    with pytest.raises(ValueError):
        bloch_state([0, 0])


def test_product_state_from_bloch():
    rho = product_state_from_bloch([0, 0, 1], [0, 0, -1])
    assert np.allclose(rho.matrix, np.diag([0, 1, 0, 0]))


def test_sample_separable_is_valid_and_ppt():
    for k in (1, 3, 10):
        mix = sample_separable((2, 3), k, seed=k)
        rho = mix.state()
        assert len(mix.weights) == k
        assert ppt_classify(rho).is_ppt
    with pytest.raises(ValueError):
        sample_separable((2, 2), 0)


def test_separable_samples_deterministic():
    a = list(separable_samples((3, 3), 20, seed=7))
    b = list(separable_samples((3, 3), 20, seed=7))
    c = list(separable_samples((3, 3), 20, seed=8))
    assert all(np.array_equal(x, y) for x, y in zip(a, b))
    assert not np.allclose(a[0], c[0])
    # a prefix of a longer run is not required to match, but each state must be valid
    for m in a:
        DensityMatrix(m, (3, 3))


def test_rho_x_is_symmetric_in_x_and_inverse_x_marginal():
    # marginals are maximally mixed for every x
    from nlew.linalg import partial_trace

    for x in (0.3, 1.0, 4.0):
        rho = make_state("rho_x", [x]).matrix
        assert np.allclose(partial_trace(rho, (3, 3), "A"), np.eye(3) / 3)
        assert np.allclose(partial_trace(rho, (3, 3), "B"), np.eye(3) / 3)


def test_rho_beta_normalization():
    for beta in (1 / math.sqrt(2), 0.9, 1.0):
        assert np.trace(make_state("rho_beta", [beta]).matrix).real == pytest.approx(1)
