import numpy as np
import numpy.linalg as npl
import pytest

from opdilate import dilations, moments
from opdilate.dilations import (
    ISOMETRIC,
    PARTIAL,
    POSITIVE,
    SELF_ADJOINT,
    UNITARY,
    dilation_from_json,
    dilation_to_json,
    equivalence_by_moments,
    gns_selfadjoint,
    isometric_recursive,
    minimal_reduce,
    schaffer_isometry,
    schaffer_unitary,
    tridiagonal_recursive,
    verify_dilation,
)
from opdilate.errors import (
    CriterionFailed,
    InsufficientData,
    RecursionBreakdown,
    ShapeMismatch,
)
from opdilate.opcore import norm2

from conftest import (
    measure_moments,
    power_sequence,
    random_contraction,
    scalar_sequence,
)


COIN = scalar_sequence([1, 0, 1, 0, 1, 0, 1, 0, 1])


# ---- the verification oracle ----

def test_verify_caps_window_and_lists_residuals():
    B = np.array([[0, 1], [1, 0]], dtype=float)
    seq = scalar_sequence([1, 0, 1, 0])
    res = verify_dilation(B, seq, 10, SELF_ADJOINT)
    assert len(res.residuals) == seq.order + 1
    assert max(res.residuals) == 0.0
    assert res.structure_defect == 0.0
    assert res.base_dim == 1 and res.ambient_dim == 2


def test_verify_structure_defects_by_kind():
    seq = scalar_sequence([1, 0])
    J = np.array([[0, 1], [0, 0]], dtype=float)
    assert verify_dilation(J, seq, 1, SELF_ADJOINT).structure_defect == \
        pytest.approx(1.0)
    assert verify_dilation(np.diag([0.0, -1.0]), seq, 1,
                           POSITIVE).structure_defect == pytest.approx(1.0)
    # truncated shift: isometric away from the entering edge
    S = np.zeros((3, 3))
    S[1, 0] = S[2, 1] = 1.0
    res = verify_dilation(S, seq, 1, ISOMETRIC)
    assert res.structure_defect == pytest.approx(0.0)
    assert res.edge_defect == pytest.approx(1.0)
    resu = verify_dilation(S, seq, 1, UNITARY)
    assert resu.structure_defect == pytest.approx(0.0)
    assert resu.edge_defect == pytest.approx(2.0)
    # R*R must be a projection for a partial isometry
    R = np.array([[0.5, 0.5], [0.5, 0.5]])
    assert verify_dilation(R, scalar_sequence([1, 0.5]), 1,
                           PARTIAL).structure_defect < 1e-12
    with pytest.raises(ValueError):
        verify_dilation(np.eye(1), seq, 1, "SKEW")


# ---- Gram-kernel construction ----

def test_gns_coin_is_exact():
    res = gns_selfadjoint(COIN, 1)
    assert np.allclose(res.operator, [[0, 1], [1, 0]], atol=1e-12)
    assert max(res.residuals) < 1e-12
    res2 = gns_selfadjoint(COIN, 3)
    assert max(res2.residuals) < 1e-12
    assert res2.guaranteed_orders == 3


def test_gns_point_mass_collapses_to_scalar():
    c = 0.4
    seq = scalar_sequence([c ** n for n in range(8)])
    res = gns_selfadjoint(seq, 3)
    assert res.ambient_dim == 1
    assert res.operator[0, 0] == pytest.approx(c)


def test_gns_guards():
    with pytest.raises(InsufficientData):
        gns_selfadjoint(scalar_sequence([1, 0, 1]), 1)
    grown = scalar_sequence([1, 0, 4, 0, 16, 0, 64, 0, 256])
    with pytest.raises(CriterionFailed):
        gns_selfadjoint(grown, 1)
    skew = power_sequence(np.array([[0.0, 0.5], [-0.5, 0.0]]), 5)
    with pytest.raises(CriterionFailed):
        gns_selfadjoint(skew, 1)


def test_gns_matches_measure_moments(rng):
    for _ in range(10):
        vals, _, _ = measure_moments(rng, atoms=3, n_terms=10)
        res = gns_selfadjoint(scalar_sequence(vals), 4)
        assert max(res.residuals) < 1e-8
        assert res.structure_defect < 1e-10


# ---- tridiagonal recursion ----

def test_tridiagonal_coin_rank_terminates():
    blocks, res = tridiagonal_recursive(COIN, 2)
    assert res.ambient_dim == 2
    assert max(res.residuals) == 0.0
    assert len(res.residuals) == COIN.order + 1  # termination checks all data


def test_tridiagonal_full_depth_and_zero_pattern(rng):
    for _ in range(8):
        vals, _, _ = measure_moments(rng, atoms=4, n_terms=10)
        seq = scalar_sequence(vals)
        blocks, res = tridiagonal_recursive(seq, 4)
        B = res.operator
        assert norm2(B - B.conj().T) < 1e-10
        assert np.abs(np.triu(B, 2)).max() < 1e-12
        assert max(res.residuals) < 1e-8


def test_tridiagonal_last_diagonal_defaults_to_zero(rng):
    # A_(2*levels+1) unavailable: the final diagonal block is free and
    # set to zero without hurting the guaranteed window
    vals, _, _ = measure_moments(rng, atoms=4, n_terms=9)
    seq = scalar_sequence(vals)
    blocks, res = tridiagonal_recursive(seq, 4)
    assert max(res.residuals) < 1e-8


def test_tridiagonal_detects_inconsistent_tail():
    with pytest.raises(RecursionBreakdown) as exc:
        tridiagonal_recursive(scalar_sequence([1, 0, 0, 1]), 1)
    assert exc.value.level == 0


def test_tridiagonal_rejects_indefinite_even_data():
    with pytest.raises(CriterionFailed):
        tridiagonal_recursive(scalar_sequence([1, 0, -1]), 1)


# ---- isometric constructions ----

def test_isometric_matches_schaffer(rng):
    for _ in range(8):
        d = int(rng.integers(1, 4))
        T = random_contraction(rng, d, norm=0.85)
        seq = power_sequence(T, 8)
        res_i = isometric_recursive(seq, 3)
        res_s = schaffer_isometry(T, 3)
        assert max(res_i.residuals) < 1e-10
        assert max(res_s.residuals) < 1e-12
        gap = equivalence_by_moments(res_i.operator, res_s.operator, d, 3)
        assert gap < 1e-10
        assert res_i.structure_defect < 1e-10


def test_isometric_unitary_base_short_circuit():
    seq = scalar_sequence([1, 1, 1, 1])
    res = isometric_recursive(seq, 2)
    assert res.ambient_dim == 1
    # an inconsistent tail after a unitary base is already refuted by
    # the Toeplitz gate, which takes precedence over the short-circuit
    with pytest.raises(CriterionFailed):
        isometric_recursive(scalar_sequence([1, 1, 0, 0]), 2)


def test_isometric_guards():
    with pytest.raises(InsufficientData):
        isometric_recursive(scalar_sequence([1, 0.5]), 1)
    grown = power_sequence(np.array([[1.4]]), 5)
    with pytest.raises(CriterionFailed):
        isometric_recursive(grown, 2)
    refuted = scalar_sequence([1, 1, -1, 1])
    with pytest.raises(CriterionFailed):
        isometric_recursive(refuted, 2)


def test_schaffer_isometry_exact_corners():
    rng = np.random.default_rng(17)
    T = random_contraction(rng, 3, norm=0.95)
    res = schaffer_isometry(T, 4)
    V = res.operator
    for n in range(5):
        corner = npl.matrix_power(V, n)[:3, :3]
        assert norm2(corner - npl.matrix_power(T, n)) < 1e-13
    assert res.structure_defect < 1e-13
    assert res.edge_defect > 0.1  # the entering truncation edge is real


def test_schaffer_unitary_covers_both_directions():
    rng = np.random.default_rng(31)
    T = random_contraction(rng, 2, norm=0.9)
    res = schaffer_unitary(T, copies_back=2, copies_fwd=3)
    U = res.operator
    for n in range(4):
        corner = npl.matrix_power(U, n)[:2, :2]
        assert norm2(corner - npl.matrix_power(T, n)) < 1e-13
    for n in range(3):
        corner = npl.matrix_power(U.conj().T, n)[:2, :2]
        assert norm2(corner - npl.matrix_power(T.conj().T, n)) < 1e-13
    assert res.structure_defect < 1e-13


# ---- reduction and equivalence ----

def test_minimal_reduce_drops_unreachable_space():
    T = np.array([[0.5]])
    res = schaffer_isometry(T, 6)
    B_min, level_dims = minimal_reduce(res.operator, 1, 4)
    assert B_min.shape[0] == sum(level_dims)
    assert B_min.shape[0] < res.operator.shape[0]
    gap = equivalence_by_moments(
        np.pad(B_min, ((0, 0), (0, 0))), res.operator[:B_min.shape[0],
                                                      :B_min.shape[0]], 1, 3)
    # corner moments survive the compression
    for n in range(4):
        assert abs(npl.matrix_power(B_min, n)[0, 0] - 0.5 ** n) < 1e-12


def test_equivalence_by_moments_two_sided():
    U1 = np.array([[0, 1], [1, 0]], dtype=float)
    U2 = np.eye(2)
    assert equivalence_by_moments(U1, U1, 1, 4) == 0.0
    assert equivalence_by_moments(U1, U2, 1, 2) == pytest.approx(1.0)
    assert equivalence_by_moments(U1, U2, 1, 2, two_sided=True) == \
        pytest.approx(1.0)


# ---- JSON round trip ----

def test_dilation_json_round_trip():
    res = schaffer_isometry(np.array([[0.25]]), 2)
    obj = dilation_to_json(res)
    assert set(obj) == {"kind", "operator", "base_dim", "guaranteed_orders",
                        "residuals", "structure_defect"}
    back = dilation_from_json(obj)
    assert back.kind == res.kind
    assert np.array_equal(back.operator, res.operator)
    assert back.guaranteed_orders == res.guaranteed_orders
    with pytest.raises(ShapeMismatch):
        dilation_from_json({**obj, "kind": "OTHER"})
    with pytest.raises(ShapeMismatch):
        dilation_from_json({"kind": "UNITARY"})
