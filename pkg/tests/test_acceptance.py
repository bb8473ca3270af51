"""End-to-end acceptance checks, one test per numbered criterion.

Each test prints a single ``[criterion N] PASS/FAIL`` line (visible in
captured output on failure, and mirrored by the test verdict itself).
Criteria 1 (nilpotent variant) and 9 are expected to fail: the closed
forms they assert do not hold, and the oracles here report that
honestly rather than looking away.  See the assertion messages for the
measured values.
"""
from __future__ import annotations

import time

import numpy as np

from opdilate import moments
from opdilate.ca_class import (
    berger_stampfli_check,
    ca_build,
    ca_isometric_V,
    ca_unitary_U,
    istratescu_monotonicity_test,
    kernel_check,
    minimal_subspace_check,
    partial_isometry_R,
)
from opdilate.ca_class import _core_blocks  # core identity under test
from opdilate.dilations import (
    SELF_ADJOINT,
    equivalence_by_moments,
    gns_selfadjoint,
    isometric_recursive,
    schaffer_isometry,
    tridiagonal_recursive,
    verify_dilation,
)
from opdilate.moments import NO, YES
from opdilate.opcore import krylov_orthonormalize, norm2

from conftest import (
    commuting_pair_block,
    commuting_pair_normal,
    measure_moments,
    power_sequence,
    random_contraction,
    random_pd,
    scalar_sequence,
)


def verdict(num: int, label: str, ok: bool, detail: str = "") -> str:
    msg = f"[criterion {num}] {'PASS' if ok else 'FAIL'}: {label}"
    if detail:
        msg += f" -- {detail}"
    print(msg)
    return msg


def fifty_instances():
    """The shared commuting-pair population for criteria 2 and 3."""
    rng = np.random.default_rng(1205)
    out = []
    for i in range(25):
        out.append(commuting_pair_normal(rng, int(rng.integers(1, 6))))
    for i in range(25):
        blocks = [int(rng.integers(1, 3)) for _ in range(2)]
        out.append(commuting_pair_block(rng, blocks))
    return out


# ---------------------------------------------------------------------------
# 1. closed-form example dilations
# ---------------------------------------------------------------------------

def test_criterion_1_closed_form_examples():
    # scalar variant: moments 2^((n-2)/2) at even n >= 2, identity at 0
    seq = scalar_sequence([1, 0, 1, 0, 2])
    V = np.array([[0, 1, 0], [1, 0, 1], [0, 1, 0]], dtype=float)
    res = verify_dilation(V, seq, 4, SELF_ADJOINT)
    exact = all(r == 0.0 for r in res.residuals)

    t0 = time.perf_counter()  # warm call above; timed call below
    verify_dilation(V, seq, 4, SELF_ADJOINT)
    elapsed = time.perf_counter() - t0
    fast = elapsed < 1e-3

    # nilpotent variant: same even-moment rule applied to T^n makes
    # every moment past A_0 vanish, and the proposed 3x3-block operator
    # is measured against that sequence
    T = np.array([[0, 1], [0, 0]], dtype=float)
    Ts = T.conj().T
    Z = np.zeros((2, 2))
    V2 = np.block([[Z, Ts, Z], [T, Z, Ts], [Z, T, Z]])
    seq2 = moments.moment_sequence(
        [np.eye(2)] + [np.zeros((2, 2))] * 4)
    res2 = verify_dilation(V2, seq2, 4, SELF_ADJOINT)
    nilpotent_ok = max(res2.residuals) < 1e-12

    ok = exact and fast and nilpotent_ok
    msg = verdict(
        1, "closed-form example dilations reproduce their moments", ok,
        f"scalar exact={exact}, runtime={elapsed * 1e6:.0f}us, "
        f"nilpotent max residual={max(res2.residuals):.3e} "
        "(the block operator compresses to T*T at n=2, not to 0; "
        "no tolerance admits it)")
    assert ok, msg


# ---------------------------------------------------------------------------
# 2. core unitary identities
# ---------------------------------------------------------------------------

def test_criterion_2_core_unitary_identities():
    t0 = time.perf_counter()
    worst = 0.0
    for A, C in fifty_instances():
        inst = ca_build(A, C)
        d = inst.dim
        M = np.block(_core_blocks(inst))
        eye = np.eye(d)
        zero = np.zeros((d, d))
        gram_left = M.conj().T @ M
        gram_right = M @ M.conj().T
        target_left = np.block([
            [eye, zero, zero, zero],
            [zero, eye, zero, zero],
            [zero, zero, eye, zero],
            [zero, zero, zero, zero]])
        target_right = np.block([
            [zero, zero, zero, zero],
            [zero, eye, zero, zero],
            [zero, zero, eye, zero],
            [zero, zero, zero, eye]])
        worst = max(worst,
                    norm2(gram_left - target_left),
                    norm2(gram_right - target_right))
    identities_ok = worst < 1e-9

    inst = ca_build(np.array([[2.0]]), np.array([[2.0 ** -0.5]]))
    M = np.block(_core_blocks(inst))
    s = 2.0 ** -0.5
    hand = np.array([
        [0.0, 0.0, 0.0, 0.0],
        [-s, 0.5, 0.5, 0.0],
        [s, 0.5, 0.5, 0.0],
        [0.0, s, -s, 0.0]])
    hand_ok = norm2(M - hand) < 1e-12
    elapsed = time.perf_counter() - t0
    fast = elapsed < 1.0

    ok = identities_ok and hand_ok and fast
    msg = verdict(2, "4x4 block core is a coisometry/isometry off the slots",
                  ok, f"worst identity defect={worst:.3e}, "
                      f"scalar hand values ok={hand_ok}, "
                      f"runtime={elapsed:.3f}s")
    assert ok, msg


# ---------------------------------------------------------------------------
# 3. moment consistency chain
# ---------------------------------------------------------------------------

def test_criterion_3_moment_chain_R_V_U():
    worst = 0.0
    for A, C in fifty_instances():
        inst = ca_build(A, C)
        res_r = partial_isometry_R(inst, n_max=6)
        res_v = ca_isometric_V(inst, levels=6)
        res_u = ca_unitary_U(inst, back=1, fwd=6)
        for res in (res_r, res_v, res_u):
            worst = max(worst, max(res.residuals[:7]))
    ok = worst < 1e-8
    msg = verdict(3, "R, V, U corner moments all match the weighted moments",
                  ok, f"worst residual over n <= 6: {worst:.3e}")
    assert ok, msg


# ---------------------------------------------------------------------------
# 4. cross-constructor oracle
# ---------------------------------------------------------------------------

def test_criterion_4_cross_constructor_agreement():
    rng = np.random.default_rng(404)
    worst_gap = 0.0
    worst_jacobi = 0.0
    for _ in range(25):
        atoms = int(rng.integers(1, 5))
        vals, _, _ = measure_moments(rng, atoms, n_terms=10,
                                     min_sep=0.15, min_weight=0.05)
        seq = scalar_sequence(vals)
        _blocks, res_tri = tridiagonal_recursive(seq, 4)
        res_gns = gns_selfadjoint(seq, 4)
        certified = min(res_tri.guaranteed_orders, res_gns.guaranteed_orders)
        gap = equivalence_by_moments(res_tri.operator, res_gns.operator,
                                     1, certified)
        worst_gap = max(worst_gap, gap)

        a, b = moments.jacobi_parameters(seq, 4)
        J = moments.jacobi_matrix(a, b)
        P = np.eye(J.shape[0])
        for n in range(min(2 * len(a) - 1, seq.order) + 1):
            worst_jacobi = max(worst_jacobi, abs(P[0, 0] - vals[n]))
            P = P @ J
    ok = worst_gap < 1e-8 and worst_jacobi < 1e-8
    msg = verdict(4, "independent constructions agree on discrete measures",
                  ok, f"worst constructor gap={worst_gap:.3e}, "
                      f"worst recurrence round trip={worst_jacobi:.3e}")
    assert ok, msg


# ---------------------------------------------------------------------------
# 5. criterion equivalences at desk scale
# ---------------------------------------------------------------------------

def test_criterion_5_power_sequences_certify_and_refute():
    rng = np.random.default_rng(505)
    worst_equiv = 0.0
    all_yes = True
    for _ in range(25):
        d = int(rng.integers(1, 5))
        T = random_contraction(rng, d, norm=float(rng.uniform(0.3, 0.9)))
        seq = power_sequence(T, 40)
        rep_t = moments.toeplitz_positivity_check(seq)
        all_yes &= (rep_t.satisfied == YES
                    and rep_t.certificate == "block-Toeplitz")
        rep_p = moments.poisson_check(seq, radii=(0.3, 0.45))
        all_yes &= rep_p.satisfied == YES
        res_i = isometric_recursive(seq, 3)
        res_s = schaffer_isometry(T, 3)
        worst_equiv = max(worst_equiv, equivalence_by_moments(
            res_i.operator, res_s.operator, d, 3))

    refuted = 0
    witnesses_ok = True
    for _ in range(10):
        d = int(rng.integers(1, 5))
        T = random_contraction(rng, d, norm=float(rng.uniform(1.2, 1.8)))
        seq = power_sequence(T, 10)
        rep = moments.toeplitz_positivity_check(seq)
        if rep.satisfied == NO:
            refuted += 1
            c = rep.witness["coefficients"]
            h = rep.witness["vector"]
            M = sum(np.conj(c[l]) * c[k]
                    * (seq.terms[k - l] if k >= l
                       else seq.terms[l - k].conj().T)
                    for k in range(len(c)) for l in range(len(c)))
            val = float(np.real(h.conj() @ ((M + M.conj().T) / 2) @ h))
            witnesses_ok &= val < 0
            witnesses_ok &= abs(val - rep.witness["value"]) < 1e-8 * abs(val)

    ok = all_yes and worst_equiv < 1e-8 and refuted == 10 and witnesses_ok
    msg = verdict(5, "contractive powers certify, expansive powers refute",
                  ok, f"all certified={all_yes}, "
                      f"isometric-vs-defect-column gap={worst_equiv:.3e}, "
                      f"refuted {refuted}/10 with reusable witnesses")
    assert ok, msg


# ---------------------------------------------------------------------------
# 6. numerical radius consistency
# ---------------------------------------------------------------------------

def test_criterion_6_numerical_radius_and_kernel_agree():
    t0 = time.perf_counter()
    w1, in1, agrees1 = berger_stampfli_check(np.array([[0.0, 2.0],
                                                       [0.0, 0.0]]))
    k1 = kernel_check(2.0 * np.eye(2), np.array([[0.0, 2.0], [0.0, 0.0]]))
    w2, in2, agrees2 = berger_stampfli_check(np.array([[0.0, 3.0],
                                                       [0.0, 0.0]]))
    k2 = kernel_check(2.0 * np.eye(2), np.array([[0.0, 3.0], [0.0, 0.0]]))
    elapsed = time.perf_counter() - t0

    ok = (abs(w1 - 1.0) < 1e-4 and k1.satisfied == YES and in1 and agrees1
          and abs(w2 - 1.5) < 1e-4 and k2.satisfied == NO
          and k2.witness is not None and not in2 and agrees2
          and elapsed < 1.0)
    msg = verdict(6, "radius-one membership matches the kernel criterion",
                  ok, f"w={w1:.6f} (YES), w={w2:.6f} (NO with witness), "
                      f"runtime={elapsed:.3f}s")
    assert ok, msg


# ---------------------------------------------------------------------------
# 7. weight monotonicity
# ---------------------------------------------------------------------------

def test_criterion_7_weight_monotonicity():
    rng = np.random.default_rng(707)
    failures = 0
    for i in range(25):
        d = int(rng.integers(1, 4))
        A1 = random_pd(rng, d, lo=0.5, hi=2.0)
        A2 = A1 + random_pd(rng, d, lo=0.1, hi=1.0)
        T = random_contraction(rng, d, norm=float(rng.uniform(0.5, 1.3)))
        if not istratescu_monotonicity_test(A1, A2, T,
                                            radii=(0.3, 0.6, 0.9),
                                            samples=100,
                                            rng_seed=2024 + i):
            failures += 1
    ok = failures == 0
    msg = verdict(7, "larger weights never lose membership on the grid", ok,
                  f"violating triples: {failures}/25 "
                  "(100 congruence points per triple)")
    assert ok, msg


# ---------------------------------------------------------------------------
# 8. structure invariants
# ---------------------------------------------------------------------------

def _block_tridiagonal_defect(J: np.ndarray, level_dims) -> float:
    offs = np.concatenate([[0], np.cumsum(level_dims)]).astype(int)
    worst = 0.0
    k = len(level_dims)
    for i in range(k):
        for j in range(k):
            if abs(i - j) > 1:
                blk = J[offs[i]:offs[i + 1], offs[j]:offs[j + 1]]
                if blk.size:
                    worst = max(worst, norm2(blk))
    return worst


def test_criterion_8_structure_invariants():
    rng = np.random.default_rng(808)
    worst_pattern = 0.0
    worst_herm = 0.0
    worst_col = 0.0
    worst_krylov = 0.0
    for _ in range(10):
        vals, _, _ = measure_moments(rng, int(rng.integers(2, 5)), 10,
                                     min_sep=0.15, min_weight=0.05)
        seq = scalar_sequence(vals)
        _blocks, res = tridiagonal_recursive(seq, 4)
        B = res.operator
        worst_pattern = max(worst_pattern,
                            float(np.abs(np.triu(B, 2)).max()) if
                            B.shape[0] > 2 else 0.0)
        worst_herm = max(worst_herm, norm2(B - B.conj().T))
        Q, dims = krylov_orthonormalize(B, 1, min(6, B.shape[0]))
        worst_krylov = max(worst_krylov, _block_tridiagonal_defect(
            Q.conj().T @ B @ Q, dims))

        res_g = gns_selfadjoint(seq, 4)
        Q, dims = krylov_orthonormalize(res_g.operator, 1,
                                        min(6, res_g.ambient_dim))
        worst_krylov = max(worst_krylov, _block_tridiagonal_defect(
            Q.conj().T @ res_g.operator @ Q, dims))

    for _ in range(10):
        d = int(rng.integers(1, 4))
        T = random_contraction(rng, d, norm=0.85)
        res_i = isometric_recursive(power_sequence(T, 8), 3)
        worst_col = max(worst_col, res_i.structure_defect)

        # a Hermitian contraction gives a matrix-valued self-adjoint case
        H = T + T.conj().T
        H = 0.8 * H / max(1.0, norm2(H))
        res_h = gns_selfadjoint(power_sequence(H, 7), 3)
        Q, dims = krylov_orthonormalize(res_h.operator, d,
                                        max(2, min(4, res_h.ambient_dim // d)))
        worst_krylov = max(worst_krylov, _block_tridiagonal_defect(
            Q.conj().T @ res_h.operator @ Q, dims))

    ok = (worst_pattern < 1e-12 and worst_herm < 1e-10
          and worst_col < 1e-9 and worst_krylov < 1e-9)
    msg = verdict(8, "zero patterns, orthonormal columns, compressed bands",
                  ok, f"pattern={worst_pattern:.3e} herm={worst_herm:.3e} "
                      f"columns={worst_col:.3e} band={worst_krylov:.3e}")
    assert ok, msg


# ---------------------------------------------------------------------------
# 9. minimal subspace closed forms
# ---------------------------------------------------------------------------

def test_criterion_9_minimal_subspace_closed_forms():
    rng = np.random.default_rng(909)
    gaps = {"trivial-kernel": [], "nontrivial-kernel": []}
    for i in range(20):
        if i % 2:
            A, C = commuting_pair_normal(rng, int(rng.integers(2, 4)))
            regime = "trivial-kernel"
        elif i % 4:
            A, C = commuting_pair_block(rng, [2, 1], unit_alpha=True)
            regime = "nontrivial-kernel"
        else:
            A, C = commuting_pair_normal(rng, 3, singular_c=True)
            regime = "nontrivial-kernel"
        inst = ca_build(A, C)
        gaps[regime].append(minimal_subspace_check(inst, 2))
    worst = max(max(v) for v in gaps.values())
    ok = worst < 1e-8
    msg = verdict(
        9, "closed-form level spaces match the computed minimal dilation",
        ok,
        "level-1 forms agree to roundoff in every run, but the level-2 "
        "closed form spans a strictly smaller space: worst gaps "
        f"trivial-kernel={max(gaps['trivial-kernel']):.3e}, "
        f"nontrivial-kernel={max(gaps['nontrivial-kernel']):.3e} "
        "(the true second level re-enters the first defect block, "
        "which no (n, n+1)-supported formula can reach)")
    assert ok, msg
