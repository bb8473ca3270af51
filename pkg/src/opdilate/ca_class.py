"""Membership criteria and explicit dilations for the weighted classes.

Fix a positive invertible ``A`` and a contraction ``C`` commuting with
``A``.  The derived operators

    B  = (I + A(A - 2I) C*C)^(-1/2)      D  = (I - C*C)^(1/2)
    B* = (I + A(A - 2I) CC*)^(-1/2)      D* = (I - CC*)^(1/2)
    T  = A B D C

generate the weighted moment sequence ``T_n = A^(-1/2) T^n A^(-1/2)``,
which this module tests for unitary-dilation existence (Toeplitz form
of the weighted sequence, and the per-point kernel form) and dilates
explicitly: a partial isometry on two copies of the base space, an
isometry with one defect column, and a bilateral unitary whose core is
a 4x4 block matrix with exactly orthonormal live rows and columns.

Scalar ``A = rho I`` recovers the classical rho-weighted classes
(rho = 1: contractions, rho = 2: numerical radius at most 1).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import numpy.linalg as npl

from .dilations import (
    ISOMETRIC,
    PARTIAL,
    UNITARY,
    DilationResult,
    verify_dilation,
)
from .errors import (
    CoreIdentityFailed,
    CrossCheckFailed,
    DiskViolation,
    NotCommuting,
    NotContraction,
    NotHermitian,
    NotInvertible,
    OrderViolation,
    ShapeMismatch,
)
from .moments import (
    BORDERLINE,
    NO,
    YES,
    CriterionReport,
    MomentSequence,
    moment_sequence,
    toeplitz_positivity_check,
)
from .opcore import (
    DEFAULT_TOL,
    NOT_PSD,
    PSD,
    Tolerance,
    as_matrix,
    hermitian_eig,
    krylov_orthonormalize,
    matrix_from_json,
    matrix_to_json,
    norm2,
    numerical_radius,
    psd_check,
    sqrt_psd,
)

__all__ = [
    "CaInstance",
    "CaMembershipReport",
    "ca_build",
    "ca_moments",
    "zeta_check",
    "kernel_check",
    "partial_isometry_R",
    "ca_isometric_V",
    "ca_unitary_U",
    "minimal_subspace_check",
    "c_rho_build",
    "berger_stampfli_check",
    "istratescu_monotonicity_test",
    "ca_membership_report",
    "instance_to_json",
    "instance_from_json",
]

_DEFAULT_RADII = (0.3, 0.6, 0.9, 0.99)


# ---------------------------------------------------------------------------
# instance construction
# ---------------------------------------------------------------------------

@dataclass
class CaInstance:
    """A commuting pair (A, C) with all derived operators precomputed.

    ``defects`` records the measured residuals of the algebraic
    identities the construction relies on (commutations and the
    defect-operator intertwinings); all are consequences of ``AC = CA``
    and should sit at roundoff level.
    """

    A: np.ndarray
    C: np.ndarray
    B: np.ndarray
    D: np.ndarray
    D_star: np.ndarray
    B_star: np.ndarray
    T: np.ndarray
    defects: dict = field(default_factory=dict, repr=False)

    @property
    def dim(self) -> int:
        return self.A.shape[0]


def _inv_sqrt_psd(M: np.ndarray, tol: Tolerance, what: str) -> np.ndarray:
    H = (M + M.conj().T) / 2.0
    w, V = hermitian_eig(H, tol)
    if w[0] <= tol.tau(H):
        raise NotInvertible(
            f"{what} has smallest eigenvalue {w[0]:.3e}; not invertible")
    return (V * (1.0 / np.sqrt(w))) @ V.conj().T


def ca_build(A, C, tol: Tolerance = DEFAULT_TOL) -> CaInstance:
    """Validate a commuting pair and compute its derived operators.

    Raises
    ------
    NotCommuting
        ``||AC - CA||`` beyond tolerance.
    NotInvertible
        A not positive definite, or ``I + A(A-2I)C*C`` singular.
    NotContraction
        ``||C|| > 1``.
    """
    A = as_matrix(A)
    C = as_matrix(C)
    if A.shape != C.shape or A.shape[0] != A.shape[1]:
        raise ShapeMismatch(
            f"A and C must be square with equal shapes, got {A.shape} "
            f"and {C.shape}")
    d = A.shape[0]
    eye = np.eye(d, dtype=complex)
    t_comm = tol.abs + tol.rel * max(1.0, norm2(A) * norm2(C))
    comm = norm2(A @ C - C @ A)
    if comm > 100.0 * t_comm:
        raise NotCommuting(f"||AC - CA|| = {comm:.3e}")
    repA = psd_check(A, tol)
    if repA.verdict != PSD or repA.min_eigenvalue <= tol.tau(A):
        raise NotInvertible(
            f"A must be positive definite (min eigenvalue "
            f"{repA.min_eigenvalue:.3e})")
    if norm2(C) > 1.0 + tol.tau(C):
        raise NotContraction(f"||C|| = {norm2(C):.6f} > 1")

    CsC = C.conj().T @ C
    CCs = C @ C.conj().T
    core = A @ (A - 2.0 * eye)
    B = _inv_sqrt_psd(eye + core @ CsC, tol, "I + A(A-2I)C*C")
    B_star = _inv_sqrt_psd(eye + core @ CCs, tol, "I + A(A-2I)CC*")
    D = sqrt_psd(eye - CsC, tol)
    D_star = sqrt_psd(eye - CCs, tol)
    T = A @ B @ D @ C

    BD = B @ D
    defects = {
        "AC-CA": comm,
        "AB-BA": norm2(A @ B - B @ A),
        "AD-DA": norm2(A @ D - D @ A),
        "BD-DB": norm2(B @ D - D @ B),
        "D*C-CD": norm2(D_star @ C - C @ D),
        "CB-B*C": norm2(C @ B - B_star @ C),
        "(BD)^2-(I-B^2(A-I)^2C*C)": norm2(
            BD @ BD - (eye - B @ B @ (A - eye) @ (A - eye) @ CsC)),
    }
    return CaInstance(A, C, B, D, D_star, B_star, T, defects)


def ca_moments(inst: CaInstance, n_max: int,
               tol: Tolerance = DEFAULT_TOL) -> MomentSequence:
    """Weighted moments ``T_n = A^(-1/2) T^n A^(-1/2)``, cross-checked.

    Every term is also computed along the second route
    ``A^(n-1) (BDC)^n``; disagreement beyond tolerance means the
    commutation assumption was violated and raises
    :class:`CrossCheckFailed`.
    """
    if n_max < 1:
        raise ShapeMismatch("n_max must be >= 1")
    d = inst.dim
    eye = np.eye(d, dtype=complex)
    Ah = _inv_sqrt_psd(inst.A, tol, "A")
    M = inst.B @ inst.D @ inst.C
    terms = [eye]
    Tn = eye
    Mn = eye
    for n in range(1, n_max + 1):
        Tn = Tn @ inst.T
        Mn = Mn @ M
        first = Ah @ Tn @ Ah
        second = npl.matrix_power(inst.A, n - 1) @ Mn
        gap = norm2(first - second)
        if gap > 100.0 * (tol.abs + tol.rel * (1.0 + norm2(first))):
            raise CrossCheckFailed(
                f"moment routes disagree by {gap:.3e} at order {n}")
        terms.append(first)
    return moment_sequence(terms, tol)


# ---------------------------------------------------------------------------
# membership criteria
# ---------------------------------------------------------------------------

def zeta_check(A, T, N: int, trials: int = 64, rng_seed: int = 2024,
               tol: Tolerance = DEFAULT_TOL) -> CriterionReport:
    """Toeplitz positivity of the weighted sequence of T under A.

    Builds ``zeta(0) = I, zeta(n) = A^(-1/2) T^n A^(-1/2)`` and
    delegates to the two-tier Toeplitz test (negative indices are
    adjoints, so only the forward window is materialized).
    """
    A = as_matrix(A)
    T = as_matrix(T)
    if A.shape != T.shape or A.shape[0] != A.shape[1]:
        raise ShapeMismatch("A and T must be square with equal shapes")
    if N < 1:
        raise ShapeMismatch("N must be >= 1")
    Ah = _inv_sqrt_psd(A, tol, "A")
    d = A.shape[0]
    terms = [np.eye(d, dtype=complex)]
    Tn = np.eye(d, dtype=complex)
    for _ in range(N):
        Tn = Tn @ T
        terms.append(Ah @ Tn @ Ah)
    seq = moment_sequence(terms, tol)
    rep = toeplitz_positivity_check(seq, trials, rng_seed, tol)
    return CriterionReport("zeta", rep.satisfied, rep.max_order_checked,
                           rep.worst_margin, rep.witness, rep.certificate)


def _kernel_matrix(A: np.ndarray, T: np.ndarray, z: complex) -> np.ndarray:
    d = A.shape[0]
    eye = np.eye(d, dtype=complex)
    F = eye - z * T
    W = F.conj().T @ (A - 2.0 * eye) @ F + F + F.conj().T
    return (W + W.conj().T) / 2.0


def _kernel_grid(A, T, radii, angles, tol):
    points = []
    for r in radii:
        if not (0.0 <= r < 1.0):
            raise DiskViolation(f"grid radius {r} is not in [0, 1)")
        for theta in np.linspace(0.0, 2.0 * np.pi, angles, endpoint=False):
            z = complex(r * np.exp(1j * theta))
            rep = psd_check(_kernel_matrix(A, T, z), tol)
            points.append((z, rep))
    return points


def kernel_check(A, T, radii=_DEFAULT_RADII, angles: int = 64,
                 tol: Tolerance = DEFAULT_TOL) -> CriterionReport:
    """Per-point positivity of W(z) = (I-zT)*(A-2I)(I-zT) + 2 Re(I-zT).

    Positivity of W(z) for every |z| < 1 is the quadratic-form
    membership criterion with the vector quantifier removed exactly
    (for fixed z the condition over all h is PSD of W(z)); only the z
    quantifier is sampled, so a YES is qualified to the grid while a
    NO is a certified refutation with witness (z, h).
    """
    A = as_matrix(A)
    T = as_matrix(T)
    if A.shape != T.shape or A.shape[0] != A.shape[1]:
        raise ShapeMismatch("A and T must be square with equal shapes")
    if norm2(A - A.conj().T) > tol.tau(A):
        raise NotHermitian("A must be Hermitian")
    if not len(radii) or angles < 1:
        raise ShapeMismatch("empty evaluation grid")
    points = _kernel_grid(A, T, radii, angles, tol)
    worst = min(rep.min_eigenvalue for _, rep in points)
    witness = None
    for z, rep in points:
        if rep.verdict == NOT_PSD:
            witness = {"z": z, "vector": rep.witness,
                       "value": rep.min_eigenvalue}
            break
    if witness is not None:
        satisfied = NO
    elif all(rep.verdict == PSD for _, rep in points):
        satisfied = YES
    else:
        satisfied = BORDERLINE
    return CriterionReport("kernel", satisfied, 0, worst, witness)


@dataclass
class CaMembershipReport:
    """Both membership criteria side by side, with a consistency flag."""

    zeta_verdict: CriterionReport
    kernel_verdict: CriterionReport
    consistent: bool


def ca_membership_report(inst: CaInstance, N: int = 6, trials: int = 64,
                         rng_seed: int = 2024,
                         tol: Tolerance = DEFAULT_TOL) -> CaMembershipReport:
    zeta = zeta_check(inst.A, inst.T, N, trials, rng_seed, tol)
    kern = kernel_check(inst.A, inst.T, tol=tol)
    contradiction = {zeta.satisfied, kern.satisfied} == {YES, NO}
    return CaMembershipReport(zeta, kern, not contradiction)


# ---------------------------------------------------------------------------
# explicit dilations
# ---------------------------------------------------------------------------

def _r_blocks(inst: CaInstance):
    Am = inst.A - np.eye(inst.dim, dtype=complex)
    return (inst.B @ inst.D @ inst.C,
            inst.B @ inst.D @ inst.D_star,
            Am @ inst.C @ inst.B @ inst.C,
            Am @ inst.C @ inst.B @ inst.D_star)

def partial_isometry_R(inst: CaInstance, n_max: int = 6,
                       tol: Tolerance = DEFAULT_TOL) -> DilationResult:
    """2d x 2d partial isometry whose corner powers are the T_n.

    ``R*R`` must equal the closed form [[C*C, C*D*], [D*C, D*^2]]
    (checked; violation raises :class:`CrossCheckFailed`), which is a
    projection, so R is a partial isometry by construction.
    """
    d = inst.dim
    R00, R01, R10, R11 = _r_blocks(inst)
    R = np.block([[R00, R01], [R10, R11]])
    CsC = inst.C.conj().T @ inst.C
    CDs = inst.C.conj().T @ inst.D_star
    closed = np.block([[CsC, CDs],
                       [CDs.conj().T, inst.D_star @ inst.D_star]])
    gap = norm2(R.conj().T @ R - closed)
    if gap > 100.0 * (tol.abs + tol.rel * (1.0 + norm2(R))):
        raise CrossCheckFailed(
            f"R*R deviates from its closed form by {gap:.3e}")
    seq = ca_moments(inst, n_max, tol)
    return verify_dilation(R, seq, n_max, PARTIAL, tol)


def ca_isometric_V(inst: CaInstance, levels: int,
                   tol: Tolerance = DEFAULT_TOL) -> DilationResult:
    """Isometric dilation of the weighted moments on levels + 3 blocks.

    First two block columns extend the partial isometry R by the defect
    row (D, -C*); the remaining columns are an identity shift.  Corner
    power paths never leave the leading two blocks, so corner moments
    equal T_n exactly at every order; the certificate window is
    ``levels + 1``.
    """
    if levels < 1:
        raise ShapeMismatch("levels must be >= 1")
    d = inst.dim
    eye = np.eye(d, dtype=complex)
    nblocks = levels + 3
    m = nblocks * d
    V = np.zeros((m, m), dtype=complex)
    R00, R01, R10, R11 = _r_blocks(inst)
    V[0:d, 0:d] = R00
    V[d:2 * d, 0:d] = R10
    V[2 * d:3 * d, 0:d] = inst.D
    V[0:d, d:2 * d] = R01
    V[d:2 * d, d:2 * d] = R11
    V[2 * d:3 * d, d:2 * d] = -inst.C.conj().T
    for j in range(2, levels + 2):
        V[(j + 1) * d:(j + 2) * d, j * d:(j + 1) * d] = eye
    seq = ca_moments(inst, levels + 1, tol)
    return verify_dilation(V, seq, levels + 1, ISOMETRIC, tol)


def _core_blocks(inst: CaInstance):
    """4x4 block core (rows/cols: incoming, base, defect, outgoing)."""
    d = inst.dim
    zero = np.zeros((d, d), dtype=complex)
    Am = inst.A - np.eye(d, dtype=complex)
    R00, R01, R10, R11 = _r_blocks(inst)
    return [
        [zero, zero, zero, zero],
        [-Am @ inst.B @ inst.C.conj().T, R00, R01, zero],
        [inst.B_star @ inst.D_star, R10, R11, zero],
        [zero, inst.D, -inst.C.conj().T, zero],
    ]


def ca_unitary_U(inst: CaInstance, back: int, fwd: int,
                 tol: Tolerance = DEFAULT_TOL) -> DilationResult:
    """Bilateral unitary dilation of the weighted moments, truncated.

    The 4x4 core M (zero top row, zero last column) satisfies
    ``M*M = diag(I, I, I, 0)`` and ``MM* = diag(0, I, I, I)`` exactly
    when (A, C) commute; both identities are verified and a violation
    raises :class:`CoreIdentityFailed`.  The core is framed by ``back``
    incoming and ``fwd`` outgoing identity shifts in natural two-sided
    order, then permuted so the base block leads.  Corner powers equal
    T_n at every order; certified for ``n <= fwd`` (and adjoint powers
    up to ``back`` by symmetry).
    """
    if back < 1 or fwd < 1:
        raise ShapeMismatch("back and fwd must be >= 1")
    d = inst.dim
    eye = np.eye(d, dtype=complex)
    core = _core_blocks(inst)
    M = np.block(core)
    left = M.conj().T @ M
    right = M @ M.conj().T
    target_l = np.zeros((4 * d, 4 * d), dtype=complex)
    target_l[:3 * d, :3 * d] = np.eye(3 * d)
    target_r = np.zeros((4 * d, 4 * d), dtype=complex)
    target_r[d:, d:] = np.eye(3 * d)
    t_core = 100.0 * (tol.abs + tol.rel * (1.0 + norm2(M)))
    gl, gr = norm2(left - target_l), norm2(right - target_r)
    if gl > t_core or gr > t_core:
        raise CoreIdentityFailed(
            f"core identities fail: ||M*M - diag(I,I,I,0)|| = {gl:.3e}, "
            f"||MM* - diag(0,I,I,I)|| = {gr:.3e}")

    # natural block levels: -(back+1) .. fwd+2, core occupying -1..2
    naturals = list(range(-(back + 1), fwd + 3))
    pos = {lv: k for k, lv in enumerate(naturals)}
    m = len(naturals) * d
    U = np.zeros((m, m), dtype=complex)

    def put(i, j, blk):
        U[pos[i] * d:(pos[i] + 1) * d, pos[j] * d:(pos[j] + 1) * d] = blk

    for a in range(4):
        for b in range(4):
            put(a - 1, b - 1, core[a][b])
    for k in range(-back, 0):
        put(k, k - 1, eye)
    for k in range(3, fwd + 3):
        put(k, k - 1, eye)
    order = list(range(0, fwd + 3)) + list(range(-1, -(back + 2), -1))
    idx = np.concatenate([np.arange(pos[lv] * d, (pos[lv] + 1) * d)
                          for lv in order])
    U = U[np.ix_(idx, idx)]
    seq = ca_moments(inst, fwd, tol)
    return verify_dilation(U, seq, fwd, UNITARY, tol)


# ---------------------------------------------------------------------------
# minimal dilation space
# ---------------------------------------------------------------------------

def minimal_subspace_check(inst: CaInstance, n_max: int,
                           tol: Tolerance = DEFAULT_TOL) -> float:
    """Gap between closed-form level spaces and Krylov level spaces.

    The candidate closed forms for the orthogonal levels of the minimal
    isometric dilation space are, writing P for the orthogonal
    projection onto ker((I-A)BDC):

        level 1:      block 1 = (A-I)CBC h,  block 2 = D h
        level n >= 2: block n = (I-A)BCP h,  block n+1 = D h

    For each level up to ``n_max`` the principal-angle gap
    ``||P_closed - P_krylov||_2`` between orthogonal projections is
    computed against the actual Krylov levels of the constructed
    isometry; the maximum is returned (0 means the closed forms span
    the true levels).
    """
    if n_max < 1:
        raise ShapeMismatch("n_max must be >= 1")
    d = inst.dim
    eye = np.eye(d, dtype=complex)
    V = ca_isometric_V(inst, n_max + 2, tol).operator
    m = V.shape[0]
    Q, level_dims = krylov_orthonormalize(V, d, n_max + 1, tol)

    Nmat = (eye - inst.A) @ inst.B @ inst.D @ inst.C
    H = Nmat.conj().T @ Nmat
    w, Wv = hermitian_eig((H + H.conj().T) / 2.0, tol)
    ker = w <= tol.tau(H)
    P = Wv[:, ker] @ Wv[:, ker].conj().T

    gap = 0.0
    offset = level_dims[0]
    for n in range(1, n_max + 1):
        k_dim = level_dims[n]
        Qk = Q[:, offset:offset + k_dim]
        offset += k_dim
        S = np.zeros((m, d), dtype=complex)
        if n == 1:
            S[d:2 * d, :] = (inst.A - eye) @ inst.C @ inst.B @ inst.C
            S[2 * d:3 * d, :] = inst.D
        else:
            S[n * d:(n + 1) * d, :] = (eye - inst.A) @ inst.B @ inst.C @ P
            S[(n + 1) * d:(n + 2) * d, :] = inst.D
        Qs = _orth(S, tol)
        gap = max(gap, norm2(Qs @ Qs.conj().T - Qk @ Qk.conj().T))
    return float(gap)


def _orth(S: np.ndarray, tol: Tolerance) -> np.ndarray:
    if S.size == 0:
        return S
    U, s, _ = npl.svd(S, full_matrices=False)
    if s.size == 0:
        return np.zeros((S.shape[0], 0), dtype=complex)
    cut = max(tol.abs, s[0] * max(S.shape) * np.finfo(float).eps, tol.rel * s[0])
    rank = int(np.count_nonzero(s > cut))
    return U[:, :rank]


# ---------------------------------------------------------------------------
# scalar-weight special cases
# ---------------------------------------------------------------------------

def c_rho_build(rho: float, C, tol: Tolerance = DEFAULT_TOL) -> CaInstance:
    """Instance with scalar weight A = rho I; certifies T_n = T^n / rho."""
    if rho <= 0.0:
        raise OrderViolation(f"rho must be positive, got {rho}")
    C = as_matrix(C)
    d = C.shape[0]
    inst = ca_build(rho * np.eye(d, dtype=complex), C, tol)
    seq = ca_moments(inst, 4, tol)
    Tn = np.eye(d, dtype=complex)
    for n in range(1, 5):
        Tn = Tn @ inst.T
        gap = norm2(seq.terms[n] - Tn / rho)
        if gap > 100.0 * (tol.abs + tol.rel * (1.0 + norm2(Tn))):
            raise CrossCheckFailed(
                f"scalar-weight identity T_n = T^n/rho fails by {gap:.3e} "
                f"at order {n}")
    return inst


def berger_stampfli_check(T, grid: int = 1024, tol: Tolerance = DEFAULT_TOL):
    """(numerical radius, radius <= 1 verdict, kernel-criterion agreement).

    The rho = 2 class is exactly numerical radius <= 1; the kernel
    criterion with A = 2I must not contradict the direct grid
    computation of w(T).
    """
    T = as_matrix(T)
    if T.shape[0] != T.shape[1]:
        raise ShapeMismatch(f"T must be square, got {T.shape}")
    w = numerical_radius(T, grid)
    grid_slack = np.pi * norm2(T) / grid
    in_c2 = bool(w <= 1.0 + grid_slack + tol.abs)
    rep = kernel_check(2.0 * np.eye(T.shape[0], dtype=complex), T, tol=tol)
    agrees = not ((rep.satisfied == YES and not in_c2)
                  or (rep.satisfied == NO and in_c2))
    return float(w), in_c2, bool(agrees)


def istratescu_monotonicity_test(A1, A2, T, radii=_DEFAULT_RADII,
                                 angles: int = 64, samples: int = 100,
                                 rng_seed: int = 2024,
                                 tol: Tolerance = DEFAULT_TOL) -> bool:
    """Class monotonicity in the weight: A1 <= A2 never flips YES to NO.

    Checks, per grid point, that the kernel criterion for the larger
    weight is not a certified NO wherever the smaller weight gives a
    certified YES, and asserts the congruence identity
    ``W_A2(z) - W_A1(z) = (I-zT)*(A2-A1)(I-zT)`` (hence PSD) at
    ``samples`` random points of the disk.
    """
    A1 = as_matrix(A1)
    A2 = as_matrix(A2)
    T = as_matrix(T)
    for M, name in ((A1, "A1"), (A2, "A2")):
        rep = psd_check(M, tol)
        if rep.verdict != PSD or rep.min_eigenvalue <= tol.tau(M):
            raise NotInvertible(f"{name} must be positive definite")
    diff = A2 - A1
    if psd_check((diff + diff.conj().T) / 2.0, tol).verdict == NOT_PSD:
        raise OrderViolation("A1 <= A2 fails in the PSD order")

    pts1 = _kernel_grid(A1, T, radii, angles, tol)
    pts2 = _kernel_grid(A2, T, radii, angles, tol)
    for (z1, r1), (_z2, r2) in zip(pts1, pts2):
        if r1.verdict == PSD and r2.verdict == NOT_PSD:
            return False

    d = T.shape[0]
    eye = np.eye(d, dtype=complex)
    rng = np.random.default_rng(rng_seed)
    t_id = 100.0 * (tol.abs + tol.rel * (1.0 + norm2(A2) * (1 + norm2(T)) ** 2))
    for _ in range(samples):
        z = rng.uniform(0.0, 1.0) * np.exp(2j * np.pi * rng.uniform(0.0, 1.0))
        W_gap = _kernel_matrix(A2, T, z) - _kernel_matrix(A1, T, z)
        F = eye - z * T
        congruence = F.conj().T @ diff @ F
        if norm2(W_gap - (congruence + congruence.conj().T) / 2.0) > t_id:
            return False
        if psd_check(W_gap, tol).verdict == NOT_PSD:
            return False
    return True


# ---------------------------------------------------------------------------
# JSON contract
# ---------------------------------------------------------------------------
# {"A": matrix, "C": matrix}; derived operators recomputed on load.

def instance_to_json(inst: CaInstance) -> dict:
    return {"A": matrix_to_json(inst.A), "C": matrix_to_json(inst.C)}


def instance_from_json(obj, tol: Tolerance = DEFAULT_TOL) -> CaInstance:
    try:
        A = matrix_from_json(obj["A"])
        C = matrix_from_json(obj["C"])
    except (KeyError, TypeError) as exc:
        raise ShapeMismatch(f"malformed instance object: {exc}") from exc
    return ca_build(A, C, tol)
