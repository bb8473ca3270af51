"""Explicit dilation constructors and the universal verification oracle.

Every constructor returns a :class:`DilationResult` whose ambient
operator ``B`` carries the base space as the *first* ``d`` coordinates,
so the dilation identity reads ``A_n = (B^n)[:d, :d]``.  Residuals and
structure defects are always recomputed by :func:`verify_dilation`,
never trusted from the construction itself.

Finite truncations of infinite objects (shift tails) cannot be exactly
isometric/unitary at the entering edge; structure defects are therefore
measured away from zero rows/columns, with the unmasked value reported
separately as ``edge_defect``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import numpy.linalg as npl

from .errors import (
    CriterionFailed,
    InsufficientData,
    NotContraction,
    RecursionBreakdown,
    ShapeMismatch,
)
from .moments import (
    NO,
    YES,
    MomentSequence,
    moment_sequence,
    selfadjoint_contraction_check,
    toeplitz_positivity_check,
)
from .opcore import (
    DEFAULT_TOL,
    NOT_PSD,
    Tolerance,
    as_matrix,
    corner_compress,
    hermitian_eig,
    krylov_orthonormalize,
    matrix_from_json,
    matrix_to_json,
    norm2,
    psd_check,
    sqrt_psd,
)

__all__ = [
    "SELF_ADJOINT",
    "POSITIVE",
    "ISOMETRIC",
    "UNITARY",
    "PARTIAL",
    "DilationResult",
    "TridiagonalBlocks",
    "verify_dilation",
    "gns_selfadjoint",
    "tridiagonal_recursive",
    "isometric_recursive",
    "schaffer_isometry",
    "schaffer_unitary",
    "minimal_reduce",
    "equivalence_by_moments",
    "dilation_to_json",
    "dilation_from_json",
]

SELF_ADJOINT = "SELF_ADJOINT"
POSITIVE = "POSITIVE"
ISOMETRIC = "ISOMETRIC"
UNITARY = "UNITARY"
PARTIAL = "PARTIAL"

_KINDS = (SELF_ADJOINT, POSITIVE, ISOMETRIC, UNITARY, PARTIAL)


# ---------------------------------------------------------------------------
# result types
# ---------------------------------------------------------------------------

@dataclass
class DilationResult:
    """A dilation certificate: operator, window, and measured defects.

    ``residuals[n] = ||(operator^n)[:d,:d] - A_n||_2`` for
    ``0 <= n <= guaranteed_orders``.  ``structure_defect`` is the
    kind-specific defect away from truncation edges; ``edge_defect``
    includes the edges (informational).
    """

    kind: str
    operator: np.ndarray
    ambient_dim: int
    base_dim: int
    guaranteed_orders: int
    residuals: list
    structure_defect: float
    edge_defect: float = 0.0


@dataclass
class TridiagonalBlocks:
    """Hermitian block-tridiagonal data: diag B_00..B_LL, sub B_10..B_L(L-1)."""

    diag: list
    sub: list

    def assemble(self) -> np.ndarray:
        L = len(self.diag)
        if len(self.sub) != L - 1:
            raise ShapeMismatch(
                f"need {L - 1} subdiagonal blocks, got {len(self.sub)}")
        d = self.diag[0].shape[0]
        B = np.zeros((L * d, L * d), dtype=complex)
        for i, blk in enumerate(self.diag):
            B[i * d:(i + 1) * d, i * d:(i + 1) * d] = blk
        for i, blk in enumerate(self.sub):
            B[(i + 1) * d:(i + 2) * d, i * d:(i + 1) * d] = blk
            B[i * d:(i + 1) * d, (i + 1) * d:(i + 2) * d] = blk.conj().T
        return B


# ---------------------------------------------------------------------------
# universal oracle
# ---------------------------------------------------------------------------

def _masked_norm(G: np.ndarray, keep: np.ndarray) -> float:
    return norm2(G[np.ix_(keep, keep)]) if keep.any() else 0.0


def _structure_defects(B: np.ndarray, kind: str, tol: Tolerance):
    """(masked defect, full defect) for the given structural kind.

    Truncated shift sections carry zero columns (isometric case) or
    zero rows/columns (unitary case) at the entering edge; those
    indices are excluded from the masked defect.
    """
    m = B.shape[0]
    eye = np.eye(m)
    t = tol.tau(B)
    if kind == SELF_ADJOINT:
        s = norm2(B - B.conj().T)
        return s, s
    if kind == POSITIVE:
        H = (B + B.conj().T) / 2.0
        lam = npl.eigvalsh(H)
        s = norm2(B - B.conj().T) + max(0.0, -float(lam[0]))
        return s, s
    if kind == ISOMETRIC:
        G = B.conj().T @ B - eye
        live_cols = npl.norm(B, axis=0) > t
        return _masked_norm(G, live_cols), norm2(G)
    if kind == UNITARY:
        G1 = B.conj().T @ B - eye
        G2 = B @ B.conj().T - eye
        live_cols = npl.norm(B, axis=0) > t
        live_rows = npl.norm(B, axis=1) > t
        masked = _masked_norm(G1, live_cols) + _masked_norm(G2, live_rows)
        return masked, norm2(G1) + norm2(G2)
    if kind == PARTIAL:
        P = B.conj().T @ B
        s = norm2(P @ P - P)
        return s, s
    raise ValueError(f"unknown dilation kind {kind!r}")


def verify_dilation(B, seq: MomentSequence, n_max: int, kind: str,
                    tol: Tolerance = DEFAULT_TOL) -> DilationResult:
    """Recompute residuals and structure defect for a claimed dilation.

    Independent of every constructor: takes the bare operator, compares
    leading-corner compressions of its powers against the sequence, and
    measures the kind-specific structure defect.  ``n_max`` is capped
    at the available order of ``seq``.
    """
    B = as_matrix(B)
    if B.shape[0] != B.shape[1]:
        raise ShapeMismatch(f"operator must be square, got {B.shape}")
    d = seq.dim
    if B.shape[0] < d:
        raise ShapeMismatch(
            f"ambient dimension {B.shape[0]} smaller than base {d}")
    n_eff = max(0, min(n_max, seq.order))
    residuals = [float(norm2(corner_compress(B, d, n) - seq.terms[n]))
                 for n in range(n_eff + 1)]
    struct, edge = _structure_defects(B, kind, tol)
    return DilationResult(kind, B, B.shape[0], d, n_eff, residuals,
                          float(struct), float(edge))


# ---------------------------------------------------------------------------
# GNS construction (moment kernel)
# ---------------------------------------------------------------------------

def gns_selfadjoint(seq: MomentSequence, levels: int,
                    tol: Tolerance = DEFAULT_TOL) -> DilationResult:
    """Self-adjoint dilation from the moment kernel Gram matrix.

    The kernel ``k((m, g), (n, h)) = <g, A_(m+n) h>`` on pairs with
    ``m, n <= levels`` has Gram matrix ``hankel(seq, levels, 0)``; its
    positive part carries a shift ``(m, g) -> (m+1, g)`` represented by
    the shifted Gram ``hankel(seq, levels, 1)``.  Compressing the shift
    to the Gram range and rotating the classes of ``(0, e_i)`` into the
    leading coordinates yields a self-adjoint contraction whose corner
    powers reproduce ``A_n`` for ``n <= levels``.

    Raises
    ------
    CriterionFailed
        When the sequence is not Hermitian or fails the Hankel
        sandwich criterion (no self-adjoint contraction dilation).
    InsufficientData
        When ``2 * levels + 1 > N``.
    """
    if 2 * levels + 1 > seq.order:
        raise InsufficientData(
            f"levels {levels} needs A_{2 * levels + 1}, only "
            f"A_0..A_{seq.order} available")
    if not seq.hermitian:
        raise CriterionFailed("sequence terms are not Hermitian")
    crit = selfadjoint_contraction_check(seq, tol)
    if crit.satisfied != YES:
        raise CriterionFailed(
            f"Hankel sandwich criterion returned {crit.satisfied} "
            f"(worst margin {crit.worst_margin:.3e})")

    d = seq.dim
    G = np.block([[seq.terms[i + j] for j in range(levels + 1)]
                  for i in range(levels + 1)])
    G1 = np.block([[seq.terms[i + j + 1] for j in range(levels + 1)]
                   for i in range(levels + 1)])
    w, W = hermitian_eig(G, tol)
    keep = w > tol.tau(G)
    r = int(np.count_nonzero(keep))
    if r < d:
        raise RecursionBreakdown(
            f"Gram rank {r} fell below base dimension {d}", level=0)
    lam = w[keep]
    Wr = W[:, keep]
    inv_half = 1.0 / np.sqrt(lam)
    B = (inv_half[:, None] * (Wr.conj().T @ G1 @ Wr)) * inv_half[None, :]
    B = (B + B.conj().T) / 2.0

    # classes of (0, e_j) in the range basis; E*E = A_0 = I
    E = np.sqrt(lam)[:, None] * Wr.conj().T[:, :d]
    U_, _s, Vh_ = npl.svd(E, full_matrices=True)
    rot = U_ @ _block_diag_unitary(Vh_, r)
    B = rot.conj().T @ B @ rot
    return verify_dilation(B, seq, levels, SELF_ADJOINT, tol)


def _block_diag_unitary(Vh: np.ndarray, r: int) -> np.ndarray:
    d = Vh.shape[0]
    out = np.eye(r, dtype=complex)
    out[:d, :d] = Vh
    return out


# ---------------------------------------------------------------------------
# tridiagonal recursion (self-adjoint)
# ---------------------------------------------------------------------------

def _corner_solve_product(sub: list, d: int) -> np.ndarray:
    """Accumulated subdiagonal product B_(n,n-1) ... B_10."""
    P = np.eye(d, dtype=complex)
    for blk in sub:
        P = blk @ P
    return P


def tridiagonal_recursive(seq: MomentSequence, levels: int,
                          tol: Tolerance = DEFAULT_TOL):
    """Hermitian block-tridiagonal dilation by level-wise corner matching.

    Starting from ``B_00 = A_1`` and ``B_10 = sqrt(A_2 - A_1^2)``, each
    new diagonal block is the unique unknown in the corner equation
    ``(B^(2n+1))[:d,:d] = A_(2n+1)`` and each new subdiagonal block the
    unique unknown in ``(B^(2n+2))[:d,:d] = A_(2n+2)``: power paths
    touching the unknown exactly once all factor through the
    accumulated subdiagonal product, so the equation is linear (or a
    congruence with PSD right side) and solved by pseudo-inverse with a
    mandatory post-check.

    Returns ``(TridiagonalBlocks, DilationResult)``; the result
    certifies ``n <= 2 * levels``.  A subdiagonal block with norm below
    tolerance terminates the recursion early (finite-rank case) after
    re-verifying the full window.

    Raises
    ------
    RecursionBreakdown
        When a corner equation has no consistent solution (the
        pseudo-inverse post-check fails) or a Gram block is negative.
    CriterionFailed
        When the sequence is not Hermitian or ``A_2 - A_1^2`` is not
        PSD.
    InsufficientData
        When ``2 * levels > N``.
    """
    if levels < 1:
        raise InsufficientData("levels must be >= 1")
    if 2 * levels > seq.order:
        raise InsufficientData(
            f"levels {levels} needs A_{2 * levels}, only A_0..A_{seq.order} "
            "available")
    if not seq.hermitian:
        raise CriterionFailed("sequence terms are not Hermitian")
    d = seq.dim
    gap = seq.terms[2] - seq.terms[1] @ seq.terms[1]
    gap = (gap + gap.conj().T) / 2.0
    if psd_check(gap, tol).verdict == NOT_PSD:
        raise CriterionFailed("A_2 - A_1^2 is not PSD")

    diag = [seq.terms[1].copy()]
    sub = []
    B10 = sqrt_psd(gap, tol)
    # compare on the gap scale, not ||B10|| = sqrt(||gap||) (see
    # _solve_sub_block for why the square root would miss terminations)
    if norm2(gap) <= tol.tau(seq.terms[2]) + tol.abs:
        blocks = TridiagonalBlocks(diag, sub)
        return blocks, _finish_tridiagonal(blocks, seq, levels, tol,
                                           level=0, terminated=True)
    sub.append(B10)

    for lev in range(1, levels + 1):
        # diagonal block from the odd corner equation
        n_odd = 2 * lev + 1
        if n_odd <= seq.order:
            X = _solve_diag_block(diag, sub, seq, lev, tol)
        else:
            X = np.zeros((d, d), dtype=complex)  # outside certified window
        diag.append(X)
        if lev == levels:
            break
        # subdiagonal block from the even corner equation
        Y, terminated = _solve_sub_block(diag, sub, seq, lev, tol)
        if terminated:
            blocks = TridiagonalBlocks(diag, sub)
            return blocks, _finish_tridiagonal(blocks, seq, levels, tol,
                                               level=lev, terminated=True)
        sub.append(Y)

    blocks = TridiagonalBlocks(diag, sub)
    return blocks, _finish_tridiagonal(blocks, seq, levels, tol, level=levels,
                                       terminated=False)


def _partial_matrix(diag: list, sub: list, size: int, d: int) -> np.ndarray:
    B = np.zeros((size * d, size * d), dtype=complex)
    for i, blk in enumerate(diag):
        B[i * d:(i + 1) * d, i * d:(i + 1) * d] = blk
    for i, blk in enumerate(sub):
        B[(i + 1) * d:(i + 2) * d, i * d:(i + 1) * d] = blk
        B[i * d:(i + 1) * d, (i + 1) * d:(i + 2) * d] = blk.conj().T
    return B


def _solve_diag_block(diag, sub, seq, lev, tol):
    d = seq.dim
    A = seq.terms[2 * lev + 1]
    base = _partial_matrix(diag, sub, lev + 1, d)  # unknown block zeroed
    K = corner_compress(base, d, 2 * lev + 1)
    Pi = _corner_solve_product(sub, d)
    Pp = npl.pinv(Pi)
    X = Pp.conj().T @ (A - K) @ Pp
    X = (X + X.conj().T) / 2.0
    thr = 100.0 * (tol.abs + tol.rel * (1.0 + norm2(A)))
    if norm2(Pi.conj().T @ X @ Pi - (A - K)) > thr:
        raise RecursionBreakdown(
            f"diagonal corner equation inconsistent at level {lev}",
            level=lev)
    return X


def _solve_sub_block(diag, sub, seq, lev, tol):
    d = seq.dim
    A = seq.terms[2 * lev + 2]
    base = _partial_matrix(diag, sub, lev + 2, d)
    K = corner_compress(base, d, 2 * lev + 2)
    Pi = _corner_solve_product(sub, d)
    Pp = npl.pinv(Pi)
    G = Pp.conj().T @ (A - K) @ Pp
    G = (G + G.conj().T) / 2.0
    rep = psd_check(G, tol)
    if rep.verdict == NOT_PSD:
        raise RecursionBreakdown(
            f"Gram block at level {lev + 1} has eigenvalue "
            f"{rep.min_eigenvalue:.3e}", level=lev + 1)
    Y = sqrt_psd(G, tol)
    # termination is decided on the Gram scale: ||Y|| = sqrt(||G||)
    # amplifies roundoff (eps-sized G gives a 1e-8-sized Y), so an
    # exhausted-rank measure would slip past a test on ||Y|| itself
    if norm2(G) <= tol.tau(A) + tol.abs:
        return Y, True
    thr = 100.0 * (tol.abs + tol.rel * (1.0 + norm2(A)))
    if norm2(Pi.conj().T @ (Y.conj().T @ Y) @ Pi - (A - K)) > thr:
        raise RecursionBreakdown(
            f"subdiagonal corner equation inconsistent at level {lev + 1}",
            level=lev + 1)
    return Y, False


def _finish_tridiagonal(blocks: TridiagonalBlocks, seq: MomentSequence,
                        levels: int, tol: Tolerance, level: int,
                        terminated: bool = False) -> DilationResult:
    # A rank-terminated matrix claims to reproduce *every* moment, so the
    # verification window widens to all available data; a full-depth build
    # only promises the usual 2*levels window.
    window = seq.order if terminated else 2 * levels
    B = blocks.assemble()
    result = verify_dilation(B, seq, window, SELF_ADJOINT, tol)
    thr = [100.0 * (tol.abs + tol.rel * (1.0 + norm2(t))) for t in seq.terms]
    for n, r in enumerate(result.residuals):
        if r > thr[n]:
            raise RecursionBreakdown(
                f"assembled matrix fails residual {r:.3e} at order {n} "
                f"(level {level})", level=level)
    return result


# ---------------------------------------------------------------------------
# Hessenberg isometric recursion
# ---------------------------------------------------------------------------

def isometric_recursive(seq: MomentSequence, levels: int,
                        tol: Tolerance = DEFAULT_TOL) -> DilationResult:
    """Column-by-column isometric dilation on ``levels + 2`` blocks.

    Column 0 is the defect column ``(A_1, (I - A_1* A_1)^(1/2))``.
    Column ``j`` is filled top-down: the top block is the unique
    unknown in the corner equation ``(V^(j+1))[:d,:d] = A_(j+1)``
    (every power path through it factors through the accumulated
    subdiagonal product), middle blocks restore orthogonality to the
    previous columns, and the subdiagonal block normalizes the column.
    A trailing identity shift column keeps ``V*V = I`` away from the
    truncation edge.

    Raises
    ------
    RecursionBreakdown
        When a pseudo-inverse step fails its post-check, a column
        cannot be normalized, or the degenerate unitary-base
        short-circuit meets inconsistent data.
    CriterionFailed
        When the contractive flag is unset or the Toeplitz criterion
        refutes unitary-dilation existence (isometric needs the same
        positivity on the forward window).
    InsufficientData
        When ``levels + 1 > N``.
    """
    if levels < 1:
        raise InsufficientData("levels must be >= 1")
    if levels + 1 > seq.order:
        raise InsufficientData(
            f"levels {levels} needs A_{levels + 1}, only A_0..A_{seq.order} "
            "available")
    if not seq.contractive:
        raise CriterionFailed("sequence terms are not contractive")
    crit = toeplitz_positivity_check(seq, tol=tol)
    if crit.satisfied == NO:
        raise CriterionFailed("Toeplitz positivity refuted; no isometric "
                              "dilation reproduces this sequence")

    d = seq.dim
    eye = np.eye(d, dtype=complex)
    A1 = seq.terms[1]
    gap = eye - A1.conj().T @ A1
    gap = (gap + gap.conj().T) / 2.0
    V10 = sqrt_psd(gap, tol)
    if norm2(gap) <= tol.tau(A1) + tol.abs:
        # unitary base: dilation exists iff the data is the power sequence
        thr = [100.0 * (tol.abs + tol.rel * (1.0 + norm2(t)))
               for t in seq.terms]
        P = eye.copy()
        for n in range(1, seq.order + 1):
            P = A1 @ P
            if norm2(P - seq.terms[n]) > thr[n]:
                raise RecursionBreakdown(
                    f"unitary base with inconsistent tail at order {n}",
                    level=0)
        return verify_dilation(A1, seq, levels, ISOMETRIC, tol)

    nblocks = levels + 2
    cols = {(0, 0): A1.copy(), (1, 0): V10}
    for j in range(1, levels):
        _fill_isometric_column(cols, seq, j, nblocks, tol)
    V = np.zeros((nblocks * d, nblocks * d), dtype=complex)
    for (i, j), blk in cols.items():
        V[i * d:(i + 1) * d, j * d:(j + 1) * d] = blk
    V[(levels + 1) * d:, levels * d:(levels + 1) * d] = eye  # shift-in column
    return verify_dilation(V, seq, levels, ISOMETRIC, tol)


def _fill_isometric_column(cols, seq, j, nblocks, tol):
    d = seq.dim
    A = seq.terms[j + 1]
    partial = np.zeros((nblocks * d, nblocks * d), dtype=complex)
    for (i, k), blk in cols.items():
        partial[i * d:(i + 1) * d, k * d:(k + 1) * d] = blk
    K = corner_compress(partial, d, j + 1)
    # Pi = V_(j, j-1) ... V_10 accumulated top-down
    Pi = np.eye(d, dtype=complex)
    for k in range(j):
        Pi = cols[(k + 1, k)] @ Pi
    thr = 100.0 * (tol.abs + tol.rel * (1.0 + norm2(A)))
    V0j = (A - K) @ npl.pinv(Pi)
    if norm2(V0j @ Pi - (A - K)) > thr:
        raise RecursionBreakdown(
            f"top corner equation inconsistent in column {j}", level=j)
    cols[(0, j)] = V0j
    for k in range(1, j + 1):
        rhs = np.zeros((d, d), dtype=complex)
        for i in range(k):
            rhs += cols[(i, k - 1)].conj().T @ cols[(i, j)]
        solver = npl.pinv(cols[(k, k - 1)].conj().T)
        Vkj = -solver @ rhs
        if norm2(cols[(k, k - 1)].conj().T @ Vkj + rhs) > thr:
            raise RecursionBreakdown(
                f"orthogonality equation inconsistent at row {k}, "
                f"column {j}", level=j)
        cols[(k, j)] = Vkj
    gram = np.eye(d, dtype=complex)
    for i in range(j + 1):
        gram -= cols[(i, j)].conj().T @ cols[(i, j)]
    gram = (gram + gram.conj().T) / 2.0
    rep = psd_check(gram, tol)
    if rep.verdict == NOT_PSD:
        raise RecursionBreakdown(
            f"column {j} cannot be normalized (defect eigenvalue "
            f"{rep.min_eigenvalue:.3e})", level=j)
    cols[(j + 1, j)] = sqrt_psd(gram, tol)


# ---------------------------------------------------------------------------
# classical block constructions
# ---------------------------------------------------------------------------

def schaffer_isometry(T, copies: int,
                      tol: Tolerance = DEFAULT_TOL) -> DilationResult:
    """Isometric dilation (T, D_T, 0, ...) + identity shift, truncated.

    ``copies`` defect blocks; corner powers equal ``T^n`` exactly for
    every ``n`` (paths leaving the corner never return), certified for
    ``n <= copies``.
    """
    T = as_matrix(T)
    d = T.shape[0]
    if T.shape[0] != T.shape[1]:
        raise ShapeMismatch(f"T must be square, got {T.shape}")
    if copies < 1:
        raise ShapeMismatch("copies must be >= 1")
    if norm2(T) > 1.0 + tol.tau(T):
        raise NotContraction(f"||T|| = {norm2(T):.6f} > 1")
    eye = np.eye(d, dtype=complex)
    DT = sqrt_psd(eye - T.conj().T @ T, tol)
    m = (copies + 1) * d
    V = np.zeros((m, m), dtype=complex)
    V[:d, :d] = T
    V[d:2 * d, :d] = DT
    for j in range(1, copies):
        V[(j + 1) * d:(j + 2) * d, j * d:(j + 1) * d] = eye
    seq = _power_sequence(T, copies, tol)
    return verify_dilation(V, seq, copies, ISOMETRIC, tol)


def schaffer_unitary(T, copies_back: int, copies_fwd: int,
                     tol: Tolerance = DEFAULT_TOL) -> DilationResult:
    """Truncated bilateral unitary dilation with central rotation block.

    Built in natural two-sided order with the 2x2 central block
    [[D_(T*), T], [-T*, D_T]] bridging the backward and forward shift
    tails, then permuted so the base space occupies the leading
    coordinates.  Corner powers equal ``T^n`` exactly; backward corner
    powers are the adjoints automatically.
    """
    T = as_matrix(T)
    d = T.shape[0]
    if T.shape[0] != T.shape[1]:
        raise ShapeMismatch(f"T must be square, got {T.shape}")
    if copies_back < 1 or copies_fwd < 1:
        raise ShapeMismatch("copies_back and copies_fwd must be >= 1")
    if norm2(T) > 1.0 + tol.tau(T):
        raise NotContraction(f"||T|| = {norm2(T):.6f} > 1")
    eye = np.eye(d, dtype=complex)
    DT = sqrt_psd(eye - T.conj().T @ T, tol)
    DTs = sqrt_psd(eye - T @ T.conj().T, tol)

    cb, cf = copies_back, copies_fwd
    naturals = list(range(-cb, cf + 2))  # block levels -cb .. cf+1
    pos = {lv: k for k, lv in enumerate(naturals)}
    m = len(naturals) * d
    U = np.zeros((m, m), dtype=complex)

    def put(i, j, blk):
        U[pos[i] * d:(pos[i] + 1) * d, pos[j] * d:(pos[j] + 1) * d] = blk

    put(0, -1, DTs)
    put(0, 0, T)
    put(1, -1, -T.conj().T)
    put(1, 0, DT)
    for k in range(-cb + 1, 0):
        put(k, k - 1, eye)
    for k in range(2, cf + 2):
        put(k, k - 1, eye)
    # base-first ordering: 0, 1, ..., cf+1, -1, -2, ..., -cb
    order = list(range(0, cf + 2)) + list(range(-1, -cb - 1, -1))
    idx = np.concatenate([np.arange(pos[lv] * d, (pos[lv] + 1) * d)
                          for lv in order])
    U = U[np.ix_(idx, idx)]
    seq = _power_sequence(T, cf, tol)
    return verify_dilation(U, seq, cf, UNITARY, tol)


def _power_sequence(T: np.ndarray, n_max: int, tol: Tolerance) -> MomentSequence:
    d = T.shape[0]
    terms = [np.eye(d, dtype=complex)]
    for _ in range(n_max):
        terms.append(terms[-1] @ T)
    return moment_sequence(terms, tol)


# ---------------------------------------------------------------------------
# minimality and equivalence
# ---------------------------------------------------------------------------

def minimal_reduce(B, d: int, depth: int, tol: Tolerance = DEFAULT_TOL):
    """Compress B to its block Krylov space over the leading d coordinates.

    Corner moments are preserved for ``n <= depth``; for self-adjoint B
    the compression is block tridiagonal with respect to the returned
    level dimensions.
    """
    Q, level_dims = krylov_orthonormalize(B, d, depth, tol)
    B_min = Q.conj().T @ as_matrix(B) @ Q
    return B_min, level_dims


def equivalence_by_moments(B1, B2, d: int, n_max: int,
                           two_sided: bool = False) -> float:
    """Max corner-moment discrepancy between two operators over n <= n_max."""
    B1, B2 = as_matrix(B1), as_matrix(B2)
    worst = 0.0
    for n in range(n_max + 1):
        worst = max(worst, norm2(corner_compress(B1, d, n)
                                 - corner_compress(B2, d, n)))
        if two_sided:
            worst = max(worst,
                        norm2(corner_compress(B1.conj().T, d, n)
                              - corner_compress(B2.conj().T, d, n)))
    return float(worst)


# ---------------------------------------------------------------------------
# JSON contract
# ---------------------------------------------------------------------------
# {"kind", "operator", "base_dim", "guaranteed_orders", "residuals",
#  "structure_defect"}

def dilation_to_json(result: DilationResult) -> dict:
    return {
        "kind": result.kind,
        "operator": matrix_to_json(result.operator),
        "base_dim": int(result.base_dim),
        "guaranteed_orders": int(result.guaranteed_orders),
        "residuals": [float(r) for r in result.residuals],
        "structure_defect": float(result.structure_defect),
    }


def dilation_from_json(obj) -> DilationResult:
    try:
        kind = obj["kind"]
        op = matrix_from_json(obj["operator"])
        base_dim = int(obj["base_dim"])
        orders = int(obj["guaranteed_orders"])
        residuals = [float(r) for r in obj["residuals"]]
        defect = float(obj["structure_defect"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ShapeMismatch(f"malformed dilation object: {exc}") from exc
    if kind not in _KINDS:
        raise ShapeMismatch(f"unknown dilation kind {kind!r}")
    if op.shape[0] != op.shape[1]:
        raise ShapeMismatch("operator must be square")
    return DilationResult(kind, op, op.shape[0], base_dim, orders,
                          residuals, defect, defect)
