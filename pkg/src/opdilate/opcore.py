"""Dense complex linear-algebra kernel.

Hermitian spectral decompositions, PSD verdicts with explicit margins,
principal square roots and pseudo-inverses of PSD matrices, block
assembly, corner compressions, block Krylov orthonormalization and the
numerical radius.  Everything downstream (moment criteria, dilation
constructors, class-membership checks) is built on these primitives.

All tolerances are scale-aware: the effective tolerance of a matrix M
is ``tau(M) = abs + rel * ||M||_2``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import numpy.linalg as npl

from .errors import NotHermitian, NotPsd, NotSquare, ShapeMismatch

__all__ = [
    "Tolerance",
    "DEFAULT_TOL",
    "PSD",
    "NOT_PSD",
    "BORDERLINE",
    "PsdReport",
    "BlockMatrix",
    "as_matrix",
    "norm2",
    "hermitian_eig",
    "psd_check",
    "sqrt_psd",
    "pinv_psd",
    "numerical_radius",
    "block_assemble",
    "corner_compress",
    "krylov_orthonormalize",
    "matrix_to_json",
    "matrix_from_json",
]

PSD = "PSD"
NOT_PSD = "NOT_PSD"
BORDERLINE = "BORDERLINE"


# ---------------------------------------------------------------------------
# tolerances and small helpers
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Tolerance:
    """Absolute + scale-relative tolerance.

    The effective tolerance applied to a matrix ``M`` is
    ``abs + rel * ||M||_2``.  The defaults leave roughly four decades
    of headroom over double-precision eigensolver accuracy so that
    accumulated block products do not flip verdicts.
    """

    abs: float = 1e-10
    rel: float = 1e-12

    def tau(self, M) -> float:
        M = np.asarray(M)
        if M.size == 0:
            return self.abs
        return self.abs + self.rel * norm2(M)


DEFAULT_TOL = Tolerance()


def as_matrix(M) -> np.ndarray:
    """Coerce to a 2-d complex ndarray (scalars become 1x1)."""
    M = np.asarray(M, dtype=complex)
    if M.ndim == 0:
        M = M.reshape(1, 1)
    if M.ndim != 2:
        raise ShapeMismatch(f"expected a matrix, got ndim={M.ndim}")
    return M


def norm2(M) -> float:
    """Spectral norm; 0.0 for empty matrices."""
    M = np.asarray(M, dtype=complex)
    if M.size == 0:
        return 0.0
    return float(npl.norm(M, 2))


def _require_square(M: np.ndarray) -> int:
    if M.shape[0] != M.shape[1]:
        raise NotSquare(f"expected a square matrix, got shape {M.shape}")
    return M.shape[0]


# ---------------------------------------------------------------------------
# Hermitian spectral toolkit
# ---------------------------------------------------------------------------

def hermitian_eig(M, tol: Tolerance = DEFAULT_TOL):
    """Eigendecomposition of a Hermitian matrix.

    Parameters
    ----------
    M : array_like
        Square matrix with ``||M - M*|| <= tau(M)``.
    tol : Tolerance

    Returns
    -------
    (eigenvalues, eigenvectors)
        Eigenvalues ascending; eigenvector matrix unitary, columns
        aligned with the eigenvalues.

    Raises
    ------
    NotSquare, NotHermitian
    """
    M = as_matrix(M)
    _require_square(M)
    t = tol.tau(M)
    defect = norm2(M - M.conj().T)
    if defect > t:
        raise NotHermitian(
            f"hermiticity defect {defect:.3e} exceeds tolerance {t:.3e}")
    w, V = npl.eigh((M + M.conj().T) / 2.0)
    return w, V


@dataclass
class PsdReport:
    """Verdict of a positive-semidefiniteness test.

    ``verdict`` is PSD when the minimal eigenvalue is >= -tau,
    NOT_PSD when it is < -10*tau, and BORDERLINE in the one-decade
    band in between (avoids flapping near zero eigenvalues).
    A NOT_PSD report carries a unit ``witness`` vector achieving the
    minimal eigenvalue.
    """

    verdict: str
    min_eigenvalue: float
    hermiticity_defect: float
    tau: float
    witness: np.ndarray | None = field(default=None, repr=False)


def psd_check(M, tol: Tolerance = DEFAULT_TOL) -> PsdReport:
    """Classify a Hermitian matrix as PSD / NOT_PSD / BORDERLINE."""
    M = as_matrix(M)
    _require_square(M)
    t = tol.tau(M)
    defect = norm2(M - M.conj().T)
    if defect > t:
        raise NotHermitian(
            f"hermiticity defect {defect:.3e} exceeds tolerance {t:.3e}")
    w, V = npl.eigh((M + M.conj().T) / 2.0)
    lam = float(w[0])
    if lam >= -t:
        verdict, witness = PSD, None
    elif lam < -10.0 * t:
        verdict, witness = NOT_PSD, V[:, 0].copy()
    else:
        verdict, witness = BORDERLINE, None
    return PsdReport(verdict, lam, defect, t, witness)


def sqrt_psd(M, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Principal square root of a PSD matrix.

    Eigenvalues in ``[-tau, 0)`` are clamped to 0; a NOT_PSD input
    raises :class:`NotPsd`.
    """
    M = as_matrix(M)
    w, V = hermitian_eig(M, tol)
    t = tol.tau(M)
    if w[0] < -10.0 * t:
        raise NotPsd(f"min eigenvalue {w[0]:.3e} below -10*tau ({t:.3e})")
    w = np.where(w < 0.0, 0.0, w)
    S = (V * np.sqrt(w)) @ V.conj().T
    return (S + S.conj().T) / 2.0


def pinv_psd(M, rank_tol: Tolerance = DEFAULT_TOL):
    """Moore-Penrose pseudo-inverse of a Hermitian PSD matrix.

    Eigenvalues > tau are inverted, the rest are zeroed.

    Returns
    -------
    (pinv, rank, is_invertible)
    """
    M = as_matrix(M)
    w, V = hermitian_eig(M, rank_tol)
    t = rank_tol.tau(M)
    if w[0] < -10.0 * t:
        raise NotPsd(f"min eigenvalue {w[0]:.3e} below -10*tau ({t:.3e})")
    keep = w > t
    inv_w = np.zeros_like(w)
    inv_w[keep] = 1.0 / w[keep]
    P = (V * inv_w) @ V.conj().T
    P = (P + P.conj().T) / 2.0
    rank = int(np.count_nonzero(keep))
    return P, rank, rank == M.shape[0]


def numerical_radius(T, grid_points: int = 1024) -> float:
    """Numerical radius via theta-grid maximization.

    Returns ``max_theta lambda_max((e^{i theta} T + e^{-i theta} T*)/2)``
    over a uniform grid of [0, 2pi).  This is a lower bound of w(T);
    since the maximized function is Lipschitz in theta with constant
    ``||T||``, the grid error is at most ``pi * ||T|| / grid_points``.
    """
    T = as_matrix(T)
    _require_square(T)
    if grid_points < 4:
        raise ValueError("grid_points must be >= 4")
    thetas = np.linspace(0.0, 2.0 * np.pi, grid_points, endpoint=False)
    phases = np.exp(1j * thetas)[:, None, None]
    stack = (phases * T + np.conj(phases) * T.conj().T) / 2.0
    vals = npl.eigvalsh(stack)
    return float(vals[:, -1].max())


# ---------------------------------------------------------------------------
# block layout
# ---------------------------------------------------------------------------

@dataclass
class BlockMatrix:
    """Sparse grid of dense blocks; missing entries mean zero blocks."""

    row_dims: list
    col_dims: list
    blocks: dict  # (i, j) -> ndarray


def block_assemble(bm: BlockMatrix) -> np.ndarray:
    """Flatten a BlockMatrix into a dense matrix."""
    row_dims = [int(r) for r in bm.row_dims]
    col_dims = [int(c) for c in bm.col_dims]
    row_off = np.concatenate([[0], np.cumsum(row_dims)])
    col_off = np.concatenate([[0], np.cumsum(col_dims)])
    out = np.zeros((row_off[-1], col_off[-1]), dtype=complex)
    for (i, j), blk in bm.blocks.items():
        if not (0 <= i < len(row_dims) and 0 <= j < len(col_dims)):
            raise ShapeMismatch(f"block index {(i, j)} outside the grid")
        blk = as_matrix(blk)
        if blk.shape != (row_dims[i], col_dims[j]):
            raise ShapeMismatch(
                f"block {(i, j)} has shape {blk.shape}, expected "
                f"{(row_dims[i], col_dims[j])}")
        out[row_off[i]:row_off[i + 1], col_off[j]:col_off[j + 1]] = blk
    return out


def corner_compress(B, d: int, n: int) -> np.ndarray:
    """Leading d x d block of ``B^n`` (identity for n = 0).

    The distinguished subspace is always the first ``d`` coordinates,
    so compressed powers are plain corner reads.
    """
    B = as_matrix(B)
    _require_square(B)
    if d > B.shape[0] or d < 1:
        raise ShapeMismatch(f"corner size {d} exceeds matrix size {B.shape[0]}")
    if n < 0:
        raise ShapeMismatch("power must be nonnegative")
    return npl.matrix_power(B, n)[:d, :d]


# ---------------------------------------------------------------------------
# block Krylov orthonormalization
# ---------------------------------------------------------------------------

def krylov_orthonormalize(B, d: int, depth: int, tol: Tolerance = DEFAULT_TOL):
    """Orthonormal basis of ``span{B^m e_i : m < depth, i < d}``.

    Level 0 is the first ``d`` coordinate vectors; level k is built
    from B applied to level k-1, re-orthonormalized against all the
    preceding levels (two Gram-Schmidt passes for stability).
    Candidates whose projected norm falls below tau(B) are discarded,
    which is where all rank decisions happen.

    Returns
    -------
    (basis, level_dims)
        ``basis`` has orthonormal columns; ``level_dims[k]`` is the
        number of columns contributed by level k.  The compression
        ``basis* B basis`` is upper Hessenberg in the block sense.
    """
    B = as_matrix(B)
    n = _require_square(B)
    if not (1 <= d <= n):
        raise ShapeMismatch(f"base dimension {d} incompatible with size {n}")
    t = max(tol.tau(B), np.finfo(float).eps * n)
    Q = np.eye(n, d, dtype=complex)
    level_dims = [d]
    prev = Q
    for _ in range(1, depth):
        cand = B @ prev if prev.shape[1] else np.zeros((n, 0), dtype=complex)
        kept = []
        for j in range(cand.shape[1]):
            v = cand[:, j].copy()
            for _pass in range(2):
                v -= Q @ (Q.conj().T @ v)
                if kept:
                    K = np.column_stack(kept)
                    v -= K @ (K.conj().T @ v)
            nv = npl.norm(v)
            if nv >= t:
                kept.append(v / nv)
        new = np.column_stack(kept) if kept else np.zeros((n, 0), dtype=complex)
        Q = np.hstack([Q, new])
        level_dims.append(new.shape[1])
        prev = new
    return Q, level_dims


# ---------------------------------------------------------------------------
# JSON matrix contract
# ---------------------------------------------------------------------------
# {"rows": r, "cols": c, "data": [[re, im], ...]} in row-major order.

def matrix_to_json(M) -> dict:
    M = as_matrix(M)
    data = [[float(z.real), float(z.imag)] for z in M.ravel(order="C")]
    return {"rows": int(M.shape[0]), "cols": int(M.shape[1]), "data": data}


def matrix_from_json(obj) -> np.ndarray:
    try:
        rows, cols, data = int(obj["rows"]), int(obj["cols"]), obj["data"]
    except (KeyError, TypeError) as exc:
        raise ShapeMismatch(f"malformed matrix object: {exc}") from exc
    if rows < 0 or cols < 0 or len(data) != rows * cols:
        raise ShapeMismatch(
            f"matrix data length {len(data)} does not match {rows}x{cols}")
    try:
        flat = np.array([complex(re, im) for re, im in data], dtype=complex)
    except (TypeError, ValueError) as exc:
        raise ShapeMismatch(f"malformed matrix entry: {exc}") from exc
    M = flat.reshape(rows, cols)
    if M.size and not np.all(np.isfinite(M.view(float))):
        raise ShapeMismatch("matrix entries must be finite")
    return M
