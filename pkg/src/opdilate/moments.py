"""Operator moment sequences and dilation-existence criteria.

A :class:`MomentSequence` is a truncated sequence ``A_0 .. A_N`` of
d x d matrices with ``A_0 = I``.  This module hosts every decision
procedure that consumes one: block-Hankel positivity (self-adjoint
dilations), the Hankel sandwich test (self-adjoint contraction
dilations), iterated-difference complete monotonicity (positive
contraction dilations), block-Toeplitz positivity and operator Poisson
kernel positivity (unitary dilations), plus scalar three-term
recurrence coefficients.

Verdicts are three-valued (YES / NO / BORDERLINE).  Every NO carries a
witness that reproduces a negative margin when re-evaluated; every YES
is certified only up to the order reachable from N terms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import numpy.linalg as npl

from .errors import (
    DiskViolation,
    IndefiniteHankel,
    InsufficientData,
    NotHermitian,
    NotScalar,
    Overflow,
    ShapeMismatch,
    TailBoundUnavailable,
)
from .opcore import (
    BORDERLINE,
    DEFAULT_TOL,
    NOT_PSD,
    PSD,
    Tolerance,
    as_matrix,
    hermitian_eig,
    matrix_from_json,
    matrix_to_json,
    norm2,
    psd_check,
)

__all__ = [
    "MomentSequence",
    "moment_sequence",
    "CriterionReport",
    "YES",
    "NO",
    "validate_growth",
    "hankel",
    "hamburger_check",
    "selfadjoint_contraction_check",
    "completely_monotone_check",
    "toeplitz_positivity_check",
    "szego_partial_sum",
    "poisson_check",
    "jacobi_parameters",
    "jacobi_matrix",
    "sequence_to_json",
    "sequence_from_json",
]

YES = "YES"
NO = "NO"

# largest exactly-representable binomial level for the difference test
_MAX_DIFF_ORDER = 60


# ---------------------------------------------------------------------------
# data model
# ---------------------------------------------------------------------------

@dataclass
class MomentSequence:
    """Truncated operator moment sequence ``A_0 .. A_N`` with ``A_0 = I``.

    ``hermitian`` / ``contractive`` record whether every term is
    Hermitian / has operator norm <= 1, within tolerance; the criteria
    below gate on them.
    """

    dim: int
    terms: list  # of (dim x dim) ndarrays
    hermitian: bool
    contractive: bool

    @property
    def order(self) -> int:
        """N, the largest available index."""
        return len(self.terms) - 1

    def term(self, n: int) -> np.ndarray:
        if not (0 <= n <= self.order):
            raise InsufficientData(
                f"term A_{n} requested, only A_0..A_{self.order} available")
        return self.terms[n]


def moment_sequence(terms, tol: Tolerance = DEFAULT_TOL) -> MomentSequence:
    """Build a MomentSequence, enforcing ``A_0 = I`` and setting flags."""
    mats = [as_matrix(t) for t in terms]
    if not mats:
        raise ShapeMismatch("a moment sequence needs at least A_0")
    d = mats[0].shape[0]
    for k, t in enumerate(mats):
        if t.shape != (d, d):
            raise ShapeMismatch(
                f"term {k} has shape {t.shape}, expected ({d}, {d})")
        if t.size and not np.all(np.isfinite(t.view(float))):
            raise ShapeMismatch(f"term {k} has non-finite entries")
    eye = np.eye(d, dtype=complex)
    if norm2(mats[0] - eye) > 1e-9:
        raise ShapeMismatch("term 0 must be the identity")
    mats[0] = eye
    hermitian = all(norm2(t - t.conj().T) <= tol.tau(t) for t in mats)
    contractive = all(norm2(t) <= 1.0 + tol.tau(t) for t in mats)
    return MomentSequence(d, mats, hermitian, contractive)


@dataclass
class CriterionReport:
    """Outcome of a single existence criterion.

    ``witness`` is a small dict (order / coefficients / grid point plus
    a vector) that reproduces the reported violation; ``certificate``
    names the sufficient condition that produced a YES, when one did.
    """

    criterion: str
    satisfied: str  # YES | NO | BORDERLINE
    max_order_checked: int
    worst_margin: float
    witness: dict | None = field(default=None, repr=False)
    certificate: str | None = None


# ---------------------------------------------------------------------------
# elementary consequences of being a moment sequence
# ---------------------------------------------------------------------------

def validate_growth(seq: MomentSequence, tol: Tolerance = DEFAULT_TOL):
    """Growth constant ``M = max_n ||A_n||^(1/n)``.

    Finite truncations always produce a finite M; ``ok`` is False only
    when the data is non-finite, or when the sequence claims to be
    contractive but M exceeds 1 beyond tolerance.
    """
    if seq.order < 1:
        raise InsufficientData("growth bound needs at least A_1")
    M = max(norm2(seq.terms[n]) ** (1.0 / n) for n in range(1, seq.order + 1))
    ok = math.isfinite(M)
    if seq.contractive:
        ok = ok and M <= 1.0 + tol.abs + tol.rel
    return M, ok


def hankel(seq: MomentSequence, n: int, shift: int = 0) -> np.ndarray:
    """Block-Hankel matrix with (i, j) block ``A_(i+j+shift)``, 0 <= i, j <= n."""
    if shift not in (0, 1, 2):
        raise ShapeMismatch(f"shift must be 0, 1 or 2, got {shift}")
    if 2 * n + shift > seq.order:
        raise InsufficientData(
            f"H_{n}^({shift}) needs A_{2 * n + shift}, only "
            f"A_0..A_{seq.order} available")
    return np.block([[seq.terms[i + j + shift] for j in range(n + 1)]
                     for i in range(n + 1)])


# ---------------------------------------------------------------------------
# Hankel-type criteria (self-adjoint / positive dilations)
# ---------------------------------------------------------------------------

def _aggregate(reports):
    """Combine PSD verdicts: any NOT_PSD -> NO, else any BORDERLINE -> BORDERLINE."""
    if any(r.verdict == NOT_PSD for r in reports):
        return NO
    if any(r.verdict == BORDERLINE for r in reports):
        return BORDERLINE
    return YES


def hamburger_check(seq: MomentSequence, tol: Tolerance = DEFAULT_TOL) -> CriterionReport:
    """Self-adjoint dilation existence: every feasible block-Hankel is PSD."""
    if not seq.hermitian:
        raise NotHermitian("sequence terms are not Hermitian")
    reports, witness = [], None
    n_max = seq.order // 2
    for n in range(n_max + 1):
        rep = psd_check(hankel(seq, n, 0), tol)
        reports.append(rep)
        if rep.verdict == NOT_PSD and witness is None:
            witness = {"order": n, "vector": rep.witness,
                       "value": rep.min_eigenvalue}
    worst = min(r.min_eigenvalue for r in reports)
    return CriterionReport("hankel", _aggregate(reports), n_max, worst, witness)


def selfadjoint_contraction_check(seq: MomentSequence,
                                  tol: Tolerance = DEFAULT_TOL) -> CriterionReport:
    """Self-adjoint *contraction* dilation existence.

    Requires every feasible ``H_n`` PSD and every feasible
    ``H_n - H_n^(2)`` PSD.  The second family already refutes data
    with ``||A_n|| > 1``, so the contractive flag is informative, not
    gating.
    """
    if not seq.hermitian:
        raise NotHermitian("sequence terms are not Hermitian")
    reports, witness = [], None
    n_max = -1
    for n in range(seq.order // 2 + 1):
        rep = psd_check(hankel(seq, n, 0), tol)
        reports.append(rep)
        if rep.verdict == NOT_PSD and witness is None:
            witness = {"order": n, "family": "hankel", "vector": rep.witness,
                       "value": rep.min_eigenvalue}
        n_max = max(n_max, n)
    for n in range((seq.order - 2) // 2 + 1):
        diff = hankel(seq, n, 0) - hankel(seq, n, 2)
        rep = psd_check(diff, tol)
        reports.append(rep)
        if rep.verdict == NOT_PSD and witness is None:
            witness = {"order": n, "family": "hankel-sandwich",
                       "vector": rep.witness, "value": rep.min_eigenvalue}
        n_max = max(n_max, n)
    worst = min(r.min_eigenvalue for r in reports)
    return CriterionReport("selfadjoint-contraction", _aggregate(reports),
                           n_max, worst, witness)


def completely_monotone_check(seq: MomentSequence,
                              tol: Tolerance = DEFAULT_TOL) -> CriterionReport:
    """Positive contraction dilation existence (iterated differences).

    Checks that ``sum_i C(k,i) (-1)^i A_(i+n)`` is PSD for every pair
    with ``n + k <= N``; this is the signed iterated difference that a
    moment sequence of a measure on [0, 1] satisfies (for ``A_n = r^n``
    it equals ``(1-r)^k r^n >= 0``).  Binomial weights are exact
    integers; levels k > 60 raise :class:`Overflow`.
    """
    if not seq.hermitian:
        raise NotHermitian("sequence terms are not Hermitian")
    reports, witness = [], None
    for k in range(seq.order + 1):
        if k > _MAX_DIFF_ORDER:
            raise Overflow(
                f"difference order {k} exceeds the exact-integer range "
                f"({_MAX_DIFF_ORDER})")
        coeffs = [math.comb(k, i) * (-1) ** i for i in range(k + 1)]
        for n in range(seq.order - k + 1):
            Q = sum(c * seq.terms[n + i] for i, c in enumerate(coeffs))
            rep = psd_check(Q, tol)
            reports.append(rep)
            if rep.verdict == NOT_PSD and witness is None:
                witness = {"k": k, "n": n, "vector": rep.witness,
                           "value": rep.min_eigenvalue}
    worst = min(r.min_eigenvalue for r in reports)
    return CriterionReport("completely-monotone", _aggregate(reports),
                           seq.order, worst, witness)


# ---------------------------------------------------------------------------
# Toeplitz-type criteria (unitary dilations)
# ---------------------------------------------------------------------------

def _term_signed(seq: MomentSequence, m: int) -> np.ndarray:
    """A_m extended to negative indices by ``A_(-m) := A_m*``."""
    return seq.terms[m] if m >= 0 else seq.terms[-m].conj().T

def _coeff_matrix(seq: MomentSequence, c: np.ndarray) -> np.ndarray:
    """``sum_{l,k} conj(c_l) c_k A_(k-l)`` as a d x d matrix."""
    N = seq.order
    M = np.zeros((seq.dim, seq.dim), dtype=complex)
    for m in range(-N, N + 1):
        lo, hi = max(0, -m), min(N, N - m)
        gamma = np.sum(np.conj(c[lo:hi + 1]) * c[lo + m:hi + m + 1])
        if gamma != 0.0:
            M += gamma * _term_signed(seq, m)
    return (M + M.conj().T) / 2.0


def toeplitz_positivity_check(seq: MomentSequence, trials: int = 64,
                              rng_seed: int = 2024,
                              tol: Tolerance = DEFAULT_TOL) -> CriterionReport:
    """Two-tier test of ``sum conj(c_l) c_k A_(k-l) >= 0``.

    Tier 1 certifies YES by positivity of the full (N+1)d block-Toeplitz
    matrix (a sufficient condition).  When that fails, Tier 2 hunts for
    a refuting coefficient vector: the Toeplitz minimizer reshaped to a
    rank-one candidate, geometric phase vectors ``(e^{i l phi})_l``, and
    seeded random draws.  A negative find is a certified NO with a
    re-evaluable (c, h) witness; otherwise the verdict stays BORDERLINE
    (the scalar-coefficient condition is genuinely weaker than Tier 1).
    For d = 1 the reshaped minimizer decides exactly.
    """
    if seq.order < 1:
        raise InsufficientData("Toeplitz test needs at least A_1")
    N, d = seq.order, seq.dim
    T = np.block([[_term_signed(seq, k - l) for k in range(N + 1)]
                  for l in range(N + 1)])
    tier1 = psd_check(T, tol)
    if tier1.verdict == PSD:
        return CriterionReport("toeplitz", YES, N, tier1.min_eigenvalue,
                               None, certificate="block-Toeplitz")

    # ---- tier 2: sampled refutation ----
    w, V = hermitian_eig(T, tol)
    candidates = []
    # rank-one compression of the Toeplitz minimizer
    fold = V[:, 0].reshape(N + 1, d)
    U_, s_, Vh_ = npl.svd(fold)
    candidates.append(U_[:, 0])
    # geometric phases sweep the scalar-symbol directions
    for phi in np.linspace(0.0, 2.0 * np.pi, 64, endpoint=False):
        candidates.append(np.exp(1j * phi * np.arange(N + 1)))
    rng = np.random.default_rng(rng_seed)
    for _ in range(trials):
        candidates.append(rng.standard_normal(N + 1)
                          + 1j * rng.standard_normal(N + 1))

    worst = tier1.min_eigenvalue
    for c in candidates:
        c = c / npl.norm(c)
        Mc = _coeff_matrix(seq, c)
        rep = psd_check(Mc, tol)
        worst = min(worst, rep.min_eigenvalue)
        if rep.verdict == NOT_PSD:
            witness = {"coefficients": c, "vector": rep.witness,
                       "value": rep.min_eigenvalue}
            return CriterionReport("toeplitz", NO, N, rep.min_eigenvalue,
                                   witness)
    return CriterionReport("toeplitz", BORDERLINE, N, worst, None)


def szego_partial_sum(seq: MomentSequence, z: complex, K: int) -> np.ndarray:
    """``sum_{n<=K} z^n A_n*`` for |z| < 1."""
    if abs(z) >= 1.0:
        raise DiskViolation(f"|z| = {abs(z):.6f} is not inside the unit disk")
    if K > seq.order:
        raise InsufficientData(
            f"partial sum order {K} exceeds available order {seq.order}")
    out = np.zeros((seq.dim, seq.dim), dtype=complex)
    zn = 1.0 + 0.0j
    for n in range(K + 1):
        out += zn * seq.terms[n].conj().T
        zn *= z
    return out


def poisson_check(seq: MomentSequence,
                  radii=(0.3, 0.6, 0.9, 0.99),
                  angles_per_radius: int = 64,
                  tol: Tolerance = DEFAULT_TOL) -> CriterionReport:
    """Certified grid test of the operator Poisson kernel on the disk.

    At each grid point ``z = r e^{i theta}`` the kernel is approximated
    by ``P = S_N(z) + S_N(z)* - I`` with the geometric tail estimate
    ``2 r^(N+1) / (1-r)`` (valid because every term is a contraction;
    that is what makes the verdict *certified* rather than heuristic).
    YES/NO at a point only when the margin clears the tail bound,
    BORDERLINE otherwise; a single NO point refutes globally.
    """
    if not seq.contractive:
        raise TailBoundUnavailable(
            "tail certification needs all terms contractive")
    if not len(radii) or angles_per_radius < 1:
        raise ShapeMismatch("empty evaluation grid")
    N = seq.order
    verdicts, witness = [], None
    worst = math.inf
    for r in radii:
        if not (0.0 <= r < 1.0):
            raise DiskViolation(f"grid radius {r} is not in [0, 1)")
        tail = 2.0 * r ** (N + 1) / (1.0 - r)
        for theta in np.linspace(0.0, 2.0 * np.pi, angles_per_radius,
                                 endpoint=False):
            z = r * np.exp(1j * theta)
            S = szego_partial_sum(seq, z, N)
            P = S + S.conj().T - np.eye(seq.dim)
            lam, vecs = npl.eigh((P + P.conj().T) / 2.0)
            worst = min(worst, lam[0] - tail)
            if lam[0] >= tail:
                verdicts.append(YES)
            elif lam[0] < -tail:
                verdicts.append(NO)
                if witness is None:
                    witness = {"z": complex(z), "vector": vecs[:, 0],
                               "value": float(lam[0]), "tail": tail}
            else:
                verdicts.append(BORDERLINE)
    if NO in verdicts:
        satisfied = NO
    elif all(v == YES for v in verdicts):
        satisfied = YES
    else:
        satisfied = BORDERLINE
    return CriterionReport("poisson", satisfied, N, worst, witness)


# ---------------------------------------------------------------------------
# scalar three-term recurrence
# ---------------------------------------------------------------------------

def jacobi_parameters(seq: MomentSequence, levels: int,
                      tol: Tolerance = DEFAULT_TOL):
    """Three-term recurrence coefficients of a scalar moment sequence.

    Gram-Schmidt on the monomial Gram matrix ``<x^i, x^j> = m_(i+j)``
    (numerically stabler than determinant ratios).  Returns
    ``(a, b)`` with ``a_0..a_(levels-1)`` and ``b_0..b_(levels-2)``;
    off-diagonals use the principal (nonnegative) square root.  When
    the underlying measure has fewer atoms than ``levels`` the lists
    come back short -- rank termination is detected by the residual
    norm falling below tolerance.

    Raises
    ------
    NotScalar, InsufficientData, IndefiniteHankel
    """
    if seq.dim != 1:
        raise NotScalar(f"scalar sequence required, got dim {seq.dim}")
    if levels < 1:
        raise InsufficientData("levels must be >= 1")
    if 2 * levels > seq.order:
        raise InsufficientData(
            f"levels {levels} needs A_{2 * levels}, only A_0..A_{seq.order} "
            "available")
    G = hankel(seq, levels, 0)
    rep = psd_check(G, tol)
    if rep.verdict == NOT_PSD:
        raise IndefiniteHankel(
            f"Hankel Gram has eigenvalue {rep.min_eigenvalue:.3e}")
    t = tol.tau(G)

    def ip(p, q):
        return complex(p.conj() @ (G @ q))

    def shift(p):
        out = np.zeros_like(p)
        out[1:] = p[:-1]
        return out

    a, b = [], []
    p_prev = None
    p = np.zeros(levels + 1, dtype=complex)
    p[0] = 1.0
    for k in range(levels):
        xp = shift(p)
        a.append(float(ip(p, xp).real))
        if k == levels - 1:
            break
        r = xp - a[-1] * p
        if p_prev is not None:
            r = r - b[-1] * p_prev
        nr2 = max(ip(r, r).real, 0.0)
        # Rayleigh-quotient kernel test: the coefficient norm of r can be
        # large, so an absolute cut on sqrt(nr2) would miss terminations
        if nr2 <= t * float(np.real(r.conj() @ r)):
            break  # rank termination: the measure has only k+1 atoms
        bk = math.sqrt(nr2)
        b.append(bk)
        p_prev, p = p, r / bk
    return a, b


def jacobi_matrix(a, b) -> np.ndarray:
    """Symmetric tridiagonal matrix with diagonal ``a``, off-diagonal ``b``."""
    a = [float(x) for x in a]
    b = [float(x) for x in b]
    if len(b) != max(len(a) - 1, 0):
        raise ShapeMismatch(
            f"need len(b) = len(a) - 1, got {len(a)} and {len(b)}")
    if any(x < 0 for x in b):
        raise ValueError("off-diagonal entries must be nonnegative")
    J = np.diag(np.array(a, dtype=complex))
    for k, x in enumerate(b):
        J[k, k + 1] = x
        J[k + 1, k] = x
    return J


# ---------------------------------------------------------------------------
# JSON contract
# ---------------------------------------------------------------------------
# {"dim": d, "terms": [matrix, ...]}; term 0 may be the literal "I".

def sequence_to_json(seq: MomentSequence) -> dict:
    return {"dim": seq.dim, "terms": [matrix_to_json(t) for t in seq.terms]}


def sequence_from_json(obj, tol: Tolerance = DEFAULT_TOL) -> MomentSequence:
    try:
        d = int(obj["dim"])
        raw_terms = obj["terms"]
    except (KeyError, TypeError) as exc:
        raise ShapeMismatch(f"malformed sequence object: {exc}") from exc
    terms = []
    for k, entry in enumerate(raw_terms):
        if entry == "I":
            terms.append(np.eye(d, dtype=complex))
        else:
            terms.append(matrix_from_json(entry))
    return moment_sequence(terms, tol)
