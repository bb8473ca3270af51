"""Shared generators for the test suite.

All randomness is routed through seeded ``numpy.random.Generator``
instances so every test is reproducible from its stated seed.
"""
from __future__ import annotations

import numpy as np
import pytest

from opdilate import moments


# ---- random matrix helpers ----

def haar_unitary(rng: np.random.Generator, d: int) -> np.ndarray:
    Z = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    Q, R = np.linalg.qr(Z)
    return Q * (np.diag(R) / np.abs(np.diag(R)))


def random_contraction(rng: np.random.Generator, d: int,
                       norm: float = 0.9) -> np.ndarray:
    """Random d x d matrix rescaled to the requested spectral norm."""
    Z = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    s = np.linalg.norm(Z, 2)
    return Z * (norm / s)


def random_psd(rng: np.random.Generator, d: int,
               scale: float = 1.0) -> np.ndarray:
    Z = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return scale * (Z @ Z.conj().T) / d


def random_pd(rng: np.random.Generator, d: int, lo: float = 0.5,
              hi: float = 2.5) -> np.ndarray:
    Q = haar_unitary(rng, d)
    w = rng.uniform(lo, hi, size=d)
    return (Q * w) @ Q.conj().T


# ---- commuting-pair generators ----
#
# Two exactly-commuting families (up to roundoff):
#   * "normal":   C normal (unitarily diagonalizable), A a positive
#                 polynomial in C*C plus eps*I -- then A commutes with C
#                 because C intertwines p(C*C) and p(CC*).
#   * "block":    A = Q (+)_j alpha_j I_{d_j} Q*, C = Q (+)_j C_j Q*
#                 with arbitrary contraction blocks C_j; A is scalar on
#                 each block, so AC = CA holds with non-normal C too.

def commuting_pair_normal(rng: np.random.Generator, d: int,
                          singular_c: bool = False):
    Q = haar_unitary(rng, d)
    lam = rng.uniform(0.1, 0.95, size=d) * np.exp(
        2j * np.pi * rng.random(size=d))
    if singular_c:
        lam[0] = 0.0
    C = (Q * lam) @ Q.conj().T
    coeff = rng.uniform(0.2, 1.0, size=3)
    x = np.abs(lam) ** 2
    a_eig = coeff[0] + coeff[1] * x + coeff[2] * x ** 2 + 0.05
    A = (Q * a_eig) @ Q.conj().T
    return (A + A.conj().T) / 2, C


def commuting_pair_block(rng: np.random.Generator, sizes,
                         unit_alpha: bool = False):
    d = int(sum(sizes))
    Q = haar_unitary(rng, d)
    A = np.zeros((d, d), dtype=complex)
    C = np.zeros((d, d), dtype=complex)
    pos = 0
    for j, dj in enumerate(sizes):
        alpha = 1.0 if (unit_alpha and j == 0) else rng.uniform(0.3, 2.5)
        A[pos:pos + dj, pos:pos + dj] = alpha * np.eye(dj)
        C[pos:pos + dj, pos:pos + dj] = random_contraction(
            rng, dj, norm=rng.uniform(0.2, 0.95))
        pos += dj
    A = Q @ A @ Q.conj().T
    C = Q @ C @ Q.conj().T
    return (A + A.conj().T) / 2, C


# ---- moment-sequence builders ----

def measure_moments(rng: np.random.Generator, atoms: int, n_terms: int,
                    min_sep: float = 0.0, min_weight: float = 0.0):
    """Scalar moments of a random discrete probability measure on [-1, 1].

    ``min_sep``/``min_weight`` resample until the atoms are separated
    and carry real mass, keeping the Gram spectra away from the rank
    cutoff so constructions stay well conditioned.
    """
    while True:
        pts = np.sort(rng.uniform(-1.0, 1.0, size=atoms))
        w = rng.dirichlet(np.ones(atoms))
        if atoms > 1 and np.min(np.diff(pts)) < min_sep:
            continue
        if np.min(w) < min_weight:
            continue
        break
    vals = [float(np.sum(w * pts ** n)) for n in range(n_terms)]
    return vals, pts, w


def scalar_sequence(vals):
    return moments.moment_sequence(
        [np.array([[v]], dtype=float) for v in vals])


def power_sequence(T: np.ndarray, n_max: int):
    d = T.shape[0]
    terms = [np.eye(d, dtype=complex)]
    for _ in range(n_max):
        terms.append(terms[-1] @ T)
    return moments.moment_sequence(terms)


@pytest.fixture
def rng():
    return np.random.default_rng(2024)
