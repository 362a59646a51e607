"""Independent oracles shared by the test modules.

Everything here is deliberately computed along a different route than the
package: 2x2 eigenvalues from the characteristic polynomial, qubit overlaps
from Bloch-vector closed forms, exponent functions from their classical
scalar formulas on diagonal embeddings.  Agreement between the two routes is
what the tests assert.
"""

from __future__ import annotations

import math

import numpy as np

from cqexp import CQChannel, DensityOperator, InputDistribution, PauliChannelParams, binary_pauli

PAULI = (
    np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex),
    np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex),
    np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex),
)


def pauli_channel(mu: float, theta: float = math.pi / 6) -> CQChannel:
    return binary_pauli(PauliChannelParams(mu=mu, theta=theta))


def char_poly_eigs_2x2(h) -> tuple[float, float]:
    """2x2 Hermitian eigenvalues from the characteristic polynomial (descending)."""
    h = np.asarray(h, dtype=complex)
    mean = (h[0, 0].real + h[1, 1].real) / 2.0
    disc = math.sqrt(((h[0, 0].real - h[1, 1].real) / 2.0) ** 2 + abs(h[0, 1]) ** 2)
    return mean + disc, mean - disc


def binary_entropy(p: float) -> float:
    if p <= 0.0 or p >= 1.0:
        return 0.0
    return -(p * math.log2(p) + (1.0 - p) * math.log2(1.0 - p))


def bloch_vector(m) -> np.ndarray:
    """Bloch components of a 2x2 density matrix: r_k = Tr(m sigma_k)."""
    m = np.asarray(m, dtype=complex)
    return np.array([np.trace(m @ p).real for p in PAULI])


def qubit_overlap_from_bloch(ra, rb) -> float:
    """Closed-form Tr{sqrt(a) sqrt(b)} for qubits with Bloch vectors ra, rb.

    With u_i = sqrt(p+) + sqrt(p-) and v_i = sqrt(p+) - sqrt(p-) for the
    eigenvalues (1 +- |r_i|)/2, the overlap is (u1 u2 + v1 v2 cos phi) / 2.
    """
    ra, rb = np.asarray(ra, float), np.asarray(rb, float)
    la, lb = np.linalg.norm(ra), np.linalg.norm(rb)

    def uv(l):
        return math.sqrt((1 + l) / 2) + math.sqrt((1 - l) / 2), \
               math.sqrt((1 + l) / 2) - math.sqrt((1 - l) / 2)

    ua, va = uv(la)
    ub, vb = uv(lb)
    cos_phi = float(ra @ rb) / (la * lb) if la > 0 and lb > 0 else 0.0
    return 0.5 * (ua * ub + va * vb * cos_phi)


def pauli_pair_overlap(mu: float, theta: float) -> float:
    """Overlap of the two binary-channel states: closed form in mu and theta."""
    a2 = 2.0 * mu - 1.0
    root = math.sqrt(1.0 - a2)
    return (1.0 + root) / 2.0 - math.cos(2.0 * theta) * (1.0 - root) / 2.0


# --- classical scalar formulas (oracles for the diagonal embedding) ----------


def classical_e0(w, q, s: float) -> float:
    w, q = np.asarray(w, float), np.asarray(q, float)
    inner = (q[:, None] * w ** (1.0 / (1.0 + s))).sum(axis=0)
    return float(-np.log2(np.sum(inner ** (1.0 + s))))


def classical_ex(w, q, r: float) -> float:
    w, q = np.asarray(w, float), np.asarray(q, float)
    bh = np.sqrt(w) @ np.sqrt(w).T  # pairwise Bhattacharyya kernel
    return float(-r * np.log2(q @ (bh ** (1.0 / r)) @ q))


def classical_mi(w, q) -> float:
    w, q = np.asarray(w, float), np.asarray(q, float)

    def ent(p):
        p = p[p > 0]
        return float(-(p * np.log2(p)).sum())

    return ent(q @ w) - float(sum(qx * ent(row) for qx, row in zip(q, w)))


# --- random instances --------------------------------------------------------


def random_dmc(rng: np.random.Generator, kx: int, ky: int) -> tuple[np.ndarray, np.ndarray]:
    """Random row-stochastic matrix and input distribution (strictly positive)."""
    w = rng.dirichlet(np.ones(ky) * 2.0, size=kx)
    q = rng.dirichlet(np.ones(kx) * 2.0)
    return w, q


def random_density(rng: np.random.Generator, d: int) -> DensityOperator:
    g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    m = g @ g.conj().T
    return DensityOperator(m / np.trace(m).real)


def random_unitary(rng: np.random.Generator, d: int) -> np.ndarray:
    g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    qmat, r = np.linalg.qr(g)
    return qmat * (np.diag(r) / np.abs(np.diag(r)))


def random_channel(rng: np.random.Generator, k: int, d: int) -> CQChannel:
    states = tuple(random_density(rng, d) for _ in range(k))
    q = InputDistribution(rng.dirichlet(np.ones(k) * 2.0))
    return CQChannel(states, q)
