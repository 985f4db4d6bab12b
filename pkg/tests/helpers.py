"""Shared randomized fixtures for the test suite (all explicitly seeded)."""

from __future__ import annotations

import numpy as np

from hardycover import Word


def haar_unitary(rng: np.random.Generator, m: int) -> np.ndarray:
    z = rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def commuting_unitaries(rng: np.random.Generator, m: int, count: int = 2) -> list[np.ndarray]:
    """Independent Haar-like unitaries sharing one random eigenbasis."""
    basis = haar_unitary(rng, m)
    out = []
    for _ in range(count):
        phases = np.exp(1j * rng.uniform(0.0, 2.0 * np.pi, size=m))
        out.append(basis @ np.diag(phases) @ basis.conj().T)
    return out


def random_signature_matrix(rng: np.random.Generator, m: int, basis: np.ndarray | None = None) -> np.ndarray:
    """Selfadjoint unitary with random +-1 spectrum (never all equal for m >= 2)."""
    if basis is None:
        basis = haar_unitary(rng, m)
    signs = rng.choice((1.0, -1.0), size=m)
    if m >= 2 and np.all(signs == signs[0]):
        signs[0] = -signs[0]
    return basis @ np.diag(signs.astype(complex)) @ basis.conj().T


def random_word(rng: np.random.Generator, alphabet: tuple[str, ...], length: int) -> Word:
    letters = tuple(
        (int(rng.integers(len(alphabet))), int(rng.choice((1, -1))))
        for _ in range(length)
    )
    return Word(letters, tuple(alphabet))
