"""Linearized mode systems around the circle: rates, spectra, propagators.

Around the steady circle a0 + (1 + a1) e^{is} the perturbation modes
decouple: a0 and a1 are frozen, a2 decays at the scalar rate
(A + b_tilde)/4, and for m >= 3 the pair state (a_m, conj(a_{2-m}))
obeys u' = G u with the 2x2 matrix

    G = -(1/8) [ (2m-2) A + m b_tilde            -(m-2) B (1+a1)^2 / |1+a1| ]
               [ -m B (1+conj(a1))^2 / |1+a1|    (2m-2) A + (m-2) b_tilde   ]

whose -8 G eigenvalues are exactly 2 A (m-1) and 2 (A + b_tilde) (m-1),
real and positive whenever the tension law is monotone.  The matrix is
not Hermitian for m >= 3 despite the real spectrum, so it is
diagonalized by the closed-form 2x2 eigensolver and the eigenvector
condition number is recorded.
"""

from dataclasses import dataclass

import numpy as np

from .errors import IllConditioned
from .tension import linear_coefficients

_COND_LIMIT = 1e8


@dataclass(frozen=True)
class Mode2System:
    """Scalar decay rate (A + b_tilde)/4 of the second mode."""
    rate: float


@dataclass(frozen=True)
class ModePairSystem:
    """Coupled system for (a_m, conj(a_{2-m})), m >= 3."""
    m: int
    G: np.ndarray
    eigenvalues: np.ndarray       # of G itself
    eigenvectors: np.ndarray      # columns
    spectral_abscissa: float      # max real part of eig(G), < 0 under positivity
    eigen_cond: float             # condition number of the eigenvector matrix

    def __post_init__(self):
        for name in ("G", "eigenvalues", "eigenvectors"):
            arr = np.array(getattr(self, name), dtype=complex)
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)

    @property
    def minus8_eigenvalues(self):
        """Eigenvalues of -8 G: 2 A (m-1) and 2 (A + b_tilde) (m-1)."""
        return -8.0 * self.eigenvalues


def _eig2(G):
    """Closed-form eigen-decomposition of a 2x2 complex matrix.

    Returns (eigenvalues, eigenvector columns).  Exact for diagonal
    input; otherwise uses the stable quadratic formula on the trace
    and determinant.
    """
    a, b = G[0, 0], G[0, 1]
    c, d = G[1, 0], G[1, 1]
    if b == 0 and c == 0:
        return np.array([a, d]), np.eye(2, dtype=complex)
    tr = a + d
    disc = np.sqrt((a - d) ** 2 + 4.0 * b * c + 0j)
    lam = np.array([(tr - disc) / 2.0, (tr + disc) / 2.0])
    vecs = np.empty((2, 2), dtype=complex)
    for i, l in enumerate(lam):
        # pick the better-conditioned null-vector expression
        v1 = np.array([b, l - a])
        v2 = np.array([l - d, c])
        v = v1 if np.abs(v1).max() >= np.abs(v2).max() else v2
        nrm = np.linalg.norm(v)
        vecs[:, i] = v / nrm if nrm > 0 else np.array([1.0, 0.0])
    return lam, vecs


def mode2_system(coeffs):
    return Mode2System(rate=(coeffs.A + coeffs.b_tilde) / 4.0)


def build_pair_system(m, coeffs, a1):
    """Assemble the pair matrix for mode m >= 3 and diagonalize it."""
    if m < 3:
        raise ValueError("pair systems exist for m >= 3 only")
    a1 = complex(a1)
    r1 = abs(1.0 + a1)
    u = (1.0 + a1) ** 2 / r1
    A, B, Bt = coeffs.A, coeffs.B, coeffs.b_tilde
    G = -0.125 * np.array([
        [(2.0 * m - 2.0) * A + m * Bt, -(m - 2.0) * B * u],
        [-m * B * np.conj(u), (2.0 * m - 2.0) * A + (m - 2.0) * Bt],
    ], dtype=complex)
    lam, vecs = _eig2(G)
    cond = float(np.linalg.cond(vecs))
    return ModePairSystem(
        m=m, G=G, eigenvalues=lam, eigenvectors=vecs,
        spectral_abscissa=float(np.max(lam.real)), eigen_cond=cond)


def _phi1_scalar(z):
    """(e^z - 1)/z with a series branch for |z| < 1e-4.

    The main branch uses e^z - 1 = 2 e^{z/2} sinh(z/2), which is free of
    cancellation for moderate |z|.
    """
    z = np.asarray(z, dtype=complex)
    small = np.abs(z) < 1e-4
    zs = np.where(small, 1.0, z)
    main = 2.0 * np.exp(zs / 2.0) * np.sinh(zs / 2.0) / zs
    series = 1.0 + z / 2.0 + z ** 2 / 6.0 + z ** 3 / 24.0 + z ** 4 / 120.0
    return np.where(small, series, main)


def _phi2_scalar(z):
    """(e^z - 1 - z)/z^2 = (phi1(z) - 1)/z with a series branch for |z| < 1e-3."""
    z = np.asarray(z, dtype=complex)
    small = np.abs(z) < 1e-3
    zs = np.where(small, 1.0, z)
    main = (2.0 * np.exp(zs / 2.0) * np.sinh(zs / 2.0) / zs - 1.0) / zs
    series = 0.5 + z / 6.0 + z ** 2 / 24.0 + z ** 3 / 120.0 + z ** 4 / 720.0
    return np.where(small, series, main)


def _apply_function(sys, dt, fn):
    if sys.eigen_cond > _COND_LIMIT:
        raise IllConditioned(
            f"pair m={sys.m}: eigenvector condition {sys.eigen_cond:.3g} exceeds {_COND_LIMIT:.0e}")
    V = sys.eigenvectors
    diag = fn(sys.eigenvalues * dt)
    return V @ np.diag(diag) @ np.linalg.inv(V)


def propagate_pair(sys, state, dt):
    """Apply the exact propagator e^{G dt} to the pair state."""
    if dt < 0:
        raise ValueError("dt must be nonnegative")
    E = _apply_function(sys, dt, np.exp)
    out = E @ np.asarray(state, dtype=complex)
    return (complex(out[0]), complex(out[1]))


def phi1_pair(sys, dt):
    """Matrix phi1(G dt) = (e^{G dt} - I)(G dt)^{-1}, series-safe near zero."""
    return _apply_function(sys, dt, _phi1_scalar)


def phi2_pair(sys, dt):
    """Matrix phi2(G dt) = (e^{G dt} - I - G dt)(G dt)^{-2}, series-safe near zero."""
    return _apply_function(sys, dt, _phi2_scalar)


def propagator_matrices(sys, dt):
    """(e^{G dt}, phi1(G dt), phi2(G dt)) in one diagonalization pass."""
    if sys.eigen_cond > _COND_LIMIT:
        raise IllConditioned(
            f"pair m={sys.m}: eigenvector condition {sys.eigen_cond:.3g} exceeds {_COND_LIMIT:.0e}")
    V = sys.eigenvectors
    Vinv = np.linalg.inv(V)
    z = sys.eigenvalues * dt
    E = V @ np.diag(np.exp(z)) @ Vinv
    P1 = V @ np.diag(_phi1_scalar(z)) @ Vinv
    P2 = V @ np.diag(_phi2_scalar(z)) @ Vinv
    return E, P1, P2


def pair_rate(sys):
    """Exponential decay rate of e^{G t}: the negated spectral abscissa."""
    return -sys.spectral_abscissa


def spectrum_report(law, a1, m_max):
    """Rows (m, lambda1, lambda2, decay_rate) for 3 <= m <= m_max.

    lambda1, lambda2 are the eigenvalues of -8 G sorted ascending; the
    decay rate is min(lambda1, lambda2) / 8 and grows linearly in m.
    """
    if m_max < 3:
        raise ValueError("m_max must be >= 3")
    coeffs = linear_coefficients(law, a1)
    rows = []
    for m in range(3, m_max + 1):
        sys = build_pair_system(m, coeffs, a1)
        lams = np.sort(sys.minus8_eigenvalues.real)
        rows.append({
            "m": m,
            "lambda1": float(lams[0]),
            "lambda2": float(lams[1]),
            "decay_rate": float(lams[0] / 8.0),
        })
    return rows
