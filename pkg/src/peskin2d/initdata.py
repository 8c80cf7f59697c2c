"""Generators for initial perturbations in the small-data regime.

All generators emit a FourierCurve whose a0 and a1 components vanish
(the perturbation lives entirely in Y) unless a steady-state component
is requested explicitly.  Corners are realized as radial tent bumps:
the tent spectrum is known in closed form and decays like 1/k^2, which
is exactly the dyadic block signature of a Lipschitz corner (block
profile 2^{3n/2} |P_n Y| bounded but not decaying in n).
"""

from dataclasses import dataclass, field

import numpy as np

from . import norms
from .curve import FourierCurve, split, wavenumbers
from .errors import ConfigError, GeometryError

CHORD_ARC_MIN = 0.1


def tent_hat(j, width):
    """Fourier coefficients of the periodic unit tent max(0, 1 - |s|/width).

    hat(0) = width/(2 pi); hat(j) = 2 sin^2(j width/2) / (pi j^2 width).
    """
    j = np.asarray(j, dtype=float)
    out = np.empty_like(j)
    nz = j != 0
    out[nz] = 2.0 * np.sin(j[nz] * width / 2.0) ** 2 / (np.pi * j[nz] ** 2 * width)
    out[~nz] = width / (2.0 * np.pi)
    return out


def make_single_mode(K, k, amplitude, allow_steady=False):
    """Single-coefficient data a_k = amplitude."""
    if abs(k) > K:
        raise ConfigError(f"mode {k} outside truncation K={K}")
    if k in (0, 1) and not allow_steady:
        raise ConfigError("modes 0 and 1 parametrize steady circles; "
                          "set allow_steady=True to generate them")
    modes = np.zeros(2 * K + 1, dtype=complex)
    modes[K + k] = amplitude
    return FourierCurve(modes)


def _corner_modes(K, positions, strengths, width):
    """Raw (uncalibrated) coefficients of e^{is} sum strengths tent(s - p)."""
    k = wavenumbers(K)
    j = k - 1
    modes = np.zeros(2 * K + 1, dtype=complex)
    for p, w in zip(positions, strengths):
        modes += w * tent_hat(j, width) * np.exp(-1j * j * p)
    modes[K + 0] = 0.0
    modes[K + 1] = 0.0
    return modes


def make_corner(K, positions, strengths, amplitude, width=1.0, check_geometry=True):
    """Corner-bearing perturbation from radial tents at the given angles.

    The tent shape is self-calibrated: a single unit-strength tent is
    normalized by its own s-norm (computed from the closed-form
    spectrum at this K), so a one-tent call returns data with s-norm
    exactly equal to amplitude and multi-tent data lands within the
    triangle-inequality factor of it.  Halving amplitude halves every
    norm exactly.

    Returns (curve, report); the report records the s-norm and Wiener
    snapshot at t = 0 and the estimated coefficient tail beyond K.  The
    Wiener tail of tent data decays like 1/|k| and so grows with the
    truncation horizon; the reported estimate makes that visible
    instead of hiding it.
    """
    positions = np.atleast_1d(np.asarray(positions, dtype=float))
    strengths = np.atleast_1d(np.asarray(strengths, dtype=float))
    if positions.size != strengths.size:
        raise ConfigError("positions and strengths must have equal length")
    if positions.size != np.unique(np.round(positions % (2 * np.pi), 12)).size:
        raise ConfigError("tent positions must be distinct")
    if not (0 < width <= np.pi):
        raise ConfigError("tent width must lie in (0, pi]")

    unit = _corner_modes(K, [0.0], [1.0], width)
    scale = norms.s_norm(unit)
    modes = amplitude / scale * _corner_modes(K, positions, strengths, width)
    curve = FourierCurve(modes)
    if check_geometry:
        _require_chord_arc(curve)
    report = {
        "s_norm": norms.s_norm(modes),
        "w_norm": norms.wiener_snapshot(modes, 0.0),
        "tail_w_estimate": _tent_tail_w(K, positions, strengths, width,
                                        abs(amplitude) / scale),
    }
    return curve, report


def _tent_tail_w(K, positions, strengths, width, scale, horizon=2 ** 20):
    """Closed-form estimate of sum_{|k| > K} |a_k| |k| up to a fixed horizon.

    For tent spectra the summand behaves like 1/|k|, so the full tail
    diverges logarithmically; the finite-horizon value quantifies the
    truncation honestly for comparison against the retained Wiener mass.
    """
    j = np.arange(K, horizon, dtype=float)
    # |k| ~ j+1 on the positive side, j-1 on the negative; bound both by closed form
    env = 2.0 * np.sin(j * width / 2.0) ** 2 / (np.pi * j ** 2 * width)
    per_tent = float(np.sum(env * (j + 1.0)) + np.sum(env * np.maximum(j - 1.0, 0.0)))
    return scale * float(np.sum(np.abs(strengths))) * per_tent


def make_polygonal(K, vertices, amplitude):
    """Regular polygon-like data: equal tents at the vertex angles, touching widths."""
    if vertices < 2:
        raise ConfigError("polygonal data needs at least 2 vertices")
    positions = 2.0 * np.pi * np.arange(vertices) / vertices
    return make_corner(K, positions, np.ones(vertices), amplitude,
                       width=np.pi / vertices)


def make_random_decay(K, exponent, seed, amplitude):
    """Random-phase data a_k = amplitude zeta_k |k|^{-exponent}, k not in {0, 1}.

    zeta_k is uniform on the unit circle from a counter-based generator,
    so the output is a pure function of (K, exponent, seed, amplitude).
    """
    if exponent <= 1:
        raise ConfigError("decay exponent must exceed 1")
    rng = np.random.Generator(np.random.Philox(int(seed)))
    k = wavenumbers(K)
    theta = rng.uniform(0.0, 2.0 * np.pi, size=k.size)
    mag = np.zeros(k.size)
    nz = k != 0
    mag[nz] = np.abs(k[nz]).astype(float) ** (-float(exponent))
    modes = amplitude * np.exp(1j * theta) * mag
    modes[K + 0] = 0.0
    if K >= 1:
        modes[K + 1] = 0.0
    return FourierCurve(modes)


def rescale_to_norm(curve, norm_name, value):
    """Scale all modes so the named norm ('s' or 'w') equals value exactly.

    Both norms are positively homogeneous, so the rescale is exact and
    idempotent up to roundoff.
    """
    if norm_name == "s":
        current = norms.s_norm(curve.modes)
    elif norm_name == "w":
        current = norms.wiener_snapshot(curve.modes, 0.0)
    else:
        raise ConfigError(f"unknown target norm {norm_name!r} (use 's' or 'w')")
    if current == 0.0:
        raise ConfigError("cannot rescale identically zero data")
    return curve.with_modes(curve.modes * (value / current))


def _require_chord_arc(curve):
    """Reject curves whose sampled chord-arc ratio drops below the threshold."""
    from .nonlin import chord_arc_ratio
    ratio = chord_arc_ratio(curve)
    if ratio <= CHORD_ARC_MIN:
        raise GeometryError(
            f"generated curve fails the chord-arc check: min ratio {ratio:.4g}")


@dataclass(frozen=True)
class InitialDataSpec:
    """Declarative description of initial data, JSON-mappable.

    kind: single_mode | random_decay | corner | polygonal
    params: generator arguments (see make_*)
    target_norm: optional (name, value) rescale applied after generation
    """
    kind: str
    params: dict = field(default_factory=dict)
    target_norm: tuple = None

    @staticmethod
    def from_dict(d):
        if not isinstance(d, dict) or "kind" not in d:
            raise ConfigError(f"initial data spec must be a mapping with 'kind', got {d!r}")
        d = dict(d)
        kind = d.pop("kind")
        target = d.pop("target_norm", None)
        if target is not None:
            target = (str(target[0]), float(target[1]))
        return InitialDataSpec(kind=kind, params=d, target_norm=target)

    def make(self, K):
        """Generate (curve, report) at truncation K."""
        p = dict(self.params)
        if "amplitude" in p and isinstance(p["amplitude"], (list, tuple)):
            p["amplitude"] = complex(p["amplitude"][0], p["amplitude"][1])
        report = {}
        if self.kind == "single_mode":
            curve = make_single_mode(K, int(p["k"]), p.get("amplitude", 1e-3),
                                     allow_steady=bool(p.get("allow_steady", False)))
        elif self.kind == "random_decay":
            curve = make_random_decay(K, p.get("exponent", 2.0),
                                      p.get("seed", 0), p.get("amplitude", 1e-3))
        elif self.kind == "corner":
            curve, report = make_corner(K, p["positions"], p["strengths"],
                                        p.get("amplitude", 1e-2),
                                        width=p.get("width", 1.0))
        elif self.kind == "polygonal":
            curve, report = make_polygonal(K, int(p["vertices"]), p.get("amplitude", 1e-2))
        else:
            raise ConfigError(f"unknown initial data kind {self.kind!r}")
        if self.target_norm is not None:
            curve = rescale_to_norm(curve, *self.target_norm)
        sp = split(curve)
        if not p.get("allow_steady", False):
            assert sp.a0 == 0 and sp.a1 == 0
        return curve, report
