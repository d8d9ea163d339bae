"""State-space self-maps and sampling harnesses for isometry classification.

A candidate map is one of four kinds:

* ``unitary_conj``      -- rho -> u rho u^dag,
* ``antiunitary_conj``  -- rho -> u conj(rho) u^dag (conjugation in the
  computational basis followed by a unitary conjugation),
* ``bloch_map``         -- an arbitrary self-map of the Bloch ball,
* ``z_phase_field``     -- rho -> u_z(t(rho)) rho u_z(t(rho))^dag with a
  state-dependent phase t and u_z(t) = diag(e^{it}, e^{-it}).

`check_isometry` measures how well a map preserves a chosen transport metric
on a stratified sample of state pairs; `satisfies_dz_condition` tests the
Bloch-level characterization relevant to the single-sigma_z distance (length
of the Bloch vector preserved, third coordinate globally fixed or globally
negated); `theorem_crosscheck_dz` asserts that the two verdicts agree across
sampled map families.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .cost import require_unitary, sym_cost, z_cost
from .errors import DomainError
from .linalg import dagger
from .sampling import derived_rng, random_pure_state, random_state, random_unitary
from .states import PAULI, bloch_from_state, state_from_bloch, validate_state
from .transport import SolverConfig, wasserstein_distance, wasserstein_divergence

METRICS = ("D_sym", "D_z", "d_sym")


@dataclass(frozen=True)
class StateMap:
    kind: str
    payload: object
    label: str

    def __call__(self, rho) -> np.ndarray:
        return apply_state_map(self, rho)


@dataclass(frozen=True)
class IsometryReport:
    map_id: str
    metric: str
    samples: int
    max_abs_deviation: float
    verdict: str  # "isometry_within_tol" | "violated"
    witness_pair: tuple | None  # (rho, omega, deviation) when violated


def unitary_conj_map(u, label: str = "") -> StateMap:
    u = require_unitary(u)
    return StateMap("unitary_conj", u, label or "unitary-conjugation")


def antiunitary_conj_map(u, label: str = "") -> StateMap:
    u = require_unitary(u)
    return StateMap("antiunitary_conj", u, label or "antiunitary-conjugation")


def bloch_self_map(fn: Callable, label: str = "") -> StateMap:
    return StateMap("bloch_map", fn, label or "bloch-map")


def orthogonal_bloch_map(o, label: str = "") -> StateMap:
    o = np.asarray(o, dtype=float)
    if o.shape != (3, 3) or np.abs(o.T @ o - np.eye(3)).max() > 1e-10:
        raise DomainError("orthogonal_bloch_map: payload is not orthogonal")
    return StateMap("bloch_map", lambda b: o @ b, label or "orthogonal-bloch-map")


def z_phase_field_map(t_fn: Callable, label: str = "") -> StateMap:
    return StateMap("z_phase_field", t_fn, label or "z-phase-field")


def z_phase_unitary(t: float) -> np.ndarray:
    """diag(e^{it}, e^{-it}) = exp(i t sigma_z)."""
    return np.array([[np.exp(1j * t), 0.0], [0.0, np.exp(-1j * t)]], dtype=complex)


def apply_state_map(state_map: StateMap, rho) -> np.ndarray:
    rho = validate_state(rho, "rho")
    kind = state_map.kind
    if kind == "unitary_conj":
        u = state_map.payload
        return u @ rho @ dagger(u)
    if kind == "antiunitary_conj":
        u = state_map.payload
        return u @ rho.conj() @ dagger(u)
    if kind == "bloch_map":
        image = np.asarray(state_map.payload(bloch_from_state(rho)), dtype=float)
        return state_from_bloch(image)
    if kind == "z_phase_field":
        u = z_phase_unitary(float(state_map.payload(rho)))
        return u @ rho @ dagger(u)
    raise DomainError(f"unknown state-map kind {kind!r}")


def _quaternion_from_rotation(m: np.ndarray):
    """Robust (Shepperd-style) quaternion extraction, accurate at all angles."""
    t = m[0, 0] + m[1, 1] + m[2, 2]
    if t > max(m[0, 0], m[1, 1], m[2, 2]):
        r = math.sqrt(1.0 + t)
        s = 0.5 / r
        return 0.5 * r, np.array(
            [(m[2, 1] - m[1, 2]) * s, (m[0, 2] - m[2, 0]) * s, (m[1, 0] - m[0, 1]) * s]
        )
    k = int(np.argmax([m[0, 0], m[1, 1], m[2, 2]]))
    if k == 0:
        r = math.sqrt(1.0 + m[0, 0] - m[1, 1] - m[2, 2])
        s = 0.5 / r
        w = (m[2, 1] - m[1, 2]) * s
        v = np.array([0.5 * r, (m[0, 1] + m[1, 0]) * s, (m[0, 2] + m[2, 0]) * s])
    elif k == 1:
        r = math.sqrt(1.0 - m[0, 0] + m[1, 1] - m[2, 2])
        s = 0.5 / r
        w = (m[0, 2] - m[2, 0]) * s
        v = np.array([(m[0, 1] + m[1, 0]) * s, 0.5 * r, (m[1, 2] + m[2, 1]) * s])
    else:
        r = math.sqrt(1.0 - m[0, 0] - m[1, 1] + m[2, 2])
        s = 0.5 / r
        w = (m[1, 0] - m[0, 1]) * s
        v = np.array([(m[0, 2] + m[2, 0]) * s, (m[1, 2] + m[2, 1]) * s, 0.5 * r])
    return w, v


def rotation_to_unitary(o) -> np.ndarray:
    """Special unitary whose conjugation action on Bloch vectors equals o in SO(3).

    Axis-angle form: rotation by theta about unit axis n maps to
    cos(theta/2) I - i sin(theta/2) (n . sigma).
    """
    o = np.asarray(o, dtype=float)
    if o.shape != (3, 3):
        raise DomainError(f"rotation_to_unitary: expected 3x3, got {o.shape}")
    if np.abs(o.T @ o - np.eye(3)).max() > 1e-10:
        raise DomainError("rotation_to_unitary: matrix is not orthogonal")
    if np.linalg.det(o) < 0.0:
        raise DomainError(
            "rotation_to_unitary: orientation-reversing input; factor out a "
            "reflection (complex conjugation) first"
        )
    w, v = _quaternion_from_rotation(o)
    return w * PAULI[0] - 1j * (v[0] * PAULI[1] + v[1] * PAULI[2] + v[2] * PAULI[3])


def bloch_action_matrix(u) -> np.ndarray:
    """3x3 matrix of the Bloch-vector action of rho -> u rho u^dag."""
    u = require_unitary(u)
    cols = []
    for j in (1, 2, 3):
        rho = 0.5 * (PAULI[0] + PAULI[j])
        cols.append(bloch_from_state(u @ rho @ dagger(u)))
    return np.stack(cols, axis=1)


def fixed_panel_states() -> list:
    """Distinguished states every harness visits: poles, equatorial pures, center."""
    blochs = [
        (0.0, 0.0, 1.0),
        (0.0, 0.0, -1.0),
        (1.0, 0.0, 0.0),
        (-1.0, 0.0, 0.0),
        (0.0, 1.0, 0.0),
        (0.0, -1.0, 0.0),
        (0.0, 0.0, 0.0),
    ]
    return [state_from_bloch(b) for b in blochs]


def sample_state_pairs(rng: np.random.Generator, n: int) -> list:
    """Stratified state pairs: the pole pair, the center, then cycles of
    pure/pure, pure/mixed, mixed/mixed, and mixed self-pairs."""
    pairs = [
        (state_from_bloch((0.0, 0.0, 1.0)), state_from_bloch((0.0, 0.0, -1.0))),
        (state_from_bloch((0.0, 0.0, 0.0)), state_from_bloch((0.0, 0.0, 1.0))),
    ]
    k = 0
    while len(pairs) < n:
        stratum = k % 4
        if stratum == 0:
            pairs.append((random_pure_state(rng), random_pure_state(rng)))
        elif stratum == 1:
            pairs.append((random_pure_state(rng), random_state(rng)))
        elif stratum == 2:
            pairs.append((random_state(rng), random_state(rng)))
        else:
            rho = random_state(rng)
            pairs.append((rho, rho.copy()))
        k += 1
    return pairs[:n]


def _metric_evaluator(metric: str, config: SolverConfig | None):
    if metric == "D_sym":
        c = sym_cost()
        return lambda r, o: wasserstein_distance(r, o, c, config)
    if metric == "D_z":
        c = z_cost()
        return lambda r, o: wasserstein_distance(r, o, c, config)
    if metric == "d_sym":
        c = sym_cost()
        return lambda r, o: wasserstein_divergence(r, o, c, config)
    raise DomainError(f"unknown metric {metric!r}; choose from {METRICS}")


def check_isometry(
    state_map: StateMap,
    metric: str,
    n_samples: int = 12,
    tol: float = 1e-5,
    seed: int = 0,
    config: SolverConfig | None = None,
) -> IsometryReport:
    """Compare metric values before and after applying the map on sampled pairs."""
    if n_samples < 1:
        raise DomainError("n_samples must be >= 1")
    evaluate = _metric_evaluator(metric, config)
    pairs = sample_state_pairs(derived_rng(seed, 0), n_samples)
    max_dev = -1.0
    worst = None
    for rho, omega in pairs:
        before = evaluate(rho, omega)
        after = evaluate(apply_state_map(state_map, rho), apply_state_map(state_map, omega))
        dev = abs(after - before)
        if dev > max_dev:
            max_dev = dev
            worst = (rho, omega, dev)
    verdict = "isometry_within_tol" if max_dev <= tol else "violated"
    return IsometryReport(
        map_id=state_map.label,
        metric=metric,
        samples=len(pairs),
        max_abs_deviation=float(max_dev),
        verdict=verdict,
        witness_pair=worst if verdict == "violated" else None,
    )


def _dz_condition_samples(rng: np.random.Generator, n: int) -> list:
    states = fixed_panel_states()
    states.append(state_from_bloch((0.0, 0.0, 0.6)))
    states.append(state_from_bloch((0.3, -0.4, -0.5)))
    while len(states) < n:
        states.append(random_state(rng))
        states.append(random_pure_state(rng))
    return states[:n]


def dz_condition_report(
    state_map: StateMap, n_samples: int = 40, tol: float = 1e-5, seed: int = 0
):
    """Detailed version of `satisfies_dz_condition`: (holds, details dict)."""
    states = _dz_condition_samples(derived_rng(seed, 1), max(n_samples, 9))
    rows = []
    for rho in states:
        b = bloch_from_state(rho)
        b_img = bloch_from_state(apply_state_map(state_map, rho))
        rows.append((b, b_img))

    max_len_dev = max(abs(np.linalg.norm(bi) - np.linalg.norm(b)) for b, bi in rows)
    if max_len_dev > tol:
        return False, {"reason": "bloch-length-changed", "max_length_deviation": max_len_dev}

    votes = set()
    for b, bi in rows:
        if abs(b[2]) <= 10.0 * tol:
            continue  # too close to the equator to carry sign information
        plus_ok = abs(bi[2] - b[2]) <= tol
        minus_ok = abs(bi[2] + b[2]) <= tol
        if plus_ok and not minus_ok:
            votes.add(+1)
        elif minus_ok and not plus_ok:
            votes.add(-1)
        elif not plus_ok and not minus_ok:
            return False, {
                "reason": "third-coordinate-not-signed-copy",
                "witness_bloch": tuple(b),
                "image_bloch": tuple(bi),
            }
    if len(votes) > 1:
        return False, {"reason": "mixed-signs"}
    candidates = votes or {+1, -1}
    for sign in candidates:
        if all(abs(bi[2] - sign * b[2]) <= tol for b, bi in rows):
            return True, {"sign": sign, "max_length_deviation": max_len_dev}
    return False, {"reason": "no-global-sign", "candidates": sorted(candidates)}


def satisfies_dz_condition(
    state_map: StateMap, n_samples: int = 40, tol: float = 1e-5, seed: int = 0
) -> bool:
    """Bloch length preserved and b3 globally fixed or globally negated."""
    return dz_condition_report(state_map, n_samples, tol, seed)[0]


@dataclass(frozen=True)
class MapAgreement:
    map_id: str
    isometry_verdict: str
    condition_holds: bool
    agree: bool
    max_abs_deviation: float
    witness: tuple | None


@dataclass(frozen=True)
class CrosscheckReport:
    n_maps: int
    n_agreements: int
    per_map: list

    @property
    def all_agree(self) -> bool:
        return self.n_agreements == self.n_maps

    @property
    def disagreements(self) -> list:
        return [r for r in self.per_map if not r.agree]


def theorem_crosscheck_dz(
    map_sampler: Callable,
    n_maps: int = 50,
    n_samples: int = 12,
    tol: float = 1e-5,
    seed: int = 0,
    config: SolverConfig | None = None,
) -> CrosscheckReport:
    """For sampled maps, assert the metric check and the Bloch-level condition agree."""
    per_map = []
    for k in range(n_maps):
        state_map = map_sampler(derived_rng(seed, 10_000 + k))
        report = check_isometry(state_map, "D_z", n_samples, tol, seed + k, config)
        holds, _ = dz_condition_report(state_map, max(3 * n_samples, 24), tol, seed + k)
        is_isometry = report.verdict == "isometry_within_tol"
        per_map.append(
            MapAgreement(
                map_id=state_map.label,
                isometry_verdict=report.verdict,
                condition_holds=holds,
                agree=is_isometry == holds,
                max_abs_deviation=report.max_abs_deviation,
                witness=report.witness_pair,
            )
        )
    return CrosscheckReport(n_maps, sum(r.agree for r in per_map), per_map)


# ---------------------------------------------------------------------------
# Map families for the crosscheck harness.
# ---------------------------------------------------------------------------


def sample_z_rotation_map(rng: np.random.Generator) -> StateMap:
    t = float(rng.uniform(0.0, 2.0 * np.pi))
    return unitary_conj_map(z_phase_unitary(t), f"z-rotation(t={t:.4f})")


def sample_x_flip_composite_map(rng: np.random.Generator) -> StateMap:
    a, b = rng.uniform(0.0, 2.0 * np.pi, size=2)
    u = z_phase_unitary(float(a)) @ PAULI[1] @ z_phase_unitary(float(b))
    return unitary_conj_map(u, f"x-flip-composite(a={a:.3f},b={b:.3f})")


def sample_z_phase_field_map(rng: np.random.Generator) -> StateMap:
    c = rng.uniform(-2.0, 2.0, size=4)

    def t_fn(rho, c=c):
        b = bloch_from_state(rho)
        return c[0] + c[1] * b[2] + c[2] * float(b @ b) + c[3] * math.sin(3.0 * b[0])

    return z_phase_field_map(t_fn, f"z-phase-field(c={np.round(c, 3).tolist()})")


def discontinuous_z_phase_field_map(threshold: float = 0.5) -> StateMap:
    def t_fn(rho):
        b = bloch_from_state(rho)
        return 0.3 if np.linalg.norm(b) > threshold else 2.1

    return z_phase_field_map(t_fn, f"discontinuous-z-phase-field(r>{threshold})")


def sample_b3_negating_bloch_map(rng: np.random.Generator) -> StateMap:
    c = rng.uniform(-3.0, 3.0, size=3)

    def fn(b, c=c):
        r_xy = math.hypot(b[0], b[1])
        phi = math.atan2(b[1], b[0]) + c[0] + c[1] * b[2] + c[2] * r_xy**2
        return np.array([r_xy * math.cos(phi), r_xy * math.sin(phi), -b[2]])

    return bloch_self_map(fn, f"b3-negating-phase-scramble(c={np.round(c, 3).tolist()})")


def sample_adversarial_map(rng: np.random.Generator) -> StateMap:
    kind = int(rng.integers(0, 5))
    if kind == 0:
        s = float(rng.uniform(0.3, 0.9))
        return bloch_self_map(lambda b, s=s: s * b, f"radial-shrink(s={s:.3f})")
    if kind == 1:
        p = float(rng.uniform(1.3, 2.5))
        return bloch_self_map(
            lambda b, p=p: b * (np.linalg.norm(b) ** (p - 1.0) if np.linalg.norm(b) > 0 else 0.0),
            f"radial-power(p={p:.3f})",
        )
    if kind == 2:
        theta = float(rng.uniform(0.4, math.pi - 0.4))
        ct, st = math.cos(theta), math.sin(theta)
        o = np.array([[1.0, 0.0, 0.0], [0.0, ct, -st], [0.0, st, ct]])
        return orthogonal_bloch_map(o, f"x-rotation(theta={theta:.3f})")
    if kind == 3:
        return bloch_self_map(
            lambda b: np.array([b[0], b[1], abs(b[2])]), "b3-absolute-value"
        )
    return bloch_self_map(lambda b: np.array([b[2], b[1], b[0]]), "swap-b1-b3")


def sample_wigner_map(rng: np.random.Generator) -> StateMap:
    u = random_unitary(rng)
    if rng.uniform() < 0.5:
        return unitary_conj_map(u, "random-unitary-conjugation")
    return antiunitary_conj_map(u, "random-antiunitary-conjugation")


MAP_FAMILIES = {
    "z_rotations": sample_z_rotation_map,
    "x_flip_composites": sample_x_flip_composite_map,
    "z_phase_fields": sample_z_phase_field_map,
    "b3_negating_bloch_maps": sample_b3_negating_bloch_map,
    "adversarial": sample_adversarial_map,
}
