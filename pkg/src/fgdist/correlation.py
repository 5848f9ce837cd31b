"""Correlation-matrix algebra for fermionic Gaussian states.

A Gaussian state of ``ell`` fermionic modes is represented by the real
antisymmetric matrix ``m`` of shape ``(2*ell, 2*ell)`` built from Majorana
two-point functions,

    Gamma_{ab} = tr(rho d_a d_b) - delta_{ab},      Gamma = i m,

with the interleaved Majorana ordering d_1, d_2 = (x-type, y-type) of mode 1,
then mode 2, and so on.  Gamma is Hermitian with spectrum {+g_j, -g_j}; the
pair values g_j are the singular values of ``m`` and lie in [0, 1].  A state
is pure exactly when every pair value equals 1.

Every quantity here stays in real arithmetic where the algebra allows it:
products Gamma_1 Gamma_2 = -m_1 m_2 are real, so overlap traces, the pure
fidelity and the unit-mode reduction never touch complex matrices.  Only the
general mixed-state fidelity needs the complex ratio K = (1-Gamma)/(1+Gamma).

The fidelity of two states is computed by branch dispatch:

* one mode: closed form in the two signed pair values;
* no pair value of either state near 1: log-space determinant formula in
  K_1 K_2 (positive spectrum; the matrix itself is non-normal);
* every pair value of one state near 1: quartic-root overlap determinant;
* otherwise: rotate into the canonical basis of the state with more
  near-unit pairs, split off those modes exactly, and recurse on a strictly
  smaller problem.

Unit modes must be split off first because (1-Gamma)/(1+Gamma) degenerates
there (0 * inf in the determinant formula).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

__all__ = [
    "CorrelationMatrix",
    "CanonicalForm",
    "ModePartition",
    "GaussianProduct",
    "canonical_form",
    "classify_modes",
    "gaussian_product_trace",
    "gaussian_compose",
    "fidelity",
    "fidelity_single_mode",
    "fidelity_pure",
    "fidelity_regular",
    "reduce_unit_modes",
    "bures_distance",
]

logger = logging.getLogger(__name__)

# Tolerances.  ANTISYMMETRY_TOL guards construction; EIGENVALUE_SLACK is how
# far above 1 a pair value may land before the input is rejected rather than
# snapped; UNIT_MODE_TOL decides when a mode counts as exactly occupied or
# empty for branch dispatch; ORTHOGONAL_CUTOFF short-circuits the reduction
# prefactor to fidelity zero.
ANTISYMMETRY_TOL = 1e-12
EIGENVALUE_SLACK = 1e-9
UNIT_MODE_TOL = 1e-10
CANONICAL_RECONSTRUCTION_TOL = 1e-10
ORTHOGONAL_CUTOFF = 1e-14
IMAG_RESIDUE_TOL = 1e-10
INVERTIBILITY_TOL = 1e-12


class CorrelationMatrix:
    """Majorana correlation matrix of a fermionic Gaussian state.

    Parameters
    ----------
    m : array_like
        Real antisymmetric matrix of shape (2*ell, 2*ell) with Gamma = i*m.
    validate : bool
        Check shape and antisymmetry on construction (cheap); the singular
        value range check runs lazily on first use.
    """

    def __init__(self, m, *, validate: bool = True):
        m = np.asarray(m, dtype=float)
        if validate:
            if m.ndim != 2 or m.shape[0] != m.shape[1]:
                raise ValueError(f"correlation matrix must be square, got {m.shape}")
            n = m.shape[0]
            if n < 2 or n % 2:
                raise ValueError(f"matrix dimension must be even and >= 2, got {n}")
            dev = np.abs(m + m.T).max()
            if dev > ANTISYMMETRY_TOL:
                raise ValueError(f"matrix is not antisymmetric (deviation {dev:.3e})")
            m = (m - m.T) / 2.0
        self.m = m
        self.ell = m.shape[0] // 2
        self._pair_values = None

    @property
    def pair_values(self) -> np.ndarray:
        """Canonical pair values g_j, descending, snapped into [0, 1]."""
        if self._pair_values is None:
            svals = np.linalg.svd(self.m, compute_uv=False)
            high = svals[svals > 1.0]
            if high.size and high.max() > 1.0 + EIGENVALUE_SLACK:
                raise ValueError(
                    f"pair value {high.max():.15g} exceeds 1 beyond slack {EIGENVALUE_SLACK}"
                )
            svals = np.minimum(svals, 1.0)
            # each pair value appears twice among the singular values
            self._pair_values = svals[0::2].copy()
        return self._pair_values

    def unit_pair_count(self, tol: float = UNIT_MODE_TOL) -> int:
        return int(np.sum(self.pair_values >= 1.0 - tol))

    def is_pure(self, tol: float = UNIT_MODE_TOL) -> bool:
        return self.unit_pair_count(tol) == self.ell

    def restrict(self, ell_keep: int) -> "CorrelationMatrix":
        """Correlation matrix of the leading ``ell_keep`` modes."""
        if not 1 <= ell_keep <= self.ell:
            raise ValueError(f"cannot keep {ell_keep} of {self.ell} modes")
        return CorrelationMatrix(self.m[: 2 * ell_keep, : 2 * ell_keep], validate=False)

    @property
    def gamma(self) -> np.ndarray:
        return 1j * self.m

    def __repr__(self):
        return f"CorrelationMatrix(ell={self.ell})"


@dataclass
class CanonicalForm:
    """Block canonical form of a correlation matrix.

    ``rotation @ m @ rotation.T`` equals the direct sum of blocks
    [[0, g_j], [-g_j, 0]] with ``pair_values`` g_j sorted descending.
    """

    pair_values: np.ndarray
    rotation: np.ndarray

    def blocks(self) -> np.ndarray:
        n = 2 * len(self.pair_values)
        b = np.zeros((n, n))
        for j, g in enumerate(self.pair_values):
            b[2 * j, 2 * j + 1] = g
            b[2 * j + 1, 2 * j] = -g
        return b


def canonical_form(state: CorrelationMatrix) -> CanonicalForm:
    """Rotate a real antisymmetric matrix to its 2x2 block canonical form.

    Returns an orthogonal rotation O and pair values g_j >= 0 (descending)
    with O m O^T = blkdiag([[0, g_j], [-g_j, 0]]).  The real Schur form of an
    antisymmetric matrix is block diagonal up to roundoff; the rest is sign
    fixing and sorting.
    """
    m = state.m
    n = m.shape[0]
    t, z = scipy.linalg.schur(m, output="real")
    rotation = z.T.copy()
    pairs = []
    singles = []
    k = 0
    while k < n:
        if k + 1 < n and t[k + 1, k] != 0.0:
            g = t[k, k + 1]
            if g < 0.0:
                rotation[[k, k + 1]] = rotation[[k + 1, k]]
                g = -g
            pairs.append((g, k, k + 1))
            k += 2
        else:
            # 1x1 block: zero eigenvalue; these come in even numbers
            singles.append(k)
            k += 1
    for a, b in zip(singles[0::2], singles[1::2]):
        pairs.append((0.0, a, b))
    pairs.sort(key=lambda item: -item[0])
    perm = []
    values = []
    for g, a, b in pairs:
        perm.extend((a, b))
        values.append(min(g, 1.0))
    rotation = rotation[perm]
    values = np.array(values)
    form = CanonicalForm(pair_values=values, rotation=rotation)
    residual = np.abs(rotation @ m @ rotation.T - form.blocks()).max()
    if residual > CANONICAL_RECONSTRUCTION_TOL:
        raise ValueError(f"canonical form reconstruction residual {residual:.3e}")
    return form


@dataclass
class ModePartition:
    """Both states rotated into the canonical basis of the first, split into
    the first state's near-unit pairs (X, snapped exact) and the rest (Y)."""

    unit_pairs: int
    bulk_pairs: int
    r_unit: np.ndarray
    r_bulk: np.ndarray
    s_unit: np.ndarray
    s_bulk: np.ndarray
    s_unit_bulk: np.ndarray
    s_bulk_unit: np.ndarray
    rotation: np.ndarray = field(repr=False, default=None)


def classify_modes(
    state_r: CorrelationMatrix,
    state_s: CorrelationMatrix,
    tol: float = UNIT_MODE_TOL,
) -> ModePartition:
    """Split the mode space by the unit pairs of the first state.

    The first state's canonical rotation is applied to both; pairs of the
    first state with value >= 1 - tol form the X block and are snapped to
    exactly 1 there.
    """
    if state_r.ell != state_s.ell:
        raise ValueError("states must have the same number of modes")
    form = canonical_form(state_r)
    x = int(np.sum(form.pair_values >= 1.0 - tol))
    nx = 2 * x
    r_rot = form.blocks()
    for j in range(x):
        r_rot[2 * j, 2 * j + 1] = 1.0
        r_rot[2 * j + 1, 2 * j] = -1.0
    s_rot = form.rotation @ state_s.m @ form.rotation.T
    return ModePartition(
        unit_pairs=x,
        bulk_pairs=state_r.ell - x,
        r_unit=r_rot[:nx, :nx],
        r_bulk=r_rot[nx:, nx:],
        s_unit=s_rot[:nx, :nx],
        s_bulk=s_rot[nx:, nx:],
        s_unit_bulk=s_rot[:nx, nx:],
        s_bulk_unit=s_rot[nx:, :nx],
        rotation=form.rotation,
    )


class GaussianProduct:
    """Correlation data of a normalized product rho_1 rho_2 / tr(rho_1 rho_2).

    The product of two Gaussian density matrices is a Gaussian operator but
    not Hermitian, so its correlation matrix is complex antisymmetric rather
    than i times a real matrix.
    """

    def __init__(self, gamma: np.ndarray):
        gamma = np.asarray(gamma, dtype=complex)
        dev = np.abs(gamma + gamma.T).max()
        if dev > IMAG_RESIDUE_TOL:
            logger.warning("composite correlation antisymmetry deviation %.3e", dev)
        self.gamma = (gamma - gamma.T) / 2.0
        self.ell = gamma.shape[0] // 2

    def __repr__(self):
        return f"GaussianProduct(ell={self.ell})"


def _gamma_of(state) -> np.ndarray:
    if isinstance(state, CorrelationMatrix):
        return 1j * state.m
    if isinstance(state, GaussianProduct):
        return state.gamma
    raise TypeError(f"expected CorrelationMatrix or GaussianProduct, got {type(state)}")


def _solve_refined(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Solve a x = b with extended-precision iterative refinement.

    Near-unit pair values push the condition number of the compose and
    reduction solves to ~(1-g)^{-1/2} and ~(1-g)^{-1}; computing residuals
    in long double removes the resulting kappa*u forward error, which the
    fidelity would otherwise amplify by another 1/sqrt(1-g).
    """
    x = np.linalg.solve(a, b)
    high = np.clongdouble if np.iscomplexobj(a) or np.iscomplexobj(b) else np.longdouble
    a_h = a.astype(high)
    b_h = b.astype(high)
    for _ in range(2):
        residual = b_h - a_h @ x.astype(high)
        x = x + np.linalg.solve(a, residual.astype(x.dtype))
    return x


def gaussian_product_trace(state_1, state_2) -> float:
    """Overlap trace tr(rho_1 rho_2) = sqrt(det((1 + Gamma_1 Gamma_2) / 2)).

    Accepts CorrelationMatrix (the usual case, fully real arithmetic) or a
    GaussianProduct from :func:`gaussian_compose`.  The determinant must be
    real up to a small residue and non-negative.
    """
    if isinstance(state_1, CorrelationMatrix) and isinstance(state_2, CorrelationMatrix):
        if state_1.ell != state_2.ell:
            raise ValueError("states must have the same number of modes")
        arg = (np.eye(2 * state_1.ell) - state_1.m @ state_2.m) / 2.0
        sign, logabs = np.linalg.slogdet(arg)
        det = sign * np.exp(logabs)
    else:
        g1, g2 = _gamma_of(state_1), _gamma_of(state_2)
        if g1.shape != g2.shape:
            raise ValueError("states must have the same number of modes")
        det_c = np.linalg.det((np.eye(g1.shape[0]) + g1 @ g2) / 2.0)
        if abs(det_c.imag) > IMAG_RESIDUE_TOL * max(1.0, abs(det_c.real)):
            raise ValueError(f"overlap determinant has imaginary residue {det_c.imag:.3e}")
        det = det_c.real
    if det < 0.0:
        if det > -1e-12:
            return 0.0
        raise ValueError(f"overlap determinant is negative ({det:.3e})")
    return float(np.sqrt(det))


def gaussian_compose(state_1, state_2) -> GaussianProduct:
    """Correlation matrix of rho_1 rho_2 / tr(rho_1 rho_2).

    Gamma_12 = 1 - (1 - Gamma_1)(1 + Gamma_2 Gamma_1)^{-1}(1 - Gamma_2).
    Two plain states compose through real solves; once either factor is
    already a product the arithmetic is complex.  The result is complex
    antisymmetric whenever the factors fail to commute.
    """
    g1, g2 = _gamma_of(state_1), _gamma_of(state_2)
    if g1.shape != g2.shape:
        raise ValueError("states must have the same number of modes")
    n = g1.shape[0]
    if isinstance(state_1, CorrelationMatrix) and isinstance(state_2, CorrelationMatrix):
        m1, m2 = state_1.m, state_2.m
        core = np.eye(n) - m2 @ m1  # real form of 1 + Gamma_2 Gamma_1
        if 1.0 / np.linalg.cond(core) < INVERTIBILITY_TOL:
            raise ValueError("product state undefined: 1 + Gamma_2 Gamma_1 is singular")
        a = _solve_refined(core, np.eye(n))
        real_part = np.eye(n) - a + m1 @ a @ m2
        imag_part = a @ m2 + m1 @ a
        return GaussianProduct(real_part + 1j * imag_part)
    core = np.eye(n) + g2 @ g1
    if 1.0 / np.linalg.cond(core) < INVERTIBILITY_TOL:
        raise ValueError("product state undefined: 1 + Gamma_2 Gamma_1 is singular")
    comp = np.eye(n) - (np.eye(n) - g1) @ _solve_refined(core, np.eye(n) - g2)
    return GaussianProduct(comp)


def fidelity_single_mode(g1: float, g2: float) -> float:
    """Fidelity of two single-mode states with signed pair values g in [-1, 1]."""
    for g in (g1, g2):
        if not -1.0 - EIGENVALUE_SLACK <= g <= 1.0 + EIGENVALUE_SLACK:
            raise ValueError(f"single-mode value {g} outside [-1, 1]")
    g1 = float(np.clip(g1, -1.0, 1.0))
    g2 = float(np.clip(g2, -1.0, 1.0))
    val = 0.5 * (np.sqrt((1 + g1) * (1 + g2)) + np.sqrt((1 - g1) * (1 - g2)))
    return float(min(val, 1.0))


def fidelity_pure(state_1: CorrelationMatrix, state_2: CorrelationMatrix, tol: float = UNIT_MODE_TOL) -> float:
    """Fidelity when at least one state is pure: sqrt of the overlap trace."""
    if not (state_1.is_pure(tol) or state_2.is_pure(tol)):
        raise ValueError("fidelity_pure requires at least one pure state")
    return float(np.sqrt(gaussian_product_trace(state_1, state_2)))


def _log_det_half_one_plus_gamma(state: CorrelationMatrix) -> float:
    """log det((1 + Gamma)/2) from the pair values: sum log((1 - g^2)/4)."""
    g = state.pair_values
    one_minus = np.maximum(1.0 - g * g, 0.0)
    if np.any(one_minus == 0.0):
        raise ValueError("state has a unit pair value; reduce before the mixed formula")
    return float(np.sum(np.log(one_minus / 4.0)))


def _half_state(state: CorrelationMatrix) -> CorrelationMatrix:
    """Correlation matrix of sqrt(rho)/tr sqrt(rho).

    Taking the square root halves every mode's log-occupation ratio, which
    maps each pair value g to g / (1 + sqrt(1 - g^2)) in the same canonical
    basis.  A pair value 1 - e moves down to roughly 1 - sqrt(2 e).
    """
    form = canonical_form(state)
    g = form.pair_values
    half = g / (1.0 + np.sqrt(np.maximum(1.0 - g * g, 0.0)))
    n = len(half)
    b = np.zeros((2 * n, 2 * n))
    idx = np.arange(n)
    b[2 * idx, 2 * idx + 1] = half
    b[2 * idx + 1, 2 * idx] = -half
    return CorrelationMatrix(form.rotation.T @ b @ form.rotation, validate=False)


def _regular_fidelity(state_1: CorrelationMatrix, state_2: CorrelationMatrix) -> float:
    if float(np.max(state_1.pair_values, initial=0.0)) > float(np.max(state_2.pair_values, initial=0.0)):
        state_1, state_2 = state_2, state_1
    half = _half_state(state_1)
    sandwich = gaussian_compose(gaussian_compose(half, state_2), half)
    m_z = -1j * sandwich.gamma
    residue = float(np.abs(m_z.imag).max())
    if residue > 1e-8:
        logger.warning("sandwich correlation matrix has imaginary residue %.3e", residue)
    zeta = np.linalg.svd(np.ascontiguousarray(m_z.real), compute_uv=False)[0::2]
    zeta = np.minimum(zeta, 1.0)
    sign, logabs = np.linalg.slogdet((np.eye(2 * state_1.ell) - state_1.m @ state_2.m) / 2.0)
    if sign <= 0.0:
        raise ValueError("overlap determinant is not positive; states are not both strictly mixed")
    log_f = 0.25 * logabs + float(np.sum(np.log(np.sqrt((1.0 + zeta) / 2.0) + np.sqrt((1.0 - zeta) / 2.0))))
    return float(min(np.exp(log_f), 1.0))


def fidelity_regular(state_1: CorrelationMatrix, state_2: CorrelationMatrix, tol: float = UNIT_MODE_TOL) -> float:
    """Fidelity of two strictly mixed states (no pair value within tol of 1).

    Evaluates tr sqrt(sqrt(rho_1) rho_2 sqrt(rho_1)) by composing correlation
    matrices: the sandwich is again Gaussian, so its trace-normalized form is
    an ordinary state whose pair values z_j give

        F = sqrt(tr(rho_1 rho_2)) * prod_j [sqrt((1+z_j)/2) + sqrt((1-z_j)/2)].

    Every matrix along this route is bounded by 1 in norm.  That matters:
    the equivalent determinant formulas build ratios (1-Gamma)/(1+Gamma)
    whose spectra span ~(1-g)^{-2}, and near-unit pair values (physical for
    weakly entangled cuts) then cost six or more digits in double precision.
    Composing sqrt(rho_1) rather than rho_1 also caps the solve conditioning
    at ~(1-g)^{-1/2}; rho_1 is chosen as the more mixed of the two inputs.
    Accuracy degrades to ~1e-8 absolute only when both states share an
    aligned pair value g with (1-g)^2 below double precision, where the
    sandwich value is numerically indistinguishable from 1.
    """
    if state_1.unit_pair_count(tol) or state_2.unit_pair_count(tol):
        raise ValueError("fidelity_regular requires strictly mixed states; reduce unit modes first")
    return _regular_fidelity(state_1, state_2)


def reduce_unit_modes(partition: ModePartition):
    """Split off the unit pairs of the reference state exactly.

    Returns ``(prefactor, bulk_r, bulk_s)``: the fidelity factor contributed
    by the unit block and the two correlation matrices of the remaining
    modes, with ``bulk_s`` carrying the Schur-complement correction from the
    off-diagonal blocks.  When the unit blocks are (near) orthogonal the
    prefactor underflows and ``(0.0, None, None)`` is returned.
    """
    x = partition.unit_pairs
    if x == 0 or partition.bulk_pairs == 0:
        raise ValueError("reduction needs 0 < unit pairs < total pairs")
    r_x = partition.r_unit
    s_x = partition.s_unit
    nx = 2 * x
    sign, logabs = np.linalg.slogdet((np.eye(nx) - r_x @ s_x) / 2.0)
    if sign <= 0.0 or np.exp(logabs) < ORTHOGONAL_CUTOFF:
        return 0.0, None, None
    prefactor = float(np.exp(0.25 * logabs))
    core = np.eye(nx) - s_x @ r_x
    if 1.0 / np.linalg.cond(core) < INVERTIBILITY_TOL:
        return 0.0, None, None
    correction = partition.s_bulk_unit @ r_x @ _solve_refined(core, partition.s_unit_bulk)
    s_bulk = partition.s_bulk + correction
    s_bulk = (s_bulk - s_bulk.T) / 2.0
    return (
        prefactor,
        CorrelationMatrix(partition.r_bulk, validate=False),
        CorrelationMatrix(s_bulk, validate=False),
    )


def fidelity(state_1: CorrelationMatrix, state_2: CorrelationMatrix, tol: float = UNIT_MODE_TOL) -> float:
    """Uhlmann fidelity F(rho_1, rho_2) of two fermionic Gaussian states.

    Dispatches on system size and on how many canonical pair values of each
    state sit within ``tol`` of 1; see the module docstring.  The result is
    clamped into [0, 1].
    """
    if state_1.ell != state_2.ell:
        raise ValueError("states must have the same number of modes")
    if state_1.ell == 1:
        return fidelity_single_mode(state_1.m[0, 1], state_2.m[0, 1])
    x1 = state_1.unit_pair_count(tol)
    x2 = state_2.unit_pair_count(tol)
    if x1 == 0 and x2 == 0:
        return fidelity_regular(state_1, state_2, tol)
    if x1 == state_1.ell or x2 == state_2.ell:
        return fidelity_pure(state_1, state_2, tol)
    if x2 > x1:
        state_1, state_2 = state_2, state_1
    partition = classify_modes(state_1, state_2, tol)
    # the svd-based dispatch counts and the Schur-based partition can read a
    # value within a few ulp of the threshold differently; fall through
    # instead of crashing on the knife edge
    if partition.unit_pairs == 0:
        return _regular_fidelity(state_1, state_2)
    if partition.bulk_pairs == 0:
        return float(min(np.sqrt(gaussian_product_trace(state_1, state_2)), 1.0))
    prefactor, bulk_r, bulk_s = reduce_unit_modes(partition)
    if prefactor == 0.0:
        return 0.0
    value = prefactor * fidelity(bulk_r, bulk_s, tol)
    return float(np.clip(value, 0.0, 1.0))


def bures_distance(state_1: CorrelationMatrix, state_2: CorrelationMatrix, tol: float = UNIT_MODE_TOL) -> float:
    """Bures distance sqrt(2 (1 - F)) between two Gaussian states."""
    gap = max(1.0 - fidelity(state_1, state_2, tol), 0.0)
    return float(np.sqrt(2.0 * gap))
