"""Free-fermion spectrum of the periodic transverse-field Ising chain.

The chain H = -(1/2) sum_j (sigma^x_j sigma^x_{j+1} + h sigma^z_j) with
periodic boundaries splits into two fermion parity sectors after the
Jordan-Wigner transformation: antiperiodic fermions (NS, half-integer
momenta k in {1/2, ..., L-1/2}, spin parity +1, even occupation) and
periodic fermions (R, integer momenta k in {0, ..., L-1}, spin parity -1,
odd occupation).  Momenta are stored doubled (2k) so sector bookkeeping is
exact integer arithmetic.

Every eigenstate is labeled by its sector and occupied momentum set, with

    E = sum_k eps_k (n_k - 1/2),    eps_k = sqrt(h^2 - 2 h cos(2 pi k/L) + 1)

except at the unpaired k = 0 mode of the R sector, where the Bogoliubov
rotation is trivial and the level carries the signed energy h - 1; the
absolute value would mislabel occupations for h < 1 and shift the R-sector
spectrum off the spin-chain one.  At the critical point the k = 0 level is
an exact zero mode; its occupation still changes the state, and the
convention here (trivial rotation, c_0 = a_0) is pinned by the dense
oracle tests.

Conserved charges: with n = 0, 1, 2, ... and the sector momentum set K_S,

    Q_n^+ = sum_k cos(n k pi / L) eps_k (n_k - 1/2)
    Q_n^- = sum_k sin((n+1) k pi / L) (n_k - 1/2)

interleaved as Q_m = Q_{m/2}^+ for even m and Q_{(m-1)/2}^- for odd m, so
Q_0 is the energy.  Sorting the spectrum lexicographically by
(Q_0, ..., Q_m) with a tie tolerance groups degenerate states; the
degeneracy ratio is the fraction of adjacent sorted pairs that still agree
on all keys.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .correlation import CorrelationMatrix
from .errors import GuardExceeded

__all__ = [
    "SECTORS",
    "EigenstateLabel",
    "SpectrumTable",
    "sector_momenta",
    "dispersion",
    "charge_weights",
    "enumerate_spectrum",
    "sort_spectrum",
    "degeneracy_ratio",
    "eigenstate_correlation",
    "subsystem_correlations",
    "mode_number_difference",
]

SECTORS = ("NS", "R")
ENUMERATION_GUARD = 16


def _tie_tolerance(L: int) -> float:
    return 1e-9 * max(1.0, float(L))


def sector_momenta(L: int, sector: str) -> np.ndarray:
    """Doubled momenta 2k of the sector, ascending."""
    if sector == "NS":
        return np.arange(1, 2 * L, 2, dtype=np.int64)
    if sector == "R":
        return np.arange(0, 2 * L, 2, dtype=np.int64)
    raise ValueError(f"unknown sector {sector!r}")


def _validate_chain(L: int, h: float):
    if L < 2:
        raise ValueError(f"chain length must be at least 2, got {L}")
    if h < 0:
        raise ValueError(f"field must be non-negative, got {h}")


def dispersion(h: float, L: int, sector: str) -> np.ndarray:
    """Mode energies over the sector momentum set (ascending in k).

    Paired momenta carry sqrt(h^2 - 2 h cos(2 pi k / L) + 1) >= 0; the
    unpaired k = 0 level of the R sector carries the signed value h - 1
    (see the module docstring).
    """
    _validate_chain(L, h)
    ks2 = sector_momenta(L, sector)
    theta = np.pi * ks2 / L
    eps = np.sqrt(h * h - 2.0 * h * np.cos(theta) + 1.0)
    if sector == "R":
        eps[0] = h - 1.0
    return eps


@lru_cache(maxsize=64)
def _mode_data(L: int, h: float, sector: str):
    """Per-mode arrays: doubled momenta, energies, Bogoliubov cos/sin halves,
    and the index map k -> -k."""
    ks2 = sector_momenta(L, sector)
    eps = dispersion(h, L, sector)
    theta = np.pi * ks2 / L
    # index of -k (mod L) within the sector array
    minus = np.searchsorted(ks2, (2 * L - ks2) % (2 * L))
    unpaired = minus == np.arange(len(ks2))
    # eps * e^{i angle} = h - e^{-i theta} pins the pairing-term sign
    angle = np.where(unpaired, 0.0, np.angle(h - np.exp(-1j * theta)))
    u = np.cos(angle / 2.0)
    v = np.sin(angle / 2.0)
    return ks2, eps, u, v, minus


def charge_weights(h: float, L: int, sector: str, count: int | None = None) -> np.ndarray:
    """Weight matrix W with Q_m = sum_k W[m, k] (n_k - 1/2), m = 0..count-1.

    Even m carry Q^+_{m/2} with weight cos(n theta_k) eps_k, odd m carry
    Q^-_{(m-1)/2} with weight sin((n+1) theta_k), theta_k = 2 pi k / L.
    The argument must be a whole multiple of theta_k: anything else is not
    single-valued in k mod L (and an even function of k could never split
    the k <-> -k mirror degeneracies the odd charges exist to lift).
    """
    _validate_chain(L, h)
    if count is None:
        count = L
    ks2 = sector_momenta(L, sector)
    eps = dispersion(h, L, sector)
    theta = np.pi * ks2 / L
    w = np.zeros((count, len(ks2)))
    for m in range(count):
        if m % 2 == 0:
            w[m] = np.cos((m // 2) * theta) * eps
        else:
            w[m] = np.sin(((m + 1) // 2) * theta)
    return w


@dataclass
class EigenstateLabel:
    """A free-fermion eigenstate: sector plus occupied momenta (doubled)."""

    L: int
    h: float
    sector: str
    occupied: tuple

    def __post_init__(self):
        ks2 = sector_momenta(self.L, self.sector)
        occupied = tuple(sorted(int(q) for q in self.occupied))
        missing = set(occupied) - set(ks2.tolist())
        if missing:
            raise ValueError(f"momenta {sorted(missing)} not in the {self.sector} sector")
        if len(set(occupied)) != len(occupied):
            raise ValueError("occupied momenta must be distinct")
        want_even = self.sector == "NS"
        if (len(occupied) % 2 == 0) != want_even:
            raise ValueError(
                f"{self.sector} states need {'even' if want_even else 'odd'} occupation"
            )
        object.__setattr__(self, "occupied", occupied)

    @property
    def parity(self) -> int:
        return 1 if self.sector == "NS" else -1

    @property
    def momentum(self) -> int:
        return (sum(self.occupied) % (2 * self.L)) // 2

    def occupation_vector(self) -> np.ndarray:
        ks2 = sector_momenta(self.L, self.sector)
        occ = np.zeros(len(ks2), dtype=np.int64)
        occ[np.searchsorted(ks2, np.array(self.occupied, dtype=np.int64))] = 1
        return occ

    @property
    def energy(self) -> float:
        eps = dispersion(self.h, self.L, self.sector)
        return float(eps @ (self.occupation_vector() - 0.5))

    def charges(self, count: int | None = None) -> np.ndarray:
        w = charge_weights(self.h, self.L, self.sector, count)
        return w @ (self.occupation_vector() - 0.5)


class SpectrumTable:
    """Labeled free-fermion spectrum held as flat arrays.

    Rows keep whatever order the table was built or sorted with;
    ``sort_keys`` records the charge key order of the last sort and
    ``ordering`` is a provenance string for exported files.
    """

    def __init__(self, L, h, sector_codes, masks, momentum, charges, sort_keys=None, ordering="enumeration"):
        self.L = L
        self.h = h
        self.sector_codes = sector_codes  # 0 = NS, 1 = R
        self.masks = masks
        self.momentum = momentum
        self.charges = charges
        self.sort_keys = sort_keys
        self.ordering = ordering

    def __len__(self):
        return len(self.masks)

    @property
    def energy(self) -> np.ndarray:
        return self.charges[:, 0]

    @property
    def parity(self) -> np.ndarray:
        return np.where(self.sector_codes == 0, 1, -1)

    def occupation_matrix(self, sector_code: int) -> np.ndarray:
        """(rows of that sector) x (sector modes) 0/1 matrix, in table order."""
        sel = self.sector_codes == sector_code
        sector = SECTORS[sector_code]
        nm = len(sector_momenta(self.L, sector))
        return ((self.masks[sel, None] >> np.arange(nm)) & 1).astype(np.int64)

    def mode_counts(self) -> np.ndarray:
        counts = np.zeros(len(self), dtype=np.int64)
        for code in (0, 1):
            sel = self.sector_codes == code
            if sel.any():
                counts[sel] = self.occupation_matrix(code).sum(axis=1)
        return counts

    def label(self, index: int) -> EigenstateLabel:
        code = int(self.sector_codes[index])
        sector = SECTORS[code]
        ks2 = sector_momenta(self.L, sector)
        mask = int(self.masks[index])
        occupied = tuple(int(ks2[b]) for b in range(len(ks2)) if mask >> b & 1)
        return EigenstateLabel(L=self.L, h=self.h, sector=sector, occupied=occupied)

    def reordered(self, order: np.ndarray, sort_keys=None, ordering=None) -> "SpectrumTable":
        return SpectrumTable(
            self.L,
            self.h,
            self.sector_codes[order],
            self.masks[order],
            self.momentum[order],
            self.charges[order],
            sort_keys=sort_keys,
            ordering=ordering if ordering is not None else self.ordering,
        )


def enumerate_spectrum(h: float, L: int, sector_filter=None, guard: int = ENUMERATION_GUARD) -> SpectrumTable:
    """Enumerate the physical eigenstates (NS even, then R odd, masks ascending).

    ``sector_filter`` is an optional (parity, momentum) pair; either entry
    may be None to leave that quantum number unrestricted.
    """
    _validate_chain(L, h)
    if L > guard or guard > ENUMERATION_GUARD:
        raise GuardExceeded(f"full enumeration at L={L} exceeds the guard of {min(guard, ENUMERATION_GUARD)}")
    blocks = []
    for code, sector in enumerate(SECTORS):
        ks2 = sector_momenta(L, sector)
        nm = len(ks2)
        masks = np.arange(2**nm, dtype=np.int64)
        occ = ((masks[:, None] >> np.arange(nm)) & 1).astype(np.int64)
        pop = occ.sum(axis=1)
        keep = (pop % 2 == 0) if sector == "NS" else (pop % 2 == 1)
        masks, occ = masks[keep], occ[keep]
        momentum = (occ @ ks2) % (2 * L) // 2
        w = charge_weights(h, L, sector)
        charges = (occ - 0.5) @ w.T
        codes = np.full(len(masks), code, dtype=np.uint8)
        blocks.append((codes, masks, momentum.astype(np.int64), charges))
    table = SpectrumTable(
        L,
        h,
        np.concatenate([b[0] for b in blocks]),
        np.concatenate([b[1] for b in blocks]),
        np.concatenate([b[2] for b in blocks]),
        np.concatenate([b[3] for b in blocks]),
    )
    if sector_filter is not None:
        want_p, want_k = sector_filter
        keep = np.ones(len(table), dtype=bool)
        if want_p is not None:
            if want_p not in (1, -1):
                raise ValueError(f"parity filter must be +1 or -1, got {want_p}")
            keep &= table.parity == want_p
        if want_k is not None:
            if not 0 <= want_k < L:
                raise ValueError(f"momentum filter must lie in [0, {L}), got {want_k}")
            keep &= table.momentum == want_k
        order = np.nonzero(keep)[0]
        table = table.reordered(order)
    return table


def sort_spectrum(table: SpectrumTable, key_order=None) -> SpectrumTable:
    """Stable lexicographic sort by the given charge indices with tie grouping.

    ``key_order`` is a sequence of distinct charge indices (default
    0, 1, ..., L-1).  Values closer than 1e-9 * max(1, L) count as ties and
    keep their relative order for the next key.
    """
    if key_order is None:
        key_order = tuple(range(table.L))
    key_order = tuple(int(k) for k in key_order)
    if len(set(key_order)) != len(key_order) or any(not 0 <= k < table.L for k in key_order):
        raise ValueError(f"key order must be distinct charge indices below {table.L}")
    tol = _tie_tolerance(table.L)
    order = np.arange(len(table))
    groups = [(0, len(table))]
    for key in key_order:
        vals = table.charges[:, key]
        next_groups = []
        for a, b in groups:
            if b - a > 1:
                seg = order[a:b]
                seg_sorted = seg[np.argsort(vals[seg], kind="stable")]
                order[a:b] = seg_sorted
                v = vals[seg_sorted]
                cuts = np.nonzero(np.diff(v) > tol)[0]
                start = a
                for c in cuts:
                    next_groups.append((start, a + c + 1))
                    start = a + c + 1
                next_groups.append((start, b))
            else:
                next_groups.append((a, b))
        groups = next_groups
    # hyphen-joined so the provenance survives as a single CSV cell
    ordering = "charges:" + "-".join(str(k) for k in key_order)
    return table.reordered(order, sort_keys=key_order, ordering=ordering)


def degeneracy_ratio(table: SpectrumTable, m: int) -> float:
    """Fraction of adjacent sorted pairs that agree on Q_0..Q_m within the tie
    tolerance.  The table must have been sorted with key order starting
    (0, 1, ..., m)."""
    if len(table) < 2:
        raise ValueError("need at least two states")
    if table.sort_keys is None or tuple(table.sort_keys[: m + 1]) != tuple(range(m + 1)):
        raise ValueError(f"table is not sorted by (Q_0..Q_{m})")
    tol = _tie_tolerance(table.L)
    diffs = np.abs(np.diff(table.charges[:, : m + 1], axis=0))
    ties = (diffs <= tol).all(axis=1)
    return float(ties.sum() / (len(table) - 1))


def mode_number_difference(table: SpectrumTable) -> float:
    """Mean |N_i - N_{i+1}| of occupied-mode counts over adjacent rows."""
    if len(table) < 2:
        raise ValueError("need at least two states")
    counts = table.mode_counts()
    return float(np.abs(np.diff(counts)).mean())


def _subsystem_m_batch(L: int, h: float, sector: str, occ: np.ndarray, ell: int) -> np.ndarray:
    """Stack of real m matrices of the leading ell sites for the given
    occupation rows (states x modes)."""
    ks2, eps, u, v, minus = _mode_data(L, h, sector)
    theta = np.pi * ks2 / L
    n_minus = occ[:, minus]
    big_n = occ * (u * u) + (1 - n_minus) * (v * v)          # <a_k^dag a_k>
    f_im = (u * v) * (occ + n_minus - 1)                     # <a_k a_{-k}> / i
    # Toeplitz profiles over d = l - j
    ds = np.arange(-(ell - 1), ell)
    phases = np.exp(1j * np.outer(theta, ds)) / L            # (modes, d)
    g_prof = big_n @ phases                                  # G(d) = sum_k e^{i theta d} N_k / L
    f_prof = (1j * f_im) @ phases                            # F(d) = sum_k e^{i theta d} F_k / L
    j_idx = np.arange(ell)
    dmat = j_idx[None, :] - j_idx[:, None]                   # l - j
    g_jl = g_prof[:, dmat + (ell - 1)]
    f_jl = f_prof[:, (ell - 1) - dmat]                       # F depends on j - l
    delta = np.eye(ell)
    m = np.zeros((occ.shape[0], 2 * ell, 2 * ell))
    m[:, 0::2, 0::2] = 2.0 * (f_jl.imag + g_jl.imag)
    m[:, 1::2, 1::2] = 2.0 * (g_jl.imag - f_jl.imag)
    m[:, 0::2, 1::2] = delta - 2.0 * (g_jl.real + f_jl.real)
    m[:, 1::2, 0::2] = -delta + 2.0 * (g_jl.real - f_jl.real)
    return m


def eigenstate_correlation(label: EigenstateLabel, ell: int) -> CorrelationMatrix:
    """Majorana correlation matrix of the leading ``ell`` sites of an
    eigenstate, from mode sums at O(L ell^2) cost."""
    if not 1 <= ell <= label.L:
        raise ValueError(f"subsystem size {ell} outside 1..{label.L}")
    occ = label.occupation_vector()[None, :]
    m = _subsystem_m_batch(label.L, label.h, label.sector, occ, ell)[0]
    return CorrelationMatrix((m - m.T) / 2.0, validate=False)


def subsystem_correlations(table: SpectrumTable, ell: int) -> np.ndarray:
    """Stack of leading-ell-site m matrices for every row of the table."""
    if not 1 <= ell <= table.L:
        raise ValueError(f"subsystem size {ell} outside 1..{table.L}")
    out = np.zeros((len(table), 2 * ell, 2 * ell))
    for code, sector in enumerate(SECTORS):
        sel = table.sector_codes == code
        if sel.any():
            occ = table.occupation_matrix(code)
            out[sel] = _subsystem_m_batch(table.L, table.h, sector, occ, ell)
    return out
