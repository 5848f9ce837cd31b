"""Distance-sweep experiments and their serialization.

Drivers here connect the model modules to the distance kernels:

* Ising sweeps average a metric over consecutive pairs of a (sorted or
  permuted) spectrum table, one row per subsystem size ell.  The Bures
  path works entirely on correlation matrices; the trace path expands
  each state to its dense 2^ell reduced density matrix, so it is guarded.
* XXZ sweeps average over all pairs within one momentum-magnetization
  sector (dense reduced density matrices throughout).
* Random-ensemble sweeps average over all pairs of Haar-random pure
  Gaussian states.

Slope fits follow a fixed recipe: ordinary least squares of the average
against x = ell / L over the window ceil(0.2 L) <= ell <= floor(0.4 L),
with Bures averages scaled by 1/sqrt(2) first.  Reference curves:
f(x) = 2x below x = 1/2 and 1 from there on (the x = 1/2 point is set to
1 by convention); g(x) = 0 at x = 0 and 1 elsewhere.

CSV rows carry the schema  model,L,param,sector,ordering,metric,ell,x,
average,pairs  with floats at 17 significant digits, so identical
invocations serialize byte-identically and round-trip losslessly.  The
param column holds h for Ising, Delta for XXZ, and the ensemble seed for
random sweeps.  A JSON sidecar mirrors the run parameters and the fit.

Pair loops honor FGDIST_THREADS (default 1); results are accumulated by
pair index, so the thread count never changes the output.
"""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .correlation import CorrelationMatrix, bures_distance, fidelity
from .dense import density_from_gamma, trace_distance
from .ising import SpectrumTable, enumerate_spectrum, sort_spectrum, subsystem_correlations
from .random_ensemble import RandomEnsembleSpec, sample_ensemble
from .xxz import xxz_pairwise_average, xxz_sector_basis

__all__ = [
    "SweepResult",
    "CSV_HEADER",
    "average_consecutive_distance",
    "apply_ordering",
    "linear_slope_fit",
    "reference_curve",
    "ising_sweep",
    "xxz_sweep",
    "random_sweep",
    "write_spectrum_csv",
    "write_charge_profiles",
]

CSV_HEADER = "model,L,param,sector,ordering,metric,ell,x,average,pairs"


def _fmt(value) -> str:
    return f"{value:.17g}"


def _thread_count() -> int:
    raw = os.environ.get("FGDIST_THREADS", "").strip()
    if not raw:
        return 1
    count = int(raw)
    if count < 1:
        raise ValueError(f"FGDIST_THREADS must be a positive integer, got {raw!r}")
    return count


def _map_indexed(fn, count: int) -> np.ndarray:
    """fn(i) for i < count, in index order regardless of thread count."""
    workers = _thread_count()
    if workers == 1 or count < 4:
        return np.array([fn(i) for i in range(count)])
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return np.array(list(pool.map(fn, range(count))))


@dataclass
class SweepResult:
    """Per-ell averaged distances plus provenance and an optional fit."""

    model: str
    L: int
    param: float
    sector: str
    ordering: str
    metric: str
    rows: list = field(default_factory=list)  # (ell, average, pair_count)
    fit: dict | None = None

    def csv_text(self) -> str:
        lines = [CSV_HEADER]
        for ell, average, pairs in self.rows:
            lines.append(
                ",".join(
                    (
                        self.model,
                        str(self.L),
                        _fmt(self.param),
                        self.sector,
                        self.ordering,
                        self.metric,
                        str(ell),
                        _fmt(ell / self.L),
                        _fmt(average),
                        str(pairs),
                    )
                )
            )
        return "\n".join(lines) + "\n"

    def sidecar(self) -> dict:
        meta = {
            "model": self.model,
            "L": self.L,
            "param": self.param,
            "sector": self.sector,
            "ordering": self.ordering,
            "metric": self.metric,
            "rows": len(self.rows),
        }
        if self.fit is not None:
            meta["fit"] = self.fit
        return meta

    def sidecar_text(self) -> str:
        return json.dumps(self.sidecar(), sort_keys=True, indent=2) + "\n"

    def attach_fit(self) -> "SweepResult":
        ells = [r[0] for r in self.rows]
        values = [r[1] for r in self.rows]
        slope, intercept = linear_slope_fit(ells, values, self.L, metric=self.metric)
        lo, hi = fit_window(self.L)
        self.fit = {"slope": slope, "intercept": intercept, "ell_min": lo, "ell_max": hi}
        return self


def fit_window(L: int) -> tuple:
    return math.ceil(0.2 * L), math.floor(0.4 * L)


def linear_slope_fit(ells, values, L: int, metric: str | None = None) -> tuple:
    """OLS slope/intercept of average vs x = ell/L over the fit window.

    Bures values are divided by sqrt(2) first; the fit needs at least two
    points inside ceil(0.2 L) <= ell <= floor(0.4 L).
    """
    lo, hi = fit_window(L)
    scale = 1.0 / np.sqrt(2.0) if metric == "bures" else 1.0
    xs, ys = [], []
    for ell, value in zip(ells, values):
        if lo <= ell <= hi:
            xs.append(ell / L)
            ys.append(value * scale)
    if len(xs) < 2:
        raise ValueError(f"need at least two points with {lo} <= ell <= {hi}, have {len(xs)}")
    slope, intercept = np.polyfit(np.array(xs), np.array(ys), 1)
    return float(slope), float(intercept)


def reference_curve(x: float, which: str) -> float:
    """Large-L limit curves: 'f' for eigenstate pairs, 'g' for random pairs."""
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"x must lie in [0, 1], got {x}")
    if which == "f":
        return 2.0 * x if x < 0.5 else 1.0
    if which == "g":
        return 0.0 if x == 0.0 else 1.0
    raise ValueError(f"which must be 'f' or 'g', got {which!r}")


def apply_ordering(table: SpectrumTable, scheme: str) -> SpectrumTable:
    """Reorder a table by a scheme string.

    'charges:default' or 'charges:2,0,1' sorts hierarchically by those
    charge indices; 'random:SEED' applies a seed-deterministic uniform
    permutation.
    """
    kind, _, arg = scheme.partition(":")
    if kind == "charges":
        keys = None if arg in ("", "default") else [int(s) for s in arg.replace("-", ",").split(",")]
        return sort_spectrum(table, keys)
    if kind == "random":
        if not arg:
            raise ValueError("random ordering needs a seed, e.g. random:7")
        perm = np.random.default_rng(int(arg)).permutation(len(table))
        return table.reordered(perm, sort_keys=None, ordering=f"random:{int(arg)}")
    raise ValueError(f"unknown ordering scheme {scheme!r}")


def _gaussian_states(table: SpectrumTable, ell: int) -> list:
    stack = subsystem_correlations(table, ell)
    return [CorrelationMatrix(m, validate=False) for m in stack]


def average_consecutive_distance(table: SpectrumTable, ell: int, metric: str) -> tuple:
    """Average metric over the d-1 consecutive pairs of the table order."""
    if len(table) < 2:
        raise ValueError("need at least two states")
    if metric == "bures":
        states = _gaussian_states(table, ell)
        values = _map_indexed(lambda i: bures_distance(states[i], states[i + 1]), len(table) - 1)
    elif metric == "trace":
        states = _gaussian_states(table, ell)
        rhos = [density_from_gamma(s) for s in states]
        values = _map_indexed(lambda i: trace_distance(rhos[i], rhos[i + 1]), len(table) - 1)
    else:
        raise ValueError(f"metric must be 'bures' or 'trace', got {metric!r}")
    return float(values.mean()), len(table) - 1


def _sector_descriptor(sector_filter) -> str:
    if sector_filter is None:
        return "full"
    parity, momentum = sector_filter
    parts = []
    if parity is not None:
        parts.append(f"P={parity:+d}")
    if momentum is not None:
        parts.append(f"K={momentum}")
    return ",".join(parts) if parts else "full"


def ising_sweep(
    L: int,
    h: float,
    metric: str,
    ells,
    sector_filter=None,
    ordering: str = "charges:default",
    fit: bool = False,
) -> SweepResult:
    """Consecutive-pair distance averages across an Ising spectrum table."""
    table = apply_ordering(enumerate_spectrum(h, L, sector_filter), ordering)
    result = SweepResult(
        model="ising",
        L=L,
        param=h,
        sector=_sector_descriptor(sector_filter),
        ordering=table.ordering,
        metric=metric,
    )
    for ell in ells:
        average, pairs = average_consecutive_distance(table, ell, metric)
        result.rows.append((ell, average, pairs))
    return result.attach_fit() if fit else result


def xxz_sweep(
    L: int,
    K: int,
    n_down: int,
    delta: float,
    metric: str,
    ells,
    h_z: float = 0.0,
    fit: bool = False,
) -> SweepResult:
    """All-pairs distance averages within one XXZ sector."""
    sector = xxz_sector_basis(L, K, n_down)
    result = SweepResult(
        model="xxz",
        L=L,
        param=delta,
        sector=f"K={K},n_down={n_down}",
        ordering="all-pairs",
        metric=metric,
    )
    for ell in ells:
        average, pairs = xxz_pairwise_average(sector, delta, ell, metric, h_z)
        result.rows.append((ell, average, pairs))
    return result.attach_fit() if fit else result


def random_sweep(spec: RandomEnsembleSpec, metric: str, ells, fit: bool = False) -> SweepResult:
    """All-pairs distance averages over a random pure Gaussian ensemble."""
    if metric not in ("bures", "trace"):
        raise ValueError(f"metric must be 'bures' or 'trace', got {metric!r}")
    states = sample_ensemble(spec)
    pairs = [(i, j) for i in range(spec.count) for j in range(i + 1, spec.count)]
    result = SweepResult(
        model="random",
        L=spec.L,
        param=spec.seed,
        sector=f"count={spec.count}",
        ordering="all-pairs",
        metric=metric,
    )
    for ell in ells:
        blocks = [s.restrict(ell) for s in states]
        if metric == "bures":
            values = _map_indexed(lambda n: bures_distance(blocks[pairs[n][0]], blocks[pairs[n][1]]), len(pairs))
        else:
            rhos = [density_from_gamma(b) for b in blocks]
            values = _map_indexed(lambda n: trace_distance(rhos[pairs[n][0]], rhos[pairs[n][1]]), len(pairs))
        result.rows.append((ell, float(values.mean()), len(pairs)))
    return result.attach_fit() if fit else result


def write_spectrum_csv(table: SpectrumTable, stream, charge_count: int | None = None):
    """Spectrum export: index,sector,mask,energy,parity,momentum,Q0..Qm."""
    from .ising import SECTORS

    count = table.charges.shape[1] if charge_count is None else charge_count
    header = "index,sector,mask,energy,parity,momentum," + ",".join(f"Q{m}" for m in range(count))
    stream.write(header + "\n")
    for i in range(len(table)):
        cells = [
            str(i),
            SECTORS[table.sector_codes[i]],
            str(int(table.masks[i])),
            _fmt(table.energy[i]),
            str(int(table.parity[i])),
            str(int(table.momentum[i])),
        ]
        cells.extend(_fmt(q) for q in table.charges[i, :count])
        stream.write(",".join(cells) + "\n")


def write_charge_profiles(table: SpectrumTable, charge_indices, stream):
    """Per-state charge columns in table order: index,Q{m},..."""
    indices = list(charge_indices)
    stream.write("index," + ",".join(f"Q{m}" for m in indices) + "\n")
    for i in range(len(table)):
        stream.write(str(i) + "," + ",".join(_fmt(table.charges[i, m]) for m in indices) + "\n")
