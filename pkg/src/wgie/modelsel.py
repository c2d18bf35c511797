"""Entropy gaps and cross-model WGIE surfaces for choosing a lifetime model.

Surfaces are laid out over ``(u, v)`` with ``t1 = -log u`` and
``t2 = -log v``; a point is valid when ``u > v`` (so ``t1 < t2``).
Models are ranked by the mean WGIE over the valid points.
"""

from __future__ import annotations

import csv
import io
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .distributions import Distribution, Window
from .entropy import EntropyOrder, interval_shannon, weighted_interval_entropy, wgie
from .estimation import FitResult, as_sample, fit


def kappa_gap(model: Distribution, w: Window, order: EntropyOrder) -> float:
    """WGIE minus the interval Shannon entropy."""
    return wgie(model, w, order).value - interval_shannon(model, w)


def eta_gap(model: Distribution, w: Window, order: EntropyOrder) -> float:
    """WGIE minus the weighted interval entropy."""
    return wgie(model, w, order).value - weighted_interval_entropy(model, w)


@dataclass(frozen=True)
class GridPoint:
    u: float
    v: float

    @property
    def window(self) -> Window:
        return Window(-math.log(self.u), -math.log(self.v))


def uv_grid(n: int = 30, lo: float = 0.05, hi: float = 0.95) -> list[GridPoint]:
    """Valid points of an ``n x n`` grid on ``[lo, hi]**2``, in row-major (u, v) order."""
    if not 0 < lo < hi < 1:
        raise ValueError("grid bounds must satisfy 0 < lo < hi < 1")
    axis = np.linspace(lo, hi, n)
    return [GridPoint(float(u), float(v)) for u in axis for v in axis if u > v]


@dataclass(frozen=True)
class EntropyGapGrid:
    order: EntropyOrder
    points: tuple
    values: np.ndarray
    label: str = ""
    transform: str = "t1 = -log(u), t2 = -log(v)"

    @property
    def minimum(self) -> float:
        return float(np.min(self.values))

    @property
    def mean(self) -> float:
        return math.fsum(self.values) / len(self.values)

    def negatives(self) -> list[tuple[GridPoint, float]]:
        return [(p, float(v)) for p, v in zip(self.points, self.values) if v <= 0]

    def to_csv(self) -> str:
        buf = io.StringIO()
        wr = csv.writer(buf, lineterminator="\n")
        wr.writerow(("u", "v", "t1", "t2", "value"))
        for p, val in zip(self.points, self.values):
            w = p.window
            wr.writerow([f"{p.u:.10g}", f"{p.v:.10g}", f"{w.t1:.10g}", f"{w.t2:.10g}", f"{val:.10g}"])
        return buf.getvalue()


def evaluate_grid(fn, order: EntropyOrder, grid=None, label: str = "") -> EntropyGapGrid:
    grid = uv_grid() if grid is None else list(grid)
    values = np.array([fn(p.window) for p in grid], dtype=float)
    return EntropyGapGrid(order, tuple(grid), values, label)


def kappa_grid(model: Distribution, order: EntropyOrder, grid=None) -> EntropyGapGrid:
    return evaluate_grid(lambda w: kappa_gap(model, w, order), order, grid, f"kappa {model}")


def eta_grid(model: Distribution, order: EntropyOrder, grid=None) -> EntropyGapGrid:
    return evaluate_grid(lambda w: eta_gap(model, w, order), order, grid, f"eta {model}")


def wgie_grid(model: Distribution, order: EntropyOrder, grid=None) -> EntropyGapGrid:
    return evaluate_grid(lambda w: wgie(model, w, order).value, order, grid, f"wgie {model}")


def wgie_difference_grid(model_a: Distribution, model_b: Distribution, order: EntropyOrder,
                         grid=None) -> EntropyGapGrid:
    """Pointwise ``wgie(a) - wgie(b)``; exactly zero when ``a == b``."""
    if model_a == model_b:
        grid = uv_grid() if grid is None else list(grid)
        return EntropyGapGrid(order, tuple(grid), np.zeros(len(grid)), f"{model_a} - itself")
    return evaluate_grid(lambda w: wgie(model_a, w, order).value - wgie(model_b, w, order).value,
                         order, grid, f"{model_a} - {model_b}")


@dataclass(frozen=True)
class RankedModel:
    family: str
    fit: FitResult
    summary: float
    rank: int


def rank_models(data, families, order: EntropyOrder, grid=None) -> list[RankedModel]:
    """Fit each family and rank by descending grid-mean WGIE.

    Families whose fit fails or whose surface cannot be evaluated are
    dropped with a warning.
    """
    s = as_sample(data)
    grid = uv_grid() if grid is None else list(grid)
    scored = []
    for fam in families:
        try:
            res = fit(fam, s)
            summary = wgie_grid(res.model, order, grid).mean
        except (ValueError, ArithmeticError) as exc:
            warnings.warn(f"dropping {fam}: {exc}", RuntimeWarning, stacklevel=2)
            continue
        if not res.converged:
            warnings.warn(f"{fam} fit did not converge; ranked on its best iterate", RuntimeWarning,
                          stacklevel=2)
        scored.append((fam, res, summary))
    scored.sort(key=lambda t: (-t[2], t[0]))
    return [RankedModel(f, r, m, i + 1) for i, (f, r, m) in enumerate(scored)]
