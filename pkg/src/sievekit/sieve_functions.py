"""Special functions of sieve theory: the linear pair (F, f), Buchstab w, Selberg sigma2.

F and f solve the coupled system

    s F(s) = 2 e^gamma            on (0, 3]   (low-range convention),
    s f(s) = 0                    on (0, 2],
    (s F(s))' = f(s - 1),  (s f(s))' = F(s - 1)   for s > 2,

and w solves u w(u) = 1 on [1, 2] with (u w(u))' = w(u - 1) beyond.  Tables
march the delay equations on a uniform grid whose spacing divides 1, so the
lag-1 lookups land exactly on earlier grid nodes and the composite trapezoid
rule applies without interpolation error.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .numerics import E_GAMMA, EULER_GAMMA, integrate_checked

TWO_E_GAMMA = 2.0 * E_GAMMA
E_MINUS_GAMMA = math.exp(-EULER_GAMMA)
EIGHT_E_2GAMMA = 8.0 * math.exp(2.0 * EULER_GAMMA)

DEFAULT_STEP = 1e-4
MAX_STEP = 0.01


class TableDomainError(ValueError):
    """Evaluation point outside the tabulated or closed-form domain."""


class TableBuildError(RuntimeError):
    """Marched table violates a structural bound (solver blow-up)."""


class Sigma2DomainError(ValueError):
    """sigma2 requested outside (0, 2], where no defining branch exists."""


def _grid_step_nodes(step: float, top: float) -> tuple[int, int]:
    """Validate step, return (lag nodes per unit, node count for [0, top])."""
    if not 0.0 < step <= MAX_STEP:
        raise ValueError(f"step must be in (0, {MAX_STEP}], got {step}")
    lag = round(1.0 / step)
    if abs(lag * step - 1.0) > 1e-12:
        raise ValueError(f"1/step must be an integer, got step={step}")
    return lag, round(top / step) + 1


@dataclass(frozen=True)
class SieveFunctionTable:
    step: float
    s_max: float
    s_grid: np.ndarray
    F_values: np.ndarray
    f_values: np.ndarray
    gamma_const: float = EULER_GAMMA

    def interp(self, s: float, values: np.ndarray) -> float:
        i = int(min(s / self.step, len(self.s_grid) - 2))
        t = (s - self.s_grid[i]) / self.step
        return float((1.0 - t) * values[i] + t * values[i + 1])


@dataclass(frozen=True)
class BuchstabTable:
    step: float
    u_max: float
    u_grid: np.ndarray
    w_values: np.ndarray


def build_sieve_tables(step: float = DEFAULT_STEP,
                       s_max: float = 14.0) -> SieveFunctionTable:
    """March the (F, f) delay system over [0, s_max] on a uniform grid."""
    if s_max < 6.0:
        raise ValueError(f"s_max must be >= 6, got {s_max}")
    lag, n = _grid_step_nodes(step, s_max)
    s = np.arange(n, dtype=np.float64) * step
    F = np.empty(n)
    f = np.zeros(n)
    F[0] = np.nan  # s=0 is outside every evaluation domain
    F[1:] = TWO_E_GAMMA / s[1:]

    # y1 = s F(s), y2 = s f(s); y2 marches from s=2, y1 joins at s=3.
    # The lag-1 coupling runs both ways, so the marches must interleave:
    # each one only ever reads values the other has already produced.
    i2, i3 = 2 * lag, 3 * lag
    y1, y2 = TWO_E_GAMMA, 0.0
    half = 0.5 * step
    for i in range(i2, n - 1):
        y2 += half * (F[i - lag] + F[i + 1 - lag])
        f[i + 1] = y2 / s[i + 1]
        if i >= i3:
            y1 += half * (f[i - lag] + f[i + 1 - lag])
            F[i + 1] = y1 / s[i + 1]

    slack = 10.0 * step * step
    lo = i2
    if np.any(np.diff(F[lo:]) > slack) or np.any(np.diff(f[lo:]) < -slack):
        raise TableBuildError("marched F/f lost monotonicity beyond s=2")
    gap = F[lo:] - f[lo:]
    if np.any(gap < -slack) or np.any(np.diff(gap) > slack):
        raise TableBuildError("marched F-f gap is not non-increasing")
    if np.any(F[lo:] < 1.0 - slack) or np.any(f[lo:] > 1.0 + slack):
        raise TableBuildError("marched values left the [f <= 1 <= F] band")
    return SieveFunctionTable(step=step, s_max=float(s[-1]), s_grid=s,
                              F_values=F, f_values=f)


def build_buchstab_table(step: float = DEFAULT_STEP,
                         u_max: float = 14.0) -> BuchstabTable:
    """March u w(u) = 1, (u w(u))' = w(u - 1) over [0, u_max]."""
    if u_max < 12.0:
        raise ValueError(f"u_max must be >= 12, got {u_max}")
    lag, n = _grid_step_nodes(step, u_max)
    u = np.arange(n, dtype=np.float64) * step
    w = np.zeros(n)
    w[lag: 2 * lag + 1] = 1.0 / u[lag: 2 * lag + 1]

    y = 1.0  # u w(u) at the march point
    half = 0.5 * step
    for i in range(2 * lag, n - 1):
        y += half * (w[i - lag] + w[i + 1 - lag])
        w[i + 1] = y / u[i + 1]

    slack = 10.0 * step * step
    band = w[2 * lag:]
    if np.any(band < 0.5 - slack) or np.any(band > 1.0 + slack):
        raise TableBuildError("marched w left the [0.5, 1] band beyond u=2")
    return BuchstabTable(step=step, u_max=float(u[-1]), u_grid=u, w_values=w)


def eval_F(s: float, table: SieveFunctionTable) -> float:
    """Upper linear-sieve function; closed forms to s=5, table beyond."""
    if s <= 0.0 or s > table.s_max:
        raise TableDomainError(f"F defined on (0, {table.s_max}], got s={s}")
    if s <= 3.0:
        return TWO_E_GAMMA / s
    if s <= 5.0:
        inner = integrate_checked(lambda t: math.log(t - 1.0) / t, 2.0, s - 1.0)
        return TWO_E_GAMMA / s * (1.0 + inner)
    return table.interp(s, table.F_values)


def eval_f(s: float, table: SieveFunctionTable) -> float:
    """Lower linear-sieve function; 0 on (0,2], log form on [2,4], table beyond."""
    if s <= 0.0 or s > table.s_max:
        raise TableDomainError(f"f defined on (0, {table.s_max}], got s={s}")
    if s <= 2.0:
        return 0.0
    if s <= 4.0:
        return TWO_E_GAMMA * math.log(s - 1.0) / s
    return table.interp(s, table.f_values)


def buchstab_w(u: float, table: BuchstabTable) -> float:
    """Buchstab function; exact 1/u on [1,2], log form on [2,3], table beyond."""
    if u < 1.0 or u > table.u_max:
        raise TableDomainError(f"w defined on [1, {table.u_max}], got u={u}")
    if u <= 2.0:
        return 1.0 / u
    if u <= 3.0:
        return (1.0 + math.log(u - 1.0)) / u
    i = int(min(u / table.step, len(table.u_grid) - 2))
    t = (u - table.u_grid[i]) / table.step
    return float((1.0 - t) * table.w_values[i] + t * table.w_values[i + 1])


def selberg_sigma2(s: float) -> float:
    """Dimension-2 Selberg lower-bound function on its only defined branch."""
    if not 0.0 < s <= 2.0:
        raise Sigma2DomainError(
            f"sigma2 branch is defined only for 0 < s <= 2, got s={s}; "
            "no continuation beyond 2 is available")
    return EIGHT_E_2GAMMA / (s * s)


def dump_tables_csv(table: SieveFunctionTable, path: str,
                    stride: int = 1) -> None:
    """Write grid rows (s, F, f) for inspection; stride thins the grid."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["s", "F", "f"])
        for i in range(0, len(table.s_grid), stride):
            writer.writerow([f"{table.s_grid[i]:.6f}",
                             f"{table.F_values[i]:.12g}",
                             f"{table.f_values[i]:.12g}"])


def load_tables_csv(path: str) -> SieveFunctionTable:
    """Rebuild a table from a dump; step is inferred from the first rows."""
    s_list, F_list, f_list = [], [], []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        next(reader)
        for row in reader:
            s_list.append(float(row[0]))
            F_list.append(float(row[1]))
            f_list.append(float(row[2]))
    step = s_list[1] - s_list[0]
    return SieveFunctionTable(step=step, s_max=s_list[-1],
                              s_grid=np.asarray(s_list),
                              F_values=np.asarray(F_list),
                              f_values=np.asarray(f_list))
