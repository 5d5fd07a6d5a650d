"""Desk-scale realizations of the counting objects behind the sieve bounds.

Everything runs on an explicit window (X, 2X].  The workhorse is a factor
sieve over the quadratic values n^2 + 1: for every prime ell = 1 (mod 4) the
solutions of a^2 + 1 = 0 (mod ell^k) are two arithmetic progressions, so
striking those progressions (plus n odd for ell = 2) peels off every prime
factor up to 2X.  What remains per n is either 1 or a single prime > 2X,
because two such factors would exceed n^2 + 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from .numerics import integrate_checked
from .primes import (PrimeTable, is_prime, jacobi, multiplicative_suite, rho,
                     roots_mod, sieve_primes, sqrt_minus_one, x_flat)
from .reports import ExperimentReport
from .theorems import WeightedSieveParams, gamma_theta

X_OVERFLOW_CAP = 10 ** 9     # keeps n^2 + 1 inside int64 for n <= 2X
X_FACTOR_CAP = 10 ** 7       # full window factorization experiments
MAX_SQUARE_SIEVE_L = 5 * 10 ** 5  # (2L)^2 must stay a valid roots_mod modulus


class OverflowGuardError(ValueError):
    """Window too large for exact 64-bit arithmetic."""


def _check_window(X: int, cap: int = X_OVERFLOW_CAP) -> None:
    if not 1 <= X <= cap:
        raise OverflowGuardError(f"X must be in [1, {cap}], got {X}")


# ---------------------------------------------------------------------------
# smooth weights

def _mollifier_step(t: np.ndarray) -> np.ndarray:
    """C-infinity ramp from 0 at t<=0 to 1 at t>=1."""
    t = np.clip(t, 0.0, 1.0)
    with np.errstate(divide="ignore", over="ignore"):
        a = np.where(t > 0.0, np.exp(-1.0 / np.where(t > 0.0, t, 1.0)), 0.0)
        b = np.where(t < 1.0, np.exp(-1.0 / np.where(t < 1.0, 1.0 - t, 1.0)),
                     0.0)
    return a / (a + b)


@dataclass(frozen=True)
class SmoothWeight:
    """Window weight g supported in [1, 2] with precomputed mass = integral g.

    sharp is the exact indicator of (1, 2]; bump and plateau are the usual
    compactly supported smooth shapes, both symmetric about 3/2.
    """
    mode: str
    epsilon0: float = 0.1
    mass: float = field(init=False)

    def __post_init__(self):
        if self.mode not in ("sharp", "bump", "plateau"):
            raise ValueError(f"unknown weight mode {self.mode!r}")
        if not 0.0 < self.epsilon0 < 0.5:
            raise ValueError(f"epsilon0 must be in (0, 1/2), got {self.epsilon0}")
        if self.mode == "sharp":
            mass = 1.0
        else:
            mass = integrate_checked(lambda x: weight_eval(self, x), 1.0, 2.0,
                                     tol=1e-10)
        object.__setattr__(self, "mass", mass)

    def values(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        if self.mode == "sharp":
            return ((x > 1.0) & (x <= 2.0)).astype(np.float64)
        if self.mode == "bump":
            inside = (x > 1.0) & (x < 2.0)
            xs = np.where(inside, x, 1.5)
            return np.where(inside,
                            np.exp(-1.0 / ((xs - 1.0) * (2.0 - xs))), 0.0)
        e = self.epsilon0
        up = _mollifier_step((x - 1.0) / e)
        down = _mollifier_step((2.0 - x) / e)
        return np.where((x > 1.0) & (x < 2.0), np.minimum(up, down), 0.0)


SHARP = SmoothWeight(mode="sharp")


def weight_eval(w: SmoothWeight, x: float) -> float:
    """Scalar g(x)."""
    if w.mode == "sharp":
        return 1.0 if 1.0 < x <= 2.0 else 0.0
    return float(w.values(np.asarray([x]))[0])


@dataclass(frozen=True)
class ExperimentConfig:
    """Shared run parameters; seed exists for config compatibility only
    (every computation here is deterministic without it)."""
    X: int
    weight: SmoothWeight = SHARP
    threads: int | None = None
    seed: int = 1729

    def __post_init__(self):
        _check_window(self.X)


def _weighted_sum(w: SmoothWeight, n: np.ndarray, X: int) -> float:
    """Sum of g(n/X) in a fixed (ascending n) order.

    Both the fast paths and the brute-force oracles funnel through this, so
    agreeing n-sets give bit-identical floats.
    """
    if len(n) == 0:
        return 0.0
    return float(np.sum(w.values(np.asarray(n, dtype=np.float64) / X)))


# ---------------------------------------------------------------------------
# congruence counts Q_ell, Phi, A_d

def Q_ell(X: int, ell: int, w: SmoothWeight, table: PrimeTable) -> float:
    """Weighted count of primes p in (X, 2X] with p^2 + 1 = 0 (mod ell)."""
    _check_window(X)
    roots = roots_mod(ell, table).roots
    if not roots:
        return 0.0
    p = table.primes_between(X, 2 * X)
    mask = np.isin(p % ell, np.asarray(roots, dtype=np.int64))
    return _weighted_sum(w, p[mask], X)


def Q_ell_brute(X: int, ell: int, w: SmoothWeight, table: PrimeTable) -> float:
    """Oracle path: test ell | p^2 + 1 directly for every window prime."""
    _check_window(X)
    qualifying = [int(p) for p in table.primes_between(X, 2 * X)
                  if (p * p + 1) % ell == 0]
    return _weighted_sum(w, np.asarray(qualifying, dtype=np.int64), X)


def _progressions(X: int, residues, modulus: int) -> np.ndarray:
    """Ascending n in (X, 2X] lying in any of the residue classes."""
    lo = X + 1
    parts = []
    for a in residues:
        start = lo + (a - lo) % modulus
        if start <= 2 * X:
            parts.append(np.arange(start, 2 * X + 1, modulus, dtype=np.int64))
    if not parts:
        return np.empty(0, dtype=np.int64)
    out = np.concatenate(parts)
    out.sort()
    return out


def Q_ell_u(X: int, ell: int, u: float, w: SmoothWeight,
            table: PrimeTable) -> float:
    """Weighted count of n in (X, 2X] with ell | n^2 + 1 and spf(n) > n^(1/u)."""
    _check_window(X, min(X_OVERFLOW_CAP, table.limit // 2))
    if u < 1.0:
        raise ValueError(f"u must be >= 1, got {u}")
    n = _progressions(X, roots_mod(ell, table).roots, ell)
    if len(n) == 0:
        return 0.0
    spf = table.smallest_prime_factor[n].astype(np.float64)
    keep = spf > np.power(n.astype(np.float64), 1.0 / u)
    return _weighted_sum(w, n[keep], X)


def phi_sifted(X: int, z: float, d: int, a: int, w: SmoothWeight,
               table: PrimeTable) -> float:
    """Weighted count of z-rough n in (X, 2X] with n = a (mod d)."""
    _check_window(X, min(X_OVERFLOW_CAP, table.limit // 2))
    if math.gcd(a, d) != 1:
        raise ValueError(f"residue {a} not coprime to modulus {d}")
    if z < 2:
        raise ValueError(f"z must be >= 2, got {z}")
    n = _progressions(X, [a % d], d)
    keep = table.smallest_prime_factor[n] > z
    return _weighted_sum(w, n[keep], X)


def phi_sifted_coprime(X: int, z: float, d: int, w: SmoothWeight,
                       table: PrimeTable) -> float:
    """Weighted count of z-rough n in (X, 2X] coprime to d."""
    _check_window(X, min(X_OVERFLOW_CAP, table.limit // 2))
    if z < 2:
        raise ValueError(f"z must be >= 2, got {z}")
    n = np.arange(X + 1, 2 * X + 1, dtype=np.int64)
    keep = (table.smallest_prime_factor[n] > z) & (np.gcd(n, d) == 1)
    return _weighted_sum(w, n[keep], X)


def A_d_count(X: int, ell: int, d: int, w: SmoothWeight,
              table: PrimeTable) -> float:
    """Weighted count of n in (X, 2X] with ell | n^2 + 1 and d | n."""
    _check_window(X)
    hits = []
    for a in roots_mod(ell, table).roots:
        g = math.gcd(d, ell)
        if a % g != 0:
            continue  # no n can satisfy both congruences
        step = ell // g * d
        # CRT: n = a (mod ell), n = 0 (mod d)
        m_inv = pow(d // g, -1, ell // g)
        n0 = (a // g * m_inv) % (ell // g) * d
        hits.append(_progressions(X, [n0 % step], step))
    if not hits:
        return 0.0
    n = np.concatenate(hits) if hits else np.empty(0, dtype=np.int64)
    n.sort()
    return _weighted_sum(w, n, X)


def r_d_error(X: int, ell: int, d: int, w: SmoothWeight,
              table: PrimeTable) -> float:
    """A_d minus its model mass * rho(ell) * X/(d * ell)."""
    return (A_d_count(X, ell, d, w, table)
            - w.mass * rho(ell, table) * X / (d * ell))


# ---------------------------------------------------------------------------
# average error experiments

def _coprime_residues(d: int) -> list[int]:
    return [a for a in range(1, d + 1) if math.gcd(a, d) == 1]


def _class_sums(values: np.ndarray, n: np.ndarray, d: int) -> np.ndarray:
    return np.bincount((n % d).astype(np.int64), weights=values, minlength=d)


def bv_error_average(X: int, k: int, w: SmoothWeight,
                     table: PrimeTable) -> ExperimentReport:
    """Divisor-weighted average of max-over-residue prime-count errors.

    Sums tau(d)^k * max_a |sum_{p=a(d)} g(p/X) - (1/phi(d)) sum_p g(p/X)|
    over d up to the level X^(1/2) exp(-sqrt(log X)).  The exponent k stands
    in for the huge fixed power the averaged bound is proved with, which is
    useless at 64-bit scale.
    """
    _check_window(X, min(X_FACTOR_CAP, table.limit // 2))
    if k < 0:
        raise ValueError(f"k must be >= 0, got {k}")
    D = int(x_flat(X))
    p = table.primes_between(X, 2 * X)
    vals = w.values(p.astype(np.float64) / X)
    total = float(np.sum(vals))
    rows = []
    for d in range(1, D + 1):
        suite = multiplicative_suite(d, table)
        sums = _class_sums(vals, p, d)
        main = total / suite["phi"]
        worst = max(abs(float(sums[a % d]) - main)
                    for a in _coprime_residues(d))
        rows.append(suite["tau"] ** k * worst)
    value = float(np.sum(np.asarray(rows))) if rows else 0.0
    scale = X / math.log(X) ** 2
    return ExperimentReport(
        name="bv_error_average",
        params={"X": X, "k": k, "weight": w.mode},
        counters={"d_max": D, "window_primes": len(p)},
        aggregates={"value": value, "ratio_to_X_log2": value / scale},
        notes="tau exponent k replaces the large theoretical power; "
              "ratio is report-grade")


def wolke_error_average(X: int, z: float, k: int, w: SmoothWeight,
                        table: PrimeTable) -> ExperimentReport:
    """Same average as bv_error_average with primes replaced by z-rough n."""
    _check_window(X, min(X_FACTOR_CAP, table.limit // 2))
    if k < 0:
        raise ValueError(f"k must be >= 0, got {k}")
    D = int(x_flat(X))
    n = np.arange(X + 1, 2 * X + 1, dtype=np.int64)
    n = n[table.smallest_prime_factor[n] > z]
    vals = w.values(n.astype(np.float64) / X)
    rows = []
    for d in range(1, D + 1):
        sums = _class_sums(vals, n, d)
        residues = _coprime_residues(d)
        coprime_total = float(sum(sums[a % d] for a in residues))
        main = coprime_total / len(residues)
        worst = max(abs(float(sums[a % d]) - main) for a in residues)
        tau_d = multiplicative_suite(d, table)["tau"]
        rows.append(tau_d ** k * worst)
    value = float(np.sum(np.asarray(rows))) if rows else 0.0
    scale = X / math.log(X) ** 2
    return ExperimentReport(
        name="wolke_error_average",
        params={"X": X, "z": z, "k": k, "weight": w.mode},
        counters={"d_max": D, "rough_numbers": len(n)},
        aggregates={"value": value, "ratio_to_X_log2": value / scale},
        notes="sifted analogue of bv_error_average; ratio is report-grade")


# ---------------------------------------------------------------------------
# the window factor sieve over n^2 + 1

def iter_quadratic_strikes(X: int, table: PrimeTable,
                           ell_max: int | None = None
                           ) -> Iterator[tuple[int, int, int, np.ndarray]]:
    """Yield (ell, k, ell^k, window indices) for every prime-power divisor.

    Covers every prime power ell^k dividing some n^2 + 1 for n in (X, 2X]
    with ell <= ell_max (default 2X).  Index arrays address n = X + 1 + i.
    """
    _check_window(X)
    lo = X + 1
    size = X
    m_max = 4 * X * X + 1
    top = 2 * X if ell_max is None else min(ell_max, 2 * X)
    if table.limit < top:
        raise ValueError(f"prime table limit {table.limit} below {top}")

    if top >= 2:
        first_odd = 0 if lo % 2 == 1 else 1
        yield 2, 1, 2, np.arange(first_odd, size, 2, dtype=np.int64)

    for ell in map(int, table.primes_between(2, top)):
        if ell % 4 != 1:
            continue
        r = sqrt_minus_one(ell)
        q, k = ell, 1
        while True:
            parts = []
            for a in (r, q - r):
                start = (a - lo) % q
                if start < size:
                    parts.append(np.arange(start, size, q, dtype=np.int64))
            if not parts:
                break  # deeper levels strike subsets of this one
            idx = parts[0] if len(parts) == 1 else np.concatenate(parts)
            yield ell, k, q, idx
            if q > m_max // ell:
                break
            q_next = q * ell
            inv = pow(2 * r % q_next, -1, q_next)
            r = (r - (r * r + 1) * inv) % q_next
            q, k = q_next, k + 1
            r = min(r, q - r)


@dataclass(frozen=True)
class QuadraticWindowStats:
    """Per-n factor data for the window: n, spf(n), and the shape of n^2+1."""
    X: int
    n: np.ndarray
    spf_n: np.ndarray
    is_prime_n: np.ndarray
    omega_m: np.ndarray      # distinct prime factors of n^2 + 1
    big_omega_m: np.ndarray  # prime factors of n^2 + 1 with multiplicity
    p_plus_m: np.ndarray     # greatest prime factor of n^2 + 1


_WINDOW_CACHE: dict[tuple[int, int], QuadraticWindowStats] = {}


def quadratic_window_stats(X: int, table: PrimeTable) -> QuadraticWindowStats:
    """Factor every n^2 + 1 for n in (X, 2X] by the progression sieve."""
    _check_window(X, min(X_FACTOR_CAP, table.limit // 2))
    key = (table.limit, X)
    cached = _WINDOW_CACHE.get(key)
    if cached is not None:
        return cached
    n = np.arange(X + 1, 2 * X + 1, dtype=np.int64)
    rem = n * n + 1
    omega = np.zeros(X, dtype=np.int16)
    big_omega = np.zeros(X, dtype=np.int16)
    p_plus = np.ones(X, dtype=np.int64)
    for ell, k, _q, idx in iter_quadratic_strikes(X, table):
        rem[idx] //= ell
        big_omega[idx] += 1
        if k == 1:
            omega[idx] += 1
        p_plus[idx] = ell
    tail = rem > 1
    if not bool(np.all(rem[tail] > 2 * X)):
        raise ArithmeticError("leftover cofactor is not a prime beyond 2X")
    omega[tail] += 1
    big_omega[tail] += 1
    p_plus[tail] = rem[tail]
    spf_n = table.smallest_prime_factor[n].astype(np.int64)
    stats = QuadraticWindowStats(X=X, n=n, spf_n=spf_n,
                                 is_prime_n=spf_n == n, omega_m=omega,
                                 big_omega_m=big_omega, p_plus_m=p_plus)
    if X <= 10 ** 6:
        _WINDOW_CACHE[key] = stats
    return stats


# ---------------------------------------------------------------------------
# Chebyshev-style decomposition of sum Lambda(n) g(n/X) log(n^2 + 1)

def chebyshev_decomposition(X: int, vartheta: float, w: SmoothWeight,
                            table: PrimeTable) -> ExperimentReport:
    """Dual evaluation of H(X) plus its split into four modulus ranges.

    H(X) = sum_n Lambda(n) g(n/X) log(n^2+1) is computed directly and again
    through log(n^2+1) = sum of log ell over prime powers ell^k | n^2+1; the
    two must agree to floating roundoff.  The prime-support split H1..H4
    cuts at the level X^flat = X^(1/2) exp(-sqrt(log X)), at X^vartheta, and
    at squarefull moduli; H1_model is the expected main term of H1.
    """
    _check_window(X, min(X_FACTOR_CAP, table.limit // 2))
    if not 0.5 < vartheta < 1.0:
        raise ValueError(f"vartheta must lie in (1/2, 1), got {vartheta}")
    lo = X + 1
    nf = np.arange(lo, 2 * X + 1, dtype=np.int64).astype(np.float64)

    # Lambda(n) g(n/X) over the window (prime-power n only)...
    lam_w = np.zeros(X, dtype=np.float64)
    # ...and g(p/X) on primes alone, for the H1..H4 split.
    g_p = np.zeros(X, dtype=np.float64)
    p_win = table.primes_between(X, 2 * X)
    idx_p = (p_win - lo).astype(np.int64)
    g_vals = w.values(p_win.astype(np.float64) / X)
    lam_w[idx_p] = np.log(p_win.astype(np.float64)) * g_vals
    g_p[idx_p] = g_vals
    for p in map(int, table.primes_between(1, math.isqrt(2 * X))):
        power = p * p
        while power <= 2 * X:
            if power > X:
                lam_w[power - lo] = math.log(p) * weight_eval(w, power / X)
            power *= p

    H_direct = float(np.sum(lam_w * np.log(nf * nf + 1.0)))

    flat = x_flat(X)
    level = X ** vartheta
    rem = np.arange(lo, 2 * X + 1, dtype=np.int64) ** 2 + 1
    H_dual = 0.0
    H = [0.0, 0.0, 0.0, 0.0]
    model_sum = 0.0
    for ell, k, q, idx in iter_quadratic_strikes(X, table):
        rem[idx] //= ell
        log_ell = math.log(ell)
        H_dual += log_ell * float(np.sum(lam_w[idx]))
        s_g = log_ell * float(np.sum(g_p[idx]))
        if q <= flat:
            H[0] += s_g
            rho_q = 1 if ell == 2 else 2
            model_sum += log_ell * rho_q / (q - q // ell)
        elif k == 1 and ell <= level:
            H[1] += s_g
        elif k == 1:
            H[2] += s_g
        else:
            H[3] += s_g
    tail = rem > 1
    tail_logs = np.log(rem[tail].astype(np.float64))
    H_dual += float(np.sum(lam_w[tail] * tail_logs))
    H[2] += float(np.sum(g_p[tail] * tail_logs))  # tail primes exceed X^vartheta

    H1_model = w.mass * X * model_sum / math.log(X)
    rel = abs(H_direct - H_dual) / abs(H_direct)
    return ExperimentReport(
        name="chebyshev_decomposition",
        params={"X": X, "vartheta": vartheta, "weight": w.mode},
        counters={"window_primes": len(p_win)},
        aggregates={"H_direct": H_direct, "H_dual": H_dual,
                    "H1": H[0], "H2": H[1], "H3": H[2], "H4": H[3],
                    "H1_model": H1_model,
                    "H1_over_model": H[0] / H1_model,
                    "H4_over_X": H[3] / X,
                    "level_flat": flat, "level_vartheta": level},
        residuals={"identity_rel": rel},
        notes="identity residual must vanish to roundoff; H4/X is report-grade")


def bt_exception_count(X: int, theta: float, w: SmoothWeight,
                       table: PrimeTable) -> ExperimentReport:
    """Count moduli in (X^theta, 2X^theta] where Q_ell beats its upper bound.

    The bound is (2/gamma(theta)) * mass * rho(ell) * X / (phi(ell) log X);
    moduli with rho(ell) = 0 can never be exceptions.
    """
    _check_window(X, min(X_FACTOR_CAP, table.limit // 2))
    level = gamma_theta(theta)  # validates theta's range
    L = int(X ** theta)
    p = table.primes_between(X, 2 * X)
    vals = w.values(p.astype(np.float64) / X)
    exceptions = 0
    scale = 2.0 / level * w.mass * X / math.log(X)
    for ell in range(L + 1, 2 * L + 1):
        roots = roots_mod(ell, table).roots
        if not roots:
            continue
        q_val = float(np.sum(vals[np.isin(p % ell, np.asarray(roots))]))
        phi_ell = multiplicative_suite(ell, table)["phi"]
        if q_val > scale * len(roots) / phi_ell:
            exceptions += 1
    count = L
    return ExperimentReport(
        name="bt_exception_count",
        params={"X": X, "theta": theta, "weight": w.mode},
        counters={"moduli": count, "exceptions": exceptions},
        aggregates={"fraction": exceptions / count, "L": float(L)},
        notes="exception fraction against the residue-class upper bound")


# ---------------------------------------------------------------------------
# character-sum and square-sieve checks

def weil_sum_check(p: int, q: int, m: int,
                   table: PrimeTable | None = None) -> ExperimentReport:
    """Complete Jacobi-symbol sum sum_l (m l^2 - 1 | pq) against sqrt(pq)."""
    if p == q:
        raise ValueError("p and q must be distinct")
    if p % 2 == 0 or q % 2 == 0 or not (is_prime(p) and is_prime(q)):
        raise ValueError(f"need distinct odd primes, got {p}, {q}")
    pq = p * q
    if pq > 10 ** 5:
        raise ValueError(f"pq must be <= 1e5, got {pq}")
    S = sum(jacobi((m * l * l - 1) % pq, pq) for l in range(pq))
    bound = math.sqrt(pq)
    degenerate = math.gcd(m, pq) > 1
    ok = degenerate or abs(S) <= bound
    return ExperimentReport(
        name="weil_sum_check",
        params={"p": p, "q": q, "m": m},
        counters={"degenerate": int(degenerate), "bound_holds": int(ok)},
        aggregates={"S": float(S), "abs_S": float(abs(S)), "bound": bound},
        notes="degenerate means gcd(m, pq) > 1, where no bound is asserted")


def weil_prime_sums(p: int) -> np.ndarray:
    """S_p(a) = sum_x legendre(a x^2 - 1, p) for every residue a mod p.

    Counting square roots as 1 + legendre(v) turns the x-sum into an O(p)
    v-sum per a without assuming any character-sum evaluation.
    """
    if p < 3 or p % 2 == 0 or not is_prime(p):
        raise ValueError(f"need an odd prime, got {p}")
    leg = np.full(p, -1, dtype=np.int64)
    leg[0] = 0
    leg[(np.arange(1, p, dtype=np.int64) ** 2) % p] = 1
    weights = 1 + leg
    v = np.arange(p, dtype=np.int64)
    out = np.empty(p, dtype=np.int64)
    for a in range(p):
        out[a] = int(np.sum(weights * leg[(a * v - 1) % p]))
    return out


def weil_exhaustive(max_pq: int, direct_samples: int = 3) -> ExperimentReport:
    """Check |S| <= sqrt(pq) for every pair p < q with pq <= max_pq, all m.

    The complete sum over l mod pq splits through the residue pairing into
    S_p(m mod p) * S_q(m mod q) exactly; the first and last pairs are also
    cross-checked against the literal Jacobi-symbol sum.
    """
    if not 15 <= max_pq <= 2 * 10 ** 5:
        raise ValueError(f"max_pq must be in [15, 2e5], got {max_pq}")
    primes = [int(v) for v in sieve_primes(max_pq // 3).primes if v % 2 == 1]
    sums: dict[int, np.ndarray] = {}
    pairs = []
    for i, p in enumerate(primes):
        if p * p > max_pq:
            break
        for q in primes[i + 1:]:
            if p * q > max_pq:
                break
            pairs.append((p, q))
            for v in (p, q):
                if v not in sums:
                    sums[v] = weil_prime_sums(v)
    violations = 0
    m_total = 0
    worst_ratio = 0.0
    for p, q in pairs:
        worst = float(np.max(np.abs(sums[p][1:]))
                      * np.max(np.abs(sums[q][1:])))
        bound = math.sqrt(p * q)
        if worst > bound:
            violations += int(np.sum(
                np.abs(np.outer(sums[p][1:], sums[q][1:])) > bound))
        m_total += (p - 1) * (q - 1)
        worst_ratio = max(worst_ratio, worst / bound)

    checked = pairs[:direct_samples] + pairs[-1:]
    direct_checks = 0
    for p, q in checked:
        pq = p * q
        for m in (1, 2, pq - 1):
            if math.gcd(m, pq) > 1:
                continue
            direct = sum(jacobi((m * l * l - 1) % pq, pq) for l in range(pq))
            split = int(sums[p][m % p]) * int(sums[q][m % q])
            if direct != split:
                raise ArithmeticError(
                    f"residue-pair split disagrees with the literal sum "
                    f"at (p, q, m) = ({p}, {q}, {m})")
            direct_checks += 1
    return ExperimentReport(
        name="weil_exhaustive",
        params={"max_pq": max_pq},
        counters={"pairs": len(pairs), "m_values": m_total,
                  "violations": violations, "direct_checks": direct_checks},
        aggregates={"worst_ratio": worst_ratio},
        notes="worst_ratio is max |S| / sqrt(pq) over all pairs and m")


def square_sieve_count(X: int, L: int, table: PrimeTable) -> int:
    """Count pairs (ell, n), ell in (L, 2L], n in (X, 2X], ell^2 | n^2 + 1."""
    _check_window(X, X_FACTOR_CAP)
    if not 1 <= L <= X:
        raise OverflowGuardError(f"need 1 <= L <= X, got L={L}")
    if L > MAX_SQUARE_SIEVE_L:
        raise OverflowGuardError(
            f"L must be <= {MAX_SQUARE_SIEVE_L} so ell^2 stays a valid modulus")
    total = 0
    for ell in range(L + 1, 2 * L + 1):
        q = ell * ell
        for a in roots_mod(q, table).roots:
            total += (2 * X - a) // q - (X - a) // q
    return total


# ---------------------------------------------------------------------------
# weighted sieve and the theorem surveys

def weighted_sieve_experiment(X: int, params: WeightedSieveParams,
                              w: SmoothWeight,
                              table: PrimeTable) -> ExperimentReport:
    """Richert-weighted sum over window primes p on m = (p^2 + 1)/2.

    Psi = S(A, z) - (1/eta) sum_{z <= q < y} w_q S(A_q, z) with
    w_q = 1 - log q / log y, z = X^alpha, y = X^beta, and sifting by the odd
    primes below z.  The report carries the decomposition-identity residual,
    the count of survivors with few prime factors, and the exhaustive check
    of the weight inequality on squarefree survivors.
    """
    _check_window(X, min(X_FACTOR_CAP, table.limit // 2))
    stats = quadratic_window_stats(X, table)
    z = X ** params.alpha
    y = X ** params.beta
    eta = params.eta
    log_y = math.log(y)

    notes = []
    if z <= 3.0:
        notes.append(f"configuration warning: z = {z:.3f} <= 3 sifts nothing")

    # sifting pass: m z-rough means no odd prime factor below z
    rough = np.ones(X, dtype=bool)
    inner = np.zeros(X, dtype=np.float64)
    wq_pairs: list[tuple[int, np.ndarray]] = []
    for ell, k, _q, idx in iter_quadratic_strikes(X, table,
                                                  ell_max=int(y) + 1):
        if ell == 2 or k > 1:
            continue
        if ell < z:
            rough[idx] = False
        elif ell < y:
            np.add.at(inner, idx, 1.0 - math.log(ell) / log_y)
            wq_pairs.append((ell, idx))

    eligible = stats.is_prime_n & (stats.n % 2 == 1) & rough
    g_vals = np.where(eligible, w.values(stats.n.astype(np.float64) / X), 0.0)
    S_A = float(np.sum(g_vals))
    psi_direct = float(np.sum(g_vals * (1.0 - inner / eta)))

    sum_wq_SAq = 0.0
    for ell, idx in wq_pairs:
        sum_wq_SAq += (1.0 - math.log(ell) / log_y) * float(np.sum(g_vals[idx]))
    psi_identity = S_A - sum_wq_SAq / eta
    identity_rel = abs(psi_direct - psi_identity) / max(1.0, abs(psi_direct))

    omega_half = stats.big_omega_m - 1  # m = (p^2+1)/2 drops the single 2
    positive = eligible & (g_vals > 0.0) & (inner < eta)
    few_factors = positive & (omega_half <= params.r)

    # weight inequality on squarefree z-rough survivors with positive weight
    squarefree = stats.big_omega_m == stats.omega_m
    check = positive & squarefree
    log_m_half = np.log((stats.n[check].astype(np.float64)) ** 2 + 1.0) \
        - math.log(2.0)
    violations = int(np.sum(omega_half[check] >= eta + log_m_half / log_y))

    return ExperimentReport(
        name="weighted_sieve_experiment",
        params={"X": X, "alpha": params.alpha, "beta": params.beta,
                "delta": params.delta, "r": params.r, "weight": w.mode},
        counters={"survivors": int(np.sum(eligible)),
                  "positive_weight": int(np.sum(positive)),
                  "omega_le_r": int(np.sum(few_factors)),
                  "squarefree_checked": int(np.sum(check)),
                  "weight_bound_violations": violations},
        aggregates={"S_A": S_A, "psi_direct": psi_direct,
                    "psi_identity": psi_identity, "eta": eta,
                    "z": z, "y": y, "sum_wq_SAq": sum_wq_SAq},
        residuals={"psi_identity_rel": identity_rel},
        notes="; ".join(notes) if notes
        else "decomposition identity and weight bound checked exhaustively")


def almost_prime_survey(X: int, r: int, table: PrimeTable,
                        w: SmoothWeight = SHARP) -> ExperimentReport:
    """Count window primes p with at most r prime factors in (p^2 + 1)/2."""
    _check_window(X, min(X_FACTOR_CAP, table.limit // 2))
    if r < 1:
        raise ValueError(f"r must be >= 1, got {r}")
    stats = quadratic_window_stats(X, table)
    odd_prime = stats.is_prime_n & (stats.n % 2 == 1)
    omega_half = stats.big_omega_m - 1
    counters = {"window_odd_primes": int(np.sum(odd_prime))}
    for j in range(1, 7):
        counters[f"r={j}"] = int(np.sum(odd_prime & (omega_half <= j)))
    counters["count"] = int(np.sum(odd_prime & (omega_half <= r)))
    return ExperimentReport(
        name="almost_prime_survey",
        params={"X": X, "r": r, "weight": w.mode},
        counters=counters,
        aggregates={"fraction": counters["count"]
                    / max(1, counters["window_odd_primes"])},
        notes="counts are monotone in r by construction")


def gpf_survey(X: int, vartheta: float, table: PrimeTable) -> ExperimentReport:
    """Fraction of window primes p whose p^2 + 1 has a factor above p^vartheta."""
    _check_window(X, min(X_FACTOR_CAP, table.limit // 2))
    if not 0.0 < vartheta < 2.0:
        raise ValueError(f"vartheta must lie in (0, 2), got {vartheta}")
    stats = quadratic_window_stats(X, table)
    mask = stats.is_prime_n
    p = stats.n[mask].astype(np.float64)
    qualifies = stats.p_plus_m[mask].astype(np.float64) > p ** vartheta
    primes_total = int(np.sum(mask))
    count = int(np.sum(qualifies))
    return ExperimentReport(
        name="gpf_survey",
        params={"X": X, "vartheta": vartheta},
        counters={"window_primes": primes_total, "qualifiers": count},
        aggregates={"fraction": count / max(1, primes_total)},
        notes="report-grade positivity proxy for the greatest-factor bound")


def dartyge_survey(X: int, u: float, table: PrimeTable) -> ExperimentReport:
    """Distribution of log P+(n^2+1)/log n over n with spf(n) > n^(1/u)."""
    _check_window(X, min(X_FACTOR_CAP, table.limit // 2))
    if u <= 1.0:
        raise ValueError(f"u must exceed 1, got {u}")
    stats = quadratic_window_stats(X, table)
    qual = stats.spf_n.astype(np.float64) \
        > stats.n.astype(np.float64) ** (1.0 / u)
    n_q = stats.n[qual]
    ratio = np.log(stats.p_plus_m[qual].astype(np.float64)) \
        / np.log(n_q.astype(np.float64))

    spf_all = table.smallest_prime_factor
    omega_n = np.zeros(len(n_q), dtype=np.int64)
    for i, n_val in enumerate(map(int, n_q)):
        count = 0
        while n_val > 1:
            n_val //= int(spf_all[n_val])
            count += 1
        omega_n[i] = count

    gt1 = ratio > 1.0
    few = omega_n <= 11
    edges = np.arange(0.0, 2.3001, 0.1)
    hist, _ = np.histogram(ratio, bins=edges)
    counters = {"qualifiers": int(len(n_q)),
                "ratio_gt_1": int(np.sum(gt1)),
                "omega_n_le_11": int(np.sum(few)),
                "ratio_gt_1_and_omega_le_11": int(np.sum(gt1 & few))}
    for lo_edge, count in zip(edges[:-1], hist):
        counters[f"hist_{lo_edge:.1f}"] = int(count)
    return ExperimentReport(
        name="dartyge_survey",
        params={"X": X, "u": u},
        counters=counters,
        aggregates={"ratio_mean": float(np.mean(ratio)) if len(n_q) else 0.0,
                    "ratio_max": float(np.max(ratio)) if len(n_q) else 0.0},
        notes="histogram bins are [lo, lo + 0.1) over the ratio; report-grade")
