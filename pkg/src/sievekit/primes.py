"""Integer-arithmetic layer: prime tables, factorization, roots of a^2+1 = 0 (mod d)."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import reduce

import numpy as np

MAX_SIEVE_LIMIT = 10 ** 9
MAX_ROOTS_MODULUS = 10 ** 12

# Witness set is deterministic for every n < 3.3e24, far past the 2^63 input cap.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


@dataclass(frozen=True)
class PrimeTable:
    """Primes up to limit plus a smallest-prime-factor array indexed 0..limit."""
    limit: int
    primes: np.ndarray
    smallest_prime_factor: np.ndarray

    def primes_between(self, lo: int, hi: int) -> np.ndarray:
        """Primes p with lo < p <= hi, as a slice of the table."""
        if hi > self.limit:
            raise ValueError(f"range end {hi} exceeds table limit {self.limit}")
        i = int(np.searchsorted(self.primes, lo, side="right"))
        j = int(np.searchsorted(self.primes, hi, side="right"))
        return self.primes[i:j]

    def prime_count(self, n: int) -> int:
        if n > self.limit:
            raise ValueError(f"{n} exceeds table limit {self.limit}")
        return int(np.searchsorted(self.primes, n, side="right"))


@dataclass(frozen=True)
class Factorization:
    """Prime factorization of n as ascending (prime, exponent) pairs."""
    n: int
    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        prod = 1
        for p, e in self.pairs:
            prod *= p ** e
        if prod != self.n:
            raise ValueError(f"factor product {prod} != {self.n}")


@dataclass(frozen=True)
class CongruenceRootSet:
    """Ascending residues a (mod d) with a^2 + 1 = 0 (mod d)."""
    modulus: int
    roots: tuple[int, ...] = field(default=())

    def __post_init__(self):
        for a in self.roots:
            if (a * a + 1) % self.modulus != 0 and self.modulus != 1:
                raise ValueError(f"{a}^2+1 not divisible by {self.modulus}")


def sieve_primes(limit: int) -> PrimeTable:
    """Sieve of Eratosthenes with a smallest-prime-factor side table."""
    if not 2 <= limit <= MAX_SIEVE_LIMIT:
        raise ValueError(f"limit must be in [2, {MAX_SIEVE_LIMIT}], got {limit}")
    spf = np.zeros(limit + 1, dtype=np.int32)
    for p in range(2, math.isqrt(limit) + 1):
        if spf[p] == 0:
            block = spf[p * p:: p]
            block[block == 0] = p
    idx = np.arange(limit + 1, dtype=np.int32)
    unmarked = spf == 0
    spf[unmarked] = idx[unmarked]  # remaining entries are prime (or 0, 1)
    spf[1] = 1
    primes = np.nonzero(spf == idx)[0][2:].astype(np.int64)
    return PrimeTable(limit=limit, primes=primes, smallest_prime_factor=spf)


def segmented_prime_count(lo: int, hi: int) -> int:
    """Count primes in (lo, hi] by an independent segmented sieve."""
    if hi <= lo:
        return 0
    root = math.isqrt(hi)
    base = np.ones(root + 1, dtype=bool)
    base[:2] = False
    for p in range(2, math.isqrt(root) + 1):
        if base[p]:
            base[p * p:: p] = False
    base_primes = np.nonzero(base)[0]
    count = 0
    span = 1 << 20
    for start in range(lo + 1, hi + 1, span):
        stop = min(start + span, hi + 1)
        seg = np.ones(stop - start, dtype=bool)
        for p in base_primes:
            first = max(p * p, (start + p - 1) // p * p)
            if first < stop:
                seg[first - start:: p] = False
        if start <= 1:
            seg[: min(2 - start, stop - start)] = False
        count += int(np.count_nonzero(seg))
    return count


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin for 64-bit inputs."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_brent(n: int) -> int:
    """Deterministic Brent-cycle factor of composite odd n (not a prime power)."""
    if n % 2 == 0:
        return 2
    for c in range(1, 256):
        y, m, g, r, q = 2, 128, 1, 1, 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
    raise ArithmeticError(f"cycle search exhausted on {n}")


_SMALL_TABLE = sieve_primes(10 ** 5)


def factorize(n: int, table: PrimeTable | None = None) -> Factorization:
    """Full factorization for 1 <= n < 2^63."""
    if not 1 <= n < 2 ** 63:
        raise ValueError(f"n must be in [1, 2^63), got {n}")
    src = n
    found: dict[int, int] = {}
    tab = table if table is not None else _SMALL_TABLE
    if n <= tab.limit:
        spf = tab.smallest_prime_factor
        while n > 1:
            p = int(spf[n])
            found[p] = found.get(p, 0) + 1
            n //= p
    else:
        for p in map(int, _SMALL_TABLE.primes):
            if p * p > n:
                break
            while n % p == 0:
                found[p] = found.get(p, 0) + 1
                n //= p
        stack = [n] if n > 1 else []
        while stack:
            m = stack.pop()
            if m == 1:
                continue
            if is_prime(m):
                found[m] = found.get(m, 0) + 1
                continue
            d = _pollard_brent(m)
            stack.extend((d, m // d))
    return Factorization(n=src, pairs=tuple(sorted(found.items())))


def multiplicative_suite(n: int, table: PrimeTable | None = None) -> dict[str, float]:
    """phi, mu, tau, von Mangoldt, Omega, and greatest prime factor of n."""
    fac = factorize(n, table)
    phi, mu, tau, omega_total = 1, 1, 1, 0
    for p, e in fac.pairs:
        phi *= (p - 1) * p ** (e - 1)
        mu = 0 if e > 1 else -mu
        tau *= e + 1
        omega_total += e
    lam = math.log(fac.pairs[0][0]) if len(fac.pairs) == 1 else 0.0
    p_plus = fac.pairs[-1][0] if fac.pairs else 1
    return {"phi": phi, "mu": mu, "tau": tau, "lambda_vM": lam,
            "Omega": omega_total, "P_plus": p_plus}


def jacobi(a: int, n: int) -> int:
    """Jacobi symbol (a/n) for odd n >= 1."""
    if n <= 0 or n % 2 == 0:
        raise ValueError(f"modulus must be odd positive, got {n}")
    a %= n
    result = 1
    while a != 0:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def sqrt_minus_one(p: int) -> int:
    """Smaller square root of -1 modulo a prime p = 1 (mod 4).

    c^((p-1)/2) = -1 for any non-residue c, so c^((p-1)/4) squares to -1.
    The non-residue search is an ascending scan, hence fully deterministic.
    """
    if p % 4 != 1:
        raise ValueError(f"p = {p} is not 1 mod 4")
    c = 2
    while jacobi(c, p) != -1:
        c += 1
    r = pow(c, (p - 1) // 4, p)
    return min(r, p - r)


def _lift_prime_power(p: int, k: int) -> list[int]:
    """Roots of a^2+1 = 0 (mod p^k) for odd prime p, via Hensel lifting."""
    if p % 4 == 3:
        return []
    r = sqrt_minus_one(p)
    mod = p
    for _ in range(k - 1):
        # f(r) = r^2+1; Newton step with f'(r) = 2r invertible mod odd p.
        mod_next = mod * p
        inv = pow(2 * r % mod_next, -1, mod_next)
        r = (r - (r * r + 1) * inv) % mod_next
        mod = mod_next
    return sorted((r, mod - r))


def roots_mod(d: int, table: PrimeTable | None = None) -> CongruenceRootSet:
    """All residues a (mod d) with a^2 + 1 = 0 (mod d)."""
    if not 1 <= d <= MAX_ROOTS_MODULUS:
        raise ValueError(f"modulus must be in [1, {MAX_ROOTS_MODULUS}], got {d}")
    if d == 1:
        return CongruenceRootSet(modulus=1, roots=(0,))
    parts: list[tuple[int, list[int]]] = []
    for p, e in factorize(d, table).pairs:
        if p == 2:
            local = [1] if e == 1 else []
        else:
            local = _lift_prime_power(p, e)
        if not local:
            return CongruenceRootSet(modulus=d, roots=())
        parts.append((p ** e, local))
    combined = [(1, 0)]
    for mod, local in parts:
        combined = [(m * mod, _crt(a, m, b, mod)) for m, a in combined for b in local]
    return CongruenceRootSet(modulus=d, roots=tuple(sorted(a for _, a in combined)))


def _crt(a: int, m: int, b: int, n: int) -> int:
    """Residue mod m*n matching a mod m and b mod n, for coprime m, n."""
    return (a + (b - a) * pow(m, -1, n) % n * m) % (m * n)


def rho(d: int, table: PrimeTable | None = None) -> int:
    """Number of solutions of a^2 + 1 = 0 (mod d); multiplicative in d."""
    if not 1 <= d <= MAX_ROOTS_MODULUS:
        raise ValueError(f"modulus must be in [1, {MAX_ROOTS_MODULUS}], got {d}")
    counts = []
    for p, e in factorize(d, table).pairs:
        if p == 2:
            counts.append(1 if e == 1 else 0)
        else:
            counts.append(2 if p % 4 == 1 else 0)
    return reduce(lambda x, y: x * y, counts, 1)


def x_flat(X: float) -> float:
    """The level X^(1/2) exp(-sqrt(log X)); increasing for X > e^4."""
    if X <= 1:
        raise ValueError(f"X must exceed 1, got {X}")
    return math.sqrt(X) * math.exp(-math.sqrt(math.log(X)))
