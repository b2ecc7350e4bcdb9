"""Classical number theory: primes, Montgomery form, Kaliski inversion oracle."""

from __future__ import annotations

import attrs

# deterministic Miller-Rabin witnesses, valid for all n < 3.3e24
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def is_probable_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41):
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
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


def prev_prime(limit: int) -> int:
    """Largest prime strictly below `limit`."""
    n = limit - 1
    if n == 2:
        return 2
    if n % 2 == 0:
        n -= 1
    while n >= 2:
        if is_probable_prime(n):
            return n
        n -= 2
    raise ValueError(f"no prime below {limit}")


def bit_length_prime(n: int) -> int:
    """Deterministic n-bit odd prime: the largest one below 2^n."""
    p = prev_prime(1 << n)
    if p < 1 << (n - 1):
        raise ValueError(f"no {n}-bit prime")
    return p


def sqrt_mod(a: int, p: int):
    """Square root of a mod odd prime p, or None if a is a non-residue."""
    a %= p
    if a == 0:
        return 0
    if pow(a, (p - 1) // 2, p) != 1:
        return None
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    # Tonelli-Shanks
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t = t * c % p
        r = r * b % p
    return r


# ---------------------------------------------------------------------------
# Montgomery representation: x' = x * 2^n mod p


def to_mont(x: int, n: int, p: int) -> int:
    return (x << n) % p


def from_mont(x: int, n: int, p: int) -> int:
    return x * pow(1 << n, -1, p) % p


def mont_mul_oracle(x: int, y: int, n: int, p: int) -> int:
    """Montgomery product: x * y * 2^-n mod p."""
    return x * y * pow(1 << n, -1, p) % p


def mont_t_table(w: int, p: int):
    """T[m] = (-m * p^-1 mod 2^w) * p: the multiple of p clearing the low
    w bits of an accumulator congruent to m mod 2^w."""
    inv_p = pow(p, -1, 1 << w)
    return [((-m * inv_p) % (1 << w)) * p for m in range(1 << w)]


# ---------------------------------------------------------------------------
# Kaliski almost-inverse, mirrored branch by branch on the circuit semantics


@attrs.frozen
class KaliskiStep:
    """Register contents after one iteration, plus the branch bits."""

    u: int
    v: int
    r: int
    s: int
    f: int
    a: int
    m: int
    swapped: bool


def _kaliski_iterate(u, v, r, s, f, p, n):
    m = 1 if (f and v == 0) else 0
    f ^= m
    a = 1 if (f and u % 2 == 0) else 0
    m ^= 1 if (f and not a and v % 2 == 0) else 0
    b = a ^ m
    if f and not b and v < u:
        a ^= 1
        m ^= 1
    if a:
        u, v = v, u
        r, s = s, r
    if f and not b:
        assert v >= u, "subtraction operand order broken"
        v = (v - u) % (1 << n)
        s_new = s + r
        assert s_new < (1 << n), "s+r overflowed the plain adder"
        s = s_new
    # b cleared by xoring post-branch a^m (comparison flips cancel)
    assert b == a ^ m, "b residue not cleared"
    assert v % 2 == 0, "halved register is odd"
    v //= 2
    r = 2 * r % p
    if a:
        u, v = v, u
        r, s = s, r
    # a cleared against the parity of the register sitting at s
    assert a == 1 - s % 2, "a residue not cleared"
    return KaliskiStep(u=u, v=v, r=r, s=s, f=f, a=a, m=m, swapped=bool(a))


def kaliski_oracle(x: int, p: int, n: int, want_trace: bool = False):
    """In-place Montgomery inverse: x -> x^-1 * 2^(2n) mod p.

    Runs the fixed 2n iterations with the same branch structure as the
    reversible circuit, asserting the conservation law p = u*s + v*r and
    the ancilla-clearing conditions at every step.  Returns the result,
    or (result, trace) with per-iteration register snapshots.
    """
    if not 0 < x < p:
        raise ValueError("input must lie in (0, p)")
    if p % 2 == 0 or p >> n or not p >> (n - 1):
        raise ValueError("p must be an odd n-bit integer")
    u, v, r, s, f = p, x, 0, 1, 1
    trace = []
    for _ in range(2 * n):
        step = _kaliski_iterate(u, v, r, s, f, p, n)
        u, v, r, s, f = step.u, step.v, step.r, step.s, step.f
        if f:
            assert u * s + v * r == p, "conservation law broken"
        trace.append(step)
    assert (u, v, s, f) == (1, 0, p, 0), "terminal register values wrong"
    result = (p - r) % p
    assert result == pow(x, -1, p) * pow(2, 2 * n, p) % p
    if want_trace:
        return result, trace
    return result


def kaliski_swaps_oracle(x: int, p: int, n: int) -> int:
    """Number of iterations whose conditional swaps fire."""
    _, trace = kaliski_oracle(x, p, n, want_trace=True)
    return sum(1 for step in trace if step.swapped)


def mont_inverse_oracle(x: int, n: int, p: int) -> int:
    """Montgomery-domain inverse: mont(a) -> mont(a^-1)."""
    return kaliski_oracle(x, p, n)
