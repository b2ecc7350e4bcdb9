"""Short-Weierstrass curve arithmetic over prime fields, plus the discrete-log
postprocessing and the window tables used by the lookup-based adders."""

from __future__ import annotations

import functools

import attrs

from . import numtheory

# points are (x, y) tuples; None is the neutral element


@attrs.frozen
class CurveParams:
    """y^2 = x^3 + a*x + b over F_p; r is the order of the generator g."""

    p: int
    a: int
    b: int
    g: tuple | None = None
    r: int | None = None
    name: str = ""

    @property
    def n_bits(self):
        return self.p.bit_length()


def on_curve(pt, curve: CurveParams) -> bool:
    if pt is None:
        return True
    x, y = pt
    return (y * y - (x * x * x + curve.a * x + curve.b)) % curve.p == 0


def ec_neg(pt, curve: CurveParams):
    if pt is None:
        return None
    x, y = pt
    return (x, (-y) % curve.p)


def ec_add(p1, p2, curve: CurveParams):
    if p1 is None:
        return p2
    if p2 is None:
        return p1
    p = curve.p
    x1, y1 = p1
    x2, y2 = p2
    if x1 == x2:
        if (y1 + y2) % p == 0:
            return None
        lam = (3 * x1 * x1 + curve.a) * pow(2 * y1, -1, p) % p
    else:
        lam = (y2 - y1) * pow(x2 - x1, -1, p) % p
    x3 = (lam * lam - x1 - x2) % p
    y3 = (lam * (x1 - x3) - y1) % p
    return (x3, y3)


def scalar_mul(k: int, pt, curve: CurveParams):
    if pt is None:
        return None
    if k < 0:
        return scalar_mul(-k, ec_neg(pt, curve), curve)
    acc = None
    add = pt
    while k:
        if k & 1:
            acc = ec_add(acc, add, curve)
        add = ec_add(add, add, curve)
        k >>= 1
    return acc


def dlog_postprocess(y1: int, y2: int, r: int) -> int:
    """Recover l from the measured exponent pair: l = -y2 * y1^-1 mod r."""
    return (-y2 * pow(y1, -1, r)) % r


# ---------------------------------------------------------------------------
# builtin curves

TOY_CURVE = CurveParams(p=17, a=2, b=2, g=(5, 1), r=19, name="toy-p17")

SECP256K1 = CurveParams(
    p=0xFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFEFFFFFC2F,
    a=0,
    b=7,
    g=(
        0x79BE667EF9DCBBAC55A06295CE870B07029BFCDB2DCE28D959F2815B16F81798,
        0x483ADA7726A3C4655DA4FBFC0E1108A8FD17B448A68554199C47D08FFB10D4B8,
    ),
    r=0xFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFEBAAEDCE6AF48A03BBFD25E8CD0364141,
    name="secp256k1",
)


@functools.lru_cache(maxsize=None)
def synthetic_curve(n: int) -> CurveParams:
    """Deterministic n-bit curve for table construction and counting: the
    largest n-bit prime, a=2, and the first b>=2 giving a point with x=2."""
    p = numtheory.bit_length_prime(n)
    a = 2
    x = 2
    for b in range(2, p):
        rhs = (x * x * x + a * x + b) % p
        y = numtheory.sqrt_mod(rhs, p)
        if y is not None and y != 0:
            g = (x, min(y, p - y))
            return CurveParams(p=p, a=a, b=b, g=g, name=f"synthetic-{n}")
    raise ValueError(f"no synthetic curve at {n} bits")


# ---------------------------------------------------------------------------
# window tables for the lookup adders

POINT_AT_ZERO = (0, 0)  # encoding of the neutral element inside tables


@attrs.frozen
class WindowSpec:
    """One window of a scalar multiplication by base point `base`.

    The stored table covers magnitudes only: entry m (m>=1) holds
    m * 2^shift * base, entry 0 holds 2^(width-1) * 2^shift * base; the
    circuit's sign trick maps the window value i to the magnitude
    |i - 2^(width-1)| and negates y when i is below the offset.
    """

    width: int
    shift: int
    base: tuple
    curve: CurveParams

    @property
    def offset_point(self):
        # the constant the offset trick subtracts from this window
        return scalar_mul(1 << (self.shift + self.width - 1), self.base, self.curve)

    def magnitude_point(self, m: int):
        mag = m if m else 1 << (self.width - 1)
        return scalar_mul(mag << self.shift, self.base, self.curve)

    def table_points(self):
        half = 1 << (self.width - 1)
        step = scalar_mul(1 << self.shift, self.base, self.curve)
        pts = [None] * half
        acc = None
        for m in range(1, half):
            acc = ec_add(acc, step, self.curve)
            pts[m] = acc
        pts[0] = ec_add(acc, step, self.curve) if half > 1 else step
        return pts

    def window_point(self, i: int):
        """The point this window's circuit actually adds for value i."""
        half = 1 << (self.width - 1)
        msb, low = divmod(i, half)
        if msb:
            pt = self.magnitude_point(low)
        else:
            mag_index = (-low) % half
            pt = ec_neg(self.magnitude_point(mag_index), self.curve)
        return pt

    def is_exceptional(self, i: int) -> bool:
        # value at the offset centre loads 2^(width-1)*base instead of the
        # neutral element; the generic-case predicate excludes it
        return i == 1 << (self.width - 1)


def scalar_windows(n_e: int, w_e: int, base, curve: CurveParams):
    """Windows covering an n_e-bit scalar, the last one narrowed."""
    specs = []
    shift = 0
    while shift < n_e:
        width = min(w_e, n_e - shift)
        specs.append(WindowSpec(width=width, shift=shift, base=base, curve=curve))
        shift += width
    return specs


def window_values(k: int, specs) -> list:
    return [(k >> s.shift) & ((1 << s.width) - 1) for s in specs]


def generic_case_ok(q, t, curve: CurveParams):
    """Predicate for the lookup adder: table point t added to accumulator q.

    Excludes the exceptional configurations of the in-place formulae:
    neutral operands, equal x coordinates, a zero result abscissa and a
    result colliding with the table point's abscissa.
    """
    if t is None or q is None:
        return False
    if t[1] == 0:
        # 2-torsion table point: its in-register negation is not involutive
        return False
    if t[0] == q[0]:
        return False
    r = ec_add(q, t, curve)
    if r is None or r[0] == 0:
        return False
    if r[0] == t[0]:
        return False
    return True
