"""GF(2^r) arithmetic and parity-check matrix construction.

Field elements are integers in [0, 2^r) whose bits are polynomial coefficients
(bit i <-> x^i).  Multiplication goes through log/antilog tables built from a
primitive polynomial, which is validated at construction time by walking the
multiplicative cycle.
"""

import numpy as np

from .errors import CapacityExceeded, DegenerateDims, NonPrimitivePolynomial

#: Default primitive polynomials, bit i = coefficient of x^i.
PRIMITIVE_POLYS = {
    2: 0b111,
    3: 0b1011,
    4: 0b10011,
    5: 0b100101,
    6: 0b1000011,
    7: 0b10001001,
    8: 0b100011101,  # x^8 + x^4 + x^3 + x^2 + 1
    9: 0b1000010001,
    10: 0b10000001001,
    11: 0b100000000101,
    12: 0b1000001010011,
    13: 0b10000000011011,
    14: 0b100010001000011,
    15: 0b1000000000000011,
    16: 0b10001000000001011,
}


class GaloisField:
    """GF(2^r) with log/antilog tables.

    exp_table[i] = gamma^i for i in [0, 2^r - 2]; log_table[gamma^i] = i.
    """

    def __init__(self, r, primitive_poly=None):
        if not 2 <= r <= 16:
            raise ValueError(f"field degree r={r} outside supported range 2..16")
        if primitive_poly is None:
            primitive_poly = PRIMITIVE_POLYS[r]
        if primitive_poly.bit_length() != r + 1:
            raise ValueError(
                f"polynomial 0x{primitive_poly:x} does not have degree exactly {r}"
            )
        self.r = r
        self.poly = primitive_poly
        self.order = (1 << r) - 1  # size of the multiplicative group

        exp = np.zeros(self.order, dtype=np.int32)
        log = np.full(1 << r, -1, dtype=np.int32)
        x = 1
        for i in range(self.order):
            if log[x] != -1:
                # cycle closed early: x repeats before covering all nonzero elements
                raise NonPrimitivePolynomial(
                    f"0x{primitive_poly:x}: multiplicative cycle has length {i}, "
                    f"expected {self.order}"
                )
            exp[i] = x
            log[x] = i
            x <<= 1
            if x & (1 << r):
                x ^= primitive_poly
        if x != 1:
            raise NonPrimitivePolynomial(
                f"0x{primitive_poly:x}: gamma^{self.order} = {x}, expected 1"
            )
        self.exp_table = exp
        self.log_table = log
        self._quad_table = None

    def mul(self, a, b):
        if a == 0 or b == 0:
            return 0
        s = int(self.log_table[a]) + int(self.log_table[b])
        if s >= self.order:
            s -= self.order
        return int(self.exp_table[s])

    def pow(self, a, e):
        if a == 0:
            return 0 if e else 1
        return int(self.exp_table[(int(self.log_table[a]) * e) % self.order])

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in GF(2^r)")
        return int(self.exp_table[(self.order - int(self.log_table[a])) % self.order])

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    @property
    def quad_table(self):
        """quad_table[d] = a solution u of u^2 + u = d, or -1 when Tr(d) = 1.

        Used to solve quadratic error-locator polynomials in O(1).
        """
        if self._quad_table is None:
            tab = np.full(1 << self.r, -1, dtype=np.int32)
            for u in range(1 << self.r):
                d = self.mul(u, u) ^ u
                if tab[d] == -1:
                    tab[d] = u
            self._quad_table = tab
        return self._quad_table


def gf_build(r, primitive_poly=None):
    """Build GF(2^r); raises NonPrimitivePolynomial for a bad polynomial."""
    return GaloisField(r, primitive_poly)


def gf_mul(field, a, b):
    return field.mul(a, b)


def build_bch_parity_check(field, t, extended=True):
    """Parity-check matrix of a (possibly extended) primitive BCH code.

    Column j (j < 2^r - 1) stacks the r-bit representations of gamma^j,
    gamma^(3j), ..., gamma^((2t-1)j); extended codes append an all-ones parity
    row and an extension column that is zero in the Galois rows and 1 in the
    parity row.  Row blocks are ordered least-significant coefficient first.
    """
    r = field.r
    if t < 1:
        raise ValueError("t must be >= 1")
    if t * r + 1 >= (1 << r):
        raise CapacityExceeded(f"t*r + 1 = {t * r + 1} >= 2^r = {1 << r}")
    n_cyc = (1 << r) - 1
    n = n_cyc + 1 if extended else n_cyc
    m = t * r + 1 if extended else t * r
    H = np.zeros((m, n), dtype=np.uint8)
    for i in range(1, t + 1):
        power = 2 * i - 1
        base = (i - 1) * r
        for j in range(n_cyc):
            elem = int(field.exp_table[(power * j) % field.order])
            for b in range(r):
                H[base + b, j] = (elem >> b) & 1
    if extended:
        H[m - 1, :] = 1  # all-ones parity row; extension column gets 1 here too
    return H


def build_crc_parity_check(gen_poly, n):
    """Parity-check matrix of a CRC code: column j = x^(n-1-j) mod gen_poly."""
    deg = gen_poly.bit_length() - 1
    if deg < 1:
        raise DegenerateDims(f"generator 0x{gen_poly:x} has degree {deg}")
    if n <= deg:
        raise DegenerateDims(f"n={n} <= deg(gen_poly)={deg}")
    H = np.zeros((deg, n), dtype=np.uint8)
    rem = 1  # x^0
    for j in range(n - 1, -1, -1):
        for b in range(deg):
            H[b, j] = (rem >> b) & 1
        rem <<= 1  # multiply by x
        if rem & (1 << deg):
            rem ^= gen_poly
    return H
