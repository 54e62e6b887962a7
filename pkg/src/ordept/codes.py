"""Linear-code model: syndromes, completion tables, encoding, BDD, file I/O.

Columns of H are packed into integers (bit i of a column value = row i) so a
partial syndrome is one XOR per flipped position.  The completion table maps a
packed syndrome value back to the matching column index — the function f: it
returns the unique j* with h_j* = s~, or "not found".  Extended BCH codes get
the fast path: the first r syndrome bits already determine the only possible
column, which is then verified against the remaining bits.
"""

import math

import numpy as np

from .errors import (
    LengthMismatch,
    MalformedHeader,
    RankDeficient,
    RowLengthMismatch,
)
from .gf import GaloisField, PRIMITIVE_POLYS, build_bch_parity_check, build_crc_parity_check

#: dense completion table allowed up to this many parity bits (2^20 entries)
DENSE_LIMIT = 20


def _rref(H):
    """Reduced row echelon form over GF(2); returns (R, pivot column list)."""
    R = H.copy().astype(np.uint8)
    m, n = R.shape
    pivots = []
    row = 0
    for col in range(n):
        if row == m:
            break
        hot = np.nonzero(R[row:, col])[0]
        if hot.size == 0:
            continue
        pr = row + hot[0]
        if pr != row:
            R[[row, pr]] = R[[pr, row]]
        # clear the column everywhere else
        others = np.nonzero(R[:, col])[0]
        for o in others:
            if o != row:
                R[o, :] ^= R[row, :]
        pivots.append(col)
        row += 1
    return R, pivots


class CompletionTable:
    """Syndrome-value -> column-index map with sentinel -1.

    Dense array when n-k <= DENSE_LIMIT, hash-based otherwise.  For extended
    BCH codes `bch_perm` maps the first r syndrome bits to the unique column
    candidate, verified against the full column value.
    """

    def __init__(self, col_vals, m, bch_r=None):
        self.m = m
        self.col_vals = col_vals  # list of python ints, lowest-index-wins source
        n = len(col_vals)
        if m <= DENSE_LIMIT:
            dense = np.full(1 << m, -1, dtype=np.int32)
            for j in range(n - 1, -1, -1):  # downward so the lowest index wins
                dense[col_vals[j]] = j
            self.dense = dense
            self.table = None
        else:
            self.dense = None
            table = {}
            for j, v in enumerate(col_vals):
                table.setdefault(v, j)
            self.table = table
        self.bch_perm = None
        self.bch_r = None
        if bch_r is not None:
            mask = (1 << bch_r) - 1
            perm = np.full(1 << bch_r, -1, dtype=np.int32)
            for j, v in enumerate(col_vals):
                prefix = v & mask
                if perm[prefix] != -1:
                    raise ValueError("first-r-bits column prefixes are not distinct")
                perm[prefix] = j
            assert (perm >= 0).all(), "fast-path permutation must be a bijection"
            self.bch_perm = perm
            self.bch_r = bch_r
        # sorted view for binary-search lookups (kernel-friendly, any m <= 64)
        order = sorted(range(n), key=lambda j: (col_vals[j], j))
        svals, sidx = [], []
        for j in order:
            if svals and svals[-1] == col_vals[j]:
                continue  # keep lowest index per duplicate value
            svals.append(col_vals[j])
            sidx.append(j)
        self.sorted_vals = np.array(svals, dtype=np.uint64)
        self.sorted_idx = np.array(sidx, dtype=np.int32)

    def lookup(self, value):
        """Generic route: dense array or hash."""
        if self.dense is not None:
            return int(self.dense[value])
        return self.table.get(value, -1)

    def lookup_fast(self, value):
        """Extended-BCH route: permutation on the first r bits plus verification."""
        j = int(self.bch_perm[value & ((1 << self.bch_r) - 1)])
        return j if self.col_vals[j] == value else -1


class LinearCode:
    """Binary linear block code defined by a full-rank parity-check matrix."""

    def __init__(self, H, name="", extended=None, gf=None, t=None):
        H = np.ascontiguousarray(np.asarray(H, dtype=np.uint8) & 1)
        m, n = H.shape
        if m >= n:
            raise RankDeficient(f"H has {m} rows for length {n}")
        R, pivots = _rref(H)
        if len(pivots) != m:
            raise RankDeficient(f"H rank {len(pivots)} < {m} rows")
        self.H = H
        self.n = n
        self.m = m
        self.k = n - m
        self.name = name or f"({n},{self.k})"
        if extended is None:
            extended = bool(H[m - 1].all())
        self.extended = extended
        self.gf = gf  # set for BCH-built codes; enables BDD / ORDEPTx
        self.t = t
        # packed column values (bit i = row i); python ints are exact for any m
        weights = (np.uint64(1) << np.arange(m, dtype=np.uint64))
        if m <= 64:
            self.col_vals = np.ascontiguousarray((H.astype(np.uint64).T * weights).sum(axis=1))
        else:
            self.col_vals = None
        self._col_ints = [int(v) for v in (
            self.col_vals if self.col_vals is not None
            else [int("".join(str(b) for b in H[::-1, j]), 2) for j in range(n)]
        )]
        # systematic encoder: pivot columns carry parity, the rest carry info
        self.parity_positions = np.array(pivots, dtype=np.int64)
        self.systematic_positions = np.array(
            sorted(set(range(n)) - set(pivots)), dtype=np.int64
        )
        self._parity_map = R[:, self.systematic_positions]  # m x k
        self._completion = None

    def __repr__(self):
        return f"LinearCode({self.name}, n={self.n}, k={self.k})"

    @property
    def completion(self):
        if self._completion is None:
            bch_r = None
            if self.extended and self.gf is not None and self.n == (1 << self.gf.r):
                bch_r = self.gf.r
            self._completion = CompletionTable(self._col_ints, self.m, bch_r=bch_r)
        return self._completion

    def syndrome_int(self, w):
        """Packed syndrome of a length-n bit vector."""
        if self.col_vals is not None:
            hot = self.col_vals[np.asarray(w, dtype=bool)]
            return int(np.bitwise_xor.reduce(hot)) if hot.size else 0
        s = 0
        for j in np.nonzero(w)[0]:
            s ^= self._col_ints[j]
        return s


def syndrome(code, w):
    """Syndrome bits of w; bit i = parity of AND(w, row i of H)."""
    w = np.asarray(w, dtype=np.uint8)
    if w.shape != (code.n,):
        raise LengthMismatch(f"|w| = {w.shape} but n = {code.n}")
    return (code.H @ w) & 1


def pack_syndrome(bits):
    value = 0
    for i in np.nonzero(np.asarray(bits, dtype=np.uint8))[0]:
        value |= 1 << int(i)
    return value


def complete(code, partial):
    """The completion function f: column index j* with h_j* = partial, else None.

    `partial` may be a syndrome bit vector or a packed integer.
    """
    value = partial if isinstance(partial, (int, np.integer)) else pack_syndrome(partial)
    table = code.completion
    j = table.lookup_fast(value) if table.bch_perm is not None else table.lookup(value)
    return None if j < 0 else j


def encode(code, info):
    """Systematic encoding: info bits land on the non-pivot positions."""
    info = np.asarray(info, dtype=np.uint8)
    if info.shape != (code.k,):
        raise LengthMismatch(f"|info| = {info.shape} but k = {code.k}")
    c = np.zeros(code.n, dtype=np.uint8)
    c[code.systematic_positions] = info
    c[code.parity_positions] = (code._parity_map @ info) & 1
    return c


def bch_code(r, t, extended=True, primitive_poly=None, name=None):
    """Convenience constructor for (extended) primitive BCH codes."""
    field = GaloisField(r, primitive_poly)
    H = build_bch_parity_check(field, t, extended=extended)
    n = H.shape[1]
    k = n - H.shape[0]
    label = name or f"{'e' if extended else ''}BCH({n},{k})"
    return LinearCode(H, name=label, extended=extended, gf=field, t=t)


def crc_code(gen_poly, n, name=None):
    H = build_crc_parity_check(gen_poly, n)
    label = name or f"CRC({n},{n - H.shape[0]})"
    return LinearCode(H, name=label, extended=False)


def _gf_chien_cubic(field, s1, s2, s3):
    """Roots of z^3 + s1 z^2 + s2 z + s3 over GF(2^r), by exhaustive search."""
    roots = []
    for i in range(field.order):
        z = int(field.exp_table[i])
        v = field.mul(field.mul(z, z) ^ s2, z) ^ field.mul(s1, field.mul(z, z)) ^ s3
        if v == 0:
            roots.append(z)
            if len(roots) == 3:
                break
    return roots


def bdd_error_positions(code, synd_int, t_sub):
    """Bounded-distance decoding of the sub-code made of the first t_sub*r rows
    of H (plus the parity row when extended): returns the unique error-position
    tuple of weight <= t_sub consistent with those syndrome bits, or None.

    Peterson's direct solution, t_sub in {1, 2, 3}.
    """
    field = code.gf
    r = field.r
    mask = (1 << r) - 1
    S = [0, 0, 0]
    for i in range(t_sub):
        S[i] = (synd_int >> (i * r)) & mask
    s1, s3, s5 = S
    sub_mask = (1 << (t_sub * r)) - 1
    if code.extended:
        par_bit = 1 << (code.t * r)
        sub_mask |= par_bit
        parity = 1 if synd_int & par_bit else 0
    else:
        parity = None
    s_sub = synd_int & sub_mask
    ext_pos = code.n - 1

    def verified(positions):
        acc = 0
        for j in positions:
            acc ^= code._col_ints[j]
        return (acc & sub_mask) == s_sub

    galois_sets = [()]  # nu_g = 0 hypothesis
    if s1 != 0:
        galois_sets.append((int(field.log_table[s1]),))  # nu_g = 1
        if t_sub >= 2:
            sigma2 = field.div(s3 ^ field.pow(s1, 3), s1)
            if sigma2 != 0:
                d = field.div(sigma2, field.mul(s1, s1))
                u = int(field.quad_table[d])
                if u >= 0:
                    x1 = field.mul(s1, u)
                    x2 = x1 ^ s1
                    if x1 and x2:
                        galois_sets.append(tuple(sorted(
                            (int(field.log_table[x1]), int(field.log_table[x2]))
                        )))
    if t_sub >= 3:
        den = s3 ^ field.pow(s1, 3)
        if den != 0:
            sigma2 = field.div(s5 ^ field.mul(field.mul(s1, s1), s3), den)
            sigma3 = den ^ field.mul(s1, sigma2)
            roots = _gf_chien_cubic(field, s1, sigma2, sigma3)
            if len(roots) == 3:
                galois_sets.append(tuple(sorted(int(field.log_table[x]) for x in roots)))

    best = None
    for gal in galois_sets:
        for ext in ((0,) if parity is None else (0, 1)):
            nu = len(gal) + ext
            if nu > t_sub:
                continue
            if parity is not None and nu % 2 != parity:
                continue
            positions = gal + ((ext_pos,) if ext else ())
            if verified(positions) and (best is None or nu < len(best)):
                best = positions
    return best


def bch_hard_decode(code, w, t_sub):
    """Hard-decision BDD with capability t_sub <= 3; returns codeword or None."""
    if code.gf is None:
        raise ValueError(f"{code.name} was not built as a BCH code")
    if not 1 <= t_sub <= 3 or t_sub > code.t:
        raise ValueError(f"t_sub={t_sub} unsupported (code t={code.t})")
    w = np.asarray(w, dtype=np.uint8)
    if w.shape != (code.n,):
        raise LengthMismatch(f"|w| = {w.shape} but n = {code.n}")
    errors = bdd_error_positions(code, code.syndrome_int(w), t_sub)
    if errors is None:
        return None
    c = w.copy()
    c[list(errors)] ^= 1
    return c


def load_parity_check(text, name="loaded"):
    """Parse the text parity-check format: 'n m' header then m rows of 0/1."""
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise MalformedHeader("empty file")
    head = lines[0].split()
    if len(head) != 2:
        raise MalformedHeader(f"expected 'n m', got {lines[0]!r}")
    try:
        n, m = int(head[0]), int(head[1])
    except ValueError as exc:
        raise MalformedHeader(f"non-integer header {lines[0]!r}") from exc
    if n <= 0 or m <= 0 or m >= n:
        raise MalformedHeader(f"bad dimensions n={n} m={m}")
    rows = lines[1:]
    if len(rows) != m:
        raise MalformedHeader(f"expected {m} rows, found {len(rows)}")
    H = np.zeros((m, n), dtype=np.uint8)
    for i, row in enumerate(rows):
        if len(row) != n or set(row) - {"0", "1"}:
            raise RowLengthMismatch(f"row {i} is not {n} characters of 0/1")
        H[i] = np.frombuffer(row.encode(), dtype=np.uint8) - ord("0")
    return LinearCode(H, name=name)


def save_parity_check(code):
    lines = [f"{code.n} {code.m}"]
    for i in range(code.m):
        lines.append("".join("1" if b else "0" for b in code.H[i]))
    return "\n".join(lines) + "\n"
