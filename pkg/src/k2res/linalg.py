"""Exact linear algebra over the rationals and prime fields.

Matrices over GF(p) are dense numpy int64 arrays with entries in [0, p);
matrices over Q are lists of Fraction rows.  Pivoting is deterministic
(leftmost nonzero column, topmost row, rows kept in input order), so the
reduced row echelon form -- and everything derived from it -- is
bit-identical across runs and platforms.  No floating point anywhere.

The ExactMatrix wrapper is the public surface; the _gf* / _qq* helpers
are the raw kernels the resolution engine calls directly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import InputError

DEFAULT_PRIME = 32003


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class FieldSpec:
    """Ground field: exact rationals or a prime field GF(p), p < 2^31."""

    kind: str  # "rationals" | "prime"
    p: int | None = None

    def __post_init__(self):
        if self.kind == "rationals":
            if self.p is not None:
                raise InputError("rationals take no modulus")
        elif self.kind == "prime":
            if self.p is None or self.p >= 2**31 or not is_prime(self.p):
                raise InputError(f"not a prime < 2^31: {self.p}")
        else:
            raise InputError(f"unknown field kind {self.kind!r}")

    @staticmethod
    def rationals() -> "FieldSpec":
        return FieldSpec("rationals")

    @staticmethod
    def gf(p: int) -> "FieldSpec":
        return FieldSpec("prime", p)

    @property
    def is_prime_field(self) -> bool:
        return self.kind == "prime"

    def coerce(self, x):
        """Bring an int/Fraction into the field's element representation."""
        if self.is_prime_field:
            if isinstance(x, Fraction):
                if x.denominator % self.p == 0:
                    raise InputError(f"denominator divisible by {self.p}")
                return (x.numerator * pow(x.denominator, -1, self.p)) % self.p
            return int(x) % self.p
        if isinstance(x, Fraction):
            return x
        return Fraction(x)

    def __str__(self):
        return "QQ" if self.kind == "rationals" else f"GF({self.p})"


def parse_field(text: str) -> FieldSpec:
    """Parse 'q' / 'qq' / 'gf:p' / a bare prime."""
    t = text.strip().lower()
    if t in ("q", "qq", "rationals"):
        return FieldSpec.rationals()
    if t.startswith("gf:"):
        return FieldSpec.gf(int(t[3:]))
    if t.isdigit():
        return FieldSpec.gf(int(t))
    raise InputError(f"cannot parse field {text!r}")


# ---------------------------------------------------------------------------
# GF(p) dense kernels (numpy int64, entries already reduced mod p)
# ---------------------------------------------------------------------------

def gf_rref(a: np.ndarray, p: int, rank_only: bool = False):
    """Reduced row echelon form mod p.

    Returns (R, pivots).  With rank_only=True, elimination above pivots is
    skipped (R is then only echelon, pivots still exact).
    """
    R = np.array(a, dtype=np.int64) % p
    m, n = R.shape
    pivots: list[int] = []
    r = 0
    for c in range(n):
        if r == m:
            break
        nz = np.nonzero(R[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            R[[r, i]] = R[[i, r]]
        inv = pow(int(R[r, c]), p - 2, p)
        if inv != 1:
            R[r, c:] = (R[r, c:] * inv) % p
        col = R[r + 1:, c]
        rows = np.nonzero(col)[0]
        if rows.size:
            R[r + 1 + rows, c:] = (R[r + 1 + rows, c:] - np.outer(col[rows], R[r, c:])) % p
        pivots.append(c)
        r += 1
    if not rank_only:
        for k in range(len(pivots) - 1, -1, -1):
            c = pivots[k]
            col = R[:k, c]
            rows = np.nonzero(col)[0]
            if rows.size:
                R[rows, c:] = (R[rows, c:] - np.outer(col[rows], R[k, c:])) % p
    return R, pivots


def gf_rank(a: np.ndarray, p: int) -> int:
    if a.size == 0:
        return 0
    return len(gf_rref(a, p, rank_only=True)[1])


def gf_kernel(a: np.ndarray, p: int) -> list[np.ndarray]:
    """Basis of the right null space {v : a @ v = 0}, free columns in order."""
    m, n = a.shape
    if n == 0:
        return []
    if m == 0:
        return [_unit(n, j) for j in range(n)]
    R, pivots = gf_rref(a, p)
    pivset = set(pivots)
    free = [j for j in range(n) if j not in pivset]
    basis = []
    for j in free:
        v = np.zeros(n, dtype=np.int64)
        v[j] = 1
        for r, c in enumerate(pivots):
            v[c] = (-int(R[r, j])) % p
        basis.append(v)
    return basis


def _unit(n: int, j: int) -> np.ndarray:
    v = np.zeros(n, dtype=np.int64)
    v[j] = 1
    return v


def gf_matmul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    # max |sum| <= k * (p-1)^2; guard against int64 overflow for huge k
    k = a.shape[1]
    if k and k * (p - 1) * (p - 1) >= 2**62:
        out = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
        step = max(1, 2**62 // ((p - 1) * (p - 1)))
        for s in range(0, k, step):
            out = (out + a[:, s:s + step] @ b[s:s + step, :]) % p
        return out
    return (a @ b) % p


def gf_solve(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray | None:
    """One solution x of a @ x = b, or None.  Deterministic (free vars = 0)."""
    m, n = a.shape
    aug = np.concatenate([a, b.reshape(m, 1)], axis=1)
    R, pivots = gf_rref(aug, p)
    if n in pivots:
        return None
    x = np.zeros(n, dtype=np.int64)
    for r, c in enumerate(pivots):
        x[c] = R[r, n]
    return x


class GFRowReducer:
    """Incremental row-space tracker over GF(p).

    Stored rows are kept fully reduced against each other (true RREF), so
    reducing an incoming vector is a single coefficient readoff at the
    pivot columns plus one matrix-vector product.  Deterministic.
    """

    def __init__(self, ncols: int, p: int):
        self.ncols = ncols
        self.p = p
        self._buf = np.zeros((16, max(ncols, 1)), dtype=np.int64)
        self._n = 0
        self.pivots: dict[int, int] = {}
        self._pivcols: list[int] = []  # pivot column of each stored row

    @property
    def rank(self) -> int:
        return self._n

    @property
    def rows_array(self) -> np.ndarray:
        return self._buf[: self._n, : self.ncols]

    def row(self, r: int) -> np.ndarray:
        return self._buf[r, : self.ncols]

    def _append(self, v: np.ndarray, lead: int) -> None:
        if self._n == self._buf.shape[0]:
            newbuf = np.zeros((2 * self._buf.shape[0], self._buf.shape[1]), dtype=np.int64)
            newbuf[: self._n] = self._buf[: self._n]
            self._buf = newbuf
        self._buf[self._n, : self.ncols] = v
        self.pivots[lead] = self._n
        self._pivcols.append(lead)
        self._n += 1

    def reduce(self, v: np.ndarray) -> np.ndarray:
        v = np.asarray(v, dtype=np.int64) % self.p
        if self._n:
            coeffs = v[self._pivcols]
            if np.any(coeffs):
                v = (v - coeffs @ self.rows_array) % self.p
        return v

    def express(self, v: np.ndarray):
        """(coefficients-by-row, remainder); remainder avoids all pivots."""
        v = np.asarray(v, dtype=np.int64) % self.p
        if not self._n:
            return {}, v
        coeffs = v[self._pivcols]
        nz = np.nonzero(coeffs)[0]
        if nz.size:
            v = (v - coeffs @ self.rows_array) % self.p
        return {int(r): int(coeffs[r]) for r in nz}, v

    def express_block(self, m: np.ndarray):
        """Batched express: (coefficient matrix, remainder matrix)."""
        m = np.asarray(m, dtype=np.int64) % self.p
        if not self._n:
            return np.zeros((m.shape[0], 0), dtype=np.int64), m
        coeffs = m[:, self._pivcols]
        rem = (m - coeffs @ self.rows_array) % self.p
        return coeffs, rem

    def seed_rref(self, R: np.ndarray, pivots) -> None:
        """Adopt rows of an existing RREF (trusted; used for bulk loads)."""
        assert self._n == 0
        k = len(pivots)
        if k == 0:
            return
        need = 16
        while need < k:
            need *= 2
        if self._buf.shape[0] < need:
            self._buf = np.zeros((need, max(self.ncols, 1)), dtype=np.int64)
        self._buf[:k, : self.ncols] = R[:k, : self.ncols]
        self._n = k
        self._pivcols = [int(c) for c in pivots]
        self.pivots = {int(c): i for i, c in enumerate(pivots)}

    def insert(self, v: np.ndarray) -> bool:
        v = self.reduce(v)
        nz = np.nonzero(v)[0]
        if nz.size == 0:
            return False
        lead = int(nz[0])
        inv = pow(int(v[lead]), self.p - 2, self.p)
        if inv != 1:
            v = (v * inv) % self.p
        if self._n:
            col = self.rows_array[:, lead]
            rows = np.nonzero(col)[0]
            if rows.size:
                self._buf[rows, : self.ncols] = \
                    (self.rows_array[rows] - np.outer(col[rows], v)) % self.p
        self._append(v, lead)
        return True

    def insert_block(self, m: np.ndarray) -> int:
        added = 0
        for row in m:
            if self.insert(row):
                added += 1
        return added


class SparseRowReducer:
    """Row-space tracker with dict rows, for very wide sparse systems."""

    def __init__(self, p: int):
        self.p = p
        self.pivots: dict[int, dict[int, int]] = {}  # pivot col -> row

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, row: dict[int, int]) -> dict[int, int]:
        p = self.p
        row = {c: v % p for c, v in row.items() if v % p}
        while row:
            c = min(row)
            piv = self.pivots.get(c)
            if piv is None:
                return row
            f = row[c]
            for cc, vv in piv.items():
                nv = (row.get(cc, 0) - f * vv) % p
                if nv:
                    row[cc] = nv
                else:
                    row.pop(cc, None)
        return row

    def insert(self, row: dict[int, int]) -> bool:
        row = self.reduce(row)
        if not row:
            return False
        c = min(row)
        inv = pow(row[c], self.p - 2, self.p)
        if inv != 1:
            row = {cc: (vv * inv) % self.p for cc, vv in row.items()}
        self.pivots[c] = row
        return True

    def back_substitute(self) -> None:
        """Fully reduce pivot rows against each other (true sparse RREF)."""
        for c in sorted(self.pivots, reverse=True):
            piv = self.pivots[c]
            for c2 in sorted(self.pivots):
                if c2 >= c:
                    break
                row = self.pivots[c2]
                f = row.get(c)
                if f:
                    for cc, vv in piv.items():
                        nv = (row.get(cc, 0) - f * vv) % self.p
                        if nv:
                            row[cc] = nv
                        else:
                            row.pop(cc, None)


def projection_row(seed: int, coord: int, width: int, p: int) -> np.ndarray:
    """Deterministic pseudo-random row for the compressed-kernel path."""
    gen = np.random.Generator(np.random.Philox(key=np.array([seed, coord], dtype=np.uint64)))
    return gen.integers(0, p, size=width, dtype=np.int64)


# ---------------------------------------------------------------------------
# Field-generic toolkit on raw numpy arrays (int64 mod p, or object/Fraction)
# ---------------------------------------------------------------------------

def obj_rref(a: np.ndarray, rank_only: bool = False):
    """RREF of an object-dtype (Fraction) array; mirrors gf_rref."""
    R = a.copy()
    m, n = R.shape
    pivots: list[int] = []
    r = 0
    for c in range(n):
        if r == m:
            break
        sel = None
        for i in range(r, m):
            if R[i, c] != 0:
                sel = i
                break
        if sel is None:
            continue
        if sel != r:
            R[[r, sel]] = R[[sel, r]]
        inv = Fraction(1) / R[r, c]
        if inv != 1:
            R[r, c:] = R[r, c:] * inv
        for i in range(r + 1, m):
            if R[i, c] != 0:
                R[i, c:] = R[i, c:] - R[i, c] * R[r, c:]
        pivots.append(c)
        r += 1
    if not rank_only:
        for k in range(len(pivots) - 1, -1, -1):
            c = pivots[k]
            for i in range(k):
                if R[i, c] != 0:
                    R[i, c:] = R[i, c:] - R[i, c] * R[k, c:]
    return R, pivots


class ObjRowReducer:
    """Object-dtype (Fraction) analog of GFRowReducer (full RREF rows)."""

    def __init__(self, ncols: int):
        self.ncols = ncols
        self._rows: list[np.ndarray] = []
        self.pivots: dict[int, int] = {}
        self._pivcols: list[int] = []

    @property
    def rank(self) -> int:
        return len(self._rows)

    @property
    def rows_array(self) -> np.ndarray:
        out = np.empty((len(self._rows), self.ncols), dtype=object)
        for i, r in enumerate(self._rows):
            out[i, :] = r
        return out

    def row(self, r: int) -> np.ndarray:
        return self._rows[r]

    def reduce(self, v: np.ndarray) -> np.ndarray:
        v = v.copy()
        for c in self._pivcols:
            if v[c] != 0:
                v = v - v[c] * self._rows[self.pivots[c]]
        return v

    def express(self, v: np.ndarray):
        v = v.copy()
        coeffs: dict[int, object] = {}
        for c in self._pivcols:
            if v[c] != 0:
                r = self.pivots[c]
                coeffs[r] = v[c]
                v = v - v[c] * self._rows[r]
        return coeffs, v

    def express_block(self, m: np.ndarray):
        out = np.empty((m.shape[0], len(self._rows)), dtype=object)
        out[...] = Fraction(0)
        rems = []
        for i in range(m.shape[0]):
            coeffs, rem = self.express(m[i])
            for r, c in coeffs.items():
                out[i, r] = c
            rems.append(rem)
        remm = np.empty((m.shape[0], self.ncols), dtype=object)
        for i, r in enumerate(rems):
            remm[i, :] = r
        return out, remm

    def seed_rref(self, R: np.ndarray, pivots) -> None:
        assert not self._rows
        for i, c in enumerate(pivots):
            self._rows.append(R[i].copy())
            self.pivots[int(c)] = i
            self._pivcols.append(int(c))

    def insert(self, v: np.ndarray) -> bool:
        v = self.reduce(v)
        lead = next((j for j in range(self.ncols) if v[j] != 0), None)
        if lead is None:
            return False
        inv = Fraction(1) / v[lead]
        if inv != 1:
            v = v * inv
        for r in self._rows:
            if r[lead] != 0:
                r -= r[lead] * v
        self.pivots[lead] = len(self._rows)
        self._rows.append(v)
        self._pivcols.append(lead)
        return True

    def insert_block(self, m) -> int:
        return sum(1 for row in m if self.insert(row))


class FieldOps:
    """Per-field array toolkit so engine code is written once.

    GF(p): int64 arrays, entries in [0, p).  Rationals: object arrays of
    Fraction.  All operations exact and deterministic.
    """

    def __init__(self, field: FieldSpec):
        self.field = field
        self.p = field.p if field.is_prime_field else None
        self.dtype = np.int64 if field.is_prime_field else object

    # construction
    def zeros(self, *shape) -> np.ndarray:
        if self.p:
            return np.zeros(shape, dtype=np.int64)
        a = np.empty(shape, dtype=object)
        a[...] = Fraction(0)
        return a

    def array(self, rows) -> np.ndarray:
        if self.p:
            return np.array(rows, dtype=np.int64) % self.p
        a = np.empty((len(rows), len(rows[0]) if rows else 0), dtype=object)
        for i, r in enumerate(rows):
            for j, x in enumerate(r):
                a[i, j] = Fraction(x)
        return a

    def unit(self, n: int, j: int) -> np.ndarray:
        v = self.zeros(n)
        v[j] = self.one
        return v

    @property
    def one(self):
        return 1 if self.p else Fraction(1)

    def coerce(self, x):
        return self.field.coerce(x)

    def norm(self, a: np.ndarray) -> np.ndarray:
        return a % self.p if self.p else a

    # linear algebra
    def rref(self, a: np.ndarray, rank_only: bool = False):
        if self.p:
            return gf_rref(a, self.p, rank_only=rank_only)
        return obj_rref(a, rank_only=rank_only)

    def rank(self, a: np.ndarray) -> int:
        if a.size == 0:
            return 0
        return len(self.rref(a, rank_only=True)[1])

    def kernel(self, a: np.ndarray) -> list[np.ndarray]:
        """Right null space basis, free columns in order."""
        m, n = a.shape
        if n == 0:
            return []
        if m == 0:
            return [self.unit(n, j) for j in range(n)]
        R, pivots = self.rref(a)
        pivset = set(pivots)
        free = [j for j in range(n) if j not in pivset]
        out = []
        for j in free:
            v = self.zeros(n)
            v[j] = self.one
            for r, c in enumerate(pivots):
                v[c] = -R[r, j] % self.p if self.p else -R[r, j]
            out.append(v)
        return out

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self.p:
            return gf_matmul(a, b, self.p)
        return a @ b

    def solve(self, a: np.ndarray, b: np.ndarray) -> np.ndarray | None:
        """One x with a @ x = b, or None (free variables set to zero)."""
        if self.p:
            return gf_solve(a, b, self.p)
        m, n = a.shape
        aug = np.concatenate([a, b.reshape(m, 1)], axis=1)
        R, pivots = obj_rref(aug)
        if n in pivots:
            return None
        x = self.zeros(n)
        for r, c in enumerate(pivots):
            x[c] = R[r, n]
        return x

    def reducer(self, ncols: int):
        return GFRowReducer(ncols, self.p) if self.p else ObjRowReducer(ncols)


# ---------------------------------------------------------------------------
# Rational kernels (Fractions, list-of-rows; small scale only)
# ---------------------------------------------------------------------------

def qq_rref(rows: list[list[Fraction]]):
    R = [list(r) for r in rows]
    m = len(R)
    n = len(R[0]) if m else 0
    pivots: list[int] = []
    r = 0
    for c in range(n):
        if r == m:
            break
        sel = None
        for i in range(r, m):
            if R[i][c] != 0:
                sel = i
                break
        if sel is None:
            continue
        if sel != r:
            R[r], R[sel] = R[sel], R[r]
        inv = Fraction(1, 1) / R[r][c]
        if inv != 1:
            R[r] = [x * inv for x in R[r]]
        for i in range(m):
            if i != r and R[i][c] != 0:
                f = R[i][c]
                R[i] = [x - f * y for x, y in zip(R[i], R[r])]
        pivots.append(c)
        r += 1
    return R, pivots


def qq_kernel(rows: list[list[Fraction]], ncols: int) -> list[list[Fraction]]:
    if ncols == 0:
        return []
    if not rows:
        return [[Fraction(int(i == j)) for i in range(ncols)] for j in range(ncols)]
    R, pivots = qq_rref(rows)
    pivset = set(pivots)
    free = [j for j in range(ncols) if j not in pivset]
    basis = []
    for j in free:
        v = [Fraction(0)] * ncols
        v[j] = Fraction(1)
        for r, c in enumerate(pivots):
            v[c] = -R[r][j]
        basis.append(v)
    return basis


class QQRowReducer:
    def __init__(self, ncols: int):
        self.ncols = ncols
        self.rows: list[list[Fraction]] = []
        self.pivots: dict[int, int] = {}

    @property
    def rank(self) -> int:
        return len(self.rows)

    def reduce(self, v):
        v = [Fraction(x) for x in v]
        for c in range(self.ncols):
            if v[c] != 0:
                r = self.pivots.get(c)
                if r is None:
                    return v
                f = v[c]
                v = [x - f * y for x, y in zip(v, self.rows[r])]
        return v

    def insert(self, v) -> bool:
        v = self.reduce(v)
        lead = next((c for c in range(self.ncols) if v[c] != 0), None)
        if lead is None:
            return False
        inv = Fraction(1) / v[lead]
        if inv != 1:
            v = [x * inv for x in v]
        self.pivots[lead] = len(self.rows)
        self.rows.append(v)
        return True

    def insert_block(self, rows) -> int:
        return sum(1 for r in rows if self.insert(r))


# ---------------------------------------------------------------------------
# Public matrix type
# ---------------------------------------------------------------------------

@dataclass
class ExactMatrix:
    """Dense matrix over a FieldSpec.  Immutable by convention."""

    field: FieldSpec
    nrows: int
    ncols: int
    _gf: np.ndarray | None = None
    _qq: list[list[Fraction]] | None = None

    @staticmethod
    def from_rows(field: FieldSpec, rows) -> "ExactMatrix":
        rows = [list(r) for r in rows]
        m = len(rows)
        n = len(rows[0]) if m else 0
        for r in rows:
            if len(r) != n:
                raise InputError("ragged rows")
        if field.is_prime_field:
            data = np.array([[field.coerce(x) for x in r] for r in rows],
                            dtype=np.int64).reshape(m, n)
            return ExactMatrix(field, m, n, _gf=data)
        data_q = [[field.coerce(x) for x in r] for r in rows]
        return ExactMatrix(field, m, n, _qq=data_q)

    @staticmethod
    def zeros(field: FieldSpec, m: int, n: int) -> "ExactMatrix":
        return ExactMatrix.from_rows(field, [[0] * n for _ in range(m)]) if m else \
            ExactMatrix(field, 0, n, _gf=np.zeros((0, n), dtype=np.int64) if field.is_prime_field else None,
                        _qq=None if field.is_prime_field else [])

    @staticmethod
    def identity(field: FieldSpec, n: int) -> "ExactMatrix":
        return ExactMatrix.from_rows(field, [[int(i == j) for j in range(n)] for i in range(n)])

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def entry(self, i: int, j: int):
        if self.field.is_prime_field:
            return int(self._gf[i, j])
        return self._qq[i][j]

    def row(self, i: int):
        return [self.entry(i, j) for j in range(self.ncols)]

    def to_lists(self):
        return [self.row(i) for i in range(self.nrows)]

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix.from_rows(self.field, list(map(list, zip(*self.to_lists()))) if self.nrows and self.ncols
                                     else [[] for _ in range(self.ncols)] if self.ncols else [])

    def matvec(self, v):
        """m @ v for a column vector v (list of field values)."""
        out = []
        for i in range(self.nrows):
            s = 0
            for j in range(self.ncols):
                s = s + self.entry(i, j) * v[j]
            out.append(self.field.coerce(s))
        return out

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return (self.field == other.field and self.shape == other.shape
                and self.to_lists() == other.to_lists())


def rref(m: ExactMatrix):
    """(rank, pivot columns, reduced matrix).  The RREF is unique."""
    if m.nrows == 0 or m.ncols == 0:
        return 0, (), m
    if m.field.is_prime_field:
        R, piv = gf_rref(m._gf, m.field.p)
        return len(piv), tuple(piv), ExactMatrix(m.field, m.nrows, m.ncols, _gf=R)
    R, piv = qq_rref(m._qq)
    return len(piv), tuple(piv), ExactMatrix(m.field, m.nrows, m.ncols, _qq=R)


def rank(m: ExactMatrix) -> int:
    return rref(m)[0]


def kernel_basis(m: ExactMatrix):
    """Basis of the right null space, free-column parameterization in order."""
    if m.field.is_prime_field:
        if m.nrows == 0:
            return [[int(x) for x in _unit(m.ncols, j)] for j in range(m.ncols)]
        return [[int(x) for x in v] for v in gf_kernel(m._gf, m.field.p)]
    return qq_kernel(m._qq, m.ncols)


def rows_independent(m: ExactMatrix) -> bool:
    return rank(m) == m.nrows
