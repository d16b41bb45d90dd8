"""Exact linear algebra over the Gaussian rationals.

Scalars are complex numbers with rational real and imaginary parts, so
every verdict downstream (commutants, span equalities, intertwiner laws)
is a matter of exact equality rather than tolerance.  Matrices are kept
sparse; the bundled fixtures are signed-permutation / Pauli-type matrices
with at most one nonzero entry per row, and all kernels here are tuned
for that shape while remaining correct on dense input.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

__all__ = [
    "GaussianRational",
    "GR_ZERO",
    "GR_ONE",
    "GR_I",
    "GMat",
    "SpanBasis",
    "nullspace",
    "parse_rational",
    "format_rational",
    "pauli_string",
    "as_pauli_string",
    "pauli_commute",
    "pauli_commutant_masks",
]


def parse_rational(text: str | int) -> Fraction:
    """"p/q" or "p" (plain ints also accepted) -> Fraction in lowest terms."""
    if isinstance(text, int):
        return Fraction(text)
    try:
        return Fraction(str(text).strip())
    except ZeroDivisionError as exc:
        raise ValueError(f"zero denominator in rational {text!r}") from exc


def format_rational(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


@dataclass(frozen=True)
class GaussianRational:
    """Complex scalar with exact rational real and imaginary parts."""

    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    @staticmethod
    def of(re, im=0) -> "GaussianRational":
        return GaussianRational(Fraction(re), Fraction(im))

    def __add__(self, other: "GaussianRational") -> "GaussianRational":
        return GaussianRational(self.re + other.re, self.im + other.im)

    def __sub__(self, other: "GaussianRational") -> "GaussianRational":
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __neg__(self) -> "GaussianRational":
        return GaussianRational(-self.re, -self.im)

    def __mul__(self, other: "GaussianRational") -> "GaussianRational":
        # fixture matrices are axis-aligned (0, +-1, +-i): skip zero components
        a, b = self.re, self.im
        c, d = other.re, other.im
        if not b and not d:
            return GaussianRational(a * c, b)
        if not a and not c:
            return GaussianRational(-(b * d), a)
        return GaussianRational(a * c - b * d, a * d + b * c)

    def conj(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def abs2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def inverse(self) -> "GaussianRational":
        n = self.abs2()
        if n == 0:
            raise ZeroDivisionError("inverse of zero Gaussian rational")
        return GaussianRational(self.re / n, -self.im / n)

    def __truediv__(self, other: "GaussianRational") -> "GaussianRational":
        return self * other.inverse()

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def to_json(self) -> dict:
        return {"re": format_rational(self.re), "im": format_rational(self.im)}

    @staticmethod
    def from_json(obj) -> "GaussianRational":
        if isinstance(obj, dict):
            return GaussianRational(
                parse_rational(obj.get("re", "0")), parse_rational(obj.get("im", "0"))
            )
        return GaussianRational(parse_rational(obj))

    def __str__(self) -> str:
        sign = "+" if self.im >= 0 else ""
        return f"{format_rational(self.re)}{sign}{format_rational(self.im)}i"


GR_ZERO = GaussianRational()
GR_ONE = GaussianRational(Fraction(1))
GR_I = GaussianRational(Fraction(0), Fraction(1))
GR_MINUS_ONE = GaussianRational(Fraction(-1))


class GMat:
    """Immutable sparse square matrix over the Gaussian rationals."""

    __slots__ = ("n", "data", "_hash")

    def __init__(self, n: int, data: dict[tuple[int, int], GaussianRational]):
        self.n = n
        self.data = {k: v for k, v in data.items() if not v.is_zero()}
        self._hash = None

    # -- constructors ---------------------------------------------------

    @staticmethod
    def zero(n: int) -> "GMat":
        return GMat(n, {})

    @staticmethod
    def identity(n: int) -> "GMat":
        return GMat(n, {(i, i): GR_ONE for i in range(n)})

    @staticmethod
    def from_rows(rows: Sequence[Sequence[GaussianRational]]) -> "GMat":
        n = len(rows)
        data = {}
        for i, row in enumerate(rows):
            if len(row) != n:
                raise ValueError("matrix must be square")
            for j, v in enumerate(row):
                if not v.is_zero():
                    data[(i, j)] = v
        return GMat(n, data)

    @staticmethod
    def from_int_rows(rows: Sequence[Sequence[int]]) -> "GMat":
        return GMat.from_rows([[GaussianRational.of(v) for v in row] for row in rows])

    # -- algebra ----------------------------------------------------------

    def __add__(self, other: "GMat") -> "GMat":
        data = dict(self.data)
        for k, v in other.data.items():
            s = data.get(k, GR_ZERO) + v
            if s.is_zero():
                data.pop(k, None)
            else:
                data[k] = s
        return GMat(self.n, data)

    def __sub__(self, other: "GMat") -> "GMat":
        return self + other.scale(GR_MINUS_ONE)

    def scale(self, c: GaussianRational) -> "GMat":
        if c.is_zero():
            return GMat.zero(self.n)
        return GMat(self.n, {k: c * v for k, v in self.data.items()})

    def __matmul__(self, other: "GMat") -> "GMat":
        if self.n != other.n:
            raise ValueError("size mismatch")
        by_row: dict[int, list[tuple[int, GaussianRational]]] = {}
        for (i, j), v in other.data.items():
            by_row.setdefault(i, []).append((j, v))
        out: dict[tuple[int, int], GaussianRational] = {}
        for (i, k), a in self.data.items():
            cols = by_row.get(k)
            if not cols:
                continue
            for j, b in cols:
                key = (i, j)
                s = out.get(key, GR_ZERO) + a * b
                if s.is_zero():
                    out.pop(key, None)
                else:
                    out[key] = s
        return GMat(self.n, out)

    def adjoint(self) -> "GMat":
        return GMat(self.n, {(j, i): v.conj() for (i, j), v in self.data.items()})

    def trace(self) -> GaussianRational:
        t = GR_ZERO
        for (i, j), v in self.data.items():
            if i == j:
                t = t + v
        return t

    def hs_inner(self, other: "GMat") -> GaussianRational:
        """Hilbert-Schmidt inner product tr(self* other)."""
        t = GR_ZERO
        small, big, conj_small = (
            (self.data, other.data, True)
            if len(self.data) <= len(other.data)
            else (other.data, self.data, False)
        )
        for k, v in small.items():
            w = big.get(k)
            if w is not None:
                t = t + (v.conj() * w if conj_small else w.conj() * v)
        return t

    def commutator(self, other: "GMat") -> "GMat":
        return (self @ other) - (other @ self)

    def commutes_with(self, other: "GMat") -> bool:
        return not self.commutator(other).data

    def is_zero(self) -> bool:
        return not self.data

    def is_identity(self) -> bool:
        if len(self.data) != self.n:
            return False
        return all(self.data.get((i, i)) == GR_ONE for i in range(self.n))

    def is_unitary(self) -> bool:
        return (self @ self.adjoint()).is_identity() and (
            self.adjoint() @ self
        ).is_identity()

    def scalar_multiple_of_identity(self) -> GaussianRational | None:
        """The scalar c with self == c*1, or None."""
        c = self.data.get((0, 0), GR_ZERO)
        if c.is_zero():
            return GR_ZERO if self.is_zero() else None
        if len(self.data) != self.n:
            return None
        if all(self.data.get((i, i)) == c for i in range(self.n)):
            return c
        return None

    def tensor(self, other: "GMat") -> "GMat":
        data = {}
        for (i, j), a in self.data.items():
            for (k, l), b in other.data.items():
                data[(i * other.n + k, j * other.n + l)] = a * b
        return GMat(self.n * other.n, data)

    # -- identity & hashing ------------------------------------------------

    def key(self):
        return (self.n, tuple(sorted(self.data.items())))

    def __eq__(self, other) -> bool:
        return isinstance(other, GMat) and self.n == other.n and self.data == other.data

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.key())
        return self._hash

    # -- serialization -----------------------------------------------------

    def to_json(self) -> list:
        """Row-major dense listing; entries {"re","im"} with rational strings."""
        return [
            [self.data.get((i, j), GR_ZERO).to_json() for j in range(self.n)]
            for i in range(self.n)
        ]

    @staticmethod
    def from_json(rows: list) -> "GMat":
        return GMat.from_rows(
            [[GaussianRational.from_json(v) for v in row] for row in rows]
        )

    def __repr__(self) -> str:
        return f"GMat(n={self.n}, nnz={len(self.data)})"


class SpanBasis:
    """Exact span membership via unnormalized Gram-Schmidt in the HS inner product."""

    def __init__(self, n: int):
        self.n = n
        self.ortho: list[GMat] = []
        self.norms: list[GaussianRational] = []

    def _residual(self, m: GMat) -> GMat:
        r = m
        for b, nb in zip(self.ortho, self.norms):
            c = b.hs_inner(r)
            if not c.is_zero():
                r = r - b.scale(c / nb)
        return r

    def add(self, m: GMat) -> bool:
        """Insert m; True if it enlarged the span."""
        r = self._residual(m)
        if r.is_zero():
            return False
        self.ortho.append(r)
        self.norms.append(r.hs_inner(r))
        return True

    def contains(self, m: GMat) -> bool:
        return self._residual(m).is_zero()

    @property
    def dim(self) -> int:
        return len(self.ortho)


def nullspace(
    rows: list[list[GaussianRational]], ncols: int
) -> list[list[GaussianRational]]:
    """Basis of {v : R v = 0} by exact Gauss-Jordan elimination."""
    reduced: list[list[GaussianRational]] = []
    pivots: list[int] = []
    for row in rows:
        r = list(row)
        for pr, pc in zip(reduced, pivots):
            if not r[pc].is_zero():
                f = r[pc]
                r = [a - f * b for a, b in zip(r, pr)]
        pivot = next((j for j in range(ncols) if not r[j].is_zero()), None)
        if pivot is None:
            continue
        inv = r[pivot].inverse()
        r = [a * inv for a in r]
        for idx, pr in enumerate(reduced):
            if not pr[pivot].is_zero():
                f = pr[pivot]
                reduced[idx] = [a - f * b for a, b in zip(pr, r)]
        reduced.append(r)
        pivots.append(pivot)
    pivot_set = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        v = [GR_ZERO] * ncols
        v[free] = GR_ONE
        for pr, pc in zip(reduced, pivots):
            v[pc] = -pr[free]
        basis.append(v)
    return basis


# ---------------------------------------------------------------------------
# Pauli-string machinery.
#
# A scaled Pauli string on L qubits is c * P(x, z) with bit masks
# x, z in F_2^L, where P is the tensor product of site factors I, X, Z and
# Y = iXZ.  Two strings either commute or anticommute, decided by the
# symplectic form <x1,z2> + <z1,x2> over F_2.  The span of a set of strings
# is closed under products and adjoints, and its commutant inside M_{2^L}
# is spanned by exactly the strings symplectically orthogonal to every
# generator: expanding any commuting X in the string basis, conjugation by
# a generator flips the sign of anticommuting components, which therefore
# vanish.  This turns commutant computations on string algebras into
# nullspace solves over F_2.
# ---------------------------------------------------------------------------


def pauli_string(L: int, x: int, z: int, coeff: GaussianRational = GR_ONE) -> GMat:
    """coeff * P(x, z) on L qubits; site 0 is the most significant bit."""
    n = 1 << L
    data = {}
    for col in range(n):
        row = col ^ x
        val = coeff
        for s in range(L):
            shift = L - 1 - s
            xb = (x >> shift) & 1
            zb = (z >> shift) & 1
            cb = (col >> shift) & 1
            if xb and zb:  # Y: col 0 -> i, col 1 -> -i
                val = val * (GR_I if cb == 0 else GaussianRational.of(0, -1))
            elif zb and cb:  # Z on |1>
                val = val * GR_MINUS_ONE
        data[(row, col)] = val
    return GMat(n, data)


def as_pauli_string(m: GMat) -> tuple[int, int, GaussianRational] | None:
    """Recognize m == coeff * P(x, z); returns (x, z, coeff) or None."""
    n = m.n
    if n <= 0 or n & (n - 1):
        return None
    L = n.bit_length() - 1
    if len(m.data) != n:
        return None
    cols = {}
    for (i, j), v in m.data.items():
        if j in cols:
            return None
        cols[j] = (i, v)
    if len(cols) != n:
        return None
    x = cols[0][0]  # row of column 0 is 0 ^ x
    v0 = cols[0][1]
    z = 0
    for s in range(L):
        shift = L - 1 - s
        col = 1 << shift
        entry = cols.get(col)
        if entry is None or entry[0] != (col ^ x):
            return None
        ratio = entry[1] / v0
        if ratio == GR_ONE:
            pass
        elif ratio == GR_MINUS_ONE:
            z |= col
        else:
            return None
    base = pauli_string(L, x, z)
    coeff = v0 / base.data[(x, 0)]
    if base.scale(coeff) == m:
        return (x, z, coeff)
    return None


def pauli_commute(x1: int, z1: int, x2: int, z2: int) -> bool:
    """True iff P(x1,z1) and P(x2,z2) commute (symplectic form vanishes)."""
    return (
        bin(x1 & z2).count("1") + bin(z1 & x2).count("1")
    ) % 2 == 0


def _gf2_nullspace(rows: list[int], width: int) -> list[int]:
    """Nullspace basis of a GF(2) system; vectors encoded as ints."""
    pivots: list[tuple[int, int]] = []  # (pivot bit, reduced row)
    for row in rows:
        r = row
        for bit, pr in pivots:
            if (r >> bit) & 1:
                r ^= pr
        if r == 0:
            continue
        bit = r.bit_length() - 1
        for idx, (b, pr) in enumerate(pivots):
            if (pr >> bit) & 1:
                pivots[idx] = (b, pr ^ r)
        pivots.append((bit, r))
    pivot_bits = {b for b, _ in pivots}
    basis = []
    for free in range(width):
        if free in pivot_bits:
            continue
        v = 1 << free
        for bit, pr in pivots:
            if (pr >> free) & 1:
                v |= 1 << bit
        basis.append(v)
    return basis


def pauli_commutant_masks(L: int, masks: list[tuple[int, int]]) -> list[tuple[int, int]]:
    """All (x, z) masks whose string commutes with every P(x_k, z_k).

    The constraint is linear over F_2, so the result is the full subgroup
    enumerated from a nullspace basis (2L-bit vectors encoded as z | x<<L).
    """
    rows = [(zk << L) | xk for xk, zk in masks]
    basis = _gf2_nullspace(rows, 2 * L)
    out = set()
    for combo in range(1 << len(basis)):
        v = 0
        c = combo
        i = 0
        while c:
            if c & 1:
                v ^= basis[i]
            c >>= 1
            i += 1
        out.add((v >> L, v & ((1 << L) - 1)))
    return sorted(out)
