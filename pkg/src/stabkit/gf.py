"""Exact linear algebra over Z_d (d prime) and the quadratic forms mod D.

Vectors are numpy integer arrays with entries reduced into [0, d).  Quadratic
values live mod D, where D = d for odd d and D = 2d for d = 2; they are always
computed from the canonical integer lifts in [0, d).
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction

import numpy as np


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in range(2, int(n**0.5) + 1):
        if n % p == 0:
            return False
    return True


@dataclass(frozen=True)
class Modulus:
    """The pair (d, D): arithmetic modulus d and quadratic-form modulus D."""

    d: int

    def __post_init__(self):
        if not is_prime(self.d):
            raise ValueError(f"d={self.d} is not prime")

    @property
    def D(self) -> int:
        return self.d if self.d % 2 == 1 else 2 * self.d


def form_modulus(d: int) -> int:
    """D = d for odd d, 2d for even d."""
    return d if d % 2 == 1 else 2 * d


def asvec(x, d: int) -> np.ndarray:
    return np.asarray(x, dtype=np.int64) % d


def rref(matrix, d: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form over Z_d.

    Returns (R, pivot_cols) where R has zero rows removed, each pivot is 1,
    and pivot columns are cleared above and below.
    """
    a = np.atleast_2d(np.array(matrix, dtype=np.int64)) % d
    if a.shape[0] == 0 or a.shape[1] == 0:
        return a.reshape(0, a.shape[1] if a.ndim == 2 else 0), []
    rows, cols = a.shape
    pivot_cols: list[int] = []
    r = 0
    for c in range(cols):
        pivot = None
        for i in range(r, rows):
            if a[i, c] % d != 0:
                pivot = i
                break
        if pivot is None:
            continue
        a[[r, pivot]] = a[[pivot, r]]
        a[r] = (a[r] * pow(int(a[r, c]), -1, d)) % d
        for i in range(rows):
            if i != r and a[i, c] % d != 0:
                a[i] = (a[i] - a[i, c] * a[r]) % d
        pivot_cols.append(c)
        r += 1
        if r == rows:
            break
    return a[:r], pivot_cols


def nullspace(matrix, d: int) -> np.ndarray:
    """Basis (rows) of {x : M x = 0 mod d}."""
    a = np.atleast_2d(np.asarray(matrix, dtype=np.int64)) % d
    rows, cols = a.shape
    r, pivots = rref(a, d)
    free = [c for c in range(cols) if c not in pivots]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for k, f in enumerate(free):
        basis[k, f] = 1
        for i, p in enumerate(pivots):
            basis[k, p] = (-r[i, f]) % d
    return basis


def solve(matrix, rhs, d: int) -> np.ndarray | None:
    """One solution x of M x = rhs mod d, or None if inconsistent."""
    a = np.atleast_2d(np.asarray(matrix, dtype=np.int64)) % d
    b = asvec(rhs, d)
    aug = np.hstack([a, b.reshape(-1, 1)])
    r, pivots = rref(aug, d)
    cols = a.shape[1]
    if cols in pivots:
        return None
    x = np.zeros(cols, dtype=np.int64)
    for i, p in enumerate(pivots):
        x[p] = r[i, cols]
    return x


class Subspace:
    """A subspace of Z_d^m, stored as a canonical RREF basis.

    Two Subspace values are equal iff they are the same set of vectors; the
    canonical form makes them usable as dict/set keys.
    """

    __slots__ = ("d", "ambient", "basis", "_key")

    def __init__(self, basis_rows, d: int, ambient: int | None = None):
        if not is_prime(d):
            raise ValueError(f"d={d} is not prime")
        rows = np.asarray(basis_rows, dtype=np.int64)
        if rows.size == 0:
            if ambient is None:
                raise ValueError("ambient dimension required for the zero subspace")
            rows = rows.reshape(0, ambient)
        rows = np.atleast_2d(rows) % d
        if ambient is not None and rows.shape[1] != ambient:
            raise ValueError("ambient dimension mismatch")
        basis, _ = rref(rows, d)
        self.d = d
        self.ambient = int(rows.shape[1])
        self.basis = basis
        self.basis.setflags(write=False)
        self._key = (d, self.ambient, tuple(map(tuple, basis.tolist())))

    @classmethod
    def zero(cls, ambient: int, d: int) -> "Subspace":
        return cls(np.zeros((0, ambient), dtype=np.int64), d, ambient)

    @classmethod
    def full(cls, ambient: int, d: int) -> "Subspace":
        return cls(np.eye(ambient, dtype=np.int64), d, ambient)

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def __eq__(self, other) -> bool:
        return isinstance(other, Subspace) and self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    def __repr__(self) -> str:
        return f"Subspace(d={self.d}, ambient={self.ambient}, dim={self.dim})"

    @property
    def size(self) -> int:
        return self.d ** self.dim

    def vectors(self) -> np.ndarray:
        """All d^dim member vectors, ordered by coefficient tuple."""
        if self.dim == 0:
            return np.zeros((1, self.ambient), dtype=np.int64)
        coeffs = np.array(list(itertools.product(range(self.d), repeat=self.dim)), dtype=np.int64)
        return (coeffs @ self.basis) % self.d

    def contains(self, v) -> bool:
        w = asvec(v, self.d).copy()
        pivots = [int(np.argmax(row != 0)) for row in self.basis]
        for row, p in zip(self.basis, pivots):
            if w[p]:
                w = (w - w[p] * row) % self.d
        return not w.any()

    def contains_space(self, other: "Subspace") -> bool:
        return all(self.contains(row) for row in other.basis)

    def intersect(self, other: "Subspace") -> "Subspace":
        self._check_compatible(other)
        if self.dim == 0 or other.dim == 0:
            return Subspace.zero(self.ambient, self.d)
        stacked = np.vstack([self.basis, other.basis])
        # coefficient vectors (u, v) with u A + v B = 0 give u A in A cap B
        coeff = nullspace(stacked.T, self.d)
        vecs = (coeff[:, : self.dim] @ self.basis) % self.d
        return Subspace(vecs, self.d, self.ambient)

    def __add__(self, other: "Subspace") -> "Subspace":
        self._check_compatible(other)
        return Subspace(np.vstack([self.basis, other.basis]), self.d, self.ambient)

    def complement(self, gram: np.ndarray) -> "Subspace":
        """Orthogonal complement w.r.t. the bilinear form with Gram matrix `gram`."""
        if gram.shape != (self.ambient, self.ambient):
            raise ValueError("form dimension does not match ambient dimension")
        if self.dim == 0:
            return Subspace.full(self.ambient, self.d)
        return Subspace(nullspace((self.basis @ gram) % self.d, self.d), self.d, self.ambient)

    def _check_compatible(self, other: "Subspace"):
        if self.ambient != other.ambient or self.d != other.d:
            raise ValueError("subspaces live in different ambient spaces")

    def to_json(self) -> dict:
        return {"d": self.d, "ambient": self.ambient, "basis": self.basis.tolist()}

    @classmethod
    def from_json(cls, obj) -> "Subspace":
        if isinstance(obj, str):
            obj = json.loads(obj)
        return cls(np.asarray(obj["basis"], dtype=np.int64), int(obj["d"]), int(obj["ambient"]))


# --- bilinear forms ------------------------------------------------------

def gram_dot(m: int, d: int) -> np.ndarray:
    return np.eye(m, dtype=np.int64) % d


def gram_symplectic(two_n: int, d: int) -> np.ndarray:
    """Gram matrix of [x, y] = p.q' - q.p' for x = (p, q) in Z_d^{2n}."""
    if two_n % 2:
        raise ValueError("symplectic form needs even dimension")
    n = two_n // 2
    j = np.zeros((two_n, two_n), dtype=np.int64)
    j[:n, n:] = np.eye(n, dtype=np.int64)
    j[n:, :n] = -np.eye(n, dtype=np.int64)
    return j % d


def gram_hyperbolic(two_t: int, d: int) -> np.ndarray:
    """Gram matrix of b((x,y),(x',y')) = x.x' - y.y' on Z_d^{2t}."""
    if two_t % 2:
        raise ValueError("hyperbolic form needs even dimension")
    t = two_t // 2
    g = np.eye(two_t, dtype=np.int64)
    g[t:, t:] = -np.eye(t, dtype=np.int64)
    return g % d


def dot(x, y, d: int) -> int:
    return int(asvec(x, d) @ asvec(y, d)) % d


def symplectic_form(x, y, d: int) -> int:
    """[x, y] = p.q' - q.p', reduced mod d."""
    u, v = asvec(x, d), asvec(y, d)
    n = len(u) // 2
    return int(u[:n] @ v[n:] - u[n:] @ v[:n]) % d


def symplectic_form_int(x, y) -> int:
    """[x, y] over the integers, from the canonical lifts (for phase exponents)."""
    u = np.asarray(x, dtype=np.int64)
    v = np.asarray(y, dtype=np.int64)
    n = len(u) // 2
    return int(u[:n] @ v[n:] - u[n:] @ v[:n])


def hyperbolic_form(x, y, d: int) -> int:
    u, v = asvec(x, d), asvec(y, d)
    t = len(u) // 2
    return int(u[:t] @ v[:t] - u[t:] @ v[t:]) % d


# --- quadratic forms -----------------------------------------------------

def quadratic_q(x, d: int) -> int:
    """q(x) = x.x mod D, computed from the integer lifts in [0, d)."""
    v = asvec(x, d)
    return int(v @ v) % form_modulus(d)


def quadratic_Q(x, y, d: int) -> int:
    """Q(x, y) = x.x - y.y mod D (the hyperbolic quadratic form)."""
    return (quadratic_q(x, d) - quadratic_q(y, d)) % form_modulus(d)


def quadratic_Q_vec(v, d: int) -> int:
    w = asvec(v, d)
    t = len(w) // 2
    return quadratic_Q(w[:t], w[t:], d)


def is_totally_isotropic(s: Subspace, form: str) -> bool:
    """True iff the quadratic form vanishes mod D on every vector of s.

    form = "q" uses q(x) = x.x on Z_d^t, form = "Q" uses Q(x,y) = x.x - y.y
    on Z_d^{2t}.  By polarization it suffices to check the form on a basis
    and the associated bilinear form on basis pairs (for d = 2 this is the
    standard criterion with values mod 4 and mod 2 respectively).
    """
    d = s.d
    D = form_modulus(d)
    if form == "q":
        quad = lambda v: quadratic_q(v, d)
        bil = lambda u, v: dot(u, v, d)
    elif form == "Q":
        quad = lambda v: quadratic_Q_vec(v, d)
        bil = lambda u, v: hyperbolic_form(u, v, d)
    else:
        raise ValueError("form must be 'q' or 'Q'")
    b = s.basis
    for i in range(len(b)):
        if quad(b[i]) % D != 0:
            return False
        for j in range(i + 1, len(b)):
            if bil(b[i], b[j]) % d != 0:
                return False
    return True


# --- counting ------------------------------------------------------------

def gaussian_binomial(n: int, k: int, d: int) -> int:
    """Number of k-dimensional subspaces of Z_d^n, as an exact integer."""
    if not 0 <= k <= n:
        return 0
    val = Fraction(1)
    for i in range(k):
        val *= Fraction(d ** (n - i) - 1, d ** (i + 1) - 1)
    assert val.denominator == 1
    return int(val)


def gaussian_pascal_check(n: int, k: int, d: int) -> bool:
    """Pascal-type recurrence binom(n,k) = binom(n-1,k-1) + d^k binom(n-1,k)."""
    lhs = gaussian_binomial(n, k, d)
    rhs = gaussian_binomial(n - 1, k - 1, d) + d**k * gaussian_binomial(n - 1, k, d)
    return lhs == rhs


def gaussian_binomial_formula_check(n: int, d: int, t: int) -> bool:
    """Binomial-type identity: sum_k d^(k(k-1)/2) binom(n,k) t^k = prod_j (d^j t + 1)."""
    lhs = sum(d ** (k * (k - 1) // 2) * gaussian_binomial(n, k, d) * t**k for k in range(n + 1))
    rhs = 1
    for j in range(n):
        rhs *= d**j * t + 1
    return lhs == rhs


def coset_reps(sup: Subspace, sub: Subspace) -> np.ndarray:
    """Lexicographically least representatives of sup / sub cosets."""
    if not sup.contains_space(sub):
        raise ValueError("sub is not contained in sup")
    members = sup.vectors()
    order = np.lexsort(members.T[::-1])
    shifts = sub.vectors()
    seen: set[tuple] = set()
    reps = []
    for idx in order:
        v = members[idx]
        if tuple(v.tolist()) in seen:
            continue
        reps.append(v)
        for w in (v + shifts) % sup.d:
            seen.add(tuple(w.tolist()))
    return np.array(reps, dtype=np.int64)


def exact_rank(matrix) -> int:
    """Rank of an integer matrix over the rationals (exact arithmetic)."""
    rows = [[Fraction(int(x)) for x in row] for row in np.asarray(matrix).tolist()]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    col = 0
    while rank < len(rows) and col < ncols:
        pivot = next((i for i in range(rank, len(rows)) if rows[i][col] != 0), None)
        if pivot is None:
            col += 1
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        pr = rows[rank]
        inv = 1 / pr[col]
        rows[rank] = [x * inv for x in pr]
        for i in range(len(rows)):
            if i != rank and rows[i][col] != 0:
                f = rows[i][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[rank])]
        rank += 1
        col += 1
    return rank
