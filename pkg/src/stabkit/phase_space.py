"""Dense realization of Weyl operators, characteristic and Wigner functions.

Phase points x = (p, q) live in Z_d^{2n}.  Flat indexing of phase-space
functions is row-major over the digits of (p, q) with p varying slowest,
i.e. index = int(p, base d) * d^n + int(q, base d).
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

DEFAULT_DIM_CAP = 2**13


class ResourceCapError(RuntimeError):
    pass


def check_dim(dim: int, cap: int = DEFAULT_DIM_CAP):
    if dim > cap:
        raise ResourceCapError(f"requested operator dimension {dim} exceeds cap {cap}")


def omega(d: int) -> complex:
    return np.exp(2j * np.pi / d)


def tau(d: int) -> complex:
    """tau = exp(i pi (d^2+1)/d), a primitive D-th root with tau^2 = omega."""
    return np.exp(1j * np.pi * (d * d + 1) / d)


def phase_points(n: int, d: int) -> np.ndarray:
    """All d^{2n} points (p, q), in flat index order."""
    pts = np.indices((d,) * (2 * n)).reshape(2 * n, -1).T
    return np.ascontiguousarray(pts.astype(np.int64))


def point_index(x, n: int, d: int) -> int:
    x = np.asarray(x, dtype=np.int64) % d
    idx = 0
    for digit in x:
        idx = idx * d + int(digit)
    return idx


@lru_cache(maxsize=None)
def _single_qudit_zx(d: int) -> tuple[np.ndarray, np.ndarray]:
    w = omega(d)
    z = np.diag(w ** np.arange(d))
    x = np.zeros((d, d), dtype=complex)
    for a in range(d):
        x[(a + 1) % d, a] = 1.0  # X|a> = |a+1>
    return z, x


def weyl(x, n: int, d: int) -> np.ndarray:
    """W_x = tau^{-p.q} (X) Z^{p_i} X^{q_i} on n qudits."""
    x = np.asarray(x, dtype=np.int64) % d
    p, q = x[:n], x[n:]
    z1, x1 = _single_qudit_zx(d)
    op = np.array([[tau(d) ** (-int(p @ q))]])
    for i in range(n):
        factor = np.linalg.matrix_power(z1, int(p[i])) @ np.linalg.matrix_power(x1, int(q[i]))
        op = np.kron(op, factor)
    return op


@lru_cache(maxsize=32)
def weyl_all(n: int, d: int) -> np.ndarray:
    """Stack of all Weyl operators, shape (d^{2n}, d^n, d^n), in flat index order."""
    check_dim(d**n)
    pts = phase_points(n, d)
    return np.array([weyl(x, n, d) for x in pts])


@lru_cache(maxsize=32)
def _fourier_kernel(n: int, d: int) -> np.ndarray:
    """Matrix F[x, y] = omega^{-[x, y]} over all phase-point pairs."""
    pts = phase_points(n, d)
    p, q = pts[:, :n], pts[:, n:]
    sym = p @ q.T - q @ p.T
    return omega(d) ** (-sym)


def characteristic_function(B: np.ndarray, n: int, d: int) -> np.ndarray:
    """c_B(x) = d^{-n/2} tr[W_x^dag B], as a complex flat array."""
    ws = weyl_all(n, d)
    return np.einsum("xji,ij->x", ws.conj(), B) * d ** (-n / 2)


def char_distribution(psi: np.ndarray, n: int, d: int) -> np.ndarray:
    """p_psi(x) = |c_psi(x)|^2 for a pure state vector psi."""
    psi = np.asarray(psi, dtype=complex)
    if abs(np.linalg.norm(psi) - 1.0) > 1e-10:
        raise ValueError("state vector is not normalized")
    ws = weyl_all(n, d)
    expect = np.einsum("i,xij,j->x", psi.conj(), ws, psi)
    return np.abs(expect) ** 2 / d**n


def symplectic_fourier(f: np.ndarray, n: int, d: int) -> np.ndarray:
    """f_hat(x) = d^{-n} sum_y omega^{-[x,y]} f(y)."""
    return _fourier_kernel(n, d) @ np.asarray(f) / d**n


def point_operator(x, n: int, d: int) -> np.ndarray:
    """A_x = d^{-n} sum_y omega^{-[x,y]} W_y^dag."""
    ws = weyl_all(n, d)
    kern = _fourier_kernel(n, d)[point_index(x, n, d)]
    return np.einsum("y,yji->ij", kern, ws.conj()) / d**n


@lru_cache(maxsize=16)
def point_operators(n: int, d: int) -> np.ndarray:
    ws = weyl_all(n, d)
    kern = _fourier_kernel(n, d)
    return np.einsum("xy,yji->xij", kern, ws.conj()) / d**n


def wigner(B: np.ndarray, n: int, d: int) -> np.ndarray:
    """w_B(x) = d^{-n} tr[A_x B]; returned real part (exact for Hermitian B)."""
    aops = point_operators(n, d)
    vals = np.einsum("xji,ij->x", aops, B) / d**n
    return vals.real if np.allclose(B, B.conj().T, atol=1e-10) else vals


def wigner_state(psi: np.ndarray, n: int, d: int) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    aops = point_operators(n, d)
    return np.einsum("i,xij,j->x", psi.conj(), aops, psi).real / d**n


def kron_power(B: np.ndarray, k: int, cap: int = DEFAULT_DIM_CAP) -> np.ndarray:
    """B^{(x) k} with a hard cap on the resulting dimension."""
    check_dim(B.shape[0] ** k, cap)
    out = np.array([[1.0 + 0j]])
    for _ in range(k):
        out = np.kron(out, B)
    return out


def kron_power_vec(v: np.ndarray, k: int, cap: int = DEFAULT_DIM_CAP) -> np.ndarray:
    check_dim(len(v) ** k, cap)
    out = np.array([1.0 + 0j])
    for _ in range(k):
        out = np.kron(out, v)
    return out


def apply_tensor_power(U: np.ndarray, v: np.ndarray, t: int) -> np.ndarray:
    """Compute U^{x t} v without materializing U^{x t}.

    v lives on (C^m)^{x t} with m = U.shape[0]; U is applied along each of
    the t tensor factors in turn.
    """
    m = U.shape[0]
    w = np.asarray(v, dtype=complex).reshape((m,) * t)
    for axis in range(t):
        w = np.moveaxis(np.tensordot(U, w, axes=([1], [axis])), 0, axis)
    return w.reshape(-1)


def tensor_permute(B: np.ndarray, ordering, subdim: int) -> np.ndarray:
    """Permute the k tensor factors of an operator on (C^subdim)^{(x) k}.

    ordering[i] = j means factor i of the output is factor j of the input.
    """
    ordering = list(ordering)
    k = len(ordering)
    if B.shape[0] != subdim**k:
        raise ValueError("operator dimension does not match subdim^k")
    t = B.reshape((subdim,) * (2 * k))
    axes = ordering + [k + j for j in ordering]
    return t.transpose(axes).reshape(B.shape)
