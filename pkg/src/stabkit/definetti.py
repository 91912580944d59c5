"""Gram-matrix machinery for stabilizer tensor powers and de Finetti checks.

The key engineering device is the Gram expansion of reduced states: for
|Psi> = sum_S alpha_S |S>^{x t} the s-copy reduced state is

    rho_{1..s} = sum_{S,S'} alpha_S conj(alpha_{S'}) <S'|S>^{t-s}
                 |S><S'|^{x s},

which never materializes a d^{tn}-dimensional object, so t in the
hundreds is cheap at small n.  Dense tensor powers are used only as a
small-t cross-check.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import nnls

from .phase_space import check_dim, kron_power_vec
from .stabilizer import all_stabilizer_states

__all__ = [
    "GramData",
    "SymmetricInput",
    "gram",
    "vectorize",
    "purify",
    "make_invariant_state",
    "stab_power_decompose",
    "reduced_from_coefficients",
    "random_span_coefficients",
    "exp_definetti_check",
    "anti_definetti_check",
    "trace_distance",
    "pure_bound",
    "mixed_bound",
    "anti_bound",
]


@dataclass
class GramData:
    n: int
    d: int
    t: int
    states: np.ndarray  # rows are the stabilizer state vectors
    G: np.ndarray  # G_{SS'} = <S|S'>^t
    eps: float
    Q: np.ndarray | None = None

    @property
    def num_states(self) -> int:
        return len(self.states)


@dataclass
class SymmetricInput:
    t: int
    n: int
    d: int
    state: np.ndarray  # density operator on (d^n)^{x t}
    symmetry: str  # "full" or "perm+anti" or "perm"


def gram(n: int, d: int, t: int, with_Q: bool = False) -> GramData:
    """Gram data of the stabilizer tensor-power frame {|S>^{x t}}.

    eps = d^{((n+2)^2 - t)/2}; when eps < 1/2 the frame is close to
    orthonormal: ||G - I||_inf <= eps and the nonzero spectrum of
    Q = sum_S (|S><S|)^{x t} lies in [1 - 2 eps, 1 + 2 eps].
    """
    states = all_stabilizer_states(n, d)
    overlaps = states.conj() @ states.T
    G = overlaps**t
    eps = float(d) ** (((n + 2) ** 2 - t) / 2.0)
    Q = None
    if with_Q:
        check_dim(d ** (t * n))
        vecs = np.array([kron_power_vec(s, t) for s in states])
        Q = vecs.T @ vecs.conj()
    return GramData(n=n, d=d, t=t, states=np.asarray(states), G=G, eps=eps, Q=Q)


def vectorize(B: np.ndarray) -> np.ndarray:
    """vec(B) with |i>|j> carrying the matrix element B_ij."""
    return np.asarray(B).reshape(-1)


def purify(rho: np.ndarray) -> np.ndarray:
    """Standard purification vec(rho^{1/2}) on the doubled system."""
    vals, vecs = np.linalg.eigh(rho)
    if vals.min() < -1e-9:
        raise ValueError("rho is not positive semidefinite")
    root = (vecs * np.sqrt(np.clip(vals, 0, None))) @ vecs.conj().T
    return vectorize(root)


def trace_distance(a: np.ndarray, b: np.ndarray) -> float:
    vals = np.linalg.eigvalsh(a - b)
    return float(0.5 * np.abs(vals).sum())


def _digit_matrix(t: int, d: int) -> np.ndarray:
    """All d^t indices as base-d digit rows, most significant digit first."""
    idx = np.arange(d**t)
    weights = d ** np.arange(t - 1, -1, -1)
    return (idx[:, None] // weights) % d


def _linear_index_map(O: np.ndarray, t: int, n: int, d: int) -> np.ndarray:
    """perm with |x> -> |O x> per base-d layer, for x in (Z_d^n)^t."""
    X = _digit_matrix(t * n, d).reshape(-1, t, n)
    Y = np.einsum("kj,xjl->xkl", O % d, X) % d
    weights = d ** np.arange(t * n - 1, -1, -1)
    return Y.reshape(-1, t * n) @ weights


def _pair_labels(t: int, q: int) -> np.ndarray:
    """S_t-orbit label of every index pair over the alphabet Z_q.

    Two pairs of length-t strings are in the same diagonal S_t orbit iff
    the counts of their per-position symbol pairs agree.
    """
    X = _digit_matrix(t, q)
    m = len(X)
    label = np.zeros((m, m), dtype=np.int64)
    for a in range(q):
        for b in range(q):
            if a == q - 1 and b == q - 1:
                continue  # counts of the last type are determined
            Ia = (X == a).astype(np.int64)
            Ib = (X == b).astype(np.int64)
            label = label * (t + 1) + Ia @ Ib.T
    # compactify
    uniq, compact = np.unique(label, return_inverse=True)
    return compact.reshape(m, m)


def _symmetrize_labels(rho: np.ndarray, labels: np.ndarray) -> np.ndarray:
    """Exact average of rho over the diagonal S_t action (per label class)."""
    counts = np.bincount(labels.reshape(-1))
    re = np.bincount(labels.reshape(-1), weights=rho.real.reshape(-1)) / counts
    im = np.bincount(labels.reshape(-1), weights=rho.imag.reshape(-1)) / counts
    return (re + 1j * im)[labels]


def _embedded_anti(t: int) -> np.ndarray:
    """Anti-identity acting on the first six copies, identity on the rest."""
    from .commutant import anti_identity_matrix

    out = np.eye(t, dtype=np.int64)
    out[:6, :6] = anti_identity_matrix(6)
    return out


def _string_labels(t: int, q: int) -> np.ndarray:
    """S_t-orbit label of every length-t string over Z_q (symbol counts)."""
    X = _digit_matrix(t, q)
    label = np.zeros(len(X), dtype=np.int64)
    for a in range(q - 1):
        label = label * (t + 1) + (X == a).sum(axis=1)
    _, compact = np.unique(label, return_inverse=True)
    return compact


def _project_sym_vec(v: np.ndarray, labels: np.ndarray) -> np.ndarray:
    counts = np.bincount(labels)
    re = np.bincount(labels, weights=v.real) / counts
    im = np.bincount(labels, weights=v.imag) / counts
    return (re + 1j * im)[labels]


def make_invariant_state(
    t: int, n: int, d: int, symmetry: str, seed: int, pure: bool = True
) -> SymmetricInput:
    """Twirl of a random input state onto the declared symmetry's commutant.

    symmetry = "perm" averages over all copy permutations (exactly, via
    S_t orbit classes); "perm+anti" additionally enforces the anti-identity
    on the first six copies (d = 2, t a multiple of 6) by alternating
    projections; "full" averages over the enumerated O_t(d).  Pure inputs
    are projected as vectors (so the result is an invariant pure state);
    mixed inputs are twirled by conjugation.
    """
    dim = d ** (t * n)
    check_dim(dim)
    rng = np.random.default_rng(seed)
    gens_idx: list[np.ndarray] = []
    if symmetry == "full":
        from .commutant import orthogonal_stochastic_group

        group = orthogonal_stochastic_group(t, d)
        perms = [_linear_index_map(O, t, n, d) for O in group]
        gens_idx = perms[:4]
    elif symmetry in ("perm", "perm+anti"):
        from .commutant import permutation_matrix

        swap = np.arange(t)
        swap[[0, 1]] = [1, 0]
        cycle = np.roll(np.arange(t), 1)
        gens_idx = [
            _linear_index_map(permutation_matrix(p), t, n, d)
            for p in (swap, cycle)
        ]
        aperm = None
        if symmetry == "perm+anti":
            if d != 2 or t % 6:
                raise ValueError("perm+anti needs d = 2 and t a multiple of 6")
            aperm = _linear_index_map(_embedded_anti(t), t, n, d)
            gens_idx.append(aperm)
    else:
        raise ValueError(f"unknown symmetry {symmetry!r}")

    if pure:
        v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
        if symmetry == "full":
            w = np.zeros_like(v)
            for perm in perms:
                w += v[perm]
            v = w / len(perms)
        else:
            labels = _string_labels(t, d**n)
            v = _project_sym_vec(v, labels)
            if aperm is not None:
                for _ in range(500):
                    nxt = _project_sym_vec(0.5 * (v + v[aperm]), labels)
                    delta = np.abs(nxt - v).max()
                    v = nxt
                    if delta < 1e-15:
                        break
        v /= np.linalg.norm(v)
        rho = np.outer(v, v.conj())
        for perm in gens_idx:
            if np.abs(v[perm] - v).max() > 1e-9:
                raise AssertionError("projected state is not invariant")
    else:
        k = min(dim, 16)
        A = rng.normal(size=(dim, k)) + 1j * rng.normal(size=(dim, k))
        rho = A @ A.conj().T
        rho /= np.trace(rho).real
        if symmetry == "full":
            out = np.zeros_like(rho)
            for perm in perms:
                out += rho[np.ix_(perm, perm)]
            rho = out / len(perms)
        else:
            pair_labels = _pair_labels(t, d**n)
            rho = _symmetrize_labels(rho, pair_labels)
            if aperm is not None:
                for _ in range(500):
                    nxt = _symmetrize_labels(
                        0.5 * (rho + rho[np.ix_(aperm, aperm)]), pair_labels
                    )
                    delta = np.abs(nxt - rho).max()
                    rho = nxt
                    if delta < 1e-15:
                        break
        rho /= np.trace(rho).real
        for perm in gens_idx:
            if np.abs(rho[np.ix_(perm, perm)] - rho).max() > 1e-9:
                raise AssertionError("twirled state fails to commute with symmetry")
    return SymmetricInput(t=t, n=n, d=d, state=rho, symmetry=symmetry)


def stab_power_decompose(psi: np.ndarray, data: GramData) -> tuple[np.ndarray, float]:
    """Coefficients alpha with |psi> = sum_S alpha_S |S>^{x t}, plus residual.

    Solved through the Gram matrix, equivalent to projecting onto the
    orthonormalized frame (Q^+)^{1/2}|S>^{x t}.  The frame is guaranteed
    injective when eps < 1/2; outside that regime a least-squares solution
    is returned and the residual is the caller's responsibility.
    """
    vecs = np.array([kron_power_vec(s, data.t) for s in data.states])
    rhs = vecs.conj() @ psi
    alpha = np.linalg.lstsq(data.G, rhs, rcond=None)[0]
    residual = float(np.linalg.norm(psi - vecs.T @ alpha))
    return alpha, residual


def random_span_coefficients(data: GramData, seed: int) -> np.ndarray:
    """alpha for a random normalized state in span{|S>^{x t}}."""
    rng = np.random.default_rng(seed)
    m = data.num_states
    c = rng.normal(size=m) + 1j * rng.normal(size=m)
    norm2 = (c.conj() @ data.G @ c).real
    return c / math.sqrt(norm2)


def reduced_from_coefficients(alpha: np.ndarray, s: int, data: GramData) -> np.ndarray:
    """rho_{1..s} of sum_S alpha_S |S>^{x t} via the Gram expansion."""
    overlaps = data.states.conj() @ data.states.T  # overlaps[a, b] = <S_a|S_b>
    weights = np.outer(alpha, alpha.conj()) * overlaps.T ** (data.t - s)
    dim = data.d**data.n
    rho = np.zeros((dim**s, dim**s), dtype=complex)
    for i in range(data.num_states):
        vi = kron_power_vec(data.states[i], s)
        for j in range(data.num_states):
            vj = kron_power_vec(data.states[j], s)
            rho += weights[i, j] * np.outer(vi, vj.conj())
    return rho


def _stab_mixture(p: np.ndarray, s: int, data: GramData) -> np.ndarray:
    dim = (data.d**data.n) ** s
    sigma = np.zeros((dim, dim), dtype=complex)
    for w, state in zip(p, data.states):
        v = kron_power_vec(state, s)
        sigma += w * np.outer(v, v.conj())
    return sigma


def _trace_ancillas(block: np.ndarray, s: int, dim: int) -> np.ndarray:
    """Partial trace over the ancilla half of each of s doubled copies.

    `block` acts on (dim x dim)^{x s} with factor order
    (sys1, anc1, ..., sys_s, anc_s)."""
    letters = "abcdefghijklmnopqrstuvwx"
    row = []
    col = []
    out_row = []
    out_col = []
    for k in range(s):
        sys_r, anc = letters[2 * k], letters[2 * k + 1]
        sys_c = letters[2 * s + 2 * k]
        row += [sys_r, anc]
        col += [sys_c, anc]
        out_row.append(sys_r)
        out_col.append(sys_c)
    spec = "".join(row) + "".join(col) + "->" + "".join(out_row) + "".join(out_col)
    M = block.reshape((dim,) * (4 * s))
    return np.einsum(spec, M).reshape(dim**s, dim**s)


def pure_bound(n: int, d: int, t: int, s: int) -> float:
    return 2.0 * d ** ((n + 2) ** 2 / 2.0) * d ** (-(t - s) / 2.0)


def mixed_bound(n: int, d: int, t: int, s: int) -> float:
    return 2.0 * d ** ((2 * n + 2) ** 2 / 2.0) * d ** (-(t - s) / 2.0)


def anti_bound(n: int, t: int, s: int, mixed: bool = False) -> float:
    if mixed:
        return 6.0 * math.sqrt(2.0) * 2**n * math.sqrt(s / t)
    return 6.0 * math.sqrt(2 ** (n + 1)) * math.sqrt(s / t)


def exp_definetti_check(
    source,
    s: int,
    t: int | None = None,
    n: int | None = None,
    d: int | None = None,
    mixed: bool = False,
) -> dict:
    """Distance of the s-copy reduced state to a stabilizer-power mixture.

    `source` is either a SymmetricInput (dense state, full O_t symmetry;
    pure inputs use the pure-state bound, mixed inputs are purified onto
    2n qudits first) or a coefficient vector alpha over the stabilizer
    ensemble, in which case t, n, d must be supplied.  With mixed=True the
    coefficient route reads alpha over the 2n-qudit ensemble, representing
    the purification of a mixed invariant state.
    """
    if isinstance(source, SymmetricInput):
        t, n, d = source.t, source.n, source.d
        if source.symmetry != "full":
            raise ValueError("exponential de Finetti needs full O_t symmetry")
        vals, vecs = np.linalg.eigh(source.state)
        if vals[-1] > 1.0 - 1e-9:
            # pure input
            data = gram(n, d, t)
            alpha, residual = stab_power_decompose(vecs[:, -1], data)
            bound = pure_bound(n, d, t, s)
            mixed = False
        else:
            psi = purify(source.state)
            # reorder (sys copies, anc copies) -> (sys1, anc1, sys2, anc2, ...)
            # so the doubled system reads as (d^{2n})^{x t}
            order = [k // 2 if k % 2 == 0 else t + k // 2 for k in range(2 * t)]
            psi = psi.reshape((d**n,) * (2 * t)).transpose(order).reshape(-1)
            data = gram(2 * n, d, t)
            alpha, residual = stab_power_decompose(psi, data)
            bound = mixed_bound(n, d, t, s)
            mixed = True
    else:
        alpha = np.asarray(source, dtype=complex)
        if t is None or n is None or d is None:
            raise ValueError("coefficient route needs explicit t, n, d")
        data = gram(2 * n if mixed else n, d, t)
        residual = 0.0
        bound = mixed_bound(n, d, t, s) if mixed else pure_bound(n, d, t, s)
    norm2 = float((alpha.conj() @ data.G @ alpha).real)
    p = np.abs(alpha) ** 2
    p = p / p.sum()
    rho_s = reduced_from_coefficients(alpha / math.sqrt(norm2), s, data)
    sigma = _stab_mixture(p, s, data)
    if mixed:
        rho_s = _trace_ancillas(rho_s, s, d**n)
        sigma = _trace_ancillas(sigma, s, d**n)
    dist = trace_distance(rho_s, sigma)
    return {
        "t": t,
        "s": s,
        "n": n,
        "d": d,
        "mixed": mixed,
        "distance": dist,
        "bound": float(bound),
        "decompose_residual": residual,
        "alpha_norm2": norm2,
        "passed": bool(dist <= bound + 1e-10),
        "vacuous": bool(bound > 1.0),
    }


def anti_definetti_check(source: SymmetricInput, s: int) -> dict:
    """Distance to the best stabilizer-power mixture under the weaker
    permutation + anti-identity symmetry (qubits, s a multiple of 6)."""
    t, n, d = source.t, source.n, source.d
    if d != 2:
        raise ValueError("anti-identity de Finetti is a qubit statement")
    if s % 6:
        raise ValueError("s must be a multiple of 6")
    if source.symmetry not in ("perm+anti", "full"):
        raise ValueError("needs permutation + anti-identity symmetry")
    dims = 2 ** (n * s)
    # s-copy reduced state by dense partial trace over the last t - s copies
    block = d**n
    rho = source.state.reshape((block,) * (2 * t))
    for _ in range(t - s):
        rho = np.trace(rho, axis1=rho.ndim // 2 - 1, axis2=rho.ndim - 1)
    rho = rho.reshape(dims, dims)
    data = gram(n, d, t)
    basis = np.array(
        [
            np.outer(kron_power_vec(st, s), kron_power_vec(st, s).conj()).reshape(-1)
            for st in data.states
        ]
    )
    A = np.vstack([basis.real.T, basis.imag.T])
    b = np.concatenate([rho.reshape(-1).real, rho.reshape(-1).imag])
    p, _ = nnls(A, b)
    if p.sum() <= 0:
        p = np.ones(len(p))
    p = p / p.sum()
    sigma = _stab_mixture(p, s, data)
    dist = trace_distance(rho, sigma)
    purity = float(np.trace(source.state @ source.state).real)
    bound = anti_bound(n, t, s, mixed=purity < 1.0 - 1e-9)
    return {
        "t": t,
        "s": s,
        "n": n,
        "d": d,
        "distance": float(dist),
        "bound": float(bound),
        "weights": p,
        "passed": bool(dist <= bound + 1e-10),
        "vacuous": bool(bound > 1.0),
    }
