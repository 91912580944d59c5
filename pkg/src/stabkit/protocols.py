"""Stabilizer-testing protocols, phase-space uncertainty, and negativity.

Acceptance probabilities are computed by two independent routes whenever
dimensions permit: a moment formula over the characteristic distribution
p_psi (or the Wigner function w_psi), and an explicit dense POVM element on
tensor powers of the state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .phase_space import (
    char_distribution,
    check_dim,
    kron_power_vec,
    phase_points,
    point_operators,
    weyl,
    weyl_all,
    wigner_state,
)
from .gf import symplectic_form

__all__ = [
    "ProtocolReport",
    "bell_difference_distribution",
    "qubit_accept_probability",
    "qubit_accept_operator_route",
    "anti_identity_operator",
    "simulate_algorithm1",
    "qudit_accept_probability",
    "v_s_operator",
    "v_s_permutation_action",
    "three_copy_accept_probability",
    "three_copy_operator",
    "uncertainty_weyl",
    "uncertainty_points",
    "sum_negativity",
    "mana",
    "wigner_norm",
    "robust_hudson_check",
    "max_mixed_state_check",
    "clifford_test",
    "choi_state",
]


@dataclass
class ProtocolReport:
    protocol: str
    n: int
    d: int
    p_accept: float
    bound: float | None = None
    max_overlap: float | None = None
    shots: int | None = None
    passed: bool = True
    details: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {
            "protocol": self.protocol,
            "n": self.n,
            "d": self.d,
            "p_accept": self.p_accept,
            "bound": self.bound,
            "max_overlap": self.max_overlap,
            "shots": self.shots,
            "passed": bool(self.passed),
        }
        out.update(self.details)
        return out


def _infer_n(psi: np.ndarray, d: int) -> int:
    n = round(math.log(len(psi), d))
    if d**n != len(psi):
        raise ValueError("state dimension is not a power of d")
    return n


# ---------------------------------------------------------------------------
# Bell difference sampling and the qubit test
# ---------------------------------------------------------------------------

def bell_difference_distribution(psi: np.ndarray, check: bool = True) -> np.ndarray:
    """q(a) = sum_x p_psi(x) p_psi(x + a) for a qubit state.

    When check is set the distribution is recomputed as tr[Pi_a psi^{x 4}]
    with Pi_a = 2^{-2n} sum_x (-1)^{[a,x]} W_x^{x 4}, via per-x Weyl
    expectations; the two routes must agree.
    """
    d = 2
    n = _infer_n(psi, d)
    p = char_distribution(psi, n, d)
    m = len(p)
    conv = np.empty(m)
    pts = phase_points(n, d)
    # index arithmetic of x + a over Z_2^{2n} is XOR on bit patterns
    for ia in range(m):
        shifted = np.bitwise_xor(np.arange(m), ia)
        conv[ia] = p @ p[shifted]
    if check:
        ws = weyl_all(n, d)
        expect = np.einsum("i,xij,j->x", psi.conj(), ws, psi)
        fourth = (expect**4).real
        signs = np.array(
            [[(-1) ** symplectic_form(a, x, d) for x in pts] for a in pts]
        )
        operator_route = signs @ fourth / 2 ** (2 * n)
        if np.abs(conv - operator_route).max() > 1e-10:
            raise AssertionError("Bell difference routes disagree")
    if abs(conv.sum() - 1.0) > 1e-10:
        raise AssertionError("Bell difference distribution does not normalize")
    return conv


def qubit_accept_probability(psi: np.ndarray) -> float:
    """p_accept of the six-copy qubit test: (1 + 2^{2n} sum_x p^3) / 2."""
    n = _infer_n(psi, 2)
    p = char_distribution(psi, n, 2)
    return float(0.5 * (1.0 + 2 ** (2 * n) * (p**3).sum()))


def anti_identity_operator(n: int) -> np.ndarray:
    """V = 2^{-n} (I^{x 6} + X^{x 6} + Y^{x 6} + Z^{x 6})^{x n} on 6n qubits.

    The tensor factors are ordered copy-major to act on (psi^{x 6}).
    """
    check_dim(2 ** (6 * n))
    paulis = [np.eye(2), np.array([[0, 1], [1, 0]])]
    paulis.append(np.array([[0, -1j], [1j, 0]]))
    paulis.append(np.diag([1.0, -1.0]))
    v = sum(kron_power_vec(P.reshape(-1), 6).reshape((2,) * 12).transpose(
        [2 * i for i in range(6)] + [2 * i + 1 for i in range(6)]
    ).reshape(64, 64) for P in paulis) / 2
    out = np.array([[1.0 + 0j]])
    for _ in range(n):
        out = np.kron(out, v)
    from .phase_space import tensor_permute

    # out acts qudit-major ((copy factors of qubit 1), ...); reorder to copy-major
    ordering = [j * 6 + i for i in range(6) for j in range(n)]
    return tensor_permute(out, ordering, 2)


def qubit_accept_operator_route(psi: np.ndarray) -> float:
    """tr[psi^{x 6} (I + V)/2] with V the anti-identity action."""
    n = _infer_n(psi, 2)
    V = anti_identity_operator(n)
    v6 = kron_power_vec(psi, 6)
    return float((0.5 * (1.0 + v6.conj() @ V @ v6)).real)


def simulate_algorithm1(psi: np.ndarray, shots: int, seed: int) -> ProtocolReport:
    """Monte-Carlo of the six-copy qubit test.

    Each round samples a from the Bell difference distribution, then
    measures the Hermitian Weyl operator W_a twice on two fresh copies; the
    round accepts when both outcomes agree, which happens with probability
    (1 + <W_a>^2)/2 and is simulated by explicit projective collapse.
    """
    if shots <= 0:
        raise ValueError("shots must be positive")
    rng = np.random.default_rng(seed)
    n = _infer_n(psi, 2)
    q = bell_difference_distribution(psi, check=False)
    pts = phase_points(n, 2)
    draws = rng.choice(len(q), size=shots, p=q)
    accepted = 0
    eig_cache: dict[int, tuple[np.ndarray, np.ndarray]] = {}
    for ia in draws:
        if ia not in eig_cache:
            w = weyl(pts[ia], n, 2)
            vals, vecs = np.linalg.eigh(w)
            eig_cache[ia] = (np.sign(vals), vecs)
        signs, vecs = eig_cache[ia]
        amps = np.abs(vecs.conj().T @ psi) ** 2
        p_plus = float(amps[signs > 0].sum())
        first = rng.random() < p_plus
        second = rng.random() < p_plus
        if first == second:
            accepted += 1
    p_emp = accepted / shots
    p_true = qubit_accept_probability(psi)
    sigma = math.sqrt(max(p_true * (1 - p_true), 1e-12) / shots)
    return ProtocolReport(
        protocol="qubit6-mc",
        n=n,
        d=2,
        p_accept=p_emp,
        shots=shots,
        passed=abs(p_emp - p_true) <= 4 * sigma + 1e-9,
        details={"p_analytic": p_true, "sigma": sigma},
    )


# ---------------------------------------------------------------------------
# qudit tests
# ---------------------------------------------------------------------------

def qudit_accept_probability(psi: np.ndarray, s: int, d: int) -> float:
    """p_accept of the 2s-copy qudit test: (1 + d^{(s-1)n} sum_x p^s) / 2."""
    if math.gcd(s, d) != 1:
        raise ValueError("s must be invertible mod d")
    n = _infer_n(psi, d)
    p = char_distribution(psi, n, d)
    return float(0.5 * (1.0 + d ** ((s - 1) * n) * (p**s).sum()))


def qudit_soundness_constant(d: int, s: int) -> float:
    """C with p_accept <= 1 - C eps^2: (1 - (1 - 1/4d^2)^{s-1}) / 2."""
    return (1.0 - (1.0 - 1.0 / (4 * d * d)) ** (s - 1)) / 2.0


def v_s_operator(s: int, n: int, d: int) -> np.ndarray:
    """V_s = d^{-n} sum_x (W_x (x) W_x^dag)^{x s} on 2s blocks of n qudits."""
    check_dim(d ** (2 * s * n))
    ws = weyl_all(n, d)
    dim = d ** (2 * s * n)
    V = np.zeros((dim, dim), dtype=complex)
    for w in ws:
        pair = np.kron(w, w.conj().T)
        term = np.array([[1.0 + 0j]])
        for _ in range(s):
            term = np.kron(term, pair)
        V += term
    return V / d**n


def v_s_permutation_action(s: int, n: int, d: int) -> np.ndarray:
    """The same V_s as a basis permutation: x -> (O (x) I_n) x with
    O = 1 - s^{-1} p p^T, p the length-2s parity vector (-1,1,...,-1,1)."""
    sinv = pow(s, -1, d)
    par = np.array([(-1) ** (k + 1) for k in range(2 * s)], dtype=np.int64) % d
    O = (np.eye(2 * s, dtype=np.int64) - sinv * np.outer(par, par)) % d
    dim = d ** (2 * s * n)
    perm = np.zeros(dim, dtype=np.int64)
    weights_block = (d**n) ** np.arange(2 * s - 1, -1, -1, dtype=np.int64)
    digits_n = d ** np.arange(n - 1, -1, -1, dtype=np.int64)
    for col in range(dim):
        rem = col
        blocks = []
        for k in range(2 * s):
            blocks.append(rem // int(weights_block[k]))
            rem %= int(weights_block[k])
        vecs = np.array(
            [[(b // int(digits_n[j])) % d for j in range(n)] for b in blocks],
            dtype=np.int64,
        )
        out_vecs = (O @ vecs) % d
        row = 0
        for k in range(2 * s):
            row = row * d**n + int(out_vecs[k] @ digits_n)
        perm[col] = row
    M = np.zeros((dim, dim))
    M[perm, np.arange(dim)] = 1.0
    return M


def three_copy_accept_probability(psi: np.ndarray, d: int) -> float:
    """p_accept of the three-copy odd-d test: (1 + d^{2n} sum_x w^3) / 2."""
    if d % 6 not in (1, 5):
        raise ValueError("three-copy test needs d = 1, 5 mod 6")
    n = _infer_n(psi, d)
    w = wigner_state(psi, n, d)
    return float(0.5 * (1.0 + d ** (2 * n) * (w**3).sum()))


def three_copy_operator(n: int, d: int) -> np.ndarray:
    """V = d^{-n} sum_x A_x^{x 3}."""
    check_dim(d ** (3 * n))
    aops = point_operators(n, d)
    dim = d ** (3 * n)
    V = np.zeros((dim, dim), dtype=complex)
    for a in aops:
        V += np.kron(np.kron(a, a), a)
    return V / d**n


# ---------------------------------------------------------------------------
# uncertainty lemmas
# ---------------------------------------------------------------------------

def uncertainty_weyl(psi: np.ndarray, x, y, n: int, d: int) -> dict:
    """Commutation forced by two sharp Weyl expectations (delta = 1/2d)."""
    delta = 1.0 / (2 * d)
    wx = np.abs(psi.conj() @ weyl(x, n, d) @ psi) ** 2
    wy = np.abs(psi.conj() @ weyl(y, n, d) @ psi) ** 2
    premise = wx > 1 - delta**2 and wy > 1 - delta**2
    commute = symplectic_form(x, y, d) == 0
    return {
        "premise": bool(premise),
        "commute": bool(commute),
        "violated": bool(premise and not commute),
        "expectations": (float(wx), float(wy)),
    }


def uncertainty_points(psi: np.ndarray, x, y, z, n: int, d: int) -> dict:
    """Commutation of W_{z-x}, W_{y-x} forced by three sharp point values."""
    if d % 2 == 0:
        raise ValueError("point-operator uncertainty needs odd d")
    aops = point_operators(n, d)
    from .phase_space import point_index

    thresh = math.sqrt(1.0 - 1.0 / (2 * d * d))
    vals = [
        float((psi.conj() @ aops[point_index(v, n, d)] @ psi).real)
        for v in (x, y, z)
    ]
    premise = all(v > thresh for v in vals)
    diff1 = (np.asarray(z) - np.asarray(x)) % d
    diff2 = (np.asarray(y) - np.asarray(x)) % d
    commute = symplectic_form(diff1, diff2, d) == 0
    return {
        "premise": bool(premise),
        "commute": bool(commute),
        "violated": bool(premise and not commute),
        "values": vals,
    }


# ---------------------------------------------------------------------------
# negativity and the robust Hudson theorem
# ---------------------------------------------------------------------------

def wigner_norm(psi: np.ndarray, d: int) -> float:
    """||psi||_W = sum_x |w_psi(x)|."""
    if d % 2 == 0:
        raise ValueError("Wigner quantities need odd d")
    n = _infer_n(psi, d)
    return float(np.abs(wigner_state(psi, n, d)).sum())


def sum_negativity(psi: np.ndarray, d: int) -> float:
    """sn = sum over negative Wigner values of |w|; equals (||psi||_W - 1)/2."""
    if d % 2 == 0:
        raise ValueError("Wigner quantities need odd d")
    n = _infer_n(psi, d)
    w = wigner_state(psi, n, d)
    direct = float(-w[w < 0].sum())
    via_norm = 0.5 * (np.abs(w).sum() - w.sum())
    if abs(direct - via_norm) > 1e-12:
        raise AssertionError("sum-negativity routes disagree")
    return direct


def mana(psi: np.ndarray, d: int) -> float:
    return float(np.log(2 * sum_negativity(psi, d) + 1.0))


def robust_hudson_check(psi: np.ndarray, d: int) -> ProtocolReport:
    """1 - max_S |<S|psi>|^2 <= 9 d^2 sn(psi), plus the Hoelder chain."""
    from .stabilizer import max_stabilizer_overlap

    n = _infer_n(psi, d)
    sn = sum_negativity(psi, d)
    _, overlap = max_stabilizer_overlap(psi, n, d)
    bound = 9 * d * d * sn
    w = wigner_state(psi, n, d)
    q = d**n * w**2
    holder_ok = (q**2).sum() >= 1.0 / (d**n * wigner_norm(psi, d) ** 2) - 1e-12
    passed = (1.0 - overlap) <= bound + 1e-10 and holder_ok
    return ProtocolReport(
        protocol="robust-hudson",
        n=n,
        d=d,
        p_accept=float("nan"),
        bound=float(bound),
        max_overlap=float(overlap),
        passed=bool(passed),
        details={"sum_negativity": sn, "holder_ok": bool(holder_ok)},
    )


def max_mixed_state_check(psi: np.ndarray, d: int) -> bool:
    """The characteristic distribution never exceeds d^{-n}."""
    n = _infer_n(psi, d)
    return bool(char_distribution(psi, n, d).max() <= d ** (-n) + 1e-12)


# ---------------------------------------------------------------------------
# Clifford testing via Choi states
# ---------------------------------------------------------------------------

def choi_state(U: np.ndarray) -> np.ndarray:
    """(U (x) I)|Phi+> as a vector on the doubled system."""
    m = U.shape[0]
    if np.abs(U @ U.conj().T - np.eye(m)).max() > 1e-9:
        raise ValueError("input is not unitary")
    # vec of U/sqrt(m): |U> = sum_ij U_ij |i>|j> / sqrt(m)
    return U.reshape(-1) / math.sqrt(m)


def clifford_test(U: np.ndarray) -> ProtocolReport:
    """Six-copy stabilizer test applied to the Choi state of U (qubits)."""
    psi = choi_state(U)
    n = _infer_n(psi, 2)
    p = qubit_accept_probability(psi)
    from .stabilizer import max_stabilizer_overlap

    _, overlap = max_stabilizer_overlap(psi, n, 2)
    return ProtocolReport(
        protocol="clifford-test",
        n=n,
        d=2,
        p_accept=p,
        max_overlap=float(overlap),
        passed=bool(p <= 1.0 + 1e-10),
        details={"is_clifford": bool(p >= 1.0 - 1e-10)},
    )
