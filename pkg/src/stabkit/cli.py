"""Command-line front end and full-verification pipeline driver."""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from dataclasses import dataclass, field

import numpy as np

__all__ = ["RunConfig", "ReportBundle", "run", "emit", "main"]

DEFAULT_CAP = 8192


@dataclass
class RunConfig:
    command: str
    d: int = 2
    t: int = 3
    n: int = 1
    s: int = 2
    seed: int | None = None
    shots: int = 10000
    profile: str = "quick"
    variant: str = "exp"
    protocol: str = "qubit6"
    emit_mode: str = "json"
    check: bool = False
    cap: int = DEFAULT_CAP
    tolerance: float | None = None


@dataclass
class ReportBundle:
    config: dict
    records: list = field(default_factory=list)
    wall_clock: float = 0.0
    versions: dict = field(default_factory=dict)

    def add(self, name: str, check_id: str, status: str,
            measured=None, bound=None, tolerance=None) -> None:
        self.records.append(
            {
                "name": name,
                "check_id": check_id,
                "status": status,
                "measured": measured,
                "bound": bound,
                "tolerance": tolerance,
            }
        )

    @property
    def ok(self) -> bool:
        return all(r["status"] in ("pass", "skip") for r in self.records)

    def to_json(self) -> dict:
        return {
            "config": self.config,
            "records": self.records,
            "wall_clock": self.wall_clock,
            "versions": self.versions,
        }


def _subspace_json(T) -> dict:
    return {"d": T.d, "ambient": T.ambient, "basis": T.basis.tolist()}


def _new_bundle(cfg: RunConfig) -> ReportBundle:
    cfgdict = {k: v for k, v in vars(cfg).items()}
    return ReportBundle(config=cfgdict, versions={"numpy": np.__version__})


def _cmd_enumerate_sigma(cfg: RunConfig, rep: ReportBundle) -> None:
    from .commutant import sigma_count_formula, stochastic_lagrangians

    sigma = stochastic_lagrangians(cfg.t, cfg.d)
    want = sigma_count_formula(cfg.t, cfg.d)
    rep.add("sigma-count", "count-identity",
            "pass" if len(sigma) == want else "fail",
            measured=len(sigma), bound=want)
    if cfg.emit_mode == "json":
        rep.config["sigma"] = [_subspace_json(T) for T in sigma]


def _cmd_enumerate_o(cfg: RunConfig, rep: ReportBundle) -> None:
    from .commutant import orthogonal_stochastic_group

    group = orthogonal_stochastic_group(cfg.t, cfg.d)
    rep.add("o-count", "group-enumeration", "pass", measured=len(group))
    if cfg.emit_mode == "json":
        rep.config["group"] = [O.tolist() for O in group]


def _cmd_verify_commutant(cfg: RunConfig, rep: ReportBundle) -> None:
    from .commutant import commutes_with_clifford, stochastic_lagrangians

    worst = 0.0
    for T in stochastic_lagrangians(cfg.t, cfg.d):
        out = commutes_with_clifford(T, cfg.n, cfg.d)
        worst = max(worst, out["max_norm"])
    rep.add("commutant", "clifford-commutator", "pass" if worst < 1e-9 else "fail",
            measured=worst, tolerance=1e-9)


def _cmd_double_cosets(cfg: RunConfig, rep: ReportBundle) -> None:
    from .commutant import double_cosets

    cosets = double_cosets(cfg.t, cfg.d)
    sizes = [c["size"] for c in cosets]
    rep.add("double-cosets", "orbit-closure",
            "pass" if len(cosets) <= cfg.t else "fail",
            measured=sizes, bound=cfg.t)


def _cmd_moments(cfg: RunConfig, rep: ReportBundle) -> None:
    from .moments import empirical_stab_moment, stab_moment_operator

    formula = stab_moment_operator(cfg.t, cfg.n, cfg.d)
    if cfg.check:
        brute = empirical_stab_moment(cfg.t, cfg.n, cfg.d)
        gap = float(np.linalg.norm(formula - brute))
        rep.add("moment-formula", "ensemble-average",
                "pass" if gap < 1e-10 else "fail", measured=gap, tolerance=1e-10)
    else:
        rep.add("moment-formula", "formula-evaluation", "pass",
                measured=float(np.trace(formula).real))


def _cmd_design(cfg: RunConfig, rep: ReportBundle) -> None:
    from .moments import (
        design_gap,
        find_design_weights,
        mixture_design_gap,
        qutrit_fiducial_angle,
    )
    from .phase_space import kron_power_vec

    rng = np.random.default_rng(cfg.seed if cfg.seed is not None else 0)
    if cfg.d == 3 and cfg.t == 3:
        theta = qutrit_fiducial_angle(cfg.n)
        single = np.array([np.cos(theta), -np.sin(theta), 0.0])
        fiducials = [kron_power_vec(single, cfg.n)]
    else:
        dim = cfg.d**cfg.n
        fiducials = []
        for _ in range(8):
            v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
            fiducials.append(v / np.linalg.norm(v))
    weights = find_design_weights(fiducials, cfg.t, cfg.n, cfg.d)
    gap = mixture_design_gap(fiducials, weights, cfg.t, cfg.n, cfg.d)
    rep.add("design", "weighted-orbit-design",
            "pass" if gap < 1e-8 else "fail",
            measured=gap, bound=int((weights > 0).sum()), tolerance=1e-8)


def _cmd_test(cfg: RunConfig, rep: ReportBundle) -> None:
    from . import protocols as pr

    if cfg.seed is None:
        raise SystemExit("--seed is required for sampling commands")
    rng = np.random.default_rng(cfg.seed)
    dim = cfg.d**cfg.n
    psi = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    psi /= np.linalg.norm(psi)
    if cfg.protocol == "qubit6":
        p = pr.qubit_accept_probability(psi)
        from .stabilizer import max_stabilizer_overlap

        _, ov = max_stabilizer_overlap(psi, cfg.n, cfg.d)
        bound = 1 - (1 - ov) ** 2 / 4
        rep.add("qubit-test", "soundness-bound",
                "pass" if p <= bound + 1e-12 else "fail", measured=p, bound=bound)
    elif cfg.protocol == "qudit":
        p = pr.qudit_accept_probability(psi, cfg.s, cfg.d)
        rep.add("qudit-test", "accept-probability", "pass", measured=p)
    elif cfg.protocol == "three-copy":
        p = pr.three_copy_accept_probability(psi, cfg.d)
        rep.add("three-copy-test", "accept-probability", "pass", measured=p)
    elif cfg.protocol == "mc":
        out = pr.simulate_algorithm1(psi, cfg.shots, cfg.seed)
        rep.add("qubit-mc", "monte-carlo",
                "pass" if out.passed else "fail",
                measured=out.p_accept, bound=out.details["p_analytic"])
    else:
        raise SystemExit(f"unknown protocol {cfg.protocol!r}")


def _cmd_hudson(cfg: RunConfig, rep: ReportBundle) -> None:
    from . import protocols as pr

    if cfg.seed is None:
        raise SystemExit("--seed is required for sampling commands")
    rng = np.random.default_rng(cfg.seed)
    dim = cfg.d**cfg.n
    worst = -np.inf
    for _ in range(100):
        psi = rng.normal(size=dim) + 1j * rng.normal(size=dim)
        psi /= np.linalg.norm(psi)
        out = pr.robust_hudson_check(psi, cfg.d)
        slack = (1 - out.max_overlap) - out.bound
        worst = max(worst, slack)
        if not out.passed:
            rep.add("hudson", "overlap-vs-negativity", "fail",
                    measured=1 - out.max_overlap, bound=out.bound)
            return
    rep.add("hudson", "overlap-vs-negativity", "pass", measured=worst, bound=0.0)


def _cmd_definetti(cfg: RunConfig, rep: ReportBundle) -> None:
    from . import definetti as df

    seed = cfg.seed if cfg.seed is not None else 0
    if cfg.variant == "exp":
        data = df.gram(cfg.n, cfg.d, cfg.t)
        alpha = df.random_span_coefficients(data, seed)
        out = df.exp_definetti_check(alpha, cfg.s, t=cfg.t, n=cfg.n, d=cfg.d)
    elif cfg.variant == "anti":
        inp = df.make_invariant_state(cfg.t, cfg.n, cfg.d, "perm+anti", seed)
        out = df.anti_definetti_check(inp, cfg.s)
    else:
        raise SystemExit(f"unknown variant {cfg.variant!r}")
    status = "pass" if out["passed"] else "fail"
    rep.add(f"definetti-{cfg.variant}",
            "reduced-state-distance", status,
            measured=out["distance"], bound=out["bound"])
    rep.config["vacuous_bound"] = out["vacuous"]


def _verify_all_checks(profile: str):
    """(name, check_id, callable) triples for the verification pipeline."""
    checks = []

    def sigma_check(t, d):
        from .commutant import sigma_count_formula, stochastic_lagrangians

        got = len(stochastic_lagrangians(t, d))
        want = sigma_count_formula(t, d)
        return got == want, got, want

    def commutant_check(t, d, n):
        from .commutant import commutes_with_clifford, stochastic_lagrangians

        worst = max(
            commutes_with_clifford(T, n, d)["max_norm"]
            for T in stochastic_lagrangians(t, d)
        )
        return worst < 1e-9, worst, 1e-9

    def moment_check(t, n, d):
        from .moments import empirical_stab_moment, stab_moment_operator

        gap = float(
            np.linalg.norm(
                stab_moment_operator(t, n, d) - empirical_stab_moment(t, n, d)
            )
        )
        return gap < 1e-10, gap, 1e-10

    def design_check(d, t):
        from .moments import design_gap, haar_moment_coefficients

        gap = design_gap(t, 1, d)
        return True, gap, None

    def completeness_check(n, d):
        from . import protocols as pr
        from .stabilizer import all_stabilizer_states

        worst = 0.0
        for psi in all_stabilizer_states(n, d):
            if d == 2:
                p = pr.qubit_accept_probability(psi)
            else:
                p = pr.qudit_accept_probability(psi, 2, d)
            worst = max(worst, abs(p - 1.0))
        return worst < 1e-12, worst, 1e-12

    checks.append(("sigma-count-(3,3)", "count-identity",
                   lambda: sigma_check(3, 3)))
    checks.append(("sigma-count-(4,2)", "count-identity",
                   lambda: sigma_check(4, 2)))
    checks.append(("commutant-(3,3,1)", "clifford-commutator",
                   lambda: commutant_check(3, 3, 1)))
    checks.append(("moment-(3,1,3)", "ensemble-average",
                   lambda: moment_check(3, 1, 3)))
    checks.append(("completeness-qubit-n1", "perfect-completeness",
                   lambda: completeness_check(1, 2)))
    checks.append(("completeness-qutrit-n1", "perfect-completeness",
                   lambda: completeness_check(1, 3)))
    if profile == "full":
        checks.append(("sigma-count-(4,3)", "count-identity",
                       lambda: sigma_check(4, 3)))
        checks.append(("sigma-count-(6,2)", "count-identity",
                       lambda: sigma_check(6, 2)))
        checks.append(("commutant-(4,2,1)", "clifford-commutator",
                       lambda: commutant_check(4, 2, 1)))
        checks.append(("commutant-(4,2,2)", "clifford-commutator",
                       lambda: commutant_check(4, 2, 2)))
        checks.append(("moment-(4,1,2)", "ensemble-average",
                       lambda: moment_check(4, 1, 2)))
        checks.append(("moment-(4,2,2)", "ensemble-average",
                       lambda: moment_check(4, 2, 2)))
        checks.append(("moment-(6,1,2)", "ensemble-average",
                       lambda: moment_check(6, 1, 2)))
        checks.append(("completeness-qubit-n2", "perfect-completeness",
                       lambda: completeness_check(2, 2)))
    return checks


def _cmd_verify_all(cfg: RunConfig, rep: ReportBundle) -> None:
    from .phase_space import ResourceCapError

    for name, check_id, fn in _verify_all_checks(cfg.profile):
        try:
            ok, measured, bound = fn()
        except ResourceCapError as exc:
            rep.add(name, check_id, "skip", measured=str(exc))
            continue
        rep.add(name, check_id, "pass" if ok else "fail",
                measured=measured, bound=bound)


_COMMANDS = {
    "enumerate-sigma": _cmd_enumerate_sigma,
    "enumerate-o": _cmd_enumerate_o,
    "verify-commutant": _cmd_verify_commutant,
    "double-cosets": _cmd_double_cosets,
    "moments": _cmd_moments,
    "design": _cmd_design,
    "test": _cmd_test,
    "hudson": _cmd_hudson,
    "definetti": _cmd_definetti,
    "verify-all": _cmd_verify_all,
}


def run(cfg: RunConfig) -> ReportBundle:
    from . import phase_space

    cap = int(os.environ.get("STABKIT_DIM_CAP", cfg.cap))
    phase_space.DEFAULT_DIM_CAP = cap
    rep = _new_bundle(cfg)
    start = time.time()
    _COMMANDS[cfg.command](cfg, rep)
    rep.wall_clock = time.time() - start
    return rep


def emit(report: ReportBundle, fmt: str = "json") -> bytes:
    if fmt == "json":
        payload = report.to_json()
        payload["wall_clock"] = None  # determinism: drop timing from the output
        return (json.dumps(payload, indent=2, sort_keys=True, default=str) + "\n").encode()
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(
            buf,
            fieldnames=["name", "check_id", "status", "measured", "bound", "tolerance"],
        )
        writer.writeheader()
        for record in report.records:
            writer.writerow(record)
        return buf.getvalue().encode()
    if fmt == "text-table":
        lines = [f"{'name':<28} {'status':<6} measured"]
        for r in report.records:
            lines.append(f"{r['name']:<28} {r['status']:<6} {r['measured']}")
        return ("\n".join(lines) + "\n").encode()
    raise ValueError(f"unknown format {fmt!r}")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="stabkit")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--d", type=int, default=2)
        p.add_argument("--t", type=int, default=3)
        p.add_argument("--n", type=int, default=1)
        p.add_argument("--s", type=int, default=2)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--shots", type=int, default=10000)
        p.add_argument("--profile", choices=["quick", "full"], default="quick")
        p.add_argument("--variant", choices=["exp", "anti"], default="exp")
        p.add_argument("--protocol",
                       choices=["qubit6", "qudit", "three-copy", "mc"],
                       default="qubit6")
        p.add_argument("--emit", dest="emit_mode",
                       choices=["json", "csv", "text-table", "count"],
                       default="json")
        p.add_argument("--check", action="store_true")
        p.add_argument("--output", default=None)
    args = parser.parse_args(argv)
    cfg = RunConfig(
        command=args.command, d=args.d, t=args.t, n=args.n, s=args.s,
        seed=args.seed, shots=args.shots, profile=args.profile,
        variant=args.variant, protocol=args.protocol,
        emit_mode=args.emit_mode, check=args.check,
    )
    report = run(cfg)
    if args.emit_mode == "count":
        first = report.records[0]
        out = f"{first['measured']}\n".encode()
    else:
        out = emit(report, args.emit_mode)
    if args.output:
        with open(args.output, "wb") as fh:
            fh.write(out)
    else:
        sys.stdout.buffer.write(out)
    return 0 if report.ok else 1


if __name__ == "__main__":
    raise SystemExit(main())
