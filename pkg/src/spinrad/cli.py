"""Batch front-end: suite orchestration, CSV/JSON artifact emission.

Suites: kernel, e2, verify, classical, fock-fit, multiplicity.
Exit codes: 0 all checks passed, 1 a check failed or a module error
occurred, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np
import yaml

from . import __version__
from .config import parse_config, run_manifest
from .cutoff import CutoffProfile
from .errors import SpinradError
from .field_energy import classical_current, classical_decomposition_check, \
    field_energy, vector_current
from .fock import build_mode_grid, multiplicity_scan, quadratic_fit
from .kernel import a11_origin, kernel_matrix, kernel_oracle_3d
from .spin_algebra import product_state
from .spin_operator import assemble_am, ground_eigenspace, quadratic_form

OUT_ENV_VAR = "SPINRAD_OUT"


def _fmt(x) -> str:
    """Shortest round-trip decimal (<= 17 significant digits)."""
    return repr(float(x))


def _write_csv(path: Path, header, rows) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(
            _fmt(c) if isinstance(c, float) else str(c) for c in row))
    path.write_text("\n".join(lines) + "\n")


def _out_dir(args) -> Path:
    out = args.out or os.environ.get(OUT_ENV_VAR) or "."
    path = Path(out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _load_config(args):
    cfg = parse_config(Path(args.config).read_text())
    if args.seed is not None:
        cfg.seed = args.seed
    return cfg


def _random_states(rng, dim, count):
    out = []
    for _ in range(count):
        v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
        out.append(v / np.linalg.norm(v))
    return out


# ---------------------------------------------------------------------------
# Suites
# ---------------------------------------------------------------------------

def suite_kernel(args) -> int:
    cfg = _load_config(args)
    profile = cfg.profile()
    x = np.array(args.at, dtype=float)
    K = kernel_matrix(profile, x, tol=cfg.tolerances["kernel"])
    doc = {"displacement": list(map(float, x)),
           "matrix": [[float(v) for v in row] for row in K.entries],
           "a11_origin": a11_origin(profile)}
    text = json.dumps(doc, indent=2)
    print(text)
    (_out_dir(args) / "kernel.json").write_text(text + "\n")
    return 0


def suite_e2(args) -> int:
    cfg = _load_config(args)
    system, profile = cfg.system(), cfg.profile()
    A = assemble_am(system, profile)
    lam_min, mult, basis = ground_eigenspace(A, cfg.tolerances["degeneracy"])
    # sampled product-state minimum; reported alongside, nothing asserted
    rng = np.random.default_rng(cfg.seed)
    d1 = int(round(2 * system.s + 1))
    best = 0.0
    for _ in range(200):
        ps = product_state(_random_states(rng, d1, system.P), system.s)
        best = min(best, quadratic_form(A, ps.vector))
    doc = {"lambda_min": float(lam_min), "multiplicity": int(mult),
           "product_state_sampled_min": float(best)}
    if args.eigenbasis:
        doc["eigenbasis"] = [[[float(v.real), float(v.imag)] for v in col]
                             for col in basis.T]
    text = json.dumps(doc, indent=2)
    print(text)
    (_out_dir(args) / "e2.json").write_text(text + "\n")
    return 0


def _verify_rows(cfg):
    system, profile = cfg.system(), cfg.profile()
    tol_id = cfg.tolerances["identity"]
    rng = np.random.default_rng(cfg.seed)
    rows = []

    def add(name, lhs, rhs, tol):
        resid = abs(lhs - rhs)
        rows.append([name, float(lhs), float(rhs), float(resid), float(tol),
                     resid <= tol])

    for i in range(3):
        x = rng.normal(size=3)
        x *= rng.uniform(0.2, 4.0) / np.linalg.norm(x)
        K = kernel_matrix(profile, x).entries
        O = kernel_oracle_3d(profile, x).entries
        add(f"kernel_vs_oracle_{i}", np.abs(K - O).max(), 0.0, 1e-6)

    A = assemble_am(system, profile)
    top = float(np.linalg.eigvalsh(A.matrix)[-1])
    add("negative_semidefinite", max(top, 0.0), 0.0,
        1e-10 * max(1.0, np.linalg.norm(A.matrix)))

    A2 = assemble_am(system.with_moments(2.0 * system.moments), profile)
    add("moment_scaling_c2", float(np.abs(A2.matrix - 4.0 * A.matrix).max()),
        0.0, 1e-12 * max(1.0, np.linalg.norm(A.matrix)))

    for i, X in enumerate(_random_states(rng, system.spin_dim, 3)):
        qf = quadratic_form(A, X)
        energy = field_energy(vector_current(system, profile, X))
        add(f"th_egal_{i}", qf, -energy, tol_id * max(1.0, abs(qf)))

    d1 = int(round(2 * system.s + 1))
    for i in range(2):
        ps = product_state(_random_states(rng, d1, system.P), system.s)
        lhs, rhs, resid = classical_decomposition_check(system, profile, ps)
        add(f"class_decomposition_{i}", lhs, rhs, tol_id * max(1.0, abs(lhs)))
    return rows


def suite_verify(args) -> int:
    cfg = _load_config(args)
    rows = _verify_rows(cfg)
    out = _out_dir(args)
    _write_csv(out / "verify.csv",
               ["check_name", "lhs", "rhs", "residual", "tolerance", "pass"],
               rows)
    (out / "verify_manifest.json").write_text(
        run_manifest(cfg, {"suite": "verify"}) + "\n")
    ok = True
    for row in rows:
        status = "PASS" if row[-1] else "FAIL"
        ok &= bool(row[-1])
        print(f"{status} {row[0]} residual={_fmt(row[3])} "
              f"tolerance={_fmt(row[4])}")
    return 0 if ok else 1


def suite_classical(args) -> int:
    cfg = _load_config(args)
    system, profile = cfg.system(), cfg.profile()
    spins = yaml.safe_load(Path(args.orientations).read_text())
    S = np.array(spins, dtype=float)
    energy = field_energy(classical_current(system, profile, S))
    out = _out_dir(args)
    _write_csv(out / "classical.csv",
               ["quantity", "value"],
               [["magnet_field_energy", float(energy)],
                ["a11_origin", float(a11_origin(profile))]])
    print(f"magnet field energy: {_fmt(energy)}")
    return 0


def suite_fock_fit(args) -> int:
    cfg = _load_config(args)
    system, profile = cfg.system(), cfg.profile()
    grid = build_mode_grid(profile, cfg.grids["n_radial"],
                           cfg.grids["n_angular"])
    scales = [float(t) for t in args.scales.split(",")]
    fit = quadratic_fit(system, profile, grid, cfg.grids["n_max"], scales,
                        tol=cfg.tolerances["eigensolver"], seed=cfg.seed)
    out = _out_dir(args)
    _write_csv(out / "fock_fit.csv",
               ["scale", "energy", "photon_number"],
               [[float(t), float(e), float(n)] for t, e, n in
                zip(fit.scales, fit.energies, fit.photon_numbers)])
    n_slope = float(np.polyfit(np.log(fit.scales),
                               np.log(fit.photon_numbers), 1)[0])
    checks = {
        "c2_matches_discrete_am":
            abs(fit.c2 / fit.a_disc_min - 1.0) <= 0.02,
        "residual_slope_at_least_2.7":
            bool(fit.tolerance_limited or fit.residual_slope >= 2.7),
        "photon_slope_2_pm_0.1": abs(n_slope - 2.0) <= 0.1,
    }
    summary = {
        "suite": "fock-fit", "c2": fit.c2, "a_disc_min": fit.a_disc_min,
        "residual_slope": None if fit.tolerance_limited
        else fit.residual_slope,
        "tolerance_limited": fit.tolerance_limited,
        "photon_number_slope": n_slope, "checks": checks,
    }
    (out / "fock_fit_manifest.json").write_text(
        run_manifest(cfg, summary) + "\n")
    ok = True
    for name, passed in checks.items():
        ok &= passed
        print(f"{'PASS' if passed else 'FAIL'} {name}")
    print(f"c2={_fmt(fit.c2)} a_disc_min={_fmt(fit.a_disc_min)} "
          f"residual_slope={fit.residual_slope} photon_slope={_fmt(n_slope)}")
    return 0 if ok else 1


def suite_multiplicity(args) -> int:
    cfg = _load_config(args)
    system, profile = cfg.system(), cfg.profile()
    grid = build_mode_grid(profile, cfg.grids["n_radial"],
                           cfg.grids["n_angular"])
    gs = [float(g) for g in args.g.split(",")]
    rows = multiplicity_scan(system, profile, grid, cfg.grids["n_max"], gs,
                             degeneracy_tol=cfg.tolerances["degeneracy"],
                             tol=cfg.tolerances["eigensolver"], seed=cfg.seed)
    out = _out_dir(args)
    _write_csv(out / "multiplicity.csv",
               ["g", "energy", "mult_h", "mult_a1", "min_overlap"],
               [[r.g, r.energy, r.mult_h, r.mult_a1, r.min_overlap]
                for r in rows])
    (out / "multiplicity_manifest.json").write_text(
        run_manifest(cfg, {"suite": "multiplicity"}) + "\n")
    ok = True
    for r in rows:
        passed = r.mult_h <= r.mult_a1
        ok &= passed
        print(f"{'PASS' if passed else 'FAIL'} g={_fmt(r.g)} "
              f"mult_h={r.mult_h} mult_a1={r.mult_a1} "
              f"min_overlap={_fmt(r.min_overlap)}")
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spinrad",
        description="Radiative-correction operator suites for spin systems")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="suite", required=True)

    def common(p):
        p.add_argument("--config", required=True, help="YAML run configuration")
        p.add_argument("--out", default=None,
                       help=f"output directory (default ${OUT_ENV_VAR} or .)")
        p.add_argument("--seed", type=int, default=None,
                       help="override the configuration seed")
        p.add_argument("--threads", type=int, default=None,
                       help="advisory thread count for BLAS backends")

    p = sub.add_parser("kernel", help="evaluate the transverse kernel matrix")
    common(p)
    p.add_argument("--at", nargs=3, type=float, required=True,
                   metavar=("X", "Y", "Z"))
    p.set_defaults(func=suite_kernel)

    p = sub.add_parser("e2", help="smallest eigenvalue of A_M with multiplicity")
    common(p)
    p.add_argument("--eigenbasis", action="store_true")
    p.set_defaults(func=suite_e2)

    p = sub.add_parser("verify", help="energy-identity verification suite")
    common(p)
    p.set_defaults(func=suite_verify)

    p = sub.add_parser("classical", help="magnet field energy for given orientations")
    common(p)
    p.add_argument("--orientations", required=True,
                   help="YAML list of P unit 3-vectors")
    p.set_defaults(func=suite_classical)

    p = sub.add_parser("fock-fit", help="ground-energy quadratic fit in the toy model")
    common(p)
    p.add_argument("--scales", required=True,
                   help="comma-separated moment scales, e.g. 0.4,0.2,0.1,0.05")
    p.set_defaults(func=suite_fock_fit)

    p = sub.add_parser("multiplicity", help="ground multiplicity scan")
    common(p)
    p.add_argument("--g", required=True,
                   help="comma-separated common moment values")
    p.set_defaults(func=suite_multiplicity)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.threads is not None:
        for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS",
                    "MKL_NUM_THREADS"):
            os.environ[var] = str(args.threads)
    try:
        return args.func(args)
    except SpinradError as exc:
        print(f"ERROR {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"ERROR {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
