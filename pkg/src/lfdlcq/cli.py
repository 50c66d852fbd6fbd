"""Command-line entry point.

One subcommand per pipeline stage: basis, ham, spectrum, renorm, pdf,
sparsity, resources, oracle-check, and fig2 (the full renormalize ->
diagonalize -> PDF export at the standard strong-coupling configuration).
Every run prints a JSON provenance record (tool version plus the full config
echo) to stdout; file outputs carry their own JSON headers.  Numeric output
uses 17 significant digits with '.' decimal separators and LF line endings, so
identical configurations produce byte-identical files.

Exit codes: 0 success, 1 computation error (machine-readable JSON on stderr),
2 argument errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import __version__
from .encoding import (
    apply_delta,
    enumerate_deltas,
    qubit_count,
    qubit_count_qcd,
)
from .errors import ConvergenceError, DegenerateTruncationError, InfeasibleSeedError, ResourceLimitError
from .fock import charge, enumerate_basis, format_state
from .hamiltonian import (
    ModelParams,
    apply_hamiltonian,
    build_mass_matrix,
    max_abs_element,
    sparsity,
    sparsity_bounds,
)
from .observables import invariant_mass_free, pdf, qmax2, truncate_state
from .spectrum import RenormTarget, lambda_to_g, lowest_eigenpairs, renormalize

FLOAT_FMT = "%.17g"


def _fmt(x: float) -> str:
    return FLOAT_FMT % x


def _provenance(args: argparse.Namespace) -> dict:
    cfg = {k: v for k, v in sorted(vars(args).items()) if k != "func"}
    return {"tool": "lfdlcq", "version": __version__, "config": cfg}


def _emit(obj: dict) -> None:
    print(json.dumps(obj, sort_keys=True))


def _params_from(args, q=None) -> ModelParams:
    g = args.g
    if g is None:
        g = lambda_to_g(args.lam, args.coupling_mode)
    return ModelParams(
        m_B=args.mb, m_F=args.mf, g=g, Lambda=args.cutoff, K=args.k,
        Q=q if q is not None else getattr(args, "q", None),
    )


def _add_model_args(p: argparse.ArgumentParser, with_q=True) -> None:
    p.add_argument("--k", type=int, required=True, help="harmonic resolution K")
    if with_q:
        p.add_argument("--q", type=int, default=None, help="charge sector filter")
    p.add_argument("--mb", type=float, default=1.0, help="bare boson mass")
    p.add_argument("--mf", type=float, default=1.0, help="bare fermion mass")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--g", type=float, default=None, help="coupling as it enters the Hamiltonian")
    g.add_argument("--lambda", dest="lam", type=float, default=0.0,
                   help="Lagrangian coupling, converted via --coupling-mode")
    p.add_argument("--coupling-mode", choices=("identity", "sqrt4pi"), default="identity",
                   help="lambda -> g map: g=lambda, or g=lambda/sqrt(4pi)")
    p.add_argument("--cutoff", type=int, default=None, help="inertia cutoff Lambda (default 4K)")


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--threads", type=int,
                   default=int(os.environ.get("LFDLCQ_THREADS", "0")) or None,
                   help="advisory cap on BLAS threads (env: LFDLCQ_THREADS)")
    p.add_argument("--seed", type=int, default=0, help="RNG seed for iterative solvers")


def cmd_basis(args) -> int:
    basis = enumerate_basis(args.k, args.q)
    header = {
        "K": args.k, "Q": args.q, "dimension": len(basis),
        "provenance": _provenance(args),
    }
    with open(args.out, "w", newline="\n") as fh:
        fh.write(json.dumps(header, sort_keys=True) + "\n")
        for s in basis:
            fh.write(format_state(s) + "\n")
    _emit({"written": args.out, "dimension": len(basis), "provenance": _provenance(args)})
    return 0


def cmd_ham(args) -> int:
    if args.cutoff is None:
        args.cutoff = 4 * args.k
    basis = enumerate_basis(args.k, args.q)
    params = _params_from(args)
    mat = build_mass_matrix(basis, params)
    header = {
        "dim": mat.dim, "sparsity": sparsity(mat), "max_element": max_abs_element(mat),
        "provenance": _provenance(args),
    }
    coo = mat.csr.tocoo()
    with open(args.out, "w", newline="\n") as fh:
        fh.write(json.dumps(header, sort_keys=True) + "\n")
        for i, j, v in zip(coo.row, coo.col, coo.data):
            fh.write(f"{i} {j} {_fmt(v)}\n")
    _emit({"written": args.out, **{k: header[k] for k in ("dim", "sparsity")},
           "provenance": _provenance(args)})
    return 0


def cmd_spectrum(args) -> int:
    if args.cutoff is None:
        args.cutoff = 4 * args.k
    basis = enumerate_basis(args.k, args.q)
    params = _params_from(args)
    mat = build_mass_matrix(basis, params)
    count = min(args.nev, mat.dim)
    res = lowest_eigenpairs(mat, count=count, tol=args.tol, seed=args.seed)
    _emit({
        "K": args.k, "Q": args.q, "dim": mat.dim,
        "eigenvalues": [float(x) for x in res.eigenvalues],
        "residuals": [float(x) for x in res.residuals],
        "provenance": _provenance(args),
    })
    return 0


def cmd_renorm(args) -> int:
    target = RenormTarget(
        mB_phys=args.mbt, mF_phys=args.mft, lam=args.lam, Lambda=args.cutoff, K=args.k
    )
    m_B, m_F, diag = renormalize(
        target, coupling_mode=args.coupling_mode, track=args.track, tol=args.tol
    )
    _emit({
        "m_B": m_B, "m_F": m_F, "g": diag.g, "converged": diag.converged,
        "sweeps": diag.sweeps, "eig_q0": diag.eig_q0, "eig_q1": diag.eig_q1,
        "trace": diag.trace, "provenance": _provenance(args),
    })
    return 0


def _write_pdf_csv(path: str, table, extra: dict, args) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write("n,x,f_f,f_a,f_b\n")
        for i in range(table.K):
            fh.write(
                f"{i + 1},{_fmt((i + 1) / table.K)},{_fmt(table.f_f[i])},"
                f"{_fmt(table.f_a[i])},{_fmt(table.f_b[i])}\n"
            )
    sidecar = {
        "momentum_sum": table.momentum_sum(),
        "charge_sum": table.charge_sum(),
        "qsq": table.qsq,
        **extra,
        "provenance": _provenance(args),
    }
    with open(path + ".json", "w", newline="\n") as fh:
        fh.write(json.dumps(sidecar, sort_keys=True) + "\n")


def cmd_pdf(args) -> int:
    if args.cutoff is None:
        args.cutoff = 4 * args.k
    basis = enumerate_basis(args.k, args.q)
    params = _params_from(args)
    mat = build_mass_matrix(basis, params)
    if args.state == "lowest":
        res = lowest_eigenpairs(mat, count=1, seed=args.seed)
        vec = res.eigenvectors[:, 0]
        eig = float(res.eigenvalues[0])
    else:
        idx = int(args.state)
        if not 0 <= idx < mat.dim:
            raise ValueError(f"eigenstate index {idx} outside block of dimension {mat.dim}")
        res = lowest_eigenpairs(mat, count=idx + 1, seed=args.seed,
                                dense_cutoff=max(512, mat.dim))
        vec = res.eigenvectors[:, idx]
        eig = float(res.eigenvalues[idx])
    qm = qmax2(basis, params)
    kept = 1.0
    if args.qsq is not None:
        vec, kept = truncate_state(vec, basis, params, args.qsq)
    table = pdf(vec, basis, qsq=args.qsq)
    extra = {
        "eigenvalue": eig,
        "momentum_sum_residual": table.momentum_sum() - args.k,
        "charge_sum_residual": table.charge_sum() - (args.q or 0),
        "qmax2": qm,
        "kept_fraction": kept,
    }
    _write_pdf_csv(args.out, table, extra, args)
    _emit({"written": args.out, "sidecar": args.out + ".json", "eigenvalue": eig,
           "kept_fraction": kept, "provenance": _provenance(args)})
    return 0


def cmd_sparsity(args) -> int:
    if args.cutoff is None:
        args.cutoff = 4 * args.k
    basis = enumerate_basis(args.k, args.q)
    params = _params_from(args)
    mat = build_mass_matrix(basis, params)
    lo, hi = sparsity_bounds(args.k)
    s = sparsity(mat)
    _emit({
        "K": args.k, "Q": args.q, "dim": mat.dim, "sparsity": s,
        "lower_bound": lo, "upper_bound": hi, "within_bounds": bool(lo <= s <= hi),
        "max_element": max_abs_element(mat),
        "provenance": _provenance(args),
    })
    return 0


def cmd_resources(args) -> int:
    if args.scheme == "qcd":
        budget = qubit_count_qcd(args.k, args.lperp, args.nf, args.nc)
        payload = {
            "scheme": budget.scheme, "K": budget.K,
            "total_qubits": budget.total_qubits, "breakdown": budget.breakdown,
            "reference_value": 1360,
            "delta_vs_reference": budget.total_qubits - 1360,
        }
    else:
        budget = qubit_count(args.scheme, args.k)
        payload = {
            "scheme": budget.scheme, "K": budget.K,
            "total_qubits": budget.total_qubits, "breakdown": budget.breakdown,
        }
    _emit({**payload, "provenance": _provenance(args)})
    return 0


def cmd_oracle_check(args) -> int:
    if args.cutoff is None:
        args.cutoff = 4 * args.k
    basis = enumerate_basis(args.k)
    params = _params_from(args, q=None)
    deltas = list(enumerate_deltas(args.k))
    bad = []
    for s in basis:
        ham_images = {img.key for img, _ in apply_hamiltonian(s, params)}
        ham_images.add(s.key)  # diagonal may vanish at special parameters
        delta_images = {s.key}
        for d in deltas:
            img = apply_delta(s, d)
            if img is not None:
                delta_images.add(img.key)
        if ham_images != delta_images:
            missing = sorted(ham_images - delta_images)
            extra = sorted(delta_images - ham_images)
            bad.append({"state": format_state(s),
                        "missing_from_deltas": [str(x) for x in missing[:3]],
                        "extra_in_deltas": [str(x) for x in extra[:3]]})
            if len(bad) >= args.max_counterexamples:
                break
    _emit({
        "K": args.k, "dim": len(basis), "delta_count": len(deltas),
        "pass": not bad, "counterexamples": bad,
        "provenance": _provenance(args),
    })
    return 0 if not bad else 1


def cmd_fig2(args) -> int:
    target = RenormTarget(mB_phys=args.mbt, mF_phys=args.mft, lam=args.lam,
                          Lambda=args.cutoff, K=args.k)
    m_B, m_F, diag = renormalize(
        target, coupling_mode=args.coupling_mode, track=args.track, tol=args.tol
    )
    g = diag.g
    basis = enumerate_basis(args.k, 0)
    bare = ModelParams(m_B=m_B, m_F=m_F, g=g, Lambda=args.cutoff, K=args.k, Q=0)
    mat = build_mass_matrix(basis, bare)
    evals, evecs = np.linalg.eigh(mat.toarray())
    masses = np.sqrt(np.clip(evals, 0.0, None))
    pick = int(np.argmin(np.abs(masses - args.target_mass)))
    vec = evecs[:, pick]

    phys = ModelParams(m_B=args.mbt, m_F=args.mft, g=g, Lambda=args.cutoff, K=args.k, Q=0)
    qm_bare = qmax2(basis, bare)
    qm_phys = qmax2(basis, phys)
    mass_params = bare if args.mass_convention == "bare" else phys
    qm = qm_bare if args.mass_convention == "bare" else qm_phys

    os.makedirs(args.outdir, exist_ok=True)
    cuts = [("qmax", qm), ("q20", 400.0), ("q17", 289.0)]
    written = []
    for name, qsq in cuts:
        v, kept = truncate_state(vec, basis, mass_params, qsq)
        table = pdf(v, basis, qsq=qsq)
        path = os.path.join(args.outdir, f"pdf_{name}.csv")
        extra = {
            "eigenvalue": float(evals[pick]),
            "mass": float(masses[pick]),
            "target_mass": args.target_mass,
            "m_B_bare": m_B, "m_F_bare": m_F, "g": g,
            "coupling_mode": args.coupling_mode, "track": diag.track,
            "mass_convention": args.mass_convention,
            "qmax2_bare_masses": qm_bare, "qmax2_physical_masses": qm_phys,
            "kept_fraction": kept,
            "momentum_sum_residual": table.momentum_sum() - args.k,
            "charge_sum_residual": table.charge_sum(),
        }
        _write_pdf_csv(path, table, extra, args)
        written.append(path)
    _emit({
        "written": written, "m_B": m_B, "m_F": m_F, "g": g,
        "selected_mass": float(masses[pick]),
        "qmax_bare": float(np.sqrt(qm_bare)), "qmax_physical": float(np.sqrt(qm_phys)),
        "provenance": _provenance(args),
    })
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="lfdlcq",
        description="DLCQ simulator of the 1+1D light-front Yukawa model",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("basis", help="enumerate a fixed-K Fock block")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--q", type=int, default=None)
    p.add_argument("--out", required=True)
    _add_common(p)
    p.set_defaults(func=cmd_basis)

    p = sub.add_parser("ham", help="assemble the mass-squared matrix")
    _add_model_args(p)
    p.add_argument("--out", required=True)
    _add_common(p)
    p.set_defaults(func=cmd_ham)

    p = sub.add_parser("spectrum", help="lowest eigenvalues of a block")
    _add_model_args(p)
    p.add_argument("--nev", type=int, default=6)
    p.add_argument("--tol", type=float, default=1e-10)
    _add_common(p)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("renorm", help="solve the bare masses for physical targets")
    p.add_argument("--mbt", type=float, required=True, help="physical boson mass")
    p.add_argument("--mft", type=float, required=True, help="physical fermion mass")
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.add_argument("--cutoff", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--coupling-mode", choices=("identity", "sqrt4pi"), default="identity")
    p.add_argument("--track", choices=("lowest", "boson"), default="lowest")
    p.add_argument("--tol", type=float, default=1e-6)
    _add_common(p)
    p.set_defaults(func=cmd_renorm)

    p = sub.add_parser("pdf", help="parton distributions of an eigenstate")
    _add_model_args(p)
    p.add_argument("--state", default="lowest", help="eigenstate index or 'lowest'")
    p.add_argument("--qsq", type=float, default=None, help="probing scale Q^2")
    p.add_argument("--out", required=True)
    _add_common(p)
    p.set_defaults(func=cmd_pdf)

    p = sub.add_parser("sparsity", help="row sparsity of a block matrix vs bounds")
    _add_model_args(p)
    _add_common(p)
    p.set_defaults(func=cmd_sparsity)

    p = sub.add_parser("resources", help="qubit budgets for the encodings")
    p.add_argument("--scheme", choices=("compact", "direct-compact", "direct-direct", "qcd"),
                   required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--lperp", type=int, default=20)
    p.add_argument("--nf", type=int, default=5)
    p.add_argument("--nc", type=int, default=3)
    _add_common(p)
    p.set_defaults(func=cmd_resources)

    p = sub.add_parser("oracle-check", help="delta pathway vs Hamiltonian structure")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--mb", type=float, default=1.3)
    p.add_argument("--mf", type=float, default=0.7)
    p.add_argument("--g", type=float, default=0.9)
    p.add_argument("--lambda", dest="lam", type=float, default=0.0)
    p.add_argument("--coupling-mode", choices=("identity", "sqrt4pi"), default="identity")
    p.add_argument("--cutoff", type=int, default=None)
    p.add_argument("--max-counterexamples", type=int, default=5)
    _add_common(p)
    p.set_defaults(func=cmd_oracle_check)

    p = sub.add_parser("fig2", help="strong-coupling PDF export (renorm + truncations)")
    p.add_argument("--k", type=int, default=14)
    p.add_argument("--mbt", type=float, default=6.7)
    p.add_argument("--mft", type=float, default=1.0)
    p.add_argument("--lambda", dest="lam", type=float, default=1.0)
    p.add_argument("--cutoff", type=int, default=2048)
    p.add_argument("--coupling-mode", choices=("identity", "sqrt4pi"), default="sqrt4pi")
    p.add_argument("--track", choices=("lowest", "boson"), default="boson")
    p.add_argument("--mass-convention", choices=("bare", "physical"), default="bare")
    p.add_argument("--target-mass", type=float, default=18.96)
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--outdir", default="fig2_out")
    _add_common(p)
    p.set_defaults(func=cmd_fig2)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, ResourceLimitError, ConvergenceError,
            InfeasibleSeedError, DegenerateTruncationError) as exc:
        err = {"error": type(exc).__name__, "message": str(exc)}
        print(json.dumps(err, sort_keys=True), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
