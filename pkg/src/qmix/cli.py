"""Command-line front door.

Subcommands::

    qmix synth       --config blocks.json [--out report.json] [--verify]
    qmix combine     --states states.json --params params.json --mode closed
    qmix orbit       --config weights.json --steps 1200 --out trace.csv [--mub]
    qmix epi-scan    --n 2 --functional von-neumann --samples 10000 --d 2
    qmix flat-search --attempts 120 --seed 0

JSON in, JSON/CSV out.  Every report is wrapped as
``{"format": "qmix/1", "command": ..., "report": {...}, "timing": {...}}``;
everything outside "timing" is byte-identical across runs with the same
arguments and seed.  Exit codes: 0 ok, 2 usage/config error, 3 domain
constraint violated by the inputs, 4 broken invariant (a bug).
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from ._serial import dumps
from .combine import (
    CoefficientSumNonzero,
    DegenerateOuterWeight,
    DegenerateWeight,
    GaugeViolation,
    NonUnitaryCoefficients,
    NotNested,
    PDelta,
    QTriple,
    S3Coeffs,
    combine2,
    combine3_bruteforce,
    combine3_closed,
    combine3_magic,
    q_from_pdelta,
    q_from_z,
    random_qtriple,
    s3_coeffs_from_phases,
    z_from_q,
)
from .groups import regular_lincomb, symmetric_group
from .irreps import (
    BlockUnitaries,
    NonUnitaryBlock,
    extract_blocks,
    flat_unitary_search,
    irreps_cyclic,
    irreps_s3,
    synthesize_coeffs,
)
from .linkage import LinkageSpec, orbit_trace, write_orbit_csv
from .states import DensityMatrix, bloch_vector, entropy, get_functional, random_density

FORMAT_TAG = "qmix/1"

_DOMAIN_ERRORS = (NonUnitaryBlock, NonUnitaryCoefficients, GaugeViolation,
                  DegenerateWeight, DegenerateOuterWeight, NotNested,
                  CoefficientSumNonzero)


class CliError(Exception):
    """Carries the exit code; message goes to stderr."""

    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _load_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise CliError(2, f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise CliError(2, f"{path} is not valid JSON: {exc}") from exc


def _emit(doc: dict, out: str | None) -> None:
    text = dumps(doc)
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _wrap(command: str, report: dict, elapsed: float) -> dict:
    return {"format": FORMAT_TAG, "command": command, "report": report,
            "timing": {"elapsed_s": elapsed}}


def _c2(v: complex) -> list:
    return [float(np.real(v)), float(np.imag(v))]


def _mat_json(M: np.ndarray) -> list:
    return [[_c2(v) for v in row] for row in M]


# ---------------------------------------------------------------------------
# synth


def _irreps_for(group_name: str):
    if group_name == "s3":
        return irreps_s3()
    if group_name.startswith("z") and group_name[1:].isdigit():
        n = int(group_name[1:])
        if n < 1:
            raise CliError(2, "cyclic group order must be >= 1")
        return irreps_cyclic(n)
    raise CliError(2, f"unknown group {group_name!r} (expected 's3' or 'z<n>')")


def _blocks_from_config(cfg: dict, irreps) -> BlockUnitaries:
    if "blocks" in cfg:
        table = cfg["blocks"]
        mats = []
        for r in irreps:
            if r.label not in table:
                raise CliError(2, f"config is missing a block for irrep {r.label!r}")
            M = np.array([[re + 1j * im for re, im in row] for row in table[r.label]],
                         dtype=complex)
            if M.shape != (r.dim, r.dim):
                raise CliError(2, f"block for {r.label!r} must be {r.dim}x{r.dim}")
            mats.append(M)
        return BlockUnitaries(tuple(mats), tuple(r.label for r in irreps))
    if "phases" in cfg:
        ph = cfg["phases"]
        if cfg["group"] == "s3":
            a = ph["a"][0] + 1j * ph["a"][1]
            c = ph["c"][0] + 1j * ph["c"][1]
            two = np.array([[a, c], [-np.conj(c), np.conj(a)]])
            return BlockUnitaries(
                (np.array([[np.exp(1j * ph["phi1"])]]),
                 np.array([[np.exp(1j * ph["phi2"])]]), two),
                tuple(r.label for r in irreps))
        mats = tuple(np.array([[np.exp(1j * t)]]) for t in ph)
        if len(mats) != len(irreps.irreps):
            raise CliError(2, "need one phase per character")
        return BlockUnitaries(mats, tuple(r.label for r in irreps))
    raise CliError(2, "config needs either 'blocks' or 'phases'")


def _cmd_synth(args) -> int:
    t0 = time.perf_counter()
    cfg = _load_json(args.config)
    if not isinstance(cfg, dict) or "group" not in cfg:
        raise CliError(2, "config must be a JSON object with a 'group' field")
    irreps = _irreps_for(cfg["group"])
    blocks = _blocks_from_config(cfg, irreps)
    z = synthesize_coeffs(blocks, irreps)
    back = extract_blocks(z, irreps)
    roundtrip = max(float(np.abs(np.asarray(B) - np.asarray(U)).max())
                    for B, U in zip(back.blocks, blocks.blocks))
    L = regular_lincomb(z)
    residual = float(np.abs(L @ L.conj().T - np.eye(irreps.group.order)).max())
    report = {
        "group": cfg["group"],
        "order": irreps.group.order,
        "labels": [r.label for r in irreps],
        "z": [_c2(v) for v in z.coeffs],
        "regular_unitarity_residual": residual,
        "block_roundtrip_error": roundtrip,
    }
    _emit(_wrap("synth", report, time.perf_counter() - t0), args.out)
    if args.verify and (residual > 1e-10 or roundtrip > 1e-9):
        raise CliError(4, "synthesized coefficients failed verification")
    return 0


# ---------------------------------------------------------------------------
# combine


def _states_from_file(path: str) -> list[DensityMatrix]:
    doc = _load_json(path)
    rows = doc["states"] if isinstance(doc, dict) else doc
    try:
        states = [DensityMatrix.from_json(m) for m in rows]
    except (ValueError, TypeError) as exc:
        raise CliError(3, f"invalid state in {path}: {exc}") from exc
    if len(states) not in (2, 3):
        raise CliError(2, "need exactly 2 or 3 states")
    if len({s.dim for s in states}) != 1:
        raise CliError(2, "states must share one dimension")
    return states


def _ternary_params(doc: dict) -> tuple[QTriple | None, S3Coeffs]:
    """(q, z) from a params file; q is None when the gauge does not hold."""
    if "q" in doc:
        q = QTriple.from_json(doc["q"])
        return q, z_from_q(q)
    if "p" in doc and "deltas" in doc:
        q = q_from_pdelta(PDelta.from_json(doc))
        return q, z_from_q(q)
    if "z" in doc:
        z = S3Coeffs.from_json(doc["z"])
    elif "phases" in doc:
        ph = doc["phases"]
        z = s3_coeffs_from_phases(ph["phi1"], ph["phi2"],
                                  ph["a"][0] + 1j * ph["a"][1],
                                  ph["c"][0] + 1j * ph["c"][1])
    else:
        raise CliError(2, "params file needs 'q', 'p'+'deltas', 'z', or 'phases'")
    try:
        return q_from_z(z), z
    except GaugeViolation:
        return None, z


def _cmd_combine(args) -> int:
    t0 = time.perf_counter()
    states = _states_from_file(args.states)
    params = _load_json(args.params)
    if not isinstance(params, dict):
        raise CliError(2, "params file must be a JSON object")
    d = states[0].dim
    if len(states) == 2:
        if "lambda" not in params:
            raise CliError(2, "binary combination needs a 'lambda' parameter")
        lam = float(params["lambda"])
        sign = int(params.get("sign", +1))
        out = combine2(states[0], states[1], lam, sign)
        mode_info = {"lambda": lam, "sign": sign}
        verify_diff = None
    else:
        q, z = _ternary_params(params)
        mode = args.mode
        if mode in ("closed", "pdelta") and q is None:
            raise GaugeViolation("these coefficients do not satisfy the sum-one gauge")
        if mode == "closed":
            out = combine3_closed(states[0], states[1], states[2], q)
        elif mode == "magic":
            out = combine3_magic(states[0], states[1], states[2], z)
        elif mode == "brute":
            out = combine3_bruteforce(states[0], states[1], states[2], z)
        else:
            raise CliError(2, f"unknown mode {mode!r}")
        mode_info = {"z": [_c2(v) for v in z.z]}
        if q is not None:
            mode_info["q"] = q.to_json()
        verify_diff = None
        if args.verify:
            outs = [combine3_magic(states[0], states[1], states[2], z).mat,
                    combine3_bruteforce(states[0], states[1], states[2], z).mat]
            if q is not None:
                outs.append(combine3_closed(states[0], states[1], states[2], q).mat)
            verify_diff = float(max(np.abs(a - b).max()
                                    for i, a in enumerate(outs)
                                    for b in outs[i + 1:]))
    M = out.mat
    report = {
        "dim": d,
        "n_states": len(states),
        "mode": args.mode if len(states) == 3 else "binary",
        "params": mode_info,
        "state": _mat_json(M),
        "diagnostics": {
            "trace": float(np.real(np.trace(M))),
            "hermiticity_residual": float(np.abs(M - M.conj().T).max()),
            "min_eigenvalue": float(np.linalg.eigvalsh(M)[0]),
        },
    }
    if d == 2:
        report["bloch"] = list(bloch_vector(out))
        report["bloch_inputs"] = [list(bloch_vector(s)) for s in states]
    if verify_diff is not None:
        report["verify"] = {"max_mode_diff": verify_diff}
    _emit(_wrap("combine", report, time.perf_counter() - t0), args.out)
    if verify_diff is not None and verify_diff > 1e-10:
        raise CliError(4, f"combination modes disagree by {verify_diff:.3e}")
    return 0


# ---------------------------------------------------------------------------
# orbit


_MUB_STATES = None


def _mub_states() -> tuple[DensityMatrix, DensityMatrix, DensityMatrix]:
    global _MUB_STATES
    if _MUB_STATES is None:
        _MUB_STATES = (DensityMatrix.from_bloch(1, 0, 0),
                       DensityMatrix.from_bloch(0, 1, 0),
                       DensityMatrix.from_bloch(0, 0, 1))
    return _MUB_STATES


def _mub_columns(cfg) -> dict:
    rhos = _mub_states()
    q = QTriple(cfg.q1, cfg.q2, cfg.q3)
    x, y, z = bloch_vector(combine3_closed(*rhos, q))
    return {"bloch_x": x, "bloch_y": y, "bloch_z": z}


def _cmd_orbit(args) -> int:
    t0 = time.perf_counter()
    cfg = _load_json(args.config)
    if not isinstance(cfg, dict) or "p" not in cfg:
        raise CliError(2, "orbit config must contain a weight triple 'p'")
    try:
        spec, assignment = LinkageSpec.from_weights(cfg["p"])
    except ValueError as exc:
        raise CliError(2, f"bad weights: {exc}") from exc
    try:
        orbits = orbit_trace(spec, args.steps, assignment)
    except ValueError as exc:
        raise CliError(2, str(exc)) from exc
    extra = _mub_columns if args.mub else None
    write_orbit_csv(orbits, args.out, extra=extra)
    rows = sum(len(o) for o in orbits)
    flagged = 0
    for orbit in orbits:
        for c in orbit:
            qs = c.as_array()
            if np.abs(qs).min() < 1e-12:
                continue
            ph = np.angle(qs)
            deltas = np.array([ph[0] - ph[1], ph[1] - ph[2], ph[2] - ph[0]])
            if np.abs(np.cos(deltas)).min() < 1e-9:
                flagged += 1
    report = {
        "weights": [float(v) for v in cfg["p"]],
        "lengths": list(spec.lengths()),
        "steps": args.steps,
        "orbits": len(orbits),
        "rows": rows,
        "nested_rows": flagged,
        "csv": args.out,
        "mub_columns": bool(args.mub),
    }
    _emit(_wrap("orbit", report, time.perf_counter() - t0), None)
    return 0


# ---------------------------------------------------------------------------
# epi-scan


def _scan_sample(n: int, d: int, fname: str, seed: int, index: int) -> float:
    """Gap of one sample; everything derives from SeedSequence((seed, index))."""
    f = get_functional(fname)
    rng = np.random.default_rng(np.random.SeedSequence((seed, index)))
    if n == 2:
        rho = random_density(d, seed=rng)
        sigma = random_density(d, seed=rng)
        lam = float(rng.uniform())
        sign = +1 if rng.integers(2) == 0 else -1
        out = combine2(rho, sigma, lam, sign)
        return entropy(f, out) - (lam * entropy(f, rho) + (1 - lam) * entropy(f, sigma))
    rhos = [random_density(d, seed=rng) for _ in range(3)]
    q = random_qtriple(rng)
    out = combine3_closed(rhos[0], rhos[1], rhos[2], q)
    mix = sum(w * entropy(f, r) for w, r in zip(q.weights(), rhos))
    return entropy(f, out) - mix


def _scan_range(packed) -> tuple[float, int, int]:
    n, d, fname, seed, start, stop = packed
    best, best_idx, neg = np.inf, -1, 0
    for i in range(start, stop):
        gap = _scan_sample(n, d, fname, seed, i)
        if gap < best:
            best, best_idx = gap, i
        if gap < 0:
            neg += 1
    return best, best_idx, neg


def _sample_detail(n: int, d: int, fname: str, seed: int, index: int) -> dict:
    """Reproduction record for one sample (used for argmin and counterexamples)."""
    rng = np.random.default_rng(np.random.SeedSequence((seed, index)))
    detail: dict = {"sample_index": index, "seed_path": [seed, index]}
    if n == 2:
        rho = random_density(d, seed=rng)
        sigma = random_density(d, seed=rng)
        lam = float(rng.uniform())
        sign = +1 if rng.integers(2) == 0 else -1
        detail["states"] = [_mat_json(rho.mat), _mat_json(sigma.mat)]
        detail["lambda"] = lam
        detail["sign"] = sign
    else:
        rhos = [random_density(d, seed=rng) for _ in range(3)]
        q = random_qtriple(rng)
        detail["states"] = [_mat_json(r.mat) for r in rhos]
        detail["q"] = q.to_json()
    return detail


def _cmd_epi_scan(args) -> int:
    t0 = time.perf_counter()
    if args.d not in (2, 3, 4):
        raise CliError(2, "d must be 2, 3, or 4")
    if args.samples < 1:
        raise CliError(2, "samples must be positive")
    try:
        get_functional(args.functional)
    except KeyError as exc:
        raise CliError(2, str(exc.args[0])) from exc
    spec = (args.n, args.d, args.functional, args.seed)
    if args.workers > 1:
        bounds = np.linspace(0, args.samples, args.workers + 1).astype(int)
        chunks = [spec + (int(a), int(b)) for a, b in zip(bounds, bounds[1:]) if a < b]
        with ProcessPoolExecutor(max_workers=args.workers) as pool:
            parts = list(pool.map(_scan_range, chunks))
    else:
        parts = [_scan_range(spec + (0, args.samples))]
    min_gap = min(p[0] for p in parts)
    argmin = min(p[1] for p in parts if p[0] == min_gap)
    negatives = sum(p[2] for p in parts)
    # reproducibility guard: the argmin sample must recompute to the same gap
    recomputed = _scan_sample(args.n, args.d, args.functional, args.seed, argmin)
    if recomputed != min_gap:
        raise CliError(4, "argmin sample failed to reproduce from its seed")
    report = {
        "n": args.n,
        "d": args.d,
        "functional": args.functional,
        "samples": args.samples,
        "seed": args.seed,
        "min_gap": float(min_gap),
        "negative_samples": int(negatives),
        "argmin": _sample_detail(args.n, args.d, args.functional, args.seed, argmin),
        "asserted": args.n == 2,
    }
    if args.n == 3 and min_gap < -1e-6:
        report["counterexample"] = _sample_detail(args.n, args.d, args.functional,
                                                  args.seed, argmin)
    _emit(_wrap("epi-scan", report, time.perf_counter() - t0), args.out)
    if args.n == 2 and min_gap < -1e-9:
        raise CliError(4, f"two-state concavity gap went negative: {min_gap:.3e}")
    return 0


# ---------------------------------------------------------------------------
# flat-search


def _cmd_flat_search(args) -> int:
    t0 = time.perf_counter()
    if args.attempts < 1:
        raise CliError(2, "attempts must be positive")
    found = flat_unitary_search(irreps_s3(), args.attempts, args.seed)
    target = 1.0 / np.sqrt(6.0)
    sols = []
    for z in found:
        sols.append({
            "z": [_c2(v) for v in z.coeffs],
            "flatness": float(np.abs(np.abs(z.coeffs) - target).max()),
        })
    report = {
        "attempts": args.attempts,
        "seed": args.seed,
        "found": len(sols),
        "modulus_target": target,
        "solutions": sols,
    }
    _emit(_wrap("flat-search", report, time.perf_counter() - t0), args.out)
    return 0


# ---------------------------------------------------------------------------
# parser / dispatch


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qmix",
        description="Group-algebra unitary mixing: synthesis, combination, orbits, scans.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="synthesize coefficients from per-irrep unitaries")
    p.add_argument("--config", required=True, help="JSON: group + blocks/phases")
    p.add_argument("--out", default=None, help="report path (default stdout)")
    p.add_argument("--verify", action="store_true", help="fail loudly on residuals")
    p.set_defaults(func=_cmd_synth)

    p = sub.add_parser("combine", help="combine 2 or 3 density matrices")
    p.add_argument("--states", required=True, help="JSON list of density matrices")
    p.add_argument("--params", required=True, help="JSON: lambda | q | p+deltas | z | phases")
    p.add_argument("--mode", default="closed", choices=["closed", "magic", "brute"])
    p.add_argument("--out", default=None)
    p.add_argument("--verify", action="store_true",
                   help="cross-check all evaluation modes to 1e-10")
    p.set_defaults(func=_cmd_combine)

    p = sub.add_parser("orbit", help="trace the fixed-weight parameter orbit to CSV")
    p.add_argument("--config", required=True, help="JSON with weight triple 'p'")
    p.add_argument("--steps", type=int, default=1200)
    p.add_argument("--out", required=True, help="CSV output path")
    p.add_argument("--mub", action="store_true",
                   help="append Bloch columns for the axis-aligned qubit example")
    p.set_defaults(func=_cmd_orbit)

    p = sub.add_parser("epi-scan", help="Monte-Carlo scan of the concavity gap")
    p.add_argument("--n", type=int, required=True, choices=[2, 3])
    p.add_argument("--functional", default="von-neumann")
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_epi_scan)

    p = sub.add_parser("flat-search", help="search for flat-modulus coefficient vectors")
    p.add_argument("--attempts", type=int, default=120)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_flat_search)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    try:
        return args.func(args)
    except CliError as exc:
        print(f"qmix: {exc}", file=sys.stderr)
        return exc.code
    except _DOMAIN_ERRORS as exc:
        print(f"qmix: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"qmix: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
