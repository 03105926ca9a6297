"""
Command-line front end.

    thirdperiodic solve    --operator OP --forcing F -K 8 -N 32 --out DIR
    thirdperiodic diagnose --operator OP --window -50:50 --seed 0 --out DIR
    thirdperiodic spectrum --operator OP --window -5:5 --out DIR
    thirdperiodic bench    --dims 4,16 --orders 16,64 --out DIR

Exit codes: 0 success, 1 usage or data error, 2 the periodic problem is not
well posed (singular modes found while solving).
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .diagnosis import diagnose
from .errors import SchemaError, WellPosednessError
from .forcing import forcing_catalog, parse_forcing_name
from .io import dumps, read_signal, write_json, write_signal_csv
from .operators import dense_operator, operator_from_spec
from .solver import parse_recon, solve_periodic, spectrum_gate

log = logging.getLogger("thirdperiodic")

EXIT_OK, EXIT_USAGE, EXIT_ILL_POSED = 0, 1, 2
MAX_WINDOW = 10**6


class UsageError(Exception):
    pass


def load_operator(text: str):
    """Inline JSON (starting with '{') or a path to a JSON file."""
    if text.lstrip().startswith("{"):
        src = text
    else:
        path = Path(text)
        if not path.is_file():
            raise UsageError(f"operator file not found: {text}")
        src = path.read_text()
    try:
        spec = json.loads(src)
    except json.JSONDecodeError as exc:
        raise UsageError(f"operator spec is not valid JSON: {exc}") from None
    try:
        return operator_from_spec(spec)
    except SchemaError as exc:
        raise UsageError(f"operator schema violation: {exc}") from None


def load_forcing(text: str, N: int | None, d: int):
    path = Path(text)
    if path.suffix.lower() in (".csv", ".json") or path.exists():
        if not path.is_file():
            raise UsageError(f"forcing file not found: {text}")
        try:
            f = read_signal(path)
        except SchemaError as exc:
            raise UsageError(f"forcing schema violation: {exc}") from None
        if N is not None and f.N != N:
            raise UsageError(f"-N {N} does not match forcing file with N = {f.N}")
        if f.d != d:
            raise UsageError(f"forcing has dimension {f.d}, operator has {d}")
        return f
    try:
        name, params = parse_forcing_name(text)
        return forcing_catalog(name, params, N=N or 32, d=d)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def parse_window(text: str):
    try:
        a, b = (int(s) for s in text.split(":"))
    except ValueError:
        raise UsageError(f"window must look like a:b, got {text!r}") from None
    if a > b:
        raise UsageError(f"empty window {text!r}")
    if max(abs(a), abs(b)) > MAX_WINDOW:
        raise UsageError(f"window bounds must satisfy |k| <= {MAX_WINDOW}")
    return a, b


def _out_dir(args):
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_solve(args):
    A = load_operator(args.operator)
    f = load_forcing(args.forcing, args.N, A.dim)
    K = args.K if args.K is not None else (f.N - 1) // 2
    if 2 * K + 1 > f.N:
        raise UsageError(f"need N >= 2K+1 (got N = {f.N}, K = {K})")
    try:
        recon = parse_recon(args.recon)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    try:
        report = solve_periodic(A, f, K, recon=recon)
    except WellPosednessError as exc:
        print(f"error: {exc}", file=sys.stderr)
        out = _out_dir(args)
        write_json({"error": "not well posed", "singular_modes": exc.singular_modes}, out / "solve_report.json")
        return EXIT_ILL_POSED
    out = _out_dir(args)
    write_signal_csv(report.solution, out / "solution.csv")
    d = report.to_dict()
    d.pop("timing")  # wall-clock times would break byte-identical reruns
    write_json(d, out / "solve_report.json")
    print(dumps({k: d[k] for k in ("residual_l2", "residual_sup", "K", "N")}), end="")
    return EXIT_OK


def cmd_diagnose(args):
    A = load_operator(args.operator)
    window = parse_window(args.window)
    report = diagnose(A, window, seed=args.seed, trials=args.trials, n_probes=args.probes)
    out = _out_dir(args)
    write_json(report, out / "diagnosis.json")
    summary = {k: report[k] for k in ("window", "sigma_Z", "sup_symbol_norm", "telescoping_max_dev")}
    print(dumps(summary), end="")
    return EXIT_OK


def cmd_spectrum(args):
    A = load_operator(args.operator)
    window = parse_window(args.window)
    gate = spectrum_gate(A, window)
    d = gate.to_dict()
    if A.is_matrix_backed:
        d["spectrum"] = A.spectrum().to_dict()
    out = _out_dir(args)
    write_json(d, out / "spectrum.json")
    print(dumps({"window": list(window), "singular_modes": gate.singular_modes}), end="")
    return EXIT_OK


def _int_list(text):
    try:
        return [int(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from None


def cmd_bench(args):
    rng = np.random.default_rng(args.seed)
    rows = []
    for d in _int_list(args.dims):
        B = rng.standard_normal((d, d))
        # symmetric negative definite, hence well posed at every mode
        A = dense_operator(-(B @ B.T) / d - np.eye(d))
        for K in _int_list(args.orders):
            N = 2 * K + 2
            f = forcing_catalog("noise", [args.seed, K], N=N, d=d)
            best = np.inf
            for _ in range(args.repeats):
                t0 = time.perf_counter()
                solve_periodic(A, f, K)
                best = min(best, time.perf_counter() - t0)
            rows.append([d, K, N, 2 * K + 1, best, (2 * K + 1) / best])
            log.info("d=%d K=%d: %.4fs", d, K, best)
    out = _out_dir(args)
    with open(out / "bench.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["d", "K", "N", "modes", "seconds", "modes_per_second"])
        w.writerows(rows)
    print(f"wrote {len(rows)} rows to {out / 'bench.csv'}")
    return EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(prog="thirdperiodic", description=__doc__.split("\n\n")[0].strip())
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, window_default):
        sp.add_argument("--operator", required=True, help="operator JSON file or inline JSON")
        sp.add_argument("--window", default=window_default, help="mode window a:b")
        sp.add_argument("--out", default=".", help="output directory")

    s = sub.add_parser("solve", help="solve the periodic problem; writes solution.csv and solve_report.json")
    s.add_argument("--operator", required=True, help="operator JSON file or inline JSON")
    s.add_argument("--forcing", required=True, help="catalog name such as cos(3) or a signal file")
    s.add_argument("-K", type=int, default=None, help="truncation order")
    s.add_argument("-N", type=int, default=None, help="sample count for catalog forcings")
    s.add_argument("--recon", default="partial", help="partial or fejer:n")
    s.add_argument("--out", default=".", help="output directory")
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("diagnose", help="symbol norms, telescoping, R-bound and decay; writes diagnosis.json")
    common(s, "-50:50")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--trials", type=int, default=10_000)
    s.add_argument("--probes", type=int, default=32)
    s.set_defaults(func=cmd_diagnose)

    s = sub.add_parser("spectrum", help="singular-mode gate; writes spectrum.json")
    common(s, "-50:50")
    s.set_defaults(func=cmd_spectrum)

    s = sub.add_parser("bench", help="per-mode solve throughput; writes bench.csv")
    s.add_argument("--dims", default="4,16,64")
    s.add_argument("--orders", default="16,64,256")
    s.add_argument("--repeats", type=int, default=3)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out", default=".", help="output directory")
    s.set_defaults(func=cmd_bench)
    return p


def _glue_windows(argv):
    # argparse would read "--window -5:5" as two options; glue the value on
    out, it = [], iter(argv)
    for a in it:
        if a == "--window":
            out.append("--window=" + next(it, ""))
        else:
            out.append(a)
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = _glue_windows(sys.argv[1:] if argv is None else list(argv))
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    if getattr(args, "N", None) is not None and args.N < 1:
        print("error: -N must be positive", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
