"""``flatlab`` command line.

Every subcommand prints its report (JSON by default) to stdout.  With
``--out DIR`` the report, any CSV plot data and a ``manifest.json`` are also
written there.  Exit codes: 0 success, 2 validation error, 3 resource cap.
"""

from __future__ import annotations

import argparse
import math
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from ._validation import ResourceCapError, ValidationError
from .report import RunManifest, dumps, rows_to_csv, sha256_bytes, sha256_file

EXIT_OK, EXIT_VALIDATION, EXIT_CAP = 0, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise ValidationError(message)


def _int_list(text: str) -> list[int]:
    return [int(float(x)) for x in text.split(",") if x.strip()]


def _float_list(text: str) -> list[float]:
    return [float(x) for x in text.split(",") if x.strip()]


def _count(text: str) -> int:
    value = float(text)
    if not value.is_integer():
        raise argparse.ArgumentTypeError(f"{text} is not an integer")
    return int(value)


class _Run:
    """Collects inputs, seeds and outputs of one invocation."""

    def __init__(self, args, argv):
        self.args = args
        self.argv = argv
        self.inputs: dict[str, str] = {}
        self.seeds: dict[str, int] = {}
        self.extra: dict[str, str] = {}

    def input_file(self, path) -> Path:
        path = Path(path)
        if not path.exists():
            raise ValidationError(f"input file {path} does not exist")
        self.inputs[str(path)] = sha256_file(path)
        return path


# -- input helpers ---------------------------------------------------------------


def _sequence(run: _Run, as_signs: bool = True):
    from .sequences import SignSequence, load_sequence, parse_sequence, random_signs

    a = run.args
    if getattr(a, "seq", None):
        seq = parse_sequence(a.seq)
    elif getattr(a, "infile", None):
        seq = load_sequence(run.input_file(a.infile), as_signs=as_signs)
    elif getattr(a, "random", None):
        run.seeds["sequence"] = a.seed
        seq = random_signs(a.random, np.random.default_rng(a.seed))
    elif getattr(a, "thue_morse", None):
        from .morse import thue_morse

        seq = SignSequence(thue_morse(a.thue_morse))
    else:
        raise ValidationError("give a sequence with --seq or --in")
    return seq


def _signs(run: _Run):
    from .sequences import BinarySequence, SignSequence

    seq = _sequence(run)
    if isinstance(seq, BinarySequence):
        seq = SignSequence(2 * seq.bits - 1)
    return seq


def _table(run: _Run):
    from .numtheory import read_table

    return read_table(run.input_file(run.args.table))


# -- subcommands ---------------------------------------------------------------------


def cmd_norms(run: _Run):
    from .polycore import NormalizedPolynomial, flatness_report, l4_fourth_power_exact, lp_norm_estimate

    seq = _sequence(run)
    poly = NormalizedPolynomial.from_sequence(seq)
    l4 = l4_fourth_power_exact(seq)
    rows = []
    for alpha in run.args.alpha:
        est = lp_norm_estimate(poly, alpha, run.args.oversample)
        rows.append({"alpha": alpha, "estimate": est.value, "bracket": est.bracket, "grid_size": est.grid_size})
    report = flatness_report(seq, run.args.oversample).to_dict()
    report.update(sequence=seq.to_string(), q=seq.q, l4_fourth_power_exact=l4, lp_estimates=rows)
    return report, None


def cmd_identity_check(run: _Run):
    from .correspondence import identity_table

    seq = _signs(run)
    return identity_table(seq, run.args.grid, run.args.ell), None


def cmd_autocorr(run: _Run):
    from .seqstats import autocorrelation

    seq = _sequence(run)
    prof = autocorrelation(seq)
    rows = [{"lag": k, "value": int(c), "band": 1} for k, c in enumerate(prof.c)]
    report = {"sequence": seq.to_string(), "q": prof.q, "c": prof.c, "sidelobe_energy": prof.sidelobe_energy,
              "fold_energy": prof.fold_energy}
    return report, (rows, ["lag", "value", "band"])


def cmd_setdft(run: _Run):
    from .sequences import BinarySequence
    from .seqstats import set_dft

    a = run.args
    if a.set is not None:
        A = _int_list(a.set)
    else:
        seq = _sequence(run, as_signs=False)
        A = (seq if isinstance(seq, BinarySequence) else BinarySequence((seq.coeffs + 1) // 2)).H.tolist()
    spec = set_dft(A, a.r, a.balanced)
    band = 3.0 * math.sqrt(max(len(A), 1)) / spec.r
    rows = [{"lag": ell, "value": float(abs(v)), "band": band} for ell, v in enumerate(spec.dft)]
    report = {"size": len(A), "r": spec.r, "balanced": spec.balanced, "counts": spec.counts,
              "dft": [complex(v) for v in spec.dft]}
    return report, (rows, ["lag", "value", "band"])


def cmd_independence(run: _Run):
    from .seqstats import pairwise_independence_scan

    seq = _signs(run)
    window = run.args.window or seq.q
    rows = pairwise_independence_scan(seq, run.args.lags, window)
    return {"q": seq.q, "window": window, "rows": rows}, (rows, ["lag", "value", "band"])


def cmd_barker(run: _Run):
    from .barker import search_barker

    a = run.args
    result = search_barker(a.n, prune=a.prune, jobs=a.jobs, cap=a.cap, checkpoint=a.checkpoint)
    run.extra["search_wall_time"] = result.wall_time
    return result.to_dict(include_timing=False), None


def cmd_morse(run: _Run):
    from .morse import morse_flatness_scan, parse_factors

    factors = parse_factors(run.args.factors)
    rows = morse_flatness_scan(factors, run.args.lengths)
    flat = [{"length": r["length"], "product_length": r["product_length"],
             "increasing_so_far": r["increasing_so_far"], **r["report"].to_dict()} for r in rows]
    report = {"factors": [f.to_string() for f in factors], "rows": flat}
    return report, (flat, ["length", "l4_fourth_power", "merit_factor", "product_length"])


def cmd_sieve(run: _Run):
    from .numtheory import sieve, write_table

    table = sieve(run.args.n)
    out = Path(run.args.table_out)
    out.parent.mkdir(parents=True, exist_ok=True)
    write_table(table, out)
    run.extra["table"] = str(out)
    report = {"N": table.N, "table": str(out), "table_sha256": sha256_file(out),
              "mertens_N": int(table.mertens[-1]), "lambda_sum_N": int(table.lambda_sum[-1]),
              "squarefree_count": int(np.count_nonzero(table.mu[1:]))}
    return report, None


def cmd_rh_scan(run: _Run):
    from .numtheory import rh_bound_scan

    scan = rh_bound_scan(_table(run), run.args.which, run.args.eps)
    rows = [{"x": int(x), "partial_sum": int(s), "ratio": float(r)}
            for x, s, r in zip(scan.checkpoints, scan.partial_sums, scan.ratios)]
    return scan.to_dict(), (rows, ["x", "partial_sum", "ratio"])


def cmd_chowla(run: _Run):
    from .numtheory import chowla_correlation

    table = _table(run)
    offsets = _int_list(run.args.offsets)
    window = run.args.window or table.N - max(offsets)
    return chowla_correlation(table, offsets, window), None


def cmd_moments(run: _Run):
    from .numtheory import moment_experiment

    a = run.args
    run.seeds["moments"] = a.seed
    table = _table(run) if a.model != "random-sign" else None
    return moment_experiment(a.model, a.N, a.trials, a.p, a.seed, table), None


def cmd_spectrum(run: _Run):
    from .spectral import periodogram, spectral_fourier_check, wiener_correlations

    a = run.args
    seq = _signs(run)
    x = seq.coeffs.astype(np.float64)
    corr = wiener_correlations(x, a.lags)
    verdicts = spectral_fourier_check(seq, a.lags)
    M = max(a.grid, x.size)
    power = periodogram(x, M)
    report = {"N": int(x.size), "lags": a.lags, "gamma": corr.gamma.real, "stable": corr.converged_flags,
              "centered_bit_verdicts": verdicts, "grid": M, "peak_to_mean": float(power.max() / power.mean())}
    if a.plot:
        rows = [{"frequency": j / M, "power": float(pw)} for j, pw in enumerate(power)]
        text = rows_to_csv(rows, ["frequency", "power"])
        Path(a.plot).write_text(text)
        run.extra["plot"] = a.plot
    rows = [{"lag": v["lag"], "value": v["gamma"], "band": v["band"]} for v in verdicts]
    return report, (rows, ["lag", "value", "band"])


def cmd_flat_scan(run: _Run):
    from .flatscan import flat_scan

    a = run.args
    result = flat_scan(a.n, a.objective, a.budget, a.seed, a.cap, a.jobs)
    if result["mode"] == "stochastic":
        run.seeds["flat_scan"] = a.seed
    return result, None


COMMANDS = {
    "norms": cmd_norms,
    "identity-check": cmd_identity_check,
    "autocorr": cmd_autocorr,
    "setdft": cmd_setdft,
    "independence": cmd_independence,
    "barker": cmd_barker,
    "morse": cmd_morse,
    "sieve": cmd_sieve,
    "rh-scan": cmd_rh_scan,
    "chowla": cmd_chowla,
    "moments": cmd_moments,
    "spectrum": cmd_spectrum,
    "flat-scan": cmd_flat_scan,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--jobs", type=int, default=1, help="worker processes for searches")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    with_out = argparse.ArgumentParser(add_help=False, parents=[common])
    with_out.add_argument("--out", dest="out_dir", default=None, help="directory for report files and manifest")

    seq_in = argparse.ArgumentParser(add_help=False)
    seq_in.add_argument("--seq", help="'+-' or '01' string")
    seq_in.add_argument("--in", dest="infile", help="text or bitset sequence file")

    parser = _Parser(prog="flatlab", description="Flat polynomial laboratory.")
    parser.add_argument("--version", action="version", version=f"flatlab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("norms", parents=[with_out, seq_in], help="norms and flatness of one sequence")
    p.add_argument("--alpha", type=_float_list, default=[4.0])
    p.add_argument("--oversample", type=int, default=8)

    p = sub.add_parser("identity-check", parents=[with_out, seq_in], help="residuals of the exact identities")
    p.add_argument("--grid", type=int, default=None)
    p.add_argument("--ell", type=int, default=1)

    sub.add_parser("autocorr", parents=[with_out, seq_in], help="aperiodic autocorrelations")

    p = sub.add_parser("setdft", parents=[with_out, seq_in], help="DFT of residue counts of a set")
    p.add_argument("--set", default=None, help="comma separated integers")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--balanced", action="store_true")

    p = sub.add_parser("independence", parents=[with_out, seq_in], help="lag products against the null band")
    p.add_argument("--random", type=_count, default=None, help="use seeded random signs of this length")
    p.add_argument("--lags", type=int, default=32)
    p.add_argument("--window", type=_count, default=None)

    p = sub.add_parser("barker", parents=[with_out], help="exhaustive Barker search")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--prune", dest="prune", action="store_true", default=True)
    p.add_argument("--no-prune", dest="prune", action="store_false")
    p.add_argument("--cap", type=int, default=28)
    p.add_argument("--checkpoint", default=None)

    p = sub.add_parser("morse", parents=[with_out], help="flatness along a generalized Morse sequence")
    p.add_argument("--factors", required=True, help='comma separated sign blocks, e.g. "+-,+-"')
    p.add_argument("--lengths", type=_int_list, required=True)

    p = sub.add_parser("sieve", parents=[common], help="Liouville / Moebius table")
    p.add_argument("--n", type=_count, required=True)
    p.add_argument("--out", dest="table_out", default="table.bin", help="table file to write")
    p.add_argument("--report-dir", dest="out_dir", default=None)

    p = sub.add_parser("rh-scan", parents=[with_out], help="|S(x)| / x^(1/2+eps) at checkpoints")
    p.add_argument("--table", default="table.bin")
    p.add_argument("--which", choices=("mu", "lambda"), default="mu")
    p.add_argument("--eps", type=float, default=0.1)

    p = sub.add_parser("chowla", parents=[with_out], help="Liouville correlation sums")
    p.add_argument("--table", default="table.bin")
    p.add_argument("--offsets", default="0,1")
    p.add_argument("--window", type=_count, default=None)

    p = sub.add_parser("moments", parents=[with_out], help="Monte-Carlo p-th moments")
    p.add_argument("--model", choices=("random-sign", "lambda-shifted"), default="random-sign")
    p.add_argument("--N", type=_count, default=4096)
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--p", type=float, default=4.0)
    p.add_argument("--table", default="table.bin")

    p = sub.add_parser("spectrum", parents=[with_out, seq_in], help="correlations and periodogram")
    p.add_argument("--thue-morse", type=_count, default=None, help="use the Thue-Morse prefix of this length")
    p.add_argument("--random", type=_count, default=None)
    p.add_argument("--lags", type=int, default=64)
    p.add_argument("--grid", type=_count, default=65536)
    p.add_argument("--plot", default=None, help="two-column CSV (frequency, power)")

    p = sub.add_parser("flat-scan", parents=[with_out], help="minimum L4 norm at one length")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--objective", choices=("min-L4", "max-merit"), default="min-L4")
    p.add_argument("--budget", type=int, default=200_000)
    p.add_argument("--cap", type=int, default=24)
    return parser


def run(argv=None, stdout=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    stdout = stdout or sys.stdout
    t0 = time.perf_counter()
    try:
        args = build_parser().parse_args(argv)
        ctx = _Run(args, argv)
        report, table = COMMANDS[args.command](ctx)
    except ResourceCapError as exc:
        print(f"flatlab: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (ValidationError, FileNotFoundError) as exc:
        print(f"flatlab: {exc}", file=sys.stderr)
        return EXIT_VALIDATION

    payload = {"schema": 1, "command": args.command, "tool_version": __version__, "result": report}
    if args.format == "csv" and table is not None:
        text, ext = rows_to_csv(*table), "csv"
    else:
        text, ext = dumps(payload), "json"
    stdout.write(text)

    if args.out_dir:
        out = Path(args.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        report_path = out / f"{args.command}.{ext}"
        report_path.write_text(text)
        digests = {report_path.name: sha256_bytes(text.encode())}
        for key in ("plot", "table"):
            if key in ctx.extra:
                digests[Path(ctx.extra[key]).name] = sha256_file(ctx.extra[key])
        manifest = RunManifest(
            command_line=["flatlab", *argv],
            seeds=ctx.seeds,
            input_digests=ctx.inputs,
            tool_version=__version__,
            wall_time=time.perf_counter() - t0,
            output_digests=digests,
        )
        (out / "manifest.json").write_text(dumps(manifest))
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
