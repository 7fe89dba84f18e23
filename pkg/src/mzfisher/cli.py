"""Command-line entry point: ``mzfisher {table-fixed-n,table-mean-n,qfi,verify,search,cfi}``.

Exit codes: 0 success, 1 verification failure, 2 usage or parse error.
JSON output uses Python's shortest round-trip float repr (at most 17
significant digits); CSV uses the same repr, so both carry identical values.
The ``table`` format prints 6 significant digits for reading.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

import numpy as np

from . import fisher, optimize, states, verify
from .fock import FockError, SingleModeState, TruncationError, moments, tensor
from .optics import MzConvention

DEFAULT_CUTOFF = 64
DEFAULT_SEED = verify.SEED
DEFAULT_RESTARTS = 32


class UsageError(Exception):
    pass


def table_fixed_n(max_N: int) -> list[dict]:
    if max_N < 1:
        raise UsageError("--max-n must be at least 1")
    rows = []
    for N in range(1, max_N + 1):
        n_opt, F_max = optimize.fixed_total_best(N)
        F_twin = fisher.qfi_variance(states.twin_fock_input(N, N // 2 + 2)).qfi
        F_noon = fisher.qfi_entangled(states.noon_state(N, N + 1)).qfi
        rows.append(
            {
                "N": N,
                "n_opt": ";".join(str(n) for n in sorted(n_opt)),
                "F_closed_form": F_max,
                "F_twin_fock": F_twin,
                "F_noon": F_noon,
                "ratio": F_noon / F_twin,
                "qcrb_twin": fisher.qcrb(F_twin),
                "qcrb_noon": fisher.qcrb(F_noon),
            }
        )
    return rows


def table_mean_n(values: list[float], cutoff: int, auto_cutoff: bool = False) -> list[dict]:
    rows = []
    for N in values:
        if N < 0:
            raise UsageError(f"mean photon numbers must be nonnegative, got {N}")
        closed = N * (N + 2)
        row = {"N_mean": N, "F_closed_form": closed}
        try:
            psi = states.optimal_mean_input(N, cutoff, auto_cutoff=auto_cutoff)
        except TruncationError as exc:
            # still simulate at the requested cutoff; the tail column shows what was lost
            psi = states.optimal_mean_input(N, cutoff, tail_tol=1.0)
            row["warning"] = f"tail above policy; cutoff {exc.required_cutoff} needed"
        F = fisher.qfi_variance(psi).qfi
        row.update(
            F_simulated=F,
            rel_deviation=abs(F - closed) / closed if closed > 0 else abs(F),
            tail=psi.truncation_tail,
            qcrb=fisher.qcrb(F),
            cutoff=psi.cutoff,
        )
        rows.append(row)
    return rows


def qfi_report(spec_a, spec_b, cutoff: int | None, auto_cutoff: bool = False) -> dict:
    xi = states.from_spec(spec_a, default_cutoff=cutoff, auto_cutoff=auto_cutoff, path="$.a")
    chi = states.from_spec(spec_b, default_cutoff=cutoff, auto_cutoff=auto_cutoff, path="$.b")
    for path, s in (("$.a", xi), ("$.b", chi)):
        if not isinstance(s, SingleModeState):
            raise states.SpecError(f"{path}.type", "qfi needs single-mode specs (number, coherent, squeezed_vacuum)")
    D = max(xi.cutoff, chi.cutoff)
    xi, chi = xi.padded(D), chi.padded(D)
    var = fisher.qfi_variance(tensor(xi, chi))
    mom = fisher.qfi_product(moments(xi), moments(chi))
    return {
        "variance_form": var.as_dict(),
        "moment_form": mom.as_dict(),
        "discrepancy": abs(var.qfi - mom.qfi),
        "cutoff": D,
    }


def search_report(N_mean: float, cutoff: int, restarts: int, seed: int) -> dict:
    res = optimize.mean_constrained_search(N_mean, cutoff, restarts=restarts, seed=seed)
    return {
        "N_mean": N_mean,
        "cutoff": cutoff,
        "restarts": restarts,
        "seed": seed,
        "converged": res.converged,
        "message": res.message,
        "best_F": res.best_F,
        "rescored_F": res.rescored_F,
        "bound": N_mean * (N_mean + 2),
        "odd_mass": list(res.odd_mass),
        "restart_F": [h.qfi for h in res.history],
    }


def cfi_report(spec_a, spec_b, cutoff: int | None, conv: str, points: int, auto_cutoff: bool = False) -> dict:
    xi = states.from_spec(spec_a, default_cutoff=cutoff, auto_cutoff=auto_cutoff, path="$.a")
    chi = states.from_spec(spec_b, default_cutoff=cutoff, auto_cutoff=auto_cutoff, path="$.b")
    D = max(xi.cutoff, chi.cutoff)
    psi = tensor(xi.padded(D), chi.padded(D))
    grid = np.linspace(-np.pi, np.pi, points)
    values = fisher.cfi_scan(psi, grid, conv)
    i = int(np.argmax(values))
    return {
        "mz_convention": MzConvention.parse(conv).value,
        "qfi": fisher.qfi_variance(psi).qfi,
        "best_phi": float(grid[i]),
        "max_cfi": float(values[i]),
        "phi": grid.tolist(),
        "cfi": values.tolist(),
    }


def _load_spec(text: str):
    path = Path(text)
    if not text.lstrip().startswith("{") and path.exists():
        text = path.read_text()
    return text


def _emit(rows: list[dict], fmt: str, out) -> None:
    if fmt == "json":
        json.dump(rows, out, indent=2)
        out.write("\n")
        return
    keys = list(dict.fromkeys(k for row in rows for k in row))
    if fmt == "csv":
        writer = csv.DictWriter(out, fieldnames=keys, lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: _csv_cell(row.get(k)) for k in keys})
        return
    cells = [[_human(row.get(k)) for k in keys] for row in rows]
    widths = [max(len(k), *(len(c[i]) for c in cells)) for i, k in enumerate(keys)]
    out.write("  ".join(k.rjust(w) for k, w in zip(keys, widths)) + "\n")
    for c in cells:
        out.write("  ".join(v.rjust(w) for v, w in zip(c, widths)) + "\n")


def _csv_cell(value):
    if value is None:
        return ""
    return repr(value) if isinstance(value, float) else value


def _human(value) -> str:
    if value is None:
        return "-"
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--cutoff", type=int, default=DEFAULT_CUTOFF, help="Fock cutoff D per mode (default: %(default)s)")
    common.add_argument("--auto-cutoff", action="store_true", help="double the cutoff until the tail is below 1e-10")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED, help="base RNG seed (default: %(default)s)")
    common.add_argument("--restarts", type=int, default=DEFAULT_RESTARTS, help="optimizer restarts (default: %(default)s)")
    common.add_argument(
        "--mz-convention",
        choices=("same", "inverse"),
        default="inverse",
        help="second beam splitter: B or B^dag (default: %(default)s)",
    )
    common.add_argument("--format", choices=("csv", "json", "table"), default="csv", help="output format (default: %(default)s)")

    parser = argparse.ArgumentParser(prog="mzfisher", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("table-fixed-n", parents=[common], help="twin-Fock vs N00N Fisher information for N = 1..max")
    p.add_argument("--max-n", type=int, default=20)

    p = sub.add_parser("table-mean-n", parents=[common], help="dual squeezed vacua: closed form vs simulation")
    p.add_argument("values", type=float, nargs="+", help="total mean photon numbers")

    p = sub.add_parser("qfi", parents=[common], help="QFI of a product of two JSON-specified single-mode states")
    p.add_argument("spec_a", help="JSON object or path to a JSON file for mode a")
    p.add_argument("spec_b", help="JSON object or path to a JSON file for mode b")

    p = sub.add_parser("search", parents=[common], help="numerical QFI maximization at fixed mean photon number")
    p.add_argument("N_mean", type=float)

    p = sub.add_parser("cfi", parents=[common], help="photon-counting CFI over a phase grid for a product input")
    p.add_argument("spec_a")
    p.add_argument("spec_b")
    p.add_argument("--points", type=int, default=73, help="grid points on [-pi, pi] (default: %(default)s)")

    p = sub.add_parser("verify", parents=[common], help="run the acceptance suite")
    p.add_argument("--level", choices=("fast", "full"), default="fast")
    p.add_argument("--report", type=Path, help="also write the JSON report to this file")
    return parser


def main(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        if args.command == "table-fixed-n":
            _emit(table_fixed_n(args.max_n), args.format, out)
        elif args.command == "table-mean-n":
            _emit(table_mean_n(args.values, args.cutoff, args.auto_cutoff), args.format, out)
        elif args.command == "qfi":
            report = qfi_report(_load_spec(args.spec_a), _load_spec(args.spec_b), args.cutoff, args.auto_cutoff)
            json.dump(report, out, indent=2)
            out.write("\n")
        elif args.command == "search":
            json.dump(search_report(args.N_mean, args.cutoff, args.restarts, args.seed), out, indent=2)
            out.write("\n")
        elif args.command == "cfi":
            conv = MzConvention.parse(args.mz_convention)
            report = cfi_report(_load_spec(args.spec_a), _load_spec(args.spec_b), args.cutoff, conv, args.points, args.auto_cutoff)
            json.dump(report, out, indent=2)
            out.write("\n")
        else:
            return _verify(args, out)
    except (UsageError, FockError, ValueError) as exc:
        print(f"mzfisher: error: {exc}", file=sys.stderr)
        return 2
    return 0


def _verify(args, out) -> int:
    human = args.format != "json"
    callback = (lambda r: print(r.line(), file=out, flush=True)) if human else None
    results = verify.run_suite(args.level, callback, seed=args.seed, restarts=args.restarts)
    failed = [r for r in results if not r.passed]
    report = {
        "level": args.level,
        "mz_convention": MzConvention.parse(args.mz_convention).value,
        "passed": not failed,
        "criteria": [r.as_dict() for r in results],
    }
    if args.report:
        args.report.write_text(json.dumps(report, indent=2) + "\n")
    if human:
        names = ", ".join(f"#{r.id} {r.name}" for r in failed)
        print(f"{len(results) - len(failed)}/{len(results)} criteria passed" + (f"; failed: {names}" if failed else ""), file=out)
    else:
        buf = io.StringIO()
        json.dump(report, buf, indent=2)
        out.write(buf.getvalue() + "\n")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
