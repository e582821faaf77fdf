"""Command-line front end.

``parosc <command> --scenario FILE --out DIR [--tol T] [--grid-n N]``

Commands write CSV (header row, 17 significant digits) and JSON into the
output directory. Exit status: 0 success, 1 invalid input, 2 failed
verification, 3 numerical failure.
"""

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .errors import NumericalError, ValidationError
from .scenario import PRESETS, Scenario, preset
from .states import analytic_moments, coherent_wavepacket, eigenstate, moments
from .verify import parallel_map, run_suite

EXIT_OK, EXIT_VALIDATION, EXIT_VERIFY, EXIT_NUMERIC = 0, 1, 2, 3
COMMANDS = ("states", "moments", "coherent", "verify", "figures")
MOMENT_FIELDS = ("t", "mean_x", "mean_p", "var_x", "var_p", "cov_xp")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_VALIDATION, f"{self.prog}: error: {message}\n")


def build_parser():
    p = _Parser(prog="parosc", description="Parametric oscillator states, moments and checks.")
    p.add_argument("command", choices=COMMANDS)
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--scenario", type=Path, help="scenario TOML file")
    src.add_argument("--preset", choices=sorted(PRESETS), help="built-in scenario")
    p.add_argument("--out", type=Path, required=True, help="output directory")
    p.add_argument("--tol", type=float, default=None, help="override every verify tolerance")
    p.add_argument("--grid-n", type=int, default=None, help="override the number of grid points")
    return p


def write_csv(path, header, columns):
    """Write columns as CSV with a header row and ``%.17g`` values."""
    data = np.column_stack([np.asarray(c, dtype=float).ravel() for c in columns])
    np.savetxt(path, data, fmt="%.17g", delimiter=",", header=",".join(header), comments="")


def _long_form(times, x, rows):
    t = np.repeat(times, x.size)
    return t, np.tile(x, len(times)), np.concatenate(rows)


class Runner:
    """Executes one command for a scenario."""

    def __init__(self, scenario, out, tol=None):
        self.scenario = scenario
        self.out = Path(out)
        self.tol = tol
        self.data = scenario.build()

    def _path(self, name):
        return self.out / name

    @property
    def times(self):
        return self.scenario.sample_times()

    @property
    def stride(self):
        return slice(None, None, self.scenario.grid.stride)

    # -- commands -----------------------------------------------------------

    def states(self):
        grid = self.scenario.state_grid(self.data)
        sl = self.stride
        x = grid.x[sl]
        written = []
        for n in self.scenario.outputs.states:
            per_t = parallel_map(lambda t, n=n: eigenstate(n, grid, t, self.data).samples[sl], self.times)
            t, xx, s = _long_form(self.times, x, per_t)
            name = f"states_n{n}.csv"
            write_csv(self._path(name), ("t", "x", "re", "im", "density"), (t, xx, s.real, s.imag, np.abs(s) ** 2))
            written.append(name)
        return written

    def moments(self):
        grid = self.scenario.state_grid(self.data)
        hbar = self.data.consts.hbar
        records, rows = [], []
        for n in self.scenario.outputs.states:
            ms = parallel_map(lambda t, n=n: moments(eigenstate(n, grid, t, self.data), hbar), self.times)
            for m in ms:
                rec = {"state": n, **m.to_record(), "robertson": m.robertson}
                records.append(rec)
                rows.append([n] + [rec[k] for k in MOMENT_FIELDS] + [m.robertson])
        rows = np.array(rows, dtype=float)
        write_csv(self._path("moments.csv"), ("state",) + MOMENT_FIELDS + ("robertson",), rows.T)
        self._path("moments.json").write_text(json.dumps(records, indent=1) + "\n")
        return ["moments.csv", "moments.json"]

    def _coherent_density(self, name):
        sc = self.scenario
        grid = sc.state_grid(self.data, n_max=sc.grid.n_max, shift=sc.coherent_shift(self.data))
        sl = self.stride
        per_t = parallel_map(lambda t: coherent_wavepacket(sc.alpha, t, self.data, grid).density[sl], self.times)
        write_csv(self._path(name), ("t", "x", "value"), _long_form(self.times, grid.x[sl], per_t))

    def _uncertainty(self, name):
        ms = [analytic_moments(self.scenario.alpha, t, self.data) for t in self.times]
        cols = [[getattr(m, k) for m in ms] for k in MOMENT_FIELDS]
        cols += [[m.heisenberg for m in ms], [m.robertson for m in ms]]
        write_csv(self._path(name), MOMENT_FIELDS + ("heisenberg", "robertson"), cols)

    def coherent(self):
        self._coherent_density("coherent_density.csv")
        self._uncertainty("coherent_uncertainty.csv")
        return ["coherent_density.csv", "coherent_uncertainty.csv"]

    def figures(self):
        lo, hi = self.data.span
        t = np.linspace(lo, hi, 1001)
        q1, _, q2, _ = self.data.pair(t)
        s, ds = self.data.sigma(t)
        write_csv(self._path("fig1_classical.csv"), ("t", "q1", "q2", "sigma", "dsigma", "tau"),
                  (t, q1, q2, s, ds, self.data.tau(t)))
        written = ["fig1_classical.csv"]
        grid = self.scenario.state_grid(self.data)
        sl = self.stride
        for n in self.scenario.outputs.states:
            per_t = parallel_map(lambda tk, n=n: eigenstate(n, grid, tk, self.data).density[sl], self.times)
            name = f"fig2_density_n{n}.csv"
            write_csv(self._path(name), ("t", "x", "value"), _long_form(self.times, grid.x[sl], per_t))
            written.append(name)
        self._coherent_density("fig3a_coherent_density.csv")
        self._uncertainty("fig3b_uncertainty.csv")
        return written + ["fig3a_coherent_density.csv", "fig3b_uncertainty.csv"]

    def verify(self):
        reports = run_suite(self.scenario, self.data, tol=self.tol)
        failed = [r for r in reports if not r.passed]
        payload = {
            "scenario": self.scenario.name,
            "passed": not failed,
            "n_checks": len(reports),
            "n_failed": len(failed),
            "reports": [r.to_dict() for r in reports],
        }
        self._path("verify.json").write_text(json.dumps(payload, indent=1) + "\n")
        for r in failed:
            print(f"FAIL {r.check} t={r.t:g} residual={r.norm_residual:.3e} tol={r.tolerance:.1e}", file=sys.stderr)
        return ["verify.json"], bool(failed)


def run(argv=None):
    """Parse ``argv`` and execute; returns the exit status."""
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return exc.code
    try:
        sc = preset(args.preset) if args.preset else Scenario.load(args.scenario)
        if args.grid_n is not None:
            sc = sc.with_grid_n(args.grid_n)
        if args.tol is not None and not args.tol > 0:
            raise ValidationError("--tol must be positive")
        try:
            args.out.mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise ValidationError(f"cannot create output directory {args.out}: {exc.strerror}") from None
        runner = Runner(sc, args.out, args.tol)
        result = getattr(runner, args.command)()
    except ValidationError as exc:
        print(f"parosc: invalid input: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except NumericalError as exc:
        print(f"parosc: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    files, failed = result if args.command == "verify" else (result, False)
    for name in files:
        print(args.out / name)
    if failed:
        print(f"parosc: verification failed for scenario {sc.name!r}", file=sys.stderr)
        return EXIT_VERIFY
    return EXIT_OK


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
