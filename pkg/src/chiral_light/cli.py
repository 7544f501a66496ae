"""Command-line driver: parameter sweeps written as CSV.

Subcommands ``effective``, ``steady``, ``evolve``, ``phase``, ``bandmap``,
``oracle`` and ``emit``.  Every CSV starts with a ``#`` comment block echoing
the resolved configuration, followed by a header row.  Frequencies in the
output are in units of Gamma.

Exit codes: 0 success, 2 invalid configuration, 3 numerical failure,
4 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from . import gaussian as gs
from .config import MODES, RunConfig, parse_config, render_config, with_mode
from .errors import ChiralLightError, NonPhysical, ParseError, StepTooLarge, TruncationLeak, Unstable, ValidationError
from .fock_oracle import FockConfig, effective_lindblad_steady, full_model_evolve, reduced_covariance
from .lineout import CSV_COLUMNS, LineParams, output_correlators
from .model import EffectiveModel, band_map, band_parameter, pair_blocks

EXIT_OK, EXIT_VALIDATION, EXIT_NUMERICAL, EXIT_IO = 0, 2, 3, 4

PHASE_CUTS = (0.0, 0.2, 0.4)
EVOLVE_ETAS = (0.3, 0.5, 0.7, 0.9)


@dataclass
class Table:
    columns: tuple
    rows: list
    meta: str = ""

    def to_csv(self, stream) -> None:
        for line in self.meta.splitlines():
            stream.write(f"# {line}\n" if line else "#\n")
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(self.columns)
        for row in self.rows:
            writer.writerow([_cell(v) for v in row])

    def to_string(self) -> str:
        buf = io.StringIO()
        self.to_csv(buf)
        return buf.getvalue()

    def column(self, name: str) -> list:
        i = self.columns.index(name)
        return [row[i] for row in self.rows]


def _cell(v):
    if isinstance(v, (bool, np.bool_)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return v


def _map(fn, items, workers: int):
    """Ordered map, optionally across processes; results come back in input order."""
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _meta(cfg: RunConfig) -> str:
    return render_config(cfg)


# --- effective ------------------------------------------------------------


def run_effective(cfg: RunConfig) -> Table:
    m = cfg.effective()
    G = m.Gamma
    report = gs.criticality(m)
    cols = ("g1", "g2", "gbar_mag", "eta", "q", "q_index", "Delta", "J", "N", "stable", "regime_valid", "relax_rate", "T1")
    row = (
        m.g1 / G,
        m.g2 / G,
        m.gbar_mag / G,
        m.eta,
        m.q,
        m.q_index,
        m.Delta / G,
        m.J / G,
        m.N,
        m.stable,
        cfg.model.regime_valid(),
        report.relax_rate / G,
        report.T1 * G,
    )
    return Table(cols, [row], _meta(cfg))


# --- steady ---------------------------------------------------------------


def run_steady(cfg: RunConfig) -> Table:
    m = cfg.effective()
    cols = ("k", "k_partner", "E", "eta", "n_k", "n_kp", "re_aa", "im_aa", "E_N", "self_paired")
    rows = []
    for block in gs.lattice_steady(m):
        block.check()
        aa, nk, nkp = block.moments()
        rows.append(
            (block.k, block.k_partner, band_parameter(m, block.k), m.eta, nk, nkp, aa.real, aa.imag,
             gs.log_negativity_sympl(block), block.self_paired)
        )
    return Table(cols, rows, _meta(cfg))


# --- phase ----------------------------------------------------------------


def _phase_row(args):
    series, eta, E = args
    return (series, eta, E, gs.log_negativity_closed(eta, E), gs.negativity_threshold(eta))


def run_phase_sweep(cfg: RunConfig, workers: int = 1) -> Table:
    """E_N over an (eta, E) grid plus fixed-E cuts.

    Sweep keys: ``eta`` (default 0:0.95:50), ``E`` (default 0:1:50) and
    ``cuts`` (default 0, 0.2, 0.4).  Each cut is its own series, labelled
    ``cut:<E>``.
    """
    etas = cfg.sweep_values("eta", tuple(np.linspace(0.0, 0.95, 50)))
    Es = cfg.sweep_values("E", tuple(np.linspace(0.0, 1.0, 50)))
    cuts = cfg.sweep_values("cuts", PHASE_CUTS)
    for eta in etas:
        if not 0 <= eta < 1:
            raise ValidationError("eta values must lie in [0, 1)", "sweep.eta")
    jobs = [("grid", eta, E) for eta in etas for E in Es]
    jobs += [(f"cut:{c!r}", eta, c) for c in cuts for eta in etas]
    rows = _map(_phase_row, jobs, workers)
    return Table(("series", "eta", "E", "E_N", "threshold"), rows, _meta(cfg))


# --- bandmap --------------------------------------------------------------


def run_bandmap(cfg: RunConfig) -> Table:
    """Band parameter over the N x N (k, q) grid.

    ``E_ge_1`` flags points with E >= 1; ``zero_crossing`` marks points where E
    vanishes or changes sign towards the next k on the ring.
    """
    m = cfg.effective()
    E = band_map(m)
    N = m.N
    grid = m.k_grid
    rows = []
    for qi in range(N):
        for ki in range(N):
            e = E[ki, qi]
            nxt = E[(ki + 1) % N, qi]
            crossing = e == 0 or (N > 1 and np.sign(e) * np.sign(nxt) < 0)
            rows.append((grid[ki], grid[qi], e, bool(e >= 1), bool(crossing)))
    return Table(("k", "q", "E", "E_ge_1", "zero_crossing"), rows, _meta(cfg))


# --- evolve ---------------------------------------------------------------


def _pair_model(g1: float, eta: float, E: float, Gamma: float) -> tuple[EffectiveModel, float]:
    """A four-site ring whose (pi/2, 3pi/2) pair has band parameter E."""
    w = 4 * g1**2 * E / Gamma
    m = EffectiveModel(g1=g1, g2=eta * g1, Delta=w / 2, J=0.0, Gamma=Gamma, N=4, q_index=0)
    return m, math.pi / 2


def _evolve_series(args):
    g1, Gamma, eta, E, t_T1 = args
    m, k = _pair_model(g1, eta, E, Gamma)
    T1 = gs.criticality(m).T1
    times = np.asarray(t_T1) * T1
    state = gs.CorrelatorState.vacuum()
    rows = []
    for t in times:
        if t > state.t:
            traj = gs.evolve(state, m, k, t - state.t)
            state = traj.state(len(traj) - 1)
        en = gs.log_negativity_sympl(gs.PairCovariance(state.covariance()))
        closed = float(gs.transient_log_negativity_closed(eta, gs.relaxation_fraction(m, t))) if E == 0 else math.nan
        rows.append((eta, E, t, t / T1, en, closed, abs(en - closed)))
    return rows


def run_evolution(cfg: RunConfig, workers: int = 1) -> Table:
    """E_N(t) from vacuum for several eta, numerically and in closed form.

    Sweep keys: ``eta`` (default 0.3, 0.5, 0.7, 0.9), ``E`` (one value,
    default 0) and ``t`` in units of T1 (default 0:10:101).  The closed-form
    column is only defined at E = 0 and is NaN otherwise.
    """
    etas = cfg.sweep_values("eta", EVOLVE_ETAS)
    Es = cfg.sweep_values("E", (0.0,))
    if len(Es) != 1:
        raise ValidationError("evolve takes a single E value", "sweep.E")
    t_T1 = cfg.sweep_values("t", tuple(np.linspace(0.0, 10.0, 101)))
    if any(t < 0 for t in t_T1) or list(t_T1) != sorted(t_T1):
        raise ValidationError("times must be non-negative and increasing", "sweep.t")
    for eta in etas:
        if not 0 <= eta < 1:
            raise Unstable(f"eta = {eta!r} has no steady state to evolve towards")
    m = cfg.effective()
    jobs = [(m.g1, m.Gamma, eta, Es[0], t_T1) for eta in etas]
    rows = [r for series in _map(_evolve_series, jobs, workers) for r in series]
    cols = ("eta", "E", "t", "t_over_T1", "E_N", "E_N_closed", "abs_err")
    return Table(cols, rows, _meta(cfg))


# --- oracle ---------------------------------------------------------------


def _compare(rows, label, oracle, gauss):
    err = abs(oracle - gauss)
    rel = err / abs(gauss) if gauss != 0 else (0.0 if err == 0 else math.inf)
    rows.append((label, oracle, gauss, err, rel))


def _oracle_rows(args):
    g1, g2, q, Gamma, fc = args
    eta = g2 / g1
    rows = []
    if fc.include_qubit:
        raise ValidationError("include_qubit runs use run_oracle with a ModelParams", "oracle.include_qubit")
    state = effective_lindblad_steady(g1, g2, q, Gamma, fc)
    cov = reduced_covariance(state)
    tag = f"n_max={fc.n_max}"
    if fc.sites == 1:
        aa, n = gs.steady_moments(eta, 0.0)
        ref = gs.single_mode_covariance(aa * np.exp(1j * q), n)
    else:
        ref = gs.two_mode_covariance(eta, 0.0)
    _, n_oracle, _ = cov.moments()
    _compare(rows, f"{tag}:n", n_oracle, eta**2 / (1 - eta**2))
    for i in range(ref.shape[0]):
        for j in range(i, ref.shape[0]):
            _compare(rows, f"{tag}:gamma[{i},{j}]", cov.gamma[i, j], ref[i, j])
    if fc.sites == 2:
        _compare(rows, f"{tag}:E_N", gs.log_negativity_sympl(cov), gs.log_negativity_closed(eta, 0.0))
    return rows


def run_oracle(cfg: RunConfig, workers: int = 1) -> Table:
    """Compare truncated-Fock simulations with the Gaussian predictions.

    Without ``include_qubit`` the effective dissipator of the configured drive
    is simulated at band parameter 0 for each ``n_max`` in the sweep (default
    the [oracle] value).  With ``include_qubit`` the full driven single-site
    model runs to ``t_final`` and the mean photon number over its last
    quarter is compared with eta^2/(1 - eta^2).
    """
    m = cfg.effective()
    fc = cfg.oracle
    cols = ("quantity", "oracle", "gaussian", "abs_err", "rel_err")
    if fc.include_qubit:
        if fc.t_final is None:
            raise ValidationError("include_qubit needs t_final", "oracle.t_final")
        p = replace(cfg.model, N=1, J=0.0)
        traj = full_model_evolve(p, replace(fc, sites=1))
        n = traj.photon_number()
        late = n[traj.times >= 0.75 * traj.times[-1]].mean()
        rows = []
        _compare(rows, "full:n", float(late), m.eta**2 / (1 - m.eta**2))
        return Table(cols, rows, _meta(cfg))
    n_values = [int(v) for v in cfg.sweep_values("n_max", (fc.n_max,))]
    q = m.q if fc.sites == 1 else 0.0
    jobs = [(m.g1, m.g2, q, m.Gamma, replace(fc, n_max=n)) for n in n_values]
    rows = [r for chunk in _map(_oracle_rows, jobs, workers) for r in chunk]
    return Table(cols, rows, _meta(cfg))


# --- emit -----------------------------------------------------------------


def run_emit(cfg: RunConfig) -> Table:
    m = cfg.effective()
    lp = LineParams(cfg.gamma_line, m.N, cfg.line_factor)
    rows = [o.row() for o in output_correlators(gs.lattice_steady(m), lp)]
    return Table(CSV_COLUMNS, rows, _meta(cfg))


RUNNERS = {
    "effective": lambda cfg, w: run_effective(cfg),
    "steady": lambda cfg, w: run_steady(cfg),
    "evolve": run_evolution,
    "phase": run_phase_sweep,
    "bandmap": lambda cfg, w: run_bandmap(cfg),
    "oracle": run_oracle,
    "emit": lambda cfg, w: run_emit(cfg),
}

GNUPLOT_STUBS = {
    "phase": "set datafile separator ','\nplot '{csv}' using 2:4 every ::1 with points title 'E_N(eta)'\n",
    "bandmap": "set datafile separator ','\nset view map\nsplot '{csv}' using 1:2:3 with image title 'E(k, q)'\n",
    "evolve": "set datafile separator ','\nplot '{csv}' using 4:5 with lines title 'E_N(t/T1)'\n",
}
DEFAULT_STUB = "set datafile separator ','\nplot '{csv}' using 1:2 with linespoints\n"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="chiral-light", description=__doc__.split("\n\n")[0])
    parser.add_argument("mode", choices=MODES)
    parser.add_argument("--config", help="configuration file (defaults are used when omitted)")
    parser.add_argument("--out", help="output CSV path, '-' for stdout (overrides [run] output)")
    parser.add_argument("--workers", type=int, default=1, help="worker processes for sweeps")
    parser.add_argument("--seed", type=int, default=None, help="reserved; no stochastic features use it yet")
    parser.add_argument("--gnuplot-stub", action="store_true", help="also write a gnuplot script next to the CSV")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        text = ""
        if args.config:
            with open(args.config) as fh:
                text = fh.read()
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    try:
        cfg = with_mode(parse_config(text), args.mode)
        if args.out:
            cfg = replace(cfg, output_path=args.out)
        if args.workers < 1:
            raise ValidationError("must be >= 1", "--workers")
        table = RUNNERS[cfg.mode](cfg, args.workers)
    except (ParseError, ValidationError) as exc:
        print(f"invalid configuration: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (Unstable, TruncationLeak, NonPhysical, StepTooLarge, ChiralLightError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    try:
        if cfg.output_path == "-":
            table.to_csv(sys.stdout)
        else:
            with open(cfg.output_path, "w", newline="") as fh:
                table.to_csv(fh)
        if args.gnuplot_stub:
            target = cfg.output_path if cfg.output_path != "-" else "data.csv"
            stub = GNUPLOT_STUBS.get(cfg.mode, DEFAULT_STUB).format(csv=target)
            if cfg.output_path == "-":
                sys.stderr.write(stub)
            else:
                with open(cfg.output_path + ".gp", "w") as fh:
                    fh.write(stub)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
