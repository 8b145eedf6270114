"""Command-line front end.

    ladderline validate --config reference.cfg [--generations 5,10,50] [--out v.csv]
    ladderline simulate --config track.cfg
    ladderline train    --config track.cfg
    ladderline sweep    --config track.cfg

Each command writes one CSV (``#`` metadata block, header row, data rows) to
stdout or ``--out``.  Exit status: 0 ok, 2 bad configuration, 3 singular
network, 4 I/O failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from dataclasses import replace
from fractions import Fraction
from importlib import resources
from typing import Callable, Sequence, TextIO

import numpy as np

from . import __version__
from .analytic import analytic_profile
from .config import ConfigError, RunConfig, format_config, parse_config
from .errors import (
    InvalidParameterError,
    SingularConfigurationError,
    SingularNetworkError,
    UnsupportedConfigurationError,
)
from .ladder import DamageCase, ReceiverVoltage, frequency_response, simulate
from .scenarios import receiver_currents, train_timeline

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_SINGULAR = 3
EXIT_IO = 4

COMMANDS = ("validate", "simulate", "train", "sweep")
PRESETS = ("reference", "track")


def fmt(value: float) -> str:
    return format(float(value), ".17g")


class Table:
    """Header plus rows of already-formatted cells; ``notes`` go to stderr."""

    def __init__(self, header: Sequence[str]) -> None:
        self.header = list(header)
        self.rows: list[list[str]] = []
        self.notes: list[str] = []

    def add(self, *cells) -> None:
        self.rows.append([c if isinstance(c, str) else fmt(c) for c in cells])


def analytic_reference(cfg: RunConfig, x: np.ndarray):
    """Analytic profile matched to the configured anchor.

    A transmitter anchor is translated into the receiver voltage that gives
    the requested magnitude, with zero phase, at ``x = length``.
    """
    anchor = cfg.anchor.to_anchor()
    if isinstance(anchor, ReceiverVoltage):
        return analytic_profile(cfg.line, cfg.boundary(anchor.v_out), x, cfg.length)
    unit = analytic_profile(cfg.line, cfg.boundary(1.0), [cfg.length], cfg.length)
    v0 = anchor.magnitude / unit.V[0]
    return analytic_profile(cfg.line, cfg.boundary(v0), x, cfg.length)


def convergence_errors(cfg: RunConfig, generations: Sequence[int]) -> dict[int, tuple[float, float]]:
    """n -> (max relative Vmax error, max relative Imax error) against the analytic line."""
    out = {}
    anchor = cfg.anchor.to_anchor()
    for n in generations:
        spec = cfg.network(n)
        profile = simulate(spec, cfg.total_damage(), anchor)
        ref = analytic_reference(cfg, profile.x)
        ev = float(np.max(np.abs(profile.vmax - ref.vmax) / ref.vmax))
        ei = float(np.max(np.abs(profile.imax - ref.imax) / ref.imax))
        out[n] = (ev, ei)
    return out


def validate_table(cfg: RunConfig) -> Table:
    ns = list(dict.fromkeys(cfg.validate_generations))
    anchor = cfg.anchor.to_anchor()
    # node positions as exact fractions of the length, so coinciding nodes of different n share a row
    by_n: dict[int, dict[Fraction, tuple[float, float]]] = {}
    positions: set[Fraction] = set()
    for n in ns:
        spec = cfg.network(n)
        profile = simulate(spec, cfg.total_damage(), anchor)
        cells = {}
        for g in range(n + 1):
            key = Fraction(n - g, n)
            cells[key] = (profile.vmax[g], profile.imax[g])
            positions.add(key)
        by_n[n] = cells
    keys = sorted(positions, reverse=True)
    x = np.array([cfg.length * k.numerator / k.denominator for k in keys])
    ref = analytic_reference(cfg, x)
    header = ["x", "vmax_analytic", "imax_analytic"]
    for n in ns:
        header += [f"vmax_ladder_{n}", f"imax_ladder_{n}"]
    table = Table(header)
    for i, key in enumerate(keys):
        row: list = [x[i], ref.vmax[i], ref.imax[i]]
        for n in ns:
            cell = by_n[n].get(key)
            row += ["", ""] if cell is None else [cell[0], cell[1]]
        table.add(*row)
    for n, (ev, ei) in convergence_errors(cfg, ns).items():
        table.notes.append(f"E({n}) = {fmt(ev)}  (Imax error {fmt(ei)})")
    return table


def simulate_table(cfg: RunConfig) -> Table:
    spec = cfg.network()
    profile = simulate(spec, cfg.total_damage(), cfg.anchor.to_anchor())
    table = Table(["node", "x", "re_v", "im_v", "vmax", "re_i", "im_i", "imax"])
    for g in range(spec.n + 1):
        v, i = profile.V[g], profile.I[g]
        table.add(str(g), profile.x[g], v.real, v.imag, profile.vmax[g], i.real, i.imag, profile.imax[g])
    return table


def train_table(cfg: RunConfig) -> Table:
    spec = cfg.network()
    anchor = cfg.anchor.to_anchor()
    timeline = train_timeline(spec, cfg.train)
    currents = receiver_currents(spec, [e.damage for e in timeline], anchor)
    table = Table(["t", "receiver_imax"])
    for entry, current in zip(timeline, currents):
        table.add(entry.t, current)
    # wheel shunts are the only damage during a pass; compare against the intact line
    baseline = receiver_currents(spec, [DamageCase()], anchor)[0]
    table.notes.append(f"baseline receiver Imax = {fmt(baseline)}")
    if isinstance(anchor, ReceiverVoltage):
        table.notes.append("warning: receiver anchor pins the receiver current; use anchor.kind = transmitter")
    return table


def sweep_table(cfg: RunConfig) -> Table:
    damage = cfg.total_damage()
    table = Table(["frequency", "re_z", "im_z", "abs_z", "re_h", "im_h", "abs_h"])
    for f in cfg.sweep.frequencies():
        first = frequency_response(cfg.network(frequency=f), damage)[0]
        table.add(f, first.Z.real, first.Z.imag, abs(first.Z), first.H.real, first.H.imag, abs(first.H))
    return table


BUILDERS: dict[str, Callable[[RunConfig], Table]] = {
    "validate": validate_table,
    "simulate": simulate_table,
    "train": train_table,
    "sweep": sweep_table,
}


def render(command: str, cfg: RunConfig, table: Table) -> str:
    buf = io.StringIO()
    buf.write(f"# ladderline {__version__} {command}\n")
    for line in format_config(cfg):
        buf.write(f"# {line}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(table.header)
    writer.writerows(table.rows)
    return buf.getvalue()


def run(command: str, cfg: RunConfig, out: TextIO, err: TextIO | None = None) -> int:
    """Execute one command and write its CSV to ``out``; returns the exit status."""
    err = sys.stderr if err is None else err
    if command not in BUILDERS:
        print(f"error: unknown command {command!r}", file=err)
        return EXIT_CONFIG
    try:
        table = BUILDERS[command](cfg)
    except SingularNetworkError as exc:
        where = "" if exc.generation is None else f" at generation {exc.generation}"
        print(f"error: singular network{where}: {exc}", file=err)
        return EXIT_SINGULAR
    except SingularConfigurationError as exc:
        print(f"error: singular configuration: {exc}", file=err)
        return EXIT_SINGULAR
    except (InvalidParameterError, UnsupportedConfigurationError) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_CONFIG
    try:
        out.write(render(command, cfg, table))
        out.flush()
    except OSError as exc:
        print(f"error: cannot write output: {exc}", file=err)
        return EXIT_IO
    for note in table.notes:
        print(note, file=err)
    return EXIT_OK


def preset_text(name: str) -> str:
    return resources.files("ladderline").joinpath("data", f"{name}.cfg").read_text(encoding="utf-8")


def _generations(text: str) -> tuple[int, ...]:
    try:
        values = tuple(int(p) for p in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if not values or any(v < 1 for v in values):
        raise argparse.ArgumentTypeError("generation counts must be positive")
    return values


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ladderline", description="Lumped RLGC ladder line simulator.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("command", choices=COMMANDS)
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--config", metavar="PATH", help="run configuration file")
    source.add_argument("--preset", choices=PRESETS, help="use a shipped configuration")
    parser.add_argument("--out", metavar="PATH", help="write CSV here instead of stdout")
    parser.add_argument(
        "--generations", type=_generations, metavar="N[,N...]", help="override validate.generations"
    )
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK

    try:
        if args.preset:
            text, origin = preset_text(args.preset), f"<preset {args.preset}>"
        else:
            with open(args.config, encoding="utf-8") as fh:
                text, origin = fh.read(), args.config
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return EXIT_IO
    except UnicodeDecodeError as exc:
        print(f"error: {args.config}: not UTF-8 text: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    try:
        cfg = parse_config(text)
    except ConfigError as exc:
        print(f"{origin}:{exc}" if exc.line else f"{origin}: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if args.generations:
        cfg = replace(cfg, validate_generations=args.generations)

    if args.out is None:
        return run(args.command, cfg, sys.stdout)
    buf = io.StringIO()
    status = run(args.command, cfg, buf)
    if status != EXIT_OK:
        return status
    try:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(buf.getvalue())
    except OSError as exc:
        print(f"error: cannot write {args.out}: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
