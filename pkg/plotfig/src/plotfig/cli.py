"""Standalone figure tool for the simulator's CSV outputs.

    plotfig trajectory RUN_DIR/trajectory.csv -o trajectory.png
    plotfig sweep-grid a.csv:lambda_c:2 b.csv:N_e:2 ... -o grid.png
    plotfig relaxation-grid g_e.csv:1/gamma_e g_c.csv:1/gamma_c -o rates.png

Each sweep-grid input is PATH[:LABEL[:EXPONENT[:ANCHOR]]]; a detuning panel
uses PATH:LABEL:detune=<omega_v> for a symmetric-log axis about zero.
"""

from __future__ import annotations

import argparse
import sys

from .figures import FigureSpec, PanelSpec, plot_relaxation_grid, plot_sweep_grid, plot_trajectory
from .io import SchemaError


def parse_panel(text: str) -> PanelSpec:
    parts = text.split(":")
    panel = PanelSpec(path=parts[0])
    if len(parts) > 1 and parts[1]:
        panel.label = parts[1]
    for extra in parts[2:]:
        if not extra:
            continue
        if extra.startswith("detune="):
            panel.detune_about = float(extra.split("=", 1)[1])
        elif extra.startswith("anchor="):
            panel.anchor_index = int(extra.split("=", 1)[1])
        else:
            panel.asymptote_exponent = float(extra)
    return panel


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="plotfig", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    p_traj = sub.add_parser("trajectory", help="two-panel population/energy figure")
    p_traj.add_argument("csv")
    p_traj.add_argument("-o", "--output", default="trajectory.png")
    p_traj.add_argument("--bright-amplification", type=float, default=10.0)
    p_traj.add_argument("--dark-amplification", type=float, default=100.0)

    p_grid = sub.add_parser("sweep-grid", help="log-log sweep panels with asymptotes")
    p_grid.add_argument("panels", nargs="+", metavar="PATH[:LABEL[:EXP[:anchor=I|detune=W]]]")
    p_grid.add_argument("-o", "--output", default="sweep_grid.png")

    p_rel = sub.add_parser("relaxation-grid", help="relaxation-robustness panels")
    p_rel.add_argument("panels", nargs="+", metavar="PATH[:LABEL]")
    p_rel.add_argument("-o", "--output", default="relaxation_grid.png")

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "trajectory":
            spec = FigureSpec(kind="trajectory-panels", inputs=[args.csv],
                              output=args.output,
                              bright_amplification=args.bright_amplification,
                              dark_amplification=args.dark_amplification)
            out, _ = plot_trajectory(spec)
        elif args.command == "sweep-grid":
            spec = FigureSpec(kind="sweep-grid",
                              inputs=[parse_panel(p) for p in args.panels],
                              output=args.output)
            out, _ = plot_sweep_grid(spec)
        else:
            spec = FigureSpec(kind="relaxation-grid",
                              inputs=[parse_panel(p) for p in args.panels],
                              output=args.output)
            out, _ = plot_relaxation_grid(spec)
    except (SchemaError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
