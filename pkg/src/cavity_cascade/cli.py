"""Command-line front end.

    cavity-cascade {modes,suppress,scan,optimize,signal2d} [--config PATH]
        [--set section.key=value ...] [--out DIR] [--format csv|json]
        [--convention literal|as-evaluated] [--reference unit-bound|matched-peak]
        [--branches both|plus|minus|nearest] [--quiet]

Exit codes: 0 success, 2 configuration error, 3 singular configuration,
4 output I/O failure.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

from .config import ConfigError, RunConfig
from .constants import FS, NM
from .errors import NoFeasiblePointError, SingularConfigurationError
from .kernel import BRANCH_POLICIES, CONVENTIONS, REFERENCES, cascade_prefactor_total
from .modes import ResonanceWindow, cascade_mode_frequency, contributing_modes
from .output import to_csv, to_json, write_atomic
from .response import assemble_signal
from .scan import optimize, run_scan

EXIT_OK, EXIT_CONFIG, EXIT_SINGULAR, EXIT_IO = 0, 2, 3, 4

COMMANDS = ("modes", "suppress", "scan", "optimize", "signal2d")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="INI-style or .json run configuration")
    common.add_argument("--set", dest="overrides", action="append", default=[], metavar="SECTION.KEY=VALUE",
                        help="override one configuration value (repeatable)")
    common.add_argument("--out", type=Path, help="directory for the output file")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--convention", choices=CONVENTIONS)
    common.add_argument("--reference", choices=REFERENCES)
    common.add_argument("--branches", choices=BRANCH_POLICIES)
    common.add_argument("--quiet", action="store_true", help="suppress the summary")

    parser = argparse.ArgumentParser(
        prog="cavity-cascade",
        description="Cavity suppression of cascaded contributions to fifth-order 2D Raman signals.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "modes": "list contributing cavity modes",
        "suppress": "cascade prefactors and suppression ratio",
        "scan": "grid scan over length and/or angles",
        "optimize": "grid search with refinement for maximum suppression",
        "signal2d": "direct and cascaded (T2, T4) surfaces",
    }
    for name in COMMANDS:
        sub.add_parser(name, parents=[common], help=helps[name])
    return parser


def load_config(args) -> RunConfig:
    cfg = RunConfig.load(args.config) if args.config else RunConfig.defaults()
    for item in args.overrides:
        cfg.apply_override(item)
    if args.convention:
        cfg.set("kernel", "convention", args.convention, "--convention")
    if args.reference:
        cfg.set("kernel", "reference", args.reference, "--reference")
    if args.branches:
        cfg.set("kernel", "branches", args.branches, "--branches")
    return cfg


def _deg(rad: float) -> float:
    return math.degrees(rad)


def run_modes(cfg: RunConfig):
    seq = cfg.sequence()
    cavity = cfg.cavity()
    rows, items, lines = [], [], []
    for kind in cfg.kinds:
        pulse = seq.seeding_pulse(kind)
        window = ResonanceWindow.for_pulse(pulse, cfg.window_halfwidth, cavity.speed_of_light)
        for m in contributing_modes(pulse, cavity, window):
            w = cascade_mode_frequency(m, pulse, cavity)
            rel = w / window.center_frequency
            edge = cavity.band_edge(m)
            rows.append((kind, m, w, rel, rel - 1.0, edge))
            items.append(dict(kind=kind, m=m, frequency_rad_per_s=w, relative_frequency=rel,
                              relative_detuning=rel - 1.0, band_edge_rad_per_s=edge))
            lines.append(f"{kind:<10} m={m:<3d} omega={w:.6e} rad/s  omega/omega_eg={rel:.6f}")
    warnings = [] if rows else ["no contributing modes inside the resonance window"]
    payload = {"command": "modes", "modes": items, "window_relative_halfwidth": cfg.window_halfwidth,
               "configuration": cfg.to_mapping()}
    return rows, payload, lines, warnings


def _reports(cfg: RunConfig):
    seq = cfg.sequence()
    cavity = cfg.cavity()
    sample = cfg.sample()
    out = []
    for kind in cfg.kinds:
        pulse = seq.seeding_pulse(kind)
        window = ResonanceWindow.for_pulse(pulse, cfg.window_halfwidth, cavity.speed_of_light)
        out.append(cascade_prefactor_total(pulse, cavity, window, sample, cfg.cascade_config(kind), cfg.modes()))
    return out


def run_suppress(cfg: RunConfig):
    reports = _reports(cfg)
    rows, lines = [], []
    for rep in reports:
        kind = rep.config.kind
        lines.append(
            f"{kind}: modes={list(rep.modes)} convention={rep.config.denominator_convention} "
            f"reference={rep.config.reference_convention} branches={rep.config.branch_policy}"
        )
        for t in rep.terms:
            lines.append(f"  m={t.m:<3d} b={t.branch:+d} dkL={t.mismatch_phase:+.6f} f={t.geometric:.6e} "
                         f"w={t.weight:.6f} w*f={t.value:.6e}")
            rows.append((kind, t.m, t.branch, t.mismatch_phase, t.omega, t.weight, t.geometric, t.value,
                         rep.geometric_total, rep.total_prefactor, rep.suppression_ratio))
        if not rep.terms:
            rows.append((kind, None, None, None, None, None, None, None,
                         rep.geometric_total, rep.total_prefactor, rep.suppression_ratio))
        for note in rep.notes:
            lines.append(f"  note: {note}")
        lines.append(f"  sum f={rep.geometric_total:.6e} weighted total={rep.total_prefactor:.6e} "
                     f"suppression={rep.suppression_ratio:.6f}")
    ratio = min(r.suppression_ratio for r in reports)
    lines.append(f"suppression ratio: {ratio:.6f}")
    payload = {"command": "suppress", "reports": [r.as_dict() for r in reports], "suppression_ratio": ratio,
               "configuration": cfg.to_mapping(), "configuration_si_echo": cfg.echo_si()}
    return rows, payload, lines, []


def _params_user(p: dict) -> dict:
    return {"length_nm": p["length"] / NM, "theta2_deg": _deg(p["theta2"]), "theta3_deg": _deg(p["theta3"])}


def run_scan_cmd(cfg: RunConfig):
    spec = cfg.scan_spec()
    table = run_scan(spec, cfg["scan"]["workers"])
    rows, items = [], []
    for row in table.rows:
        u = _params_user(row.params)
        per = {k: row.reports[k].suppression_ratio for k in row.reports}
        rows.append((";".join(map(str, row.index)), u["length_nm"], u["theta2_deg"], u["theta3_deg"], row.ratio,
                     per.get("sequential"), per.get("parallel"), row.error))
        items.append({"index": list(row.index), "params": u, "ratio": row.ratio,
                      "ratio_by_kind": per, "error": row.error})
    ok = [r for r in table.rows if r.error is None]
    lines = [f"{len(table.rows)} points over {', '.join(spec.swept)}; {len(table.rows) - len(ok)} singular"]
    if ok:
        best = max(ok, key=lambda r: r.ratio)
        lines.append(f"best ratio {best.ratio:.6f} at {_params_user(best.params)}")
    payload = {"command": "scan", "swept": list(spec.swept), "shape": list(spec.shape), "rows": items,
               "configuration": cfg.to_mapping()}
    return rows, payload, lines, []


def run_optimize_cmd(cfg: RunConfig):
    spec = cfg.scan_spec()
    res = optimize(spec, cfg["scan"]["refinement"], workers=cfg["scan"]["workers"])
    coarse_best = max((r for r in res.coarse.rows if r.error is None), key=lambda r: r.ratio)

    def hw(h: dict):
        return (h.get("length", 0.0) / NM, _deg(h.get("theta2", 0.0)), _deg(h.get("theta3", 0.0)))

    u0 = _params_user(coarse_best.params)
    cells = {n: r.cell for n, r in spec.ranges}
    rows = [(0, u0["length_nm"], u0["theta2_deg"], u0["theta3_deg"], coarse_best.ratio, *hw(cells))]
    trace = []
    for st in res.trace:
        u = _params_user(st.params)
        rows.append((st.step, u["length_nm"], u["theta2_deg"], u["theta3_deg"], st.ratio, *hw(st.half_widths)))
        trace.append({"step": st.step, "params": u, "ratio": st.ratio})
    opt = _params_user(res.params)
    lines = [
        f"optimum ratio {res.ratio:.6f} at length {opt['length_nm']:.6f} nm, "
        f"theta2 {opt['theta2_deg']:.6f} deg, theta3 {opt['theta3_deg']:.6f} deg",
        f"coarse grid {list(res.grid_shape)}, {res.refinement_steps} refinement steps",
    ]
    k = spec.wavenumber
    lines.append(f"k L = {k * res.length / math.pi:.6f} pi")
    payload = {"command": "optimize", "optimum": opt, "ratio": res.ratio, "grid_shape": list(res.grid_shape),
               "refinement_steps": res.refinement_steps, "trace": trace,
               "k_length_over_pi": k * res.length / math.pi, "configuration": cfg.to_mapping()}
    return rows, payload, lines, []


def run_signal2d(cfg: RunConfig):
    t2 = cfg.delay_axis("t2_fs")
    t4 = cfg.delay_axis("t4_fs")
    seq = cfg.sequence()
    cavity = cfg.cavity()
    sample = cfg.sample()
    gain = cfg["signal"]["cascade_gain"]
    if cfg["signal"]["cascades"]:
        reports = {r.config.kind: r for r in _reports(cfg)}
        prefactors = {k: gain * reports[k].total_prefactor if k in reports else 0.0
                      for k in ("sequential", "parallel")}
    else:
        prefactors = {"sequential": 0.0, "parallel": 0.0}
    surf = assemble_signal(seq, cavity, sample, cfg.model(), t2, t4, config=cfg.cascade_config(),
                           cascade_prefactors=prefactors)
    rows = []
    for i, a in enumerate(t2):
        for j, b in enumerate(t4):
            cells = [a / FS, b / FS]
            for s in surf:
                v = complex(s.values[i, j])
                cells += [v.real, v.imag]
            rows.append(tuple(cells))
    payload = {
        "command": "signal2d",
        "t2_fs": [x / FS for x in t2],
        "t4_fs": [x / FS for x in t4],
        "surfaces": {s.label: {"re": s.values.real.tolist(), "im": s.values.imag.tolist()} for s in surf},
        "prefactors": surf.prefactors,
        "configuration": cfg.to_mapping(),
    }
    lines = [f"grid {len(t2)} x {len(t4)}"] + [f"max |{s.label}| = {s.max_abs:.6e}" for s in surf]
    return rows, payload, lines, []


RUNNERS = {
    "modes": run_modes,
    "suppress": run_suppress,
    "scan": run_scan_cmd,
    "optimize": run_optimize_cmd,
    "signal2d": run_signal2d,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    err = sys.stderr
    try:
        cfg = load_config(args)
        rows, payload, lines, warnings = RUNNERS[args.command](cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=err)
        return EXIT_CONFIG
    except SingularConfigurationError as exc:
        print(f"singular configuration: (m={exc.m}, branch={exc.branch:+d}) {exc}", file=err)
        return EXIT_SINGULAR
    except NoFeasiblePointError as exc:
        print(f"singular configuration: {exc}", file=err)
        return EXIT_SINGULAR
    except ValueError as exc:
        # domain checks of the library objects that the config layer let through
        print(f"config error: {exc}", file=err)
        return EXIT_CONFIG

    text = to_csv(args.command, rows) if args.format == "csv" else to_json(args.command, payload)
    for w in warnings:
        print(f"warning: {w}", file=err)
    if args.out is not None:
        target = args.out / f"{args.command}.{args.format}"
        try:
            write_atomic(target, text)
        except OSError as exc:
            print(f"cannot write {target}: {exc}", file=err)
            return EXIT_IO
        if not args.quiet:
            print("\n".join(lines + [f"wrote {target}"]))
    else:
        sys.stdout.write(text)
        if not args.quiet:
            print("\n".join(lines), file=err)
    return EXIT_OK


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
