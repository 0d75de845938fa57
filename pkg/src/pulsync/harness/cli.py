"""Command line front end: ``pulsync run``, ``pulsync bounds``."""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from ..errors import PulsyncError
from ..sim.export import dumps, summary_csv, trace_to_json, write_trace
from .manifest import build, describe_bounds, execute, load_manifest, parse_seeds, sweep, validate

OUT_ENV = "PULSYNC_OUT"


def _out_dir(arg: str | None) -> Path | None:
    path = arg or os.environ.get(OUT_ENV)
    if not path:
        return None
    p = Path(path)
    p.mkdir(parents=True, exist_ok=True)
    return p


def cmd_run(args) -> int:
    if args.replay:
        return replay(args.replay)
    if not args.manifest:
        print("error: --manifest or --replay is required", file=sys.stderr)
        return 2
    doc = load_manifest(args.manifest)
    seeds = parse_seeds(args.seeds) if args.seeds else None
    adversaries = args.adversary.split(",") if args.adversary else None
    out = _out_dir(args.out)
    record = "full" if (args.traces and out) else "outputs"

    def keep(row, trace):
        if args.traces and out:
            write_trace(trace, out / f"trace_{row['run_id']}.json")

    rows = list(sweep(doc, seeds=seeds, adversaries=adversaries, horizon=args.horizon,
                      record=record, on_trace=keep))
    if args.format == "csv":
        text = summary_csv(rows)
    else:
        text = json.dumps([{k: v for k, v in r.items() if k != "ok"} for r in rows], indent=2)
    if out:
        name = "summary.csv" if args.format == "csv" else "summary.json"
        (out / name).write_text(text if text.endswith("\n") else text + "\n", encoding="utf-8")
    if not args.quiet:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    bad = [r for r in rows if not r["ok"]]
    for r in bad:
        print(f"violation in run {r['run_id']}: {r['verdicts']} (stabilised {r['stabilisation_round']}, "
              f"bound {r['bound']})", file=sys.stderr)
    return 1 if bad else 0


def replay(path) -> int:
    """Re-run the experiment recorded in a trace file and compare byte for byte."""
    with open(path, encoding="utf-8") as fh:
        original = fh.read().strip()
    doc = json.loads(original)
    manifest = validate(doc["meta"]["manifest"])
    scenario = manifest["scenario"]
    setup = build(manifest["construction"], scenario)
    seed = parse_seeds(manifest["seeds"])[0]
    trace = execute(setup, scenario["adversary"], seed, manifest.get("horizon"), scenario,
                    record="full", meta={"manifest": manifest})
    again = dumps(trace_to_json(trace))
    if again == original:
        print(f"replay identical ({len(again)} bytes)")
        return 0
    print("replay differs from the recorded trace", file=sys.stderr)
    return 1


def cmd_bounds(args) -> int:
    if args.manifest:
        con = load_manifest(args.manifest)["construction"]
    else:
        con = {"kind": args.kind, "n": args.n, "f": args.f, "fault_model": args.fault_model}
        if args.period is not None:
            con["period"] = args.period
        if args.modulus is not None:
            con["modulus"] = args.modulus
    print(json.dumps(describe_bounds(con), indent=2))
    return 0


def parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="pulsync", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="run a manifest's seed/adversary sweep")
    r.add_argument("--manifest", help="experiment manifest (JSON)")
    r.add_argument("--seeds", help="seed range A..B (overrides the manifest)")
    r.add_argument("--adversary", help="comma-separated strategy names (overrides the manifest)")
    r.add_argument("--horizon", type=int, help="rounds per run (default: 2*bound + 4*period)")
    r.add_argument("--out", help=f"output directory (default: ${OUT_ENV}, else stdout only)")
    r.add_argument("--format", choices=("json", "csv"), default="json")
    r.add_argument("--traces", action="store_true", help="also write one full trace per run")
    r.add_argument("--replay", help="re-run a recorded trace and check it is reproduced exactly")
    r.add_argument("--quiet", action="store_true")
    r.set_defaults(func=cmd_run)

    b = sub.add_parser("bounds", help="print the construction tree and its bounds")
    b.add_argument("--manifest")
    b.add_argument("--kind", default="strong-pulser")
    b.add_argument("--n", type=int, default=4)
    b.add_argument("--f", type=int, default=1)
    b.add_argument("--period", type=int)
    b.add_argument("--modulus", type=int)
    b.add_argument("--fault-model", default="byzantine")
    b.set_defaults(func=cmd_bounds)
    return ap


def main(argv=None) -> int:
    args = parser().parse_args(argv)
    try:
        return args.func(args)
    except PulsyncError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
