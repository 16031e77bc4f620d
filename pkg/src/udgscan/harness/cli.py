"""Command-line interface: scan, eval, rename."""

from __future__ import annotations

import argparse
import json
import os
import sys

from ..errors import ConfigError, DiagnosticSink, SchemaError, UdgScanError
from .dataset import load_paired_dataset
from .metrics import compute_metrics, compute_pairwise
from .rename import adversarial_rename
from .scan import EXIT_CONFIG, ScanConfig, print_diagnostics, scan


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="udgscan", description="Repository-level vulnerability triage")
    sub = parser.add_subparsers(dest="command", required=True)

    p_scan = sub.add_parser("scan", help="scan one repository")
    _scan_flags(p_scan)
    p_scan.add_argument("--config", help="JSON config file merged under flags")

    p_eval = sub.add_parser("eval", help="evaluate on a paired dataset")
    p_eval.add_argument("--dataset", required=True, help="JSON-lines paired dataset")
    _scan_flags(p_eval, repo_required=False)
    p_eval.add_argument("--config", help="JSON config file merged under flags")

    p_ren = sub.add_parser("rename", help="adversarial identifier renaming")
    p_ren.add_argument("--repo", required=True)
    p_ren.add_argument("--label", required=True, choices=["vulnerable", "non_vulnerable"])
    p_ren.add_argument("--out", required=True)
    return parser


def _scan_flags(p: argparse.ArgumentParser, repo_required: bool = True) -> None:
    if repo_required:
        p.add_argument("--repo", required=True)
    p.add_argument("--kb", dest="kb_path")
    p.add_argument("--sink", dest="sink_path")
    p.add_argument("--hops", dest="hop_limit", type=int)
    p.add_argument("--rounds", dest="n_rounds", type=int)
    p.add_argument("--oracle", dest="oracle_mode", choices=["live", "mock", "replay"])
    p.add_argument("--transcript", dest="transcript_dir")
    p.add_argument("--out", dest="out_dir")
    p.add_argument("--dump-context", dest="dump_context", action="store_const", const=True)
    p.add_argument("--dump-graph", dest="dump_graph", action="store_const", const=True)
    p.add_argument("--token-budget", dest="token_budget", type=int)
    p.add_argument("--endpoint")
    p.add_argument("--model")
    p.add_argument("--api-key-env", dest="api_key_env")
    p.add_argument("--temperature", type=float)
    p.add_argument("--seed", type=int)


_CONFIG_KEYS = (
    "repo",
    "kb_path",
    "sink_path",
    "hop_limit",
    "n_rounds",
    "oracle_mode",
    "transcript_dir",
    "out_dir",
    "dump_context",
    "dump_graph",
    "token_budget",
    "endpoint",
    "model",
    "api_key_env",
    "temperature",
    "seed",
)


def _config_from_args(args: argparse.Namespace) -> ScanConfig:
    flags = {k: getattr(args, k, None) for k in _CONFIG_KEYS}
    return ScanConfig.from_sources(flags, getattr(args, "config", None))


def cmd_scan(args: argparse.Namespace) -> int:
    config = _config_from_args(args)
    result = scan(config)
    print_diagnostics(result)
    print(json.dumps(result.report, indent=2, sort_keys=True))
    return result.exit_code


def cmd_eval(args: argparse.Namespace) -> int:
    warnings: list[str] = []
    samples = load_paired_dataset(args.dataset, warnings)
    for w in warnings:
        print(f"[warning] dataset: {w}", file=sys.stderr)
    preds: list[tuple[str, bool]] = []
    labels: list[tuple[str, bool]] = []
    pairs: list[tuple[int, int]] = []
    for sample in samples:
        verdicts = []
        for variant_dir, truth in ((sample.vulnerable_dir, True), (sample.patched_dir, False)):
            flags = {k: getattr(args, k, None) for k in _CONFIG_KEYS}
            flags["repo"] = variant_dir
            if flags.get("transcript_dir"):
                variant = "vulnerable" if truth else "patched"
                flags["transcript_dir"] = os.path.join(
                    flags["transcript_dir"], sample.pair_id, variant
                )
            config = ScanConfig.from_sources(flags, getattr(args, "config", None))
            result = scan(config)
            flagged = any(f.verdict == "vulnerable" for f in result.findings)
            verdicts.append(flagged)
            sample_id = f"{sample.pair_id}:{'v' if truth else 'p'}"
            preds.append((sample_id, flagged))
            labels.append((sample_id, truth))
        pairs.append((int(verdicts[0]), int(verdicts[1])))
    metric_warnings: list[str] = []
    precision, recall, f1 = compute_metrics(preds, labels, metric_warnings)
    p_c, p_r, vp_s = compute_pairwise(pairs)
    for w in metric_warnings:
        print(f"[warning] metrics: {w}", file=sys.stderr)
    print(
        json.dumps(
            {
                "pairs": len(pairs),
                "precision": precision,
                "recall": recall,
                "f1": f1,
                "p_c": p_c,
                "p_r": p_r,
                "vp_s": vp_s,
            },
            indent=2,
            sort_keys=True,
        )
    )
    return 0


def cmd_rename(args: argparse.Namespace) -> int:
    diagnostics = DiagnosticSink()
    mapping = adversarial_rename(args.repo, args.label, args.out, diagnostics)
    for d in diagnostics.items:
        print(d.render(), file=sys.stderr)
    print(json.dumps({"renamed_identifiers": len(mapping), "out": args.out}, sort_keys=True))
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "scan":
            return cmd_scan(args)
        if args.command == "eval":
            return cmd_eval(args)
        if args.command == "rename":
            return cmd_rename(args)
        parser.error(f"unknown command {args.command}")
    except (ConfigError, SchemaError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except UdgScanError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
