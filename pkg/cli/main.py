"""
Command-line entry point.

Exit codes: 0 completed, 1 domain or data error, 2 bad flags or config.
"""
import argparse
import logging
import sys
from typing import List, Optional

from pydantic import ValidationError

from cli import commands
from cli.manifest import read_manifest, run_context
from core.config import get_settings
from core.logging_config import setup_logging
from encoding.ablation import AblationMode
from exception.exception_handling import ConfigError, SwitchGraphError
from synth.rules import RuleFamily

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_ERROR, EXIT_USAGE = 0, 1, 2


def _int_list(text: str) -> List[int]:
    try:
        values = [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("expected at least one integer")
    return values


def _name_list(text: str) -> List[str]:
    return [part.strip() for part in text.split(",") if part.strip()]


def _common() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(add_help=False)
    parser.add_argument("--seed", type=int, default=None, help="Run seed (overrides config)")
    parser.add_argument("--out", default=None, help="Output directory (default: $OUTPUT_DIR)")
    parser.add_argument("--config", default=None, help="YAML file overriding the packaged defaults")
    return parser


def _model_flags() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(add_help=False)
    parser.add_argument("--arch", choices=["gine", "gat"], default=None)
    parser.add_argument("--hidden-dim", type=int, default=None)
    parser.add_argument("--layers", type=int, default=None)
    return parser


def _train_flags() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(add_help=False)
    parser.add_argument("--lr", type=float, default=None)
    parser.add_argument("--batch-size", type=int, default=None, help="Minimal pairs per batch")
    parser.add_argument("--epochs", type=int, default=None)
    parser.add_argument("--patience", type=int, default=None)
    parser.add_argument("--seeds", type=_int_list, default=None, help="Seeds of a median run, e.g. 1,2,3")
    return parser


def _stats_flags() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(add_help=False)
    parser.add_argument("--replications", type=int, default=None)
    parser.add_argument("--alpha", type=float, default=None)
    return parser


def _splits(parser: argparse.ArgumentParser, test_required: bool = True) -> None:
    parser.add_argument("--train", required=True, help="Training pairs (JSONL)")
    parser.add_argument("--val", required=True, help="Validation pairs (JSONL)")
    parser.add_argument("--test", required=test_required, default=None, help="Test pairs (JSONL)")


def build_parser() -> argparse.ArgumentParser:
    common, model, training, stats = _common(), _model_flags(), _train_flags(), _stats_flags()
    parser = argparse.ArgumentParser(
        prog="switchgraph", description="Syntax-only graph networks for code-switching minimal pairs"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", parents=[common, model, training], help="Train a model (single seed or median run)")
    _splits(p, test_required=False)
    p.add_argument("--median", action="store_true", help="Median of --seeds runs ranked on --test")
    p.set_defaults(handler=commands.cmd_train, name="train")

    p = sub.add_parser("eval", parents=[common, model], help="Evaluate a checkpoint on one or more test files")
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--test", required=True, action="append", help="Repeat for several test files")
    p.set_defaults(handler=commands.cmd_eval, name="eval")

    p = sub.add_parser("ablate", parents=[common, model, training, stats], help="Feature ablation table")
    _splits(p)
    p.add_argument("--modes", type=_name_list, default=None, help=f"Subset of {', '.join(m.value for m in AblationMode)}")
    p.add_argument("--with-gat", action="store_true", help="Add the GAT architecture row")
    p.set_defaults(handler=commands.cmd_ablate, name="ablate")

    p = sub.add_parser("synth", parents=[common], help="Generate a dataset with a planted switch rule")
    p.add_argument("--rule", required=True, choices=[f.value.lower().replace("_", "-") for f in RuleFamily])
    p.add_argument("--relations", type=_name_list, default=None, help="DEPREL_SET payload, e.g. obj,nmod")
    p.add_argument("--tags", type=_name_list, default=None, help="POS_SET payload, e.g. NOUN,ADJ")
    p.add_argument("--max-depth", type=int, default=None, help="DEPTH_LIMIT payload")
    p.add_argument("--n", type=int, default=None, help="Number of pairs")
    p.add_argument("--splits", type=_int_list, default=None, help="train,validation,test sizes")
    p.add_argument("--name", default="synth", help="File stem when --splits is not given")
    p.add_argument("--min-length", type=int, default=None)
    p.add_argument("--max-length", type=int, default=None)
    p.add_argument("--perturbation-prob", type=float, default=None)
    p.set_defaults(handler=commands.cmd_synth, name="synth")

    p = sub.add_parser("stats", help="Statistics over evaluation reports")
    stats_sub = p.add_subparsers(dest="stats_command", required=True)

    q = stats_sub.add_parser("compare", parents=[common, stats], help="Permutation test between two systems")
    mode = q.add_mutually_exclusive_group()
    mode.add_argument("--paired", action="store_true", help="Same items (default)")
    mode.add_argument("--unpaired", action="store_true", help="Independent samples")
    q.add_argument("reports", nargs=2)
    q.set_defaults(handler=commands.cmd_stats_compare, name="stats compare")

    q = stats_sub.add_parser("kappa", parents=[common], help="Cohen's kappa between two systems' predictions")
    q.add_argument("reports", nargs=2)
    q.set_defaults(handler=commands.cmd_stats_kappa, name="stats kappa")

    q = stats_sub.add_parser("calibrate", parents=[common], help="Fit a softmax temperature on a validation report")
    q.add_argument("report")
    q.add_argument("--apply", default=None, help="Report to correlate with human agreement at the fitted temperature")
    q.set_defaults(handler=commands.cmd_stats_calibrate, name="stats calibrate")

    q = stats_sub.add_parser("correlate", parents=[common], help="Spearman rho of margins vs human agreement")
    q.add_argument("report")
    q.add_argument("--temperature", type=float, default=None)
    q.set_defaults(handler=commands.cmd_stats_correlate, name="stats correlate")

    p = sub.add_parser("curve", parents=[common, model, training], help="Learning curve over training sizes")
    _splits(p)
    p.add_argument("--sizes", type=_int_list, required=True, help="e.g. 500,1000,2000")
    p.set_defaults(handler=commands.cmd_curve, name="curve")

    p = sub.add_parser("rerun", help="Re-execute the command recorded in a manifest")
    p.add_argument("manifest")
    p.set_defaults(handler=None, name="rerun")
    return parser


def _rerun(path: str) -> int:
    manifest = read_manifest(path)
    if not manifest.argv or manifest.argv[0] == "rerun":
        raise ConfigError(f"{path} does not record a rerunnable command")
    logger.info(f"Re-running {manifest.command} from {path}")
    return main(manifest.argv)


def main(argv: Optional[List[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE

    try:
        setup_logging()
        if args.name == "rerun":
            return _rerun(args.manifest)
        out = args.out or get_settings().OUTPUT_DIR
        with run_context(args.name, argv, out) as manifest:
            args.handler(args, manifest, out)
    except (ValidationError, ConfigError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (SwitchGraphError, FileNotFoundError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
