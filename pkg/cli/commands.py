"""
Command implementations.

Each handler takes the parsed arguments, the manifest of the current run and
the output directory, and writes its reports there. Flags override the
`--config` YAML, which overrides the packaged defaults.
"""
import logging
import os
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel

from cli.manifest import RunManifest
from dataset.io import parse_dataset
from dataset.schemas import Dataset, Split
from encoding.ablation import AblationMode, randomize_features
from exception.exception_handling import ConfigError, StatisticsError
from gnn.checkpoint import load_checkpoint, save_checkpoint
from gnn.params import Architecture, ModelConfig, param_count
from stats.agreement import cohens_kappa, joint_error_rate
from stats.calibration import confidence_agreement_correlation, scaled_margins, temperature_scale
from stats.permutation import PermutationResult, StatsConfig, paired_permutation_test, unpaired_permutation_test
from synth.generator import GenConfig, generate_dataset, split_configs, write_synthetic
from synth.rules import RuleFamily, SyntheticRule
from training.evaluation import EvalReport, evaluate
from training.protocol import MedianRun, learning_curve, median_run
from training.trainer import TrainConfig, TrainReport, train
from utils.config_loader import merged_section
from utils.save_to_document import format_table, save_report

logger = logging.getLogger(__name__)

CHECKPOINT_NAME = "checkpoint.txt"

ABLATION_ROWS = {
    AblationMode.NONE: "Full model",
    AblationMode.RANDOM_DEPREL: "Random dependency relations",
    AblationMode.RANDOM_POS: "Random POS tags",
    AblationMode.RANDOM_DEPREL_POS: "Random relations and POS tags",
    AblationMode.RANDOM_LANG: "Random language IDs",
    AblationMode.RANDOM_ALL: "All features random",
}


# ===== Config resolution =====
def _overlay(values: dict, overrides: Dict[str, Any]) -> dict:
    values.update({k: v for k, v in overrides.items() if v is not None})
    return values


def model_config(args) -> ModelConfig:
    arch = getattr(args, "arch", None)
    values = _overlay(
        merged_section("model", args.config),
        {
            "hidden_dim": getattr(args, "hidden_dim", None),
            "num_layers": getattr(args, "layers", None),
            "architecture": arch.upper() if arch else None,
        },
    )
    return ModelConfig(**values)


def train_config(args) -> TrainConfig:
    values = _overlay(
        merged_section("training", args.config),
        {
            "learning_rate": getattr(args, "lr", None),
            "batch_size": getattr(args, "batch_size", None),
            "max_epochs": getattr(args, "epochs", None),
            "early_stop_patience": getattr(args, "patience", None),
            "seeds": getattr(args, "seeds", None),
        },
    )
    if getattr(args, "epochs", None) is not None and getattr(args, "patience", None) is None:
        values["early_stop_patience"] = min(values.get("early_stop_patience", args.epochs), args.epochs)
    return TrainConfig(**values)


def stats_config(args) -> StatsConfig:
    values = _overlay(
        merged_section("stats", args.config),
        {
            "replications": getattr(args, "replications", None),
            "alpha": getattr(args, "alpha", None),
            "seed": args.seed,
        },
    )
    return StatsConfig(**values)


def _dump(record: BaseModel) -> dict:
    return record.model_dump(mode="json")


# ===== Data helpers =====
def _load(manifest: RunManifest, role: str, path: str, split: Split) -> Dataset:
    data = parse_dataset(path, split)
    manifest.add_data(role, path)
    logger.info(f"Loaded {len(data)} {split.value} pairs from {path}")
    return data


def _read_eval(manifest: RunManifest, role: str, path: str) -> EvalReport:
    if not os.path.isfile(path):
        raise FileNotFoundError(f"evaluation report not found: {path}")
    with open(path, "r", encoding="utf-8") as f:
        report = EvalReport.model_validate_json(f.read())
    manifest.add_data(role, path)
    return report


def _aligned(x: EvalReport, y: EvalReport) -> Tuple[list, list]:
    """Items of y reordered to follow x; both reports must cover the same ids"""
    by_id = {item.id: item for item in y.items}
    missing = [i for i in x.ids if i not in by_id]
    if missing or len(by_id) != len(x.items):
        raise StatisticsError(
            f"paired comparison needs reports over the same items ({len(x.items)} vs {len(y.items)}, "
            f"{len(missing)} ids of the first report absent from the second)"
        )
    return list(x.items), [by_id[i] for i in x.ids]


def _percent(value: float) -> str:
    return f"{100 * value:.1f}"


# ===== train =====
def _epoch_table(report: TrainReport) -> str:
    rows = [(e.epoch, e.train_loss, e.val_loss, e.val_accuracy, "*" if e.epoch == report.selected_epoch else "") for e in report.epochs]
    return format_table(["Epoch", "Train loss", "Val loss", "Val accuracy", "Selected"], rows)


def _eval_table(name: str, report: EvalReport) -> str:
    return format_table(["Test set", "N", "Accuracy"], [(name, report.n, _percent(report.accuracy))])


def cmd_train(args, manifest: RunManifest, out: str) -> None:
    cfg = model_config(args)
    tcfg = train_config(args)
    if not args.median:
        seed = args.seed if args.seed is not None else tcfg.seeds[0]
        cfg = cfg.model_copy(update={"seed": seed})
    manifest.config = {"model": _dump(cfg), "training": _dump(tcfg), "param_count": param_count(cfg), "median": args.median}
    manifest.seeds = list(tcfg.seeds) if args.median else [seed]

    train_data = _load(manifest, "train", args.train, Split.TRAIN)
    val_data = _load(manifest, "validation", args.val, Split.VALIDATION)
    test_data = _load(manifest, "test", args.test, Split.TEST) if args.test else None
    test_name = os.path.basename(args.test) if args.test else None

    if args.median:
        if test_data is None:
            raise ConfigError("--median needs --test to rank the seed runs")
        result = median_run(train_data, val_data, test_data, cfg, tcfg)
        params, report = result.median.params, result.median.train_report
        _save_median(result, out)
        save_report("eval_report", result.report, _eval_table(test_name, result.report), out)
    else:
        params, report = train(train_data, val_data, cfg, tcfg, seed=seed)
        if test_data is not None:
            test_report = evaluate(params, test_data)
            save_report("eval_report", test_report, _eval_table(test_name, test_report), out)

    manifest.wall_clock_seconds["train"] = report.wall_clock_seconds
    save_checkpoint(params, os.path.join(out, CHECKPOINT_NAME))
    save_report("train_report", report, _epoch_table(report), out, title=f"Training (seed {report.seed})")


def _save_median(result: MedianRun, out: str) -> None:
    rows = [(seed, _percent(acc), "*" if seed == result.median.seed else "") for seed, acc in zip(result.seeds, result.seed_accuracies)]
    record = {
        "accuracy": result.accuracy,
        "std": result.std,
        "median_seed": result.median.seed,
        "seeds": result.seeds,
        "seed_accuracies": result.seed_accuracies,
    }
    table = format_table(["Seed", "Accuracy", "Median"], rows)
    table += f"\n\nMedian accuracy {_percent(result.accuracy)} (std {_percent(result.std)})"
    save_report("median_report", record, table, out, title="Median of seeded runs")


# ===== eval =====
def cmd_eval(args, manifest: RunManifest, out: str) -> None:
    explicit = args.config or args.hidden_dim is not None or args.layers is not None or args.arch
    expected = model_config(args) if explicit else None
    params = load_checkpoint(args.checkpoint, expected)
    manifest.add_data("checkpoint", args.checkpoint)
    manifest.config = {"model": _dump(params.config)}

    rows, results, used = [], [], set()
    for i, path in enumerate(args.test):
        data = _load(manifest, f"test[{i}]", path, Split.TEST)
        report = evaluate(params, data)
        stem = os.path.splitext(os.path.basename(path))[0]
        name = f"eval_{stem}" if stem not in used else f"eval_{stem}_{i}"
        used.add(stem)
        save_report(name, report, _eval_table(stem, report), out)
        rows.append((stem, report.n, _percent(report.accuracy)))
        results.append({"test": path, "report": f"{name}.json", "n": report.n, "accuracy": report.accuracy})
        logger.info(f"{path}: accuracy {report.accuracy:.4f} on {report.n} pairs")

    save_report("eval_summary", {"results": results}, format_table(["Test set", "N", "Accuracy"], rows), out, title="Evaluation")


# ===== ablate =====
class AblationRow(BaseModel):
    setting: str
    mode: AblationMode
    architecture: Architecture
    accuracy: float
    std: float
    seed_accuracies: List[float]
    p_value: Optional[float] = None


def derived_seed(seed: int, *keys: int) -> int:
    return int(np.random.SeedSequence([seed, *keys]).generate_state(1)[0])


def cmd_ablate(args, manifest: RunManifest, out: str) -> None:
    cfg = model_config(args)
    tcfg = train_config(args)
    scfg = stats_config(args)
    base_seed = args.seed if args.seed is not None else 0
    splits = (
        _load(manifest, "train", args.train, Split.TRAIN),
        _load(manifest, "validation", args.val, Split.VALIDATION),
        _load(manifest, "test", args.test, Split.TEST),
    )
    modes = [AblationMode(m) for m in args.modes] if args.modes else list(AblationMode)
    if AblationMode.NONE in modes:
        modes.remove(AblationMode.NONE)
    modes.insert(0, AblationMode.NONE)

    manifest.seeds = list(tcfg.seeds)
    manifest.config = {
        "model": _dump(cfg),
        "training": _dump(tcfg),
        "stats": _dump(scfg),
        "ablation": {"modes": [m.value for m in modes], "seed": base_seed, "with_gat": args.with_gat},
    }

    codes = list(AblationMode)
    runs: List[Tuple[str, AblationMode, ModelConfig, MedianRun]] = []
    for mode in modes:
        data = [
            randomize_features(d, mode, derived_seed(base_seed, codes.index(mode), split_code))
            for split_code, d in enumerate(splits)
        ]
        logger.info(f"Ablation {mode.value}: median of {len(tcfg.seeds)} runs")
        runs.append((ABLATION_ROWS[mode], mode, cfg, median_run(*data, cfg, tcfg)))
    if args.with_gat:
        gat = cfg.model_copy(update={"architecture": Architecture.GAT})
        logger.info("Ablation: GAT architecture on the full features")
        runs.append(("GAT architecture", AblationMode.NONE, gat, median_run(*splits, gat, tcfg)))

    baseline = runs[0][3].report.correct_bits
    rows = []
    for index, (setting, mode, run_cfg, result) in enumerate(runs):
        p_value = None
        if index > 0:
            p_value = paired_permutation_test(result.report.correct_bits, baseline, scfg).p_value
        rows.append(
            AblationRow(
                setting=setting,
                mode=mode,
                architecture=run_cfg.architecture,
                accuracy=result.accuracy,
                std=result.std,
                seed_accuracies=result.seed_accuracies,
                p_value=p_value,
            )
        )

    table = format_table(
        ["Setting", "Accuracy", "Std", "p vs full"],
        [(r.setting, _percent(r.accuracy), _percent(r.std), r.p_value) for r in rows],
    )
    save_report("ablation", {"rows": [_dump(r) for r in rows]}, table, out, title="Ablation study")


# ===== synth =====
def _rule(args) -> SyntheticRule:
    family = RuleFamily(args.rule.upper().replace("-", "_"))
    seed = args.seed if args.seed is not None else 0
    if args.relations or args.tags or args.max_depth is not None:
        return SyntheticRule(
            family=family,
            relations=tuple(args.relations) if args.relations else None,
            tags=tuple(args.tags) if args.tags else None,
            max_depth=args.max_depth,
            seed=seed,
        )
    return SyntheticRule.sample(family, seed)


def cmd_synth(args, manifest: RunManifest, out: str) -> None:
    rule = _rule(args)
    values = _overlay(
        merged_section("synth", args.config),
        {
            "min_length": args.min_length,
            "max_length": args.max_length,
            "perturbation_prob": args.perturbation_prob,
            "seed": args.seed,
        },
    )
    if args.splits:
        configs = split_configs(GenConfig(n_pairs=args.splits[0], **values), args.splits)
        outputs = {split.value: (cfg, os.path.join(out, f"{split.value}.jsonl")) for split, cfg in configs.items()}
    elif args.n is not None:
        outputs = {args.name: (GenConfig(n_pairs=args.n, **values), os.path.join(out, f"{args.name}.jsonl"))}
    else:
        raise ConfigError("synth needs --n or --splits")

    manifest.config = {"rule": _dump(rule), "generator": {name: _dump(cfg) for name, (cfg, _) in outputs.items()}}
    manifest.seeds = sorted({cfg.seed for cfg, _ in outputs.values()})

    rows, files = [], []
    for name, (gcfg, path) in outputs.items():
        split = Split(name) if name in {s.value for s in Split} else Split.TRAIN
        data = generate_dataset(rule, gcfg, split)
        write_synthetic(data, rule, gcfg, path)
        share_a = float(np.mean([pair.label.value == "A" for pair in data.pairs]))
        rows.append((os.path.basename(path), len(data), _percent(share_a)))
        files.append({"path": os.path.basename(path), "pairs": len(data), "share_a": share_a})

    save_report("synth_summary", {"rule": _dump(rule), "files": files}, format_table(["File", "Pairs", "% labelled A"], rows), out)


# ===== stats =====
def _compare_table(result: PermutationResult) -> str:
    row = (result.test, result.statistic, f"{result.p_value:.4f}", result.replications, result.seed, result.alpha, result.verdict)
    return format_table(["Test", "Accuracy diff", "p", "R", "Seed", "alpha", "Verdict"], [row])


def cmd_stats_compare(args, manifest: RunManifest, out: str) -> None:
    scfg = stats_config(args)
    x = _read_eval(manifest, "x", args.reports[0])
    y = _read_eval(manifest, "y", args.reports[1])
    manifest.config = {"stats": _dump(scfg), "test": "unpaired" if args.unpaired else "paired"}
    manifest.seeds = [scfg.seed]

    if args.unpaired:
        result = unpaired_permutation_test(x.correct_bits, y.correct_bits, scfg)
    else:
        items_x, items_y = _aligned(x, y)
        result = paired_permutation_test([i.correct for i in items_x], [i.correct for i in items_y], scfg)

    record = _dump(result)
    record["verdict"] = result.verdict
    save_report("compare", record, _compare_table(result), out, title="System comparison")
    print(f"p = {result.p_value:.4f} ({result.verdict} at alpha={result.alpha})")


def _choice(item) -> str:
    return item.prediction.value if item.prediction is not None else "TIE"


def cmd_stats_kappa(args, manifest: RunManifest, out: str) -> None:
    x = _read_eval(manifest, "x", args.reports[0])
    y = _read_eval(manifest, "y", args.reports[1])
    items_x, items_y = _aligned(x, y)
    choices_x = [_choice(i) for i in items_x]
    choices_y = [_choice(i) for i in items_y]
    categories = ["A", "B"] + (["TIE"] if "TIE" in choices_x + choices_y else [])

    agreement = cohens_kappa(choices_x, choices_y, categories)
    joint = joint_error_rate([i.correct for i in items_x], [i.correct for i in items_y])
    record = {**_dump(agreement), "joint_error_rate": joint}
    table = format_table(
        ["kappa", "Observed", "Chance", "N", "k", "Both wrong"],
        [(agreement.kappa, agreement.observed_agreement, agreement.chance_agreement, agreement.N, agreement.k, joint)],
    )
    save_report("kappa", record, table, out, title="Prediction agreement")


def _logits(report: EvalReport) -> np.ndarray:
    return np.asarray([[item.logit_a, item.logit_b] for item in report.items])


def _correlate(report: EvalReport, temperature: Optional[float]):
    rated = [i for i, item in enumerate(report.items) if item.human_agreement is not None]
    if not rated:
        raise StatisticsError("no items carry human agreement")
    margins = scaled_margins(_logits(report)[rated], temperature or 1.0)
    agreement = [report.items[i].human_agreement for i in rated]
    return confidence_agreement_correlation(margins, agreement, temperature)


def _correlation_table(result) -> str:
    rho = result.rho if result.defined else result.reason
    return format_table(["Spearman rho", "p", "N", "Temperature"], [(rho, result.p_value, result.n, result.temperature)])


def cmd_stats_calibrate(args, manifest: RunManifest, out: str) -> None:
    val = _read_eval(manifest, "validation", args.report)
    temperature = temperature_scale(_logits(val), [item.label for item in val.items])
    record: Dict[str, Any] = {"temperature": temperature, "fitted_on": len(val.items)}
    table = format_table(["Temperature", "Fitted on"], [(temperature, len(val.items))])
    if args.apply:
        target = _read_eval(manifest, "apply", args.apply)
        result = _correlate(target, temperature)
        record["correlation"] = _dump(result)
        table += "\n\n" + _correlation_table(result)
    save_report("calibration", record, table, out, title="Temperature scaling")


def cmd_stats_correlate(args, manifest: RunManifest, out: str) -> None:
    report = _read_eval(manifest, "report", args.report)
    result = _correlate(report, args.temperature)
    save_report("correlation", result, _correlation_table(result), out, title="Confidence vs human agreement")


# ===== curve =====
def cmd_curve(args, manifest: RunManifest, out: str) -> None:
    cfg = model_config(args)
    tcfg = train_config(args)
    subset_seed = args.seed if args.seed is not None else 0
    train_data = _load(manifest, "train", args.train, Split.TRAIN)
    val_data = _load(manifest, "validation", args.val, Split.VALIDATION)
    test_data = _load(manifest, "test", args.test, Split.TEST)
    manifest.config = {"model": _dump(cfg), "training": _dump(tcfg), "sizes": list(args.sizes), "subset_seed": subset_seed}
    manifest.seeds = list(tcfg.seeds)

    points = learning_curve(train_data, val_data, test_data, args.sizes, cfg, tcfg, subset_seed=subset_seed)
    table = format_table(["Size", "Accuracy", "Std"], [(p.size, _percent(p.accuracy), _percent(p.std)) for p in points])
    save_report("curve", {"points": [_dump(p) for p in points]}, table, out, title="Learning curve")
