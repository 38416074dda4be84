"""Command line entry point: ``textrules <subcommand> ...``."""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import harness
from .rules import RuleSyntaxError, RuleValidationError, serialize_rules
from .world import DIFFICULTIES, SPLITS, generate_games

log = logging.getLogger("textrules")

# flag name -> RunConfig field
_OVERRIDES = {
    "difficulty": "difficulty",
    "episodes": "episodes",
    "seeds": "seeds",
    "seed": "seed",
    "gamma": "gamma",
    "alpha": "alpha",
    "tau": "tau",
    "noise_drop": "noise_drop",
    "noise_swap": "noise_swap",
    "outlier_rejection": "outlier_rejection",
    "prune": "prune",
    "games": "train_games",
    "eval_games": "eval_games",
}


def _config_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="key = value config file")
    p.add_argument("--difficulty", choices=DIFFICULTIES)
    p.add_argument("--episodes", type=int)
    p.add_argument("--seeds", type=int, help="number of seeds")
    p.add_argument("--seed", type=int, help="first seed")
    p.add_argument("--gamma", type=float)
    p.add_argument("--alpha", type=float)
    p.add_argument("--tau", type=float)
    p.add_argument("--noise-drop", type=float)
    p.add_argument("--noise-swap", type=float)
    p.add_argument("--or", dest="outlier_rejection", action=argparse.BooleanOptionalAction, default=None,
                   help="outlier-rejected training")
    p.add_argument("--prune", action=argparse.BooleanOptionalAction, default=None,
                   help="action pruning at the milestone")
    p.add_argument("--games", type=int, help="training games per seed")
    p.add_argument("--eval-games", type=int)


def _config(args) -> harness.RunConfig:
    cfg = harness.RunConfig.from_file(args.config) if args.config else harness.RunConfig()
    changes = {f: getattr(args, k) for k, f in _OVERRIDES.items() if getattr(args, k, None) is not None}
    return cfg.with_(**changes)


def _seeds(cfg) -> list[int]:
    return list(range(cfg.seed, cfg.seed + cfg.seeds))


def _out_dir(path) -> Path:
    out = Path(path)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_gen(args) -> int:
    specs = generate_games(args.difficulty, count=args.count, split=args.split, seed=args.seed,
                           max_steps=args.max_steps)
    harness.save_games(specs, args.out)
    print(f"wrote {len(specs)} {args.difficulty}/{args.split} games to {args.out}")
    return 0


def cmd_train(args) -> int:
    cfg = _config(args)
    out = _out_dir(args.out)
    (out / "config.json").write_text(json.dumps(cfg.to_dict(), indent=2, sort_keys=True) + "\n")
    for seed in _seeds(cfg):
        res = harness.train(cfg, seed)
        (out / f"rules_seed{seed}.rules").write_text(res.rules_text)
        if res.report is not None:
            (out / f"prune_seed{seed}.json").write_text(res.report.to_json())
        (out / f"train_log_seed{seed}.json").write_text(json.dumps(res.log, indent=2, sort_keys=True) + "\n")
        print(f"seed {seed}: {len(res.rules.rules)} rules -> {out / f'rules_seed{seed}.rules'}")
    return 0


def cmd_prune(args) -> int:
    cfg = _config(args)
    reports = {str(s): harness.prune_phase(cfg, s)[1].to_dict() for s in _seeds(cfg)}
    text = json.dumps(reports, indent=2, sort_keys=True) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_eval(args) -> int:
    cfg = _config(args)
    if args.games_file:
        specs = harness.load_games(args.games_file)
    else:
        specs = harness.evaluation_games(cfg, args.split)
    rule_sets = [harness.load_rules(p) for p in args.rules]
    if len(rule_sets) > 1:
        seeds = list(range(cfg.seed, cfg.seed + len(rule_sets)))
    else:
        rule_sets, seeds = rule_sets[0], _seeds(cfg)
    res = harness.evaluate(rule_sets, specs, cfg, seeds)
    out = _out_dir(args.out)
    (out / "eval.json").write_text(res.to_json())
    (out / "eval.csv").write_text(res.to_csv())
    print(f"score {res.score_mean:.3f} +- {res.score_std:.3f}  steps {res.steps_mean:.1f} +- {res.steps_std:.1f}")
    return 0


def cmd_curve(args) -> int:
    cfg = _config(args)
    budgets = [int(b) for b in args.budgets.split(",")]
    rows = harness.curve(cfg, budgets)
    out = _out_dir(args.out)
    (out / "curve.json").write_text(json.dumps(rows, indent=2, sort_keys=True) + "\n")
    (out / "curve.csv").write_text(harness.rows_to_csv(rows))
    for r in rows:
        print(f"{r['episodes']:>5} {r['split']:<9} {r['score_mean']:.3f} +- {r['score_std']:.3f}")
    return 0


def cmd_rules(args) -> int:
    rf = harness.load_rules(args.file)
    if args.action == "check":
        print(f"{args.file}: {len(rf.rules)} rules OK")
    else:
        text = serialize_rules(rf)
        if args.out:
            Path(args.out).write_text(text)
        else:
            sys.stdout.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="textrules", description="Rule-learning agent for text cleanup games.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a game set as JSON")
    g.add_argument("--difficulty", choices=DIFFICULTIES, default="easy")
    g.add_argument("--split", choices=SPLITS, default="train")
    g.add_argument("--count", type=int, default=20)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--max-steps", type=int, default=50)
    g.add_argument("--out", required=True, help="output directory, one JSON file per game")
    g.set_defaults(func=cmd_gen)

    t = sub.add_parser("train", help="learn rule files, one per seed")
    _config_flags(t)
    t.add_argument("--out", required=True, help="output directory")
    t.set_defaults(func=cmd_train)

    pr = sub.add_parser("prune", help="exploration episodes and the pruning report")
    _config_flags(pr)
    pr.add_argument("--out", help="JSON file (default: stdout)")
    pr.set_defaults(func=cmd_prune)

    e = sub.add_parser("eval", help="greedy evaluation of rule files")
    _config_flags(e)
    e.add_argument("--rules", nargs="+", required=True, help="one file, or one per seed")
    e.add_argument("--split", choices=SPLITS, default="in_dist")
    e.add_argument("--games-file", help="directory written by 'gen', or one game JSON (default: generated eval set)")
    e.add_argument("--out", required=True, help="output directory")
    e.set_defaults(func=cmd_eval)

    c = sub.add_parser("curve", help="score against training episodes")
    _config_flags(c)
    c.add_argument("--budgets", default="5,10,20,50", help="comma-separated episode budgets")
    c.add_argument("--out", required=True, help="output directory")
    c.set_defaults(func=cmd_curve)

    r = sub.add_parser("rules", help="validate or canonicalize a rule file")
    r.add_argument("action", choices=("check", "dump"))
    r.add_argument("file")
    r.add_argument("--out")
    r.set_defaults(func=cmd_rules)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.ERROR,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (harness.ConfigError, RuleSyntaxError, RuleValidationError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
