"""End-to-end workflows: generate, train, prune, evaluate, learning curves."""
from __future__ import annotations

import configparser
import csv
import dataclasses
import io
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import learner
from .parser import NoiseConfig
from .policy import RulePolicy, UniformPolicy
from .pruner import PruneReport, prune
from .rollout import Perception, run_episode
from .rules import RuleFile, parse_rules, serialize_rules
from .world import GameSpec, generate_games, optimal_solution

log = logging.getLogger(__name__)


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    """Every knob of a training or evaluation run.

    Config files are ``key = value`` lines (``#`` comments allowed, an
    optional ``[run]`` header); keys are the field names below.
    """

    difficulty: str = "easy"
    episodes: int = 100
    train_games: int = 20
    eval_games: int = 20
    eval_seed: int = 1000
    seeds: int = 5
    seed: int = 0
    gamma: float = 0.9
    alpha: float = 0.95
    tau: float = 0.5
    noise_drop: float = 0.0
    noise_swap: float = 0.0
    noise_scope: str = "all"
    outlier_rejection: bool = False
    k_percent: float = 50.0
    min_support: float = 0.10
    prune: bool = True
    prune_milestone: int = 10
    prune_tolerance: float = 0.0
    batch_episodes: int = 10
    epochs: int = 300
    learning_rate: float = 0.5
    kappa: float = 0.0
    negation: bool = False
    weighted: bool = False
    tie_break: str = "count"
    max_steps: int = 50

    def validate(self) -> "RunConfig":
        if self.difficulty not in ("easy", "medium", "hard"):
            raise ConfigError(f"unknown difficulty {self.difficulty!r}")
        if self.episodes <= 0:
            raise ConfigError("episodes must be positive")
        if self.seeds <= 0 or self.train_games <= 0 or self.eval_games <= 0:
            raise ConfigError("seeds and game counts must be positive")
        if not 0.0 <= self.gamma <= 1.0:
            raise ConfigError("gamma must lie in [0, 1]")
        if not 0.5 < self.alpha <= 1.0:
            raise ConfigError("alpha must lie in (0.5, 1]")
        if not 0 < self.k_percent <= 100:
            raise ConfigError("k_percent must lie in (0, 100]")
        if self.batch_episodes <= 0:
            raise ConfigError("batch_episodes must be positive")
        if self.prune_milestone <= 0:
            raise ConfigError("prune_milestone must be positive")
        try:
            self.noise
            Perception(noise_scope=self.noise_scope)
        except ValueError as e:
            raise ConfigError(str(e)) from None
        return self

    @property
    def noise(self) -> NoiseConfig:
        return NoiseConfig(self.noise_drop, self.noise_swap)

    @property
    def perception(self) -> Perception:
        return Perception(self.noise, self.noise_scope)

    @property
    def train_config(self) -> learner.TrainConfig:
        return learner.TrainConfig(self.epochs, self.learning_rate, self.kappa)

    def with_(self, **changes) -> "RunConfig":
        return dataclasses.replace(self, **changes).validate()

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    @classmethod
    def from_text(cls, text: str) -> "RunConfig":
        if not text.lstrip().startswith("["):
            text = "[run]\n" + text
        cp = configparser.ConfigParser(inline_comment_prefixes=("#",))
        try:
            cp.read_string(text)
        except configparser.Error as e:
            raise ConfigError(str(e)) from None
        if not cp.has_section("run"):
            raise ConfigError("config needs a [run] section")
        types = {f.name: f.type for f in dataclasses.fields(cls)}
        values = {}
        for key, raw in cp.items("run"):
            key = key.replace("-", "_")
            if key not in types:
                raise ConfigError(f"unknown config key {key!r}")
            kind = types[key]
            try:
                if kind == "bool":
                    values[key] = cp.getboolean("run", key)
                elif kind == "int":
                    values[key] = int(raw)
                elif kind == "float":
                    values[key] = float(raw)
                else:
                    values[key] = raw.strip()
            except ValueError:
                raise ConfigError(f"bad value for {key}: {raw!r}") from None
        return cls(**values).validate()

    @classmethod
    def from_file(cls, path) -> "RunConfig":
        return cls.from_text(Path(path).read_text())


# -- game sets --------------------------------------------------------------------

def training_games(cfg: RunConfig, seed: int) -> list[GameSpec]:
    return generate_games(cfg.difficulty, count=cfg.train_games, split="train", seed=seed,
                          max_steps=cfg.max_steps)


def evaluation_games(cfg: RunConfig, split: str) -> list[GameSpec]:
    return generate_games(cfg.difficulty, count=cfg.eval_games, split=split, seed=cfg.eval_seed,
                          max_steps=cfg.max_steps)


def save_games(specs, directory) -> list[Path]:
    """One ``game_NNN.json`` document per spec."""
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    for i, spec in enumerate(specs):
        p = out / f"game_{i:03d}.json"
        p.write_text(spec.to_json() + "\n")
        paths.append(p)
    return paths


def load_games(path) -> list[GameSpec]:
    """Specs from a directory written by :func:`save_games`, or from one JSON file."""
    path = Path(path)
    files = sorted(path.glob("*.json")) if path.is_dir() else [path]
    specs = [GameSpec.from_json(f.read_text()) for f in files]
    for s in specs:
        s.validate()
    return specs


# -- training -------------------------------------------------------------------

@dataclass
class TrainResult:
    rules: RuleFile
    report: PruneReport | None
    log: dict = field(default_factory=dict)

    @property
    def rules_text(self) -> str:
        return serialize_rules(self.rules)


def prune_phase(cfg: RunConfig, seed: int, specs=None):
    """Uniform exploration up to the milestone, then the pruning verdict."""
    specs = specs or training_games(cfg, seed)
    n = min(cfg.prune_milestone, cfg.episodes)
    buf, played = learner.collect(UniformPolicy(), specs, n, seed, cfg.gamma, cfg.perception)
    actions = {a.verb for t in buf for a in t.admissible}
    report = prune([(e.spec, e.actions, e.reward) for e in played], actions, cfg.prune_tolerance)
    return buf, report


def train(cfg: RunConfig, seed: int) -> TrainResult:
    """Explore, prune, fit one rule per retained action signature."""
    cfg.validate()
    specs = training_games(cfg, seed)
    buf, report = prune_phase(cfg, seed, specs)
    allowed = report.retained if cfg.prune else sorted({a.verb for t in buf for a in t.admissible})
    done = len({t.episode for t in buf})
    policy = UniformPolicy(allowed)
    cache: dict = {}
    while done < cfg.episodes:
        if done >= cfg.prune_milestone:
            models = fit_models(cfg, buf, allowed, cache)
            sampler = RuleFile.of([learner.extract_crisp_rule(m, 0.0) for m in models])
            policy = RulePolicy(sampler, allowed, greedy=False, weighted=True)
        n = min(cfg.batch_episodes, cfg.episodes - done)
        more, _ = learner.collect(policy, specs, n, seed, cfg.gamma, cfg.perception, start=done)
        buf += more
        done += n
    models = fit_models(cfg, buf, allowed, cache)
    rules = [learner.extract_crisp_rule(m, cfg.tau) for m in models]
    weights = {f"{m.predicate}/{m.arity}": {k: round(v, 6) for k, v in m.weights.items()}
               for m in models}
    preds, _ = learner.extract_templates(buf)
    comments = [f"learned on {cfg.difficulty} games, seed {seed}, {cfg.episodes} episodes"]
    rf = RuleFile.of(rules, comments)
    train_log = {
        "seed": seed,
        "transitions": len(buf),
        "state_predicates": sorted(preds),
        "allowed": allowed,
        "weights": weights,
        "mean_train_reward": float(np.mean([t.reward for t in buf])) if buf else 0.0,
    }
    return TrainResult(rf, report if cfg.prune else None, train_log)


def fit_models(cfg: RunConfig, buf, allowed, cache: dict | None = None) -> list[learner.RuleModel]:
    """One trained model per allowed action signature seen in ``buf``."""
    preds, signatures = learner.extract_templates(buf)
    tc = cfg.train_config
    models = []
    for sig in sorted(signatures):
        if sig[0] not in allowed:
            continue
        sub = learner.sub_buffer(buf, sig)
        if not sub:
            log.warning("no training data for %s/%d; rule omitted", *sig)
            continue
        model = learner.new_model(sig, preds, cfg.negation, cfg.alpha)
        if cfg.outlier_rejection:
            model = learner.train_with_outlier_rejection(
                model, sub, preds, cfg.k_percent, cfg.min_support, tc, cache)
        else:
            model = learner.fit_rule(model, sub, tc, cache)
        models.append(model)
    return models


# -- evaluation -------------------------------------------------------------------

@dataclass
class EvalResult:
    score_mean: float
    score_std: float
    steps_mean: float
    steps_std: float
    seeds: list[int]
    games: list[dict]
    config: dict

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        cols = ["seed", "game", "score", "steps", "optimal_steps", "reward", "goals"]
        w = csv.DictWriter(buf, cols, lineterminator="\n")
        w.writeheader()
        for row in self.games:
            w.writerow({c: row[c] for c in cols})
        return buf.getvalue()


def play_games(rules: RuleFile, specs, cfg: RunConfig, seed: int) -> list[dict]:
    """Greedy rollouts of ``rules`` restricted to the predicates the file defines."""
    allowed = sorted({r.predicate for r in rules.rules})
    policy = RulePolicy(rules, allowed, greedy=True, weighted=cfg.weighted, tie_break=cfg.tie_break)
    rows = []
    for i, spec in enumerate(specs):
        rng = np.random.default_rng([seed, 7, i])
        ep = run_episode(spec, policy, rng, cfg.perception)
        witness = spec.witness if spec.witness else optimal_solution(spec)
        rows.append({
            "seed": seed,
            "game": i,
            "score": ep.reward / len(spec.goal_map),
            "steps": ep.n_steps,
            "optimal_steps": len(witness) if witness is not None else None,
            "reward": ep.reward,
            "goals": len(spec.goal_map),
        })
    return rows


def evaluate(rule_sets, specs, cfg: RunConfig, seeds) -> EvalResult:
    """One rule set per seed (or a single set reused for every seed)."""
    specs = list(specs)
    if not specs:
        raise ValueError("empty game set")
    seeds = list(seeds)
    if isinstance(rule_sets, RuleFile):
        rule_sets = [rule_sets] * len(seeds)
    if len(rule_sets) != len(seeds):
        raise ValueError("need one rule set per seed")
    rows = []
    per_seed_score, per_seed_steps = [], []
    for rules, seed in zip(rule_sets, seeds):
        r = play_games(rules, specs, cfg, seed)
        rows += r
        per_seed_score.append(np.mean([x["score"] for x in r]))
        per_seed_steps.append(np.mean([x["steps"] for x in r]))
    return EvalResult(
        float(np.mean(per_seed_score)), float(np.std(per_seed_score)),
        float(np.mean(per_seed_steps)), float(np.std(per_seed_steps)),
        seeds, rows, cfg.to_dict(),
    )


def load_rules(path) -> RuleFile:
    return parse_rules(Path(path).read_text())


# -- learning curves --------------------------------------------------------------

def curve(cfg: RunConfig, budgets, splits=("in_dist", "out_dist")) -> list[dict]:
    """Mean and std of the evaluation score after training on each episode budget."""
    budgets = list(budgets)
    if budgets != sorted(budgets):
        raise ConfigError("budgets must be ascending")
    eval_sets = {s: evaluation_games(cfg, s) for s in splits}
    seeds = list(range(cfg.seed, cfg.seed + cfg.seeds))
    rows = []
    for b in budgets:
        if b <= 0:
            log.warning("skipping episode budget %s", b)
            continue
        c = cfg.with_(episodes=b)
        rule_sets = [train(c, s).rules for s in seeds]
        for split, specs in eval_sets.items():
            res = evaluate(rule_sets, specs, c, seeds)
            rows.append({"episodes": b, "split": split, "score_mean": res.score_mean,
                         "score_std": res.score_std, "steps_mean": res.steps_mean,
                         "steps_std": res.steps_std})
    return rows


def rows_to_csv(rows) -> str:
    if not rows:
        return ""
    buf = io.StringIO()
    w = csv.DictWriter(buf, list(rows[0]), lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    return buf.getvalue()
