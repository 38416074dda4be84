"""Learn action rules on medium games, inspect pruning and evaluate greedily."""
from textrules import harness

cfg = harness.RunConfig(difficulty="medium", episodes=100)
res = harness.train(cfg, seed=0)

print("pruned:", res.report.pruned, "retained:", res.report.retained)
print(res.rules_text)
for key, weights in res.log["weights"].items():
    print(key, {k: round(v, 2) for k, v in weights.items() if v > 0.05})

for split in ("in_dist", "out_dist"):
    ev = harness.evaluate(res.rules, harness.evaluation_games(cfg, split), cfg, [0])
    print(f"{split}: score {ev.score_mean:.2f}, steps {ev.steps_mean:.1f}")
