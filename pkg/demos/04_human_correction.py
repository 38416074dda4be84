"""Edit a learned rule by hand and compare the two rule sets on hard games."""
from importlib import resources

from textrules import harness
from textrules.rules import apply_edit, parse_rules, serialize_rules

data = resources.files("textrules").joinpath("data")
learned = parse_rules(data.joinpath("hard_learned.rules").read_text())
edit = parse_rules(data.joinpath("take_correction.rules").read_text(), source="human")
corrected = apply_edit(learned, edit)
print(serialize_rules(corrected))

cfg = harness.RunConfig(difficulty="hard")
games = harness.evaluation_games(cfg, "out_dist")
for name, rules in [("as learned", learned), ("corrected", corrected)]:
    ev = harness.evaluate(rules, games, cfg, [0])
    print(f"{name}: score {ev.score_mean:.2f}, steps {ev.steps_mean:.1f}")
