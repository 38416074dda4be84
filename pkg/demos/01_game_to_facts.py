"""From a generated cleanup game to the symbolic state an agent reasons over."""
import numpy as np

from textrules.knowledge import subgraph_for
from textrules.parser import NoiseConfig, apply_noise, parse_action, parse_observation
from textrules.world import TextGame, generate_games

spec = generate_games("medium", count=1, split="in_dist", seed=3)[0]
game = TextGame(spec)
print("goals:", spec.goal_map)
print(game.describe())

# observation text -> unary location / carry / exit facts
facts = parse_observation(game.describe())
print(sorted(map(str, facts)))

# commonsense atlocation facts for the objects in this game
print(sorted(map(str, subgraph_for(spec))))

# one step of the recorded witness and the parsed command
cmd = spec.witness[0]
print(cmd, "->", parse_action(cmd))
print(game.step(cmd).text)

# perception noise: drop 30% of facts
noisy = apply_noise(facts | subgraph_for(spec), NoiseConfig(p_drop=0.3), np.random.default_rng(0))
print(len(facts | subgraph_for(spec)), "facts ->", len(noisy), "after noise")
