"""Deterministic cleanup-game simulator.

A game is a handful of rooms holding containers and supporters, some misplaced
objects, and a goal mapping from each misplaced object to the holder where it
belongs. The agent earns +1 the first time an object reaches its goal holder;
a goal object sitting on its goal holder is tidied and can no longer be moved.
"""
from __future__ import annotations

import json
import zlib
from collections import deque
from dataclasses import asdict, dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .core import ActionCommand, SymbolicFact, fact
from .vocabulary import ROOM_NAMES, EntityVocabulary, default_vocabulary, root_of

DIFFICULTIES = ("easy", "medium", "hard")
SPLITS = ("train", "in_dist", "out_dist")
DIRECTIONS = ("north", "south", "east", "west")
NOTHING_HAPPENS = "Nothing happens."
INVENTORY = "@inventory"
DEFAULT_MAX_STEPS = 50


class GameOver(RuntimeError):
    """Raised when stepping a finished game."""


@dataclass(frozen=True)
class RoomSpec:
    name: str
    exits: dict = field(default_factory=dict)  # direction -> room name


@dataclass(frozen=True)
class EntitySpec:
    phrase: str
    kind: str  # object | container | supporter
    location: str  # holder phrase or room name (floor) for objects, room name for holders
    closed: bool = False


@dataclass
class GameSpec:
    difficulty: str
    rooms: list
    entities: list
    goal_map: dict
    seed: int = 0
    max_steps: int = DEFAULT_MAX_STEPS
    split: str = "train"
    witness: list = field(default_factory=list)

    def __post_init__(self):
        self.rooms = [r if isinstance(r, RoomSpec) else RoomSpec(**r) for r in self.rooms]
        self.entities = [e if isinstance(e, EntitySpec) else EntitySpec(**e) for e in self.entities]
        self.goal_map = dict(self.goal_map)
        self.witness = list(self.witness)

    @property
    def objects(self) -> list[str]:
        return [e.phrase for e in self.entities if e.kind == "object"]

    @property
    def holders(self) -> list[str]:
        return [e.phrase for e in self.entities if e.kind != "object"]

    def entity(self, phrase: str) -> EntitySpec:
        for e in self.entities:
            if e.phrase == phrase:
                return e
        raise KeyError(phrase)

    def validate(self) -> None:
        if self.difficulty not in DIFFICULTIES:
            raise ValueError(f"unknown difficulty {self.difficulty!r}")
        if self.max_steps <= 0:
            raise ValueError("max_steps must be positive")
        rooms = {r.name for r in self.rooms}
        if not rooms:
            raise ValueError("a game needs at least one room")
        for r in self.rooms:
            for d, dest in r.exits.items():
                if d not in DIRECTIONS or dest not in rooms:
                    raise ValueError(f"bad exit {d}->{dest} in {r.name}")
        phrases = [e.phrase for e in self.entities]
        if len(set(phrases)) != len(phrases):
            raise ValueError("duplicate entity phrase")
        roots = [root_of(p) for p in phrases]
        if len(set(roots)) != len(roots):
            raise ValueError("entities in one game must have distinct root nouns")
        holders = {e.phrase: e for e in self.entities if e.kind != "object"}
        for e in self.entities:
            if e.kind == "object":
                if e.location not in holders and e.location not in rooms:
                    raise ValueError(f"{e.phrase} is located nowhere")
            elif e.kind in ("container", "supporter"):
                if e.location not in rooms:
                    raise ValueError(f"holder {e.phrase} is not in a room")
            else:
                raise ValueError(f"unknown kind {e.kind!r}")
        objects = set(self.objects)
        for o, h in self.goal_map.items():
            if o not in objects:
                raise ValueError(f"goal object {o!r} not in game")
            if h not in holders:
                raise ValueError(f"goal holder {h!r} of {o!r} not in any room")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["goal_map"] = dict(sorted(self.goal_map.items()))
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> "GameSpec":
        spec = cls(**d)
        spec.validate()
        return spec

    @classmethod
    def from_json(cls, text: str) -> "GameSpec":
        return cls.from_dict(json.loads(text))


@dataclass
class Observation:
    text: str
    admissible: list
    done: bool
    reward: int = 0


# -- text rendering ---------------------------------------------------------

def article(phrase: str) -> str:
    return ("an " if phrase[0] in "aeiou" else "a ") + phrase


def join_list(items: Sequence[str]) -> str:
    if len(items) == 1:
        return items[0]
    return ", ".join(items[:-1]) + " and " + items[-1]


class TextGame:
    """One running game instance. Not shareable between threads."""

    def __init__(self, spec: GameSpec):
        spec.validate()
        self.spec = spec
        self._holders = {e.phrase: e for e in spec.entities if e.kind != "object"}
        self._objects = [e.phrase for e in spec.entities if e.kind == "object"]
        self._rooms = {r.name: r for r in spec.rooms}
        self.reset()

    # state -----------------------------------------------------------------
    def reset(self) -> Observation:
        spec = self.spec
        self.room = spec.rooms[0].name
        self.location = {e.phrase: e.location for e in spec.entities if e.kind == "object"}
        self.opened = {p for p, h in self._holders.items() if h.kind == "container" and not h.closed}
        self.scored: set[str] = set()
        self.steps = 0
        self.score = 0
        self.done = not spec.goal_map
        return Observation(self.describe(), self.admissible(), self.done, 0)

    def state_key(self) -> tuple:
        return (self.room, tuple(sorted(self.location.items())), tuple(sorted(self.opened)))

    def _lidded(self, holder: str) -> bool:
        return self._holders[holder].closed

    def _room_holders(self) -> list[str]:
        return [p for p, h in self._holders.items() if h.location == self.room]

    def _contents(self, holder: str) -> list[str]:
        return [o for o in self._objects if self.location[o] == holder]

    def _floor(self) -> list[str]:
        return [o for o in self._objects if self.location[o] == self.room]

    def carried(self) -> list[str]:
        return [o for o in self._objects if self.location[o] == INVENTORY]

    def visible_objects(self) -> list[str]:
        seen = []
        for h in self._room_holders():
            if h in self.opened or self._holders[h].kind == "supporter":
                seen += self._contents(h)
        return seen + self._floor()

    def _exits(self) -> list[str]:
        exits = self._rooms[self.room].exits
        return [d for d in DIRECTIONS if d in exits]

    def _tidied(self, obj: str) -> bool:
        return self.spec.goal_map.get(obj) == self.location[obj] and obj in self.scored

    # rendering -------------------------------------------------------------
    def describe(self) -> str:
        out = [f"You are in the {self.room}."]
        holders = self._room_holders()
        if holders:
            out.append(f"You see {join_list([article(h) for h in holders])}.")
        for h in holders:
            kind = self._holders[h].kind
            if kind == "container" and self._lidded(h):
                if h not in self.opened:
                    out.append(f"The {h} is closed.")
                    continue
                out.append(f"The {h} is open.")
            contents = self._contents(h)
            if contents:
                prep = "in" if kind == "container" else "on"
                out.append(f"There is {join_list([article(o) for o in contents])} {prep} the {h}.")
            else:
                out.append(f"The {h} is empty.")
        floor = self._floor()
        if floor:
            out.append(f"There is {join_list([article(o) for o in floor])} on the floor.")
        if not holders and not floor:
            out.append("The room is empty.")
        exits = self._exits()
        if len(exits) == 1:
            out.append(f"There is an exit to the {exits[0]}.")
        elif exits:
            out.append(f"There are exits to the {join_list(exits)}.")
        carried = self.carried()
        if carried:
            out.append(f"You are carrying: {join_list([article(o) for o in carried])}.")
        else:
            out.append("You are carrying nothing.")
        return " ".join(out)

    def facts(self) -> set[SymbolicFact]:
        """Ground-truth view of the facts the current description expresses."""
        out = {fact("be-located-at", o) for o in self.visible_objects()}
        out |= {fact("carry", o) for o in self.carried()}
        out |= {fact("direction", d) for d in self._exits()}
        out |= {fact("open", h) for h in self._room_holders() if self._lidded(h) and h in self.opened}
        return out

    # actions ---------------------------------------------------------------
    def _moves(self) -> list[ActionCommand]:
        """State-changing admissible actions."""
        acts = [ActionCommand("go", (d,)) for d in self._exits()]
        holders = self._room_holders()
        for h in holders:
            if self._holders[h].kind == "container" and h not in self.opened:
                acts.append(ActionCommand("open", (h,)))
                continue
            for o in self._contents(h):
                if not self._tidied(o):
                    acts.append(ActionCommand("take", (o, h)))
        for o in self._floor():
            acts.append(ActionCommand("take", (o,)))
        for o in self.carried():
            for h in holders:
                if self._holders[h].kind == "supporter":
                    acts.append(ActionCommand("put", (o, h)))
                elif h in self.opened:
                    acts.append(ActionCommand("insert", (o, h)))
        return acts

    def admissible(self) -> list[ActionCommand]:
        if self.done:
            return []
        acts = self._moves()
        for e in self.visible_objects() + self._room_holders() + self.carried():
            acts.append(ActionCommand("examine", (e,)))
        acts += [ActionCommand("look"), ActionCommand("inventory")]
        return sorted(set(acts), key=ActionCommand.render)

    def step(self, action) -> Observation:
        if self.done:
            raise GameOver("the game is already finished")
        if isinstance(action, str):
            from .parser import parse_action
            action = parse_action(action)
        self.steps += 1
        reward = 0
        if action not in set(self.admissible()):
            feedback = NOTHING_HAPPENS
        else:
            feedback, reward = self._apply(action)
        self.score += reward
        if all(self._tidied(o) for o in self.spec.goal_map) or self.steps >= self.spec.max_steps:
            self.done = True
        if reward:
            feedback += " Your score has gone up by one point."
        return Observation(f"{feedback} {self.describe()}", self.admissible(), self.done, reward)

    def _apply(self, a: ActionCommand) -> tuple[str, int]:
        v, args = a.verb, a.args
        if v == "go":
            self.room = self._rooms[self.room].exits[args[0]]
            return f"You go {args[0]}.", 0
        if v == "take":
            self.location[args[0]] = INVENTORY
            if len(args) == 2:
                return f"You take the {args[0]} from the {args[1]}.", 0
            return f"You take the {args[0]}.", 0
        if v in ("put", "insert"):
            o, h = args
            self.location[o] = h
            reward = 0
            if self.spec.goal_map.get(o) == h and o not in self.scored:
                self.scored.add(o)
                reward = 1
            if v == "put":
                return f"You put the {o} on the {h}.", reward
            return f"You insert the {o} into the {h}.", reward
        if v == "open":
            self.opened.add(args[0])
            return f"You open the {args[0]}.", 0
        if v == "examine":
            return f"You see nothing special about the {args[0]}.", 0
        if v == "look":
            return "You look around.", 0
        return "You check your belongings.", 0


def reset(spec: GameSpec) -> tuple[TextGame, Observation]:
    game = TextGame(spec)
    return game, Observation(game.describe(), game.admissible(), game.done, 0)


def replay(spec: GameSpec, actions: Iterable) -> int:
    """Total reward from executing ``actions`` after a fresh reset.

    Execution stops silently once the game is done.
    """
    game = TextGame(spec)
    for a in actions:
        if game.done:
            break
        game.step(a)
    return game.score


def normalized_score(spec: GameSpec, reward: float) -> float:
    return reward / len(spec.goal_map) if spec.goal_map else 1.0


def optimal_solution(spec: GameSpec, limit: int | None = None) -> list[str] | None:
    """Breadth-first shortest command sequence that tidies every goal object."""
    game = TextGame(spec)
    limit = spec.max_steps if limit is None else limit
    n_goals = len(spec.goal_map)
    if n_goals == 0:
        return []

    def key():
        return (game.room, tuple(sorted(game.location.items())), frozenset(game.opened), frozenset(game.scored))

    def snapshot():
        return (game.room, dict(game.location), set(game.opened), set(game.scored))

    def restore(snap):
        game.room, loc, opened, scored = snap
        game.location, game.opened, game.scored = dict(loc), set(opened), set(scored)

    start = key()
    parent = {start: None}
    frontier = deque([(start, snapshot(), 0)])
    while frontier:
        k, snap, depth = frontier.popleft()
        if depth >= limit:
            continue
        restore(snap)
        moves = sorted(game._moves(), key=ActionCommand.render)
        for a in moves:
            restore(snap)
            game._apply(a)
            nk = key()
            if nk in parent:
                continue
            parent[nk] = (k, a.render())
            if len(game.scored) == n_goals:
                path = []
                while parent[nk] is not None:
                    nk, cmd = parent[nk]
                    path.append(cmd)
                return path[::-1]
            frontier.append((nk, snapshot(), depth + 1))
    return None


# -- generation ---------------------------------------------------------------

def _reserved(obj: str, start: str) -> bool:
    """Configurations held back from training for the in-distribution split."""
    return zlib.crc32(f"{obj}|{start}".encode()) % 3 == 0


_CODES = {"easy": 0, "medium": 1, "hard": 2, "train": 0, "in_dist": 1, "out_dist": 2}


class VocabularyError(ValueError):
    pass


def generate_games(
    difficulty: str,
    vocabulary: EntityVocabulary | None = None,
    count: int = 1,
    split: str = "train",
    seed: int = 0,
    *,
    n_objects: int | None = None,
    max_steps: int = DEFAULT_MAX_STEPS,
    decorations: bool | None = None,
) -> list[GameSpec]:
    """Generate ``count`` solvable games of one difficulty tier and split.

    train and in_dist games draw goal objects from the training objects; every
    (object, start location) configuration of an in_dist game is one that no
    train game can produce. out_dist games use held-out goal objects only.
    """
    if difficulty not in DIFFICULTIES:
        raise ValueError(f"unknown difficulty {difficulty!r}")
    if split not in SPLITS:
        raise ValueError(f"unknown split {split!r}")
    if count < 0:
        raise ValueError("count must be nonnegative")
    vocab = vocabulary or default_vocabulary()
    pool = vocab.held_out_objects if split == "out_dist" else vocab.train_objects
    lo, hi = {"easy": (1, 3), "medium": (2, 3), "hard": (2, 4)}[difficulty]
    if n_objects is not None:
        lo = hi = n_objects
    need_homes = 2 if difficulty == "hard" else 1
    homes = {vocab.home(o) for o in pool}
    if len(pool) < hi or len(homes) < need_homes:
        raise VocabularyError(
            f"{split} pool has {len(pool)} objects over {len(homes)} holders; "
            f"{difficulty} games need {hi} objects over at least {need_homes} holders"
        )
    if decorations is None:
        decorations = difficulty != "easy"
    specs = []
    for i in range(count):
        rng = np.random.default_rng([seed, i, _CODES[difficulty], _CODES[split]])
        for _ in range(500):
            spec = _try_game(rng, vocab, pool, difficulty, split, seed, lo, hi, max_steps, decorations)
            if spec is not None:
                break
        else:
            raise VocabularyError(f"could not build a {difficulty}/{split} game from this vocabulary")
        specs.append(spec)
    return specs


def _try_game(rng, vocab, pool, difficulty, split, seed, lo, hi, max_steps, decorations):
    n = int(rng.integers(lo, hi + 1))
    goals = [pool[j] for j in rng.choice(len(pool), size=n, replace=False)]
    goal_holders = sorted({vocab.home(o) for o in goals}, key=vocab.holders.index)
    others = [h for h in vocab.holders if h not in goal_holders]
    extra: list[str] = []
    decor: list[str] = []
    if difficulty != "easy":
        n_extra = int(rng.integers(1, 3))
        extra = [others[j] for j in rng.choice(len(others), size=n_extra, replace=False)]
        if decorations:
            cands = [o for o in vocab.train_objects if vocab.home(o) in extra and o not in goals]
            if cands:
                k = int(rng.integers(0, min(2, len(cands)) + 1))
                decor = [cands[j] for j in rng.choice(len(cands), size=k, replace=False)]
    holders = goal_holders + sorted(extra, key=vocab.holders.index)
    names = [ROOM_NAMES[j] for j in rng.choice(len(ROOM_NAMES), size=2, replace=False)]
    if difficulty == "hard":
        rooms = [RoomSpec(names[0], {"east": names[1]}), RoomSpec(names[1], {"west": names[0]})]
        holder_room = {h: names[int(rng.integers(0, 2))] for h in holders}
        if len(set(holder_room.values())) < 2:
            return None
    else:
        rooms = [RoomSpec(names[0], {})]
        holder_room = {h: names[0] for h in holders}

    starts = {}
    for o in goals:
        options = [h for h in holders if h != vocab.home(o)] + ["@floor"]
        if split == "train":
            options = [s for s in options if not _reserved(o, s)]
        elif split == "in_dist":
            options = [s for s in options if _reserved(o, s)]
        if not options:
            return None
        starts[o] = options[int(rng.integers(0, len(options)))]

    def start_room(o):
        s = starts[o]
        if s == "@floor":
            return names[int(rng.integers(0, len(rooms)))] if difficulty == "hard" else names[0]
        return holder_room[s]

    floor_room = {o: start_room(o) for o in goals}
    if difficulty == "hard" and not any(floor_room[o] != holder_room[vocab.home(o)] for o in goals):
        return None

    adjs = rng.permutation(len(vocab.adjectives))
    surface = {o: f"{vocab.adjectives[adjs[j]]} {o}" for j, o in enumerate(goals + decor)}
    entities = []
    for h in holders:
        entities.append(EntitySpec(h, vocab.kind(h), holder_room[h]))
    for o in goals:
        loc = floor_room[o] if starts[o] == "@floor" else starts[o]
        entities.append(EntitySpec(surface[o], "object", loc))
    for o in decor:
        entities.append(EntitySpec(surface[o], "object", vocab.home(o)))
    goal_map = {surface[o]: vocab.home(o) for o in goals}
    spec = GameSpec(difficulty, rooms, entities, goal_map, seed=seed, max_steps=max_steps, split=split)
    witness = optimal_solution(spec)
    if witness is None:
        return None
    spec.witness = witness
    spec.validate()
    return spec
