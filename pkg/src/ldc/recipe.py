"""Recipe manager: a two-head binary classifier over recipe directions
(still needed? still to collect?) plus the logic that turns its output into
high-level and low-level commands.

The oracle variant answers the same questions from ground-truth game state;
it backs the oracle-helpers training mode and the coverage tests.
"""

from dataclasses import dataclass

import numpy as np

from . import text as T
from .lexicon import pad_batch, tokenize
from .nn import (Adam, BiGru, Gru, Mlp, Module, Tensor, bce_with_logits,
                 bigru_encode_ids, concat, index, tile_rows, uniform_init)

MAX_LINE_TOKENS = 8
MAX_INVENTORY_TOKENS = 48


@dataclass
class IngredientStatus:
    name: str
    collect: bool
    pending: tuple  # of verbs, subset of slice/dice/chop/fry/roast/grill


@dataclass
class RecipeStatus:
    entries: list               # of IngredientStatus
    unnecessary: list           # item names to drop

    @property
    def missing(self):
        return [e.name for e in self.entries if e.collect]

    @property
    def pending_any(self):
        return any(e.pending for e in self.entries)

    @property
    def utilities(self):
        out = []
        for e in self.entries:
            for verb in e.pending:
                u = ("knife" if verb in T.CUT_VERBS
                     else T.UTILITY_FOR_HEAT[T.HEAT_VERBS[verb]])
                if u not in out:
                    out.append(u)
        return out

    @property
    def missing_text(self):
        return ", ".join(self.missing) if self.missing else "nothing"

    @property
    def unnecessary_text(self):
        return ", ".join(self.unnecessary) if self.unnecessary else "nothing"

    @property
    def utilities_text(self):
        return ", ".join(self.utilities) if self.utilities else "nothing"


# ------------------------------------------------------------- text parsing

def parse_recipe_text(recipe_text):
    """-> (ingredient names, [(verb, ingredient), ...]) from cookbook text."""
    low = recipe_text.lower()
    try:
        _, rest = low.split("ingredients:", 1)
        ing_part, dir_part = rest.split("directions:", 1)
    except ValueError:
        return [], []
    ingredients = [x.strip() for x in ing_part.strip().rstrip(".").split(",")
                   if x.strip()]
    directions = []
    verbs = set(T.CUT_VERBS) | set(T.HEAT_VERBS)
    for line in dir_part.split("."):
        words = line.split()
        if len(words) >= 3 and words[0] in verbs and words[1] == "the":
            directions.append((words[0], " ".join(words[2:])))
    return ingredients, directions


def parse_inventory_text(inventory_text):
    """-> [(base name, cut, heat), ...] from the inventory response."""
    low = inventory_text.lower()
    if ":" not in low:
        return []
    _, item_part = low.split(":", 1)
    out = []
    for chunk in item_part.strip().rstrip(".").split(","):
        words = chunk.split()
        if words and words[0] in ("a", "an"):
            words = words[1:]
        cut = heat = "none"
        while words and (words[0] in T.STATE_ADJECTIVES or words[0] == "raw"):
            adj = words.pop(0)
            if adj in T.CUT_STATES:
                cut = adj
            elif adj in T.HEAT_STATES:
                heat = adj
        if words:
            out.append((" ".join(words), cut, heat))
    return out


# --------------------------------------------------------------- the model

class RecipeModel(Module):
    """Direction GRU + bi-directional inventory encoder feeding a two-head
    classifier. The inventory runs both ways so early items survive the
    compression into the fixed 64-wide encoding."""

    def __init__(self, vocab_size, rng, embed_dim=100, hidden=64,
                 mlp_hidden=128):
        super().__init__()
        self.embedding = self._register(
            "embedding", uniform_init(rng, (vocab_size, embed_dim), 0.1))
        self.dir_gru = self._register_child("dir_gru",
                                            Gru(embed_dim, hidden, rng))
        self.inv_gru = self._register_child("inv_gru",
                                            BiGru(embed_dim, hidden // 2, rng))
        self.head = self._register_child(
            "head", Mlp([2 * hidden, mlp_hidden, 2], rng))

    def logits(self, dir_ids, dir_lens, inv_ids, inv_lens):
        from .nn import embedding as embed_op
        W = dir_ids.shape[1]
        mask = (np.arange(W)[None, :] < dir_lens[:, None]).astype(np.float32)
        hs = self.dir_gru.run(embed_op(self.embedding, dir_ids), mask=mask)
        d = index(hs, (slice(None), W - 1, slice(None)))
        v = bigru_encode_ids(self.inv_gru, self.embedding, inv_ids, inv_lens)
        if v.data.shape[0] == 1 and d.data.shape[0] > 1:
            v = tile_rows(v, d.data.shape[0])
        return self.head.forward(concat([d, v], axis=1))


def _encode_lines(vocab, lines, max_len):
    return pad_batch([vocab.encode_text(t, max_len=max_len) for t in lines])


def classify_lines(model, vocab, lines, inventory_text):
    """Per-line (p_needed, p_collect) probabilities."""
    dir_ids, dir_lens = _encode_lines(vocab, lines, MAX_LINE_TOKENS)
    inv_ids, inv_lens = _encode_lines(vocab, [inventory_text],
                                      MAX_INVENTORY_TOKENS)
    logits = model.logits(dir_ids, dir_lens, inv_ids, inv_lens).data
    probs = 1.0 / (1.0 + np.exp(-logits))
    return [(float(p[0]), float(p[1])) for p in probs]


def classify_directions(model, vocab, recipe_text, inventory_text):
    """Probability pairs for each direction line of the recipe."""
    _, directions = parse_recipe_text(recipe_text)
    if not directions:
        return []
    lines = [f"{verb} the {name}" for verb, name in directions]
    return classify_lines(model, vocab, lines, inventory_text)


def model_status(model, vocab, recipe_text, inventory_text):
    """RecipeStatus from classifier output, thresholded at 0.5
    (ties resolve toward 'needed')."""
    ingredients, directions = parse_recipe_text(recipe_text)
    lines = [f"{verb} the {name}" for verb, name in directions]
    take_lines = [f"take the {name}" for name in ingredients]
    probs = classify_lines(model, vocab, lines + take_lines, inventory_text) \
        if (lines or take_lines) else []
    dir_probs = probs[:len(lines)]
    take_probs = probs[len(lines):]

    entries = []
    for name, take_p in zip(ingredients, take_probs):
        pending = []
        for (verb, target), (p_needed, _) in zip(directions, dir_probs):
            if target == name and p_needed >= 0.5:
                pending.append(verb)
        entries.append(IngredientStatus(
            name=name, collect=take_p[1] >= 0.5, pending=tuple(pending)))

    held = [name for name, _, _ in parse_inventory_text(inventory_text)]
    unnecessary = [n for n in held
                   if n not in set(ingredients) and n != "meal"]
    return RecipeStatus(entries=entries, unnecessary=unnecessary)


def oracle_status(world, state):
    """RecipeStatus computed from ground-truth state: a direction is pending
    until the held ingredient's state slot matches it."""
    entries = []
    for req in world.recipe.ingredients:
        item = next((i for i in state.inventory if i.name == req.name), None)
        pending = []
        for verb, name in world.recipe.directions:
            if name != req.name:
                continue
            if verb in T.CUT_VERBS:
                satisfied = item is not None and item.cut == T.CUT_VERBS[verb]
            else:
                satisfied = item is not None and item.heat == T.HEAT_VERBS[verb]
            if not satisfied:
                pending.append(verb)
        entries.append(IngredientStatus(
            name=req.name, collect=item is None, pending=tuple(pending)))
    required = {req.name for req in world.recipe.ingredients}
    unnecessary = [i.name for i in state.inventory
                   if i.name not in required and i.name != "meal"]
    return RecipeStatus(entries=entries, unnecessary=unnecessary)


# --------------------------------------------------------- command building

@dataclass(frozen=True)
class Candidate:
    text: str
    expansion: tuple
    provenance: str


def build_recipe_commands(status, description_text, inventory_text):
    """Table of recipe-derived commands for the current situation."""
    from .engine import mentions_item, mentions_phrase
    desc_tokens = tokenize(description_text)
    held = {name for name, _, _ in parse_inventory_text(inventory_text)}
    out = []

    here = sorted(n for n in status.missing if mentions_item(desc_tokens, n))
    if here:
        out.append(Candidate(
            text="take all required ingredients from here",
            expansion=tuple(f"take {n}" for n in here),
            provenance="recipe"))

    if status.unnecessary:
        drops = sorted(status.unnecessary)
        out.append(Candidate(
            text="drop unnecessary items",
            expansion=tuple(f"drop {n}" for n in drops),
            provenance="recipe"))

    for entry in status.entries:
        if entry.collect or entry.name not in held:
            continue
        for verb in entry.pending:
            if verb in T.CUT_VERBS:
                if mentions_phrase(desc_tokens, "knife"):
                    cmd = f"{verb} {entry.name} with knife"
                    out.append(Candidate(cmd, (cmd,), "recipe"))
            else:
                utility = T.UTILITY_FOR_HEAT[T.HEAT_VERBS[verb]]
                if mentions_phrase(desc_tokens, utility):
                    cmd = f"cook {entry.name} with {utility}"
                    out.append(Candidate(cmd, (cmd,), "recipe"))
    return out


# ---------------------------------------------------------------- training

def _batches(n, batch_size, rng):
    order = rng.permutation(n)
    for i in range(0, n, batch_size):
        yield order[i:i + batch_size]


def train_recipe_model(model, vocab, samples, epochs=10, batch_size=64,
                       lr=1e-3, seed=0, log=None):
    rng = np.random.default_rng(seed)
    opt = Adam(model.parameters(), lr=lr)
    dir_ids, dir_lens = _encode_lines(vocab, [s.direction for s in samples],
                                      MAX_LINE_TOKENS)
    inv_ids, inv_lens = _encode_lines(vocab, [s.inventory for s in samples],
                                      MAX_INVENTORY_TOKENS)
    targets = np.array([[s.needed, s.collect] for s in samples],
                       dtype=np.float32)
    history = []
    for epoch in range(epochs):
        total = 0.0
        nb = 0
        for idx in _batches(len(samples), batch_size, rng):
            logits = model.logits(dir_ids[idx], dir_lens[idx],
                                  inv_ids[idx], inv_lens[idx])
            loss = bce_with_logits(logits, targets[idx])
            model.zero_grad()
            loss.backward()
            opt.step()
            total += loss.item()
            nb += 1
        history.append(total / max(nb, 1))
        if log:
            log(f"recipe epoch {epoch + 1}/{epochs} loss {history[-1]:.4f}")
    return history


def eval_recipe_model(model, vocab, samples, batch_size=256):
    """-> dict with needed/collect accuracy overall and on the holdout slice."""
    dir_ids, dir_lens = _encode_lines(vocab, [s.direction for s in samples],
                                      MAX_LINE_TOKENS)
    inv_ids, inv_lens = _encode_lines(vocab, [s.inventory for s in samples],
                                      MAX_INVENTORY_TOKENS)
    preds = np.zeros((len(samples), 2), dtype=bool)
    for i in range(0, len(samples), batch_size):
        sl = slice(i, i + batch_size)
        logits = model.logits(dir_ids[sl], dir_lens[sl],
                              inv_ids[sl], inv_lens[sl]).data
        preds[sl] = logits >= 0.0
    targets = np.array([[s.needed, s.collect] for s in samples], dtype=bool)
    holdout = np.array([bool(s.holdout) for s in samples])
    correct = preds == targets
    result = {
        "needed_acc": float(correct[:, 0].mean()),
        "collect_acc": float(correct[:, 1].mean()),
    }
    if holdout.any():
        result["needed_acc_holdout"] = float(correct[holdout, 0].mean())
        result["collect_acc_holdout"] = float(correct[holdout, 1].mean())
    return result
