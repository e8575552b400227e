"""Navigator: extracts movement options and closed doors from raw room
descriptions, and emits go/open commands.

One GRU encodes the description; four per-direction heads read the final
hidden state, and a shared per-token head tags words belonging to closed
door names. Maximal runs of positive tokens form the door names.
"""

from dataclasses import dataclass

import numpy as np

from . import text as T
from .lexicon import pad_batch, tokenize
from .nn import (Adam, Gru, Mlp, Module, bce_with_logits, add, concat, index,
                 uniform_init, embedding as embed_op)
from .recipe import Candidate

MAX_DESC_TOKENS = 128


class NavModel(Module):
    """Description encoder + 4 direction heads + shared door-token head."""

    def __init__(self, vocab_size, rng, embed_dim=100, hidden=64,
                 head_hidden=64):
        super().__init__()
        self.hidden = hidden
        self.embedding = self._register(
            "embedding", uniform_init(rng, (vocab_size, embed_dim), 0.1))
        self.gru = self._register_child("gru", Gru(embed_dim, hidden, rng))
        self.dir_heads = [
            self._register_child(f"dir_{d}", Mlp([hidden, head_hidden, 1], rng))
            for d in T.DIRECTIONS
        ]
        self.door_head = self._register_child(
            "door_head", Mlp([hidden, head_hidden, 1], rng))

    def encode(self, ids, lengths):
        """-> (all hiddens (B, W, H) tensor, final hidden (B, H) tensor)."""
        B, W = ids.shape
        mask = (np.arange(W)[None, :] < lengths[:, None]).astype(np.float32)
        hs = self.gru.run(embed_op(self.embedding, ids), mask=mask)
        final = index(hs, (slice(None), W - 1, slice(None)))
        return hs, final

    def direction_logits(self, final):
        return concat([h.forward(final) for h in self.dir_heads], axis=1)

    def door_logits(self, hs):
        B, W, H = hs.data.shape
        flat = _reshape_rows(hs, B * W, H)
        return _reshape_rows(self.door_head.forward(flat), B, W)


def _reshape_rows(t, *shape):
    from .nn.tensor import _result

    def bwd(g):
        if t.requires_grad:
            t.accumulate(g.reshape(t.data.shape))

    return _result(t.data.reshape(*shape), (t,), bwd)


def _encode_descriptions(vocab, descriptions):
    return pad_batch([vocab.encode_text(d, max_len=MAX_DESC_TOKENS)
                      for d in descriptions])


def predict_exits(model, vocab, description):
    """-> dict direction -> bool (thresholded at 0.5)."""
    if not description.strip():
        raise ValueError("empty description")
    ids, lengths = _encode_descriptions(vocab, [description])
    _, final = model.encode(ids, lengths)
    logits = model.direction_logits(final).data[0]
    return {d: bool(l >= 0.0) for d, l in zip(T.DIRECTIONS, logits)}


def predict_closed_doors(model, vocab, description):
    """-> list of door-name strings from maximal positive token runs."""
    if not description.strip():
        raise ValueError("empty description")
    tokens = tokenize(description)[:MAX_DESC_TOKENS]
    ids, lengths = _encode_descriptions(vocab, [description])
    hs, _ = model.encode(ids, lengths)
    logits = model.door_logits(hs).data[0][:len(tokens)]
    marks = logits >= 0.0
    return [" ".join(tokens[a:b]) for a, b in positive_spans(marks)]


def positive_spans(marks):
    spans = []
    start = None
    for i, m in enumerate(list(marks) + [False]):
        if m and start is None:
            start = i
        elif not m and start is not None:
            spans.append((start, i))
            start = None
    return spans


def oracle_nav(world, state, room_name=None):
    """Ground-truth exits and closed doors for the current room."""
    room = world.rooms[room_name or state.room]
    exits = {d: d in room.exits for d in T.DIRECTIONS}
    doors = [room.doors[d] for d in T.DIRECTIONS
             if d in room.doors and state.door_closed[room.doors[d]]]
    return exits, doors


def build_nav_commands(exits, doors):
    """One 'go' per exit (fixed N/E/S/W order), one 'open' per closed door."""
    out = [Candidate(f"go {d}", (f"go {d}",), "nav")
           for d in T.DIRECTIONS if exits.get(d)]
    for door in sorted(set(doors)):
        out.append(Candidate(f"open {door}", (f"open {door}",), "nav"))
    return out


# ---------------------------------------------------------------- training

def _nav_arrays(vocab, samples):
    ids, lengths = _encode_descriptions(vocab, [s.description for s in samples])
    W = ids.shape[1]
    dirs = np.array([[float(s.exits[d]) for d in T.DIRECTIONS]
                     for s in samples], dtype=np.float32)
    doors = np.zeros((len(samples), W), dtype=np.float32)
    valid = np.zeros((len(samples), W), dtype=bool)
    for i, s in enumerate(samples):
        labels = list(s.door_tokens)[:W]
        doors[i, :len(labels)] = labels
        valid[i, :min(len(labels), lengths[i])] = True
    return ids, lengths, dirs, doors, valid


def train_nav_model(model, vocab, samples, epochs=10, batch_size=64, lr=2e-3,
                    seed=0, log=None):
    rng = np.random.default_rng(seed)
    opt = Adam(model.parameters(), lr=lr)
    ids, lengths, dirs, doors, valid = _nav_arrays(vocab, samples)
    history = []
    for epoch in range(epochs):
        order = rng.permutation(len(samples))
        total = 0.0
        nb = 0
        for i in range(0, len(samples), batch_size):
            idx = order[i:i + batch_size]
            hs, final = model.encode(ids[idx], lengths[idx])
            dir_loss = bce_with_logits(model.direction_logits(final), dirs[idx])
            rows, cols = np.nonzero(valid[idx])
            door_logits = index(model.door_logits(hs), (rows, cols))
            door_loss = bce_with_logits(door_logits, doors[idx][rows, cols])
            loss = add(dir_loss, door_loss)
            model.zero_grad()
            loss.backward()
            opt.step()
            total += loss.item()
            nb += 1
        history.append(total / max(nb, 1))
        if log:
            log(f"nav epoch {epoch + 1}/{epochs} loss {history[-1]:.4f}")
    return history


def eval_nav_model(model, vocab, samples, batch_size=256):
    """-> direction accuracy and exact door-span F1 on held-out samples."""
    ids, lengths, dirs, doors, valid = _nav_arrays(vocab, samples)
    dir_correct = 0
    tp = fp = fn = 0
    for i in range(0, len(samples), batch_size):
        sl = slice(i, min(i + batch_size, len(samples)))
        hs, final = model.encode(ids[sl], lengths[sl])
        pred_dirs = model.direction_logits(final).data >= 0.0
        dir_correct += int((pred_dirs == (dirs[sl] >= 0.5)).sum())
        door_pred = model.door_logits(hs).data >= 0.0
        for j in range(sl.stop - sl.start):
            row_valid = valid[sl][j]
            gold = positive_spans((doors[sl][j] >= 0.5) & row_valid)
            pred = positive_spans(door_pred[j] & row_valid)
            gold_set, pred_set = set(gold), set(pred)
            tp += len(gold_set & pred_set)
            fp += len(pred_set - gold_set)
            fn += len(gold_set - pred_set)
    precision = tp / (tp + fp) if tp + fp else 1.0
    recall = tp / (tp + fn) if tp + fn else 1.0
    f1 = (2 * precision * recall / (precision + recall)
          if precision + recall else 0.0)
    return {
        "direction_acc": dir_correct / (len(samples) * 4),
        "door_span_f1": f1,
        "door_precision": precision,
        "door_recall": recall,
    }
