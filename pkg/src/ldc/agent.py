"""The agent network: eight bi-GRU feature encoders feeding a time-recurrent
context GRU, a per-command encoder, a critic head, and a scoring head that
ranks the candidate set."""

from dataclasses import dataclass

import numpy as np

from .lexicon import pad_batch
from .nn import (BiGru, Gru, Mlp, Module, Tensor, bigru_encode_ids, concat,
                 index, log_softmax, mul, softmax, tile_rows, tsum,
                 uniform_init)

N_FEATURES = 8
FEATURE_NAMES = ("observation", "missing", "unnecessary", "description",
                 "previous_commands", "utilities", "locations", "location")
MAX_FEATURE_TOKENS = 128
MAX_COMMAND_TOKENS = 16
CONTEXT_DIM = 256
COMMAND_DIM = 32


class AgentModel(Module):
    """Fig-2 style network; all parameters live under dotted names."""

    def __init__(self, vocab_size, rng, embed_dim=100):
        super().__init__()
        self.embedding = self._register(
            "embedding", uniform_init(rng, (vocab_size, embed_dim), 0.1))
        self.encoders = [
            self._register_child(f"feat_{name}", BiGru(embed_dim, 16, rng))
            for name in FEATURE_NAMES
        ]
        self.gru_s = self._register_child("gru_s",
                                          Gru(CONTEXT_DIM, CONTEXT_DIM, rng))
        self.gru_c = self._register_child("gru_c", Gru(embed_dim, COMMAND_DIM, rng))
        self.critic = self._register_child("critic",
                                           Mlp([CONTEXT_DIM, 256, 1], rng))
        self.scorer = self._register_child(
            "scorer", Mlp([CONTEXT_DIM + COMMAND_DIM, 256, 1], rng))

    def initial_hidden(self):
        return np.zeros((1, CONTEXT_DIM), dtype=np.float32)


class EncodingCache:
    """Per-parameter-version cache of encodings (graph nodes are reusable
    until the next optimizer step)."""

    def __init__(self, max_entries=8192):
        self.max_entries = max_entries
        self._store = {}

    def get(self, key, build):
        hit = self._store.get(key)
        if hit is not None:
            return hit
        if len(self._store) >= self.max_entries:
            self._store.clear()
        value = build()
        self._store[key] = value
        return value

    def clear(self):
        self._store.clear()


def encode_context(model, vocab, feature_texts, prev_hidden, cache=None):
    """-> (context encoding h* (1, 256) node, same node as new hidden)."""
    if len(feature_texts) != N_FEATURES:
        raise ValueError(f"expected {N_FEATURES} features")
    parts = []
    for slot, text in enumerate(feature_texts):
        ids = tuple(vocab.encode_text(text, max_len=MAX_FEATURE_TOKENS))

        def build(slot=slot, ids=ids):
            batch, lengths = pad_batch([list(ids)])
            return bigru_encode_ids(model.encoders[slot], model.embedding,
                                    batch, lengths)

        enc = cache.get(("feat", slot, ids), build) if cache else build()
        parts.append(enc)
    x = concat(parts, axis=1)
    h = model.gru_s.step(x, Tensor(prev_hidden))
    return h


def encode_commands(model, vocab, command_texts, cache=None):
    """-> (k, 32) node; each command encoded independently by GRU_c."""
    encs = [None] * len(command_texts)
    missing = []
    for i, text in enumerate(command_texts):
        ids = tuple(vocab.encode_text(text, max_len=MAX_COMMAND_TOKENS))
        hit = cache._store.get(("cmd", ids)) if cache else None
        if hit is not None:
            encs[i] = hit
        else:
            missing.append((i, ids))
    if missing:
        batch, lengths = pad_batch([list(ids) for _, ids in missing])
        W = batch.shape[1]
        mask = (np.arange(W)[None, :] < lengths[:, None]).astype(np.float32)
        from .nn import embedding as embed_op
        hs = model.gru_c.run(embed_op(model.embedding, batch), mask=mask)
        for row, (i, ids) in enumerate(missing):
            enc = index(hs, (slice(row, row + 1), W - 1, slice(None)))
            encs[i] = enc
            if cache:
                if len(cache._store) >= cache.max_entries:
                    cache.clear()
                cache._store[("cmd", ids)] = enc
    return concat(encs, axis=0)


@dataclass
class ActResult:
    choice: int
    log_prob: object       # scalar node
    entropy: object        # scalar node
    value: object          # scalar node
    probs: np.ndarray


def act(model, h_star, command_encodings, rng=None, greedy=False):
    """Score candidates, pick one (sample or argmax), return loss nodes."""
    k = command_encodings.data.shape[0]
    paired = concat([tile_rows(h_star, k), command_encodings], axis=1)
    scores = index(model.scorer.forward(paired), (slice(None), 0))
    probs_node = softmax(scores)
    logp_node = log_softmax(scores)
    value = index(model.critic.forward(h_star), (0, 0))
    if not np.all(np.isfinite(value.data)):
        raise FloatingPointError("critic produced a non-finite value")

    probs = probs_node.data.astype(np.float64)
    probs = probs / probs.sum()
    if greedy or rng is None:
        choice = int(np.argmax(probs_node.data))  # ties -> lowest index
    else:
        choice = int(rng.choice(k, p=probs))
    log_prob = index(logp_node, (choice,))
    entropy = mul(tsum(mul(probs_node, logp_node)), -1.0)
    return ActResult(choice=choice, log_prob=log_prob, entropy=entropy,
                     value=value, probs=probs_node.data.copy())
