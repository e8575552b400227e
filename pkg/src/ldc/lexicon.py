"""Tokenization, vocabulary, the bundled food lexicon, and pretrained
embedding ingestion."""

import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from .text import CUT_STATES, HEAT_STATES, stable_hash, vocabulary_texts

PAD = "<pad>"
UNK = "<unk>"
EMBED_DIM = 100

# alnum runs or single punctuation marks; the two specials survive intact
# so tokenize is idempotent on its own space-joined output
_TOKEN_RE = re.compile(r"<pad>|<unk>|[a-z0-9]+|[^\sa-z0-9]")


def tokenize(text):
    tokens = _TOKEN_RE.findall(text.lower())
    return tokens if tokens else [PAD]


class Vocab:
    """Dense, stable token ids: 0 is padding, 1 is the unknown token."""

    def __init__(self, tokens):
        self.id_of = {PAD: 0, UNK: 1}
        for tok in sorted(set(tokens) - {PAD, UNK}):
            self.id_of[tok] = len(self.id_of)
        self.tokens = list(self.id_of)

    def __len__(self):
        return len(self.id_of)

    def encode(self, tokens, max_len=None):
        ids = [self.id_of.get(t, 1) for t in tokens]
        if max_len is not None:
            ids = ids[:max_len]
        return ids

    def encode_text(self, text, max_len=None):
        return self.encode(tokenize(text), max_len=max_len)


@dataclass(frozen=True)
class FoodLexicon:
    """Food names plus the fixed cut/heat state adjectives."""

    foods: tuple
    cut_adjectives: tuple = CUT_STATES
    heat_adjectives: tuple = HEAT_STATES

    @property
    def game_pool(self):
        """Foods the world generator may use (stable half of the lexicon)."""
        return tuple(f for f in self.foods if stable_hash("pool", f) % 2 == 0)

    @property
    def holdout_pool(self):
        """Foods reserved for dataset augmentation, never placed in games."""
        return tuple(f for f in self.foods if stable_hash("pool", f) % 2 == 1)


class LexiconError(Exception):
    pass


def bundled_foods_path():
    return Path(str(resources.files("ldc").joinpath("data/foods.txt")))


def load_lexicon(path=None, min_items=300):
    path = Path(path) if path is not None else bundled_foods_path()
    foods = []
    seen = set()
    for lineno, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if not re.fullmatch(r"[a-z][a-z ]*", line):
            raise LexiconError(f"{path}:{lineno}: invalid food name {line!r}")
        if line in seen:
            raise LexiconError(f"{path}:{lineno}: duplicate food {line!r}")
        seen.add(line)
        foods.append(line)
    if len(foods) < min_items:
        raise LexiconError(f"{path}: only {len(foods)} foods, need >= {min_items}")
    return FoodLexicon(foods=tuple(foods))


def build_vocab(lexicon):
    """Vocabulary over everything the engine/generator can emit.

    Built purely from static template text and the lexicon file, so the
    result is byte-identical across runs.
    """
    tokens = []
    for text in vocabulary_texts():
        tokens.extend(tokenize(text))
    for food in lexicon.foods:
        tokens.extend(tokenize(food))
    return Vocab(tokens)


class EmbeddingFileError(Exception):
    pass


def load_embeddings(path, vocab, seed=0, dim=EMBED_DIM):
    """Embedding matrix (V, dim): random U(-0.1, 0.1) rows, overwritten
    from a GloVe-style text file ("word v1 ... v<dim>") when present."""
    rng = np.random.default_rng(seed)
    matrix = rng.uniform(-0.1, 0.1, size=(len(vocab), dim)).astype(np.float32)
    if path is None:
        return matrix
    path = Path(path)
    if not path.exists():
        return matrix
    with path.open(encoding="utf-8") as f:
        for lineno, line in enumerate(f, 1):
            if not line.strip():
                continue
            parts = line.split()
            if len(parts) != dim + 1:
                raise EmbeddingFileError(
                    f"{path}:{lineno}: expected word + {dim} values, "
                    f"got {len(parts)} fields")
            word = parts[0].lower()
            if word in vocab.id_of:
                try:
                    matrix[vocab.id_of[word]] = np.array(parts[1:], dtype=np.float32)
                except ValueError as e:
                    raise EmbeddingFileError(f"{path}:{lineno}: {e}") from None
    return matrix


def pad_batch(id_lists, max_len=None):
    """Pad a list of id lists to a (B, T) int array plus lengths."""
    lengths = [max(1, len(ids)) for ids in id_lists]
    if max_len is not None:
        lengths = [min(n, max_len) for n in lengths]
    width = max(lengths)
    batch = np.zeros((len(id_lists), width), dtype=np.int64)
    for i, ids in enumerate(id_lists):
        ids = ids[:width]
        batch[i, :len(ids)] = ids
        if not ids:
            lengths[i] = 1
    return batch, np.array(lengths, dtype=np.int64)
