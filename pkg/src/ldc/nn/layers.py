"""Layers used by the agent and helper models: GRU, bi-GRU encoder, MLP,
embedding table. Parameters are plain Tensors registered under dotted names
so checkpoints can address them."""

import numpy as np

from .tensor import (Tensor, DEFAULT_DTYPE, concat, embedding, gru_sequence,
                     index, matmul, relu, sigmoid, tanh)


def uniform_init(rng, shape, scale, dtype=DEFAULT_DTYPE):
    return Tensor(rng.uniform(-scale, scale, size=shape).astype(dtype),
                  requires_grad=True, dtype=dtype)


def fan_in_init(rng, shape, dtype=DEFAULT_DTYPE):
    """Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)); fan_in is the first dim."""
    return uniform_init(rng, shape, 1.0 / np.sqrt(shape[0]), dtype=dtype)


class Module:
    """Minimal parameter registry: subclasses fill self._params."""

    def __init__(self):
        self._params = {}

    def _register(self, name, tensor):
        self._params[name] = tensor
        return tensor

    def _register_child(self, prefix, child):
        for name, t in child.named_parameters().items():
            self._params[f"{prefix}.{name}"] = t
        return child

    def named_parameters(self):
        return dict(self._params)

    def parameters(self):
        return list(self._params.values())

    def zero_grad(self):
        for t in self._params.values():
            t.zero_grad()


class Gru(Module):
    """Single GRU; gates packed as [z | r | n] along the 3H axis."""

    def __init__(self, input_dim, hidden_dim, rng, dtype=DEFAULT_DTYPE):
        super().__init__()
        self.input_dim = input_dim
        self.hidden_dim = hidden_dim
        self.w = self._register("w", fan_in_init(rng, (input_dim, 3 * hidden_dim), dtype))
        self.u = self._register("u", fan_in_init(rng, (hidden_dim, 3 * hidden_dim), dtype))
        self.b = self._register("b", Tensor(np.zeros(3 * hidden_dim, dtype=dtype),
                                            requires_grad=True, dtype=dtype))

    def run(self, x, h0=None, mask=None):
        """x: (B, T, D) Tensor -> all hiddens (B, T, H)."""
        B = x.data.shape[0]
        if h0 is None:
            h0 = Tensor(np.zeros((B, self.hidden_dim), dtype=x.data.dtype))
        return gru_sequence(x, h0, self.w, self.u, self.b, mask=mask)

    def step(self, x, h):
        """One recurrence step; x: (B, D), h: (B, H) -> (B, H)."""
        x3 = index(x, (slice(None), None, slice(None)))
        hs = gru_sequence(x3, h, self.w, self.u, self.b)
        return index(hs, (slice(None), 0, slice(None)))


def gru_step(x, h, params):
    """Single-vector GRU step: h' = (1-z)*n + z*h with the standard gates."""
    if x.data.shape[-1] != params.input_dim or h.data.shape[-1] != params.hidden_dim:
        raise ValueError("gru_step: dimension mismatch with parameters")
    x2 = index(x, (None, slice(None)))
    h2 = index(h, (None, slice(None)))
    out = params.step(x2, h2)
    return index(out, (0, slice(None)))


class BiGru(Module):
    """Bi-directional GRU encoder: concat of the two final hidden states."""

    def __init__(self, input_dim, hidden_dim, rng, dtype=DEFAULT_DTYPE):
        super().__init__()
        self.hidden_dim = hidden_dim
        self.fwd = self._register_child("fwd", Gru(input_dim, hidden_dim, rng, dtype))
        self.bwd = self._register_child("bwd", Gru(input_dim, hidden_dim, rng, dtype))

    @property
    def output_dim(self):
        return 2 * self.hidden_dim

    def encode(self, x_fwd, x_bwd, mask=None):
        """x_fwd/x_bwd: (B, T, D) Tensors (x_bwd is the length-reversed input)."""
        hf = self.fwd.run(x_fwd, mask=mask)
        hb = self.bwd.run(x_bwd, mask=mask)
        last = x_fwd.data.shape[1] - 1
        hf_last = index(hf, (slice(None), last, slice(None)))
        hb_last = index(hb, (slice(None), last, slice(None)))
        return concat([hf_last, hb_last], axis=1)


def reverse_padded(ids, lengths):
    """Reverse each row's valid prefix, keeping padding at the end."""
    ids = np.asarray(ids)
    out = ids.copy()
    for i, n in enumerate(lengths):
        out[i, :n] = ids[i, :n][::-1]
    return out


def bigru_encode_ids(encoder, emb, ids, lengths):
    """Embed padded token ids (B, T) and encode with a BiGru -> (B, 2H)."""
    ids = np.asarray(ids)
    if ids.shape[1] < 1:
        raise ValueError("bigru_encode: empty sequence")
    B, T = ids.shape
    mask = (np.arange(T)[None, :] < np.asarray(lengths)[:, None])
    x_fwd = embedding(emb, ids)
    x_bwd = embedding(emb, reverse_padded(ids, lengths))
    return encoder.encode(x_fwd, x_bwd, mask=mask)


class Linear(Module):
    def __init__(self, in_dim, out_dim, rng, dtype=DEFAULT_DTYPE):
        super().__init__()
        self.w = self._register("w", fan_in_init(rng, (in_dim, out_dim), dtype))
        self.b = self._register("b", Tensor(np.zeros(out_dim, dtype=dtype),
                                            requires_grad=True, dtype=dtype))

    def forward(self, x):
        return matmul(x, self.w) + self.b


_ACTIVATIONS = {"relu": relu, "tanh": tanh, "sigmoid": sigmoid}


class Mlp(Module):
    """Affine chain with an activation between layers; final layer linear."""

    def __init__(self, dims, rng, activation="relu", dtype=DEFAULT_DTYPE):
        super().__init__()
        self.activation = activation
        self.layers = [
            self._register_child(f"l{i}", Linear(a, b, rng, dtype))
            for i, (a, b) in enumerate(zip(dims[:-1], dims[1:]))
        ]

    def forward(self, x):
        act = _ACTIVATIONS[self.activation]
        for i, layer in enumerate(self.layers):
            x = layer.forward(x)
            if i < len(self.layers) - 1:
                x = act(x)
        return x


class Embedding(Module):
    def __init__(self, vocab_size, dim, rng, scale=0.1, dtype=DEFAULT_DTYPE):
        super().__init__()
        self.weight = self._register(
            "weight", uniform_init(rng, (vocab_size, dim), scale, dtype))

    def lookup(self, ids):
        return embedding(self.weight, ids)
