"""Reverse-mode autodiff on numpy arrays.

Small tape-based engine: every op returns a new Tensor holding a closure
that routes the output gradient to its inputs. Sequence encoders use a
fused GRU op with a hand-derived backward pass so the per-token work
stays out of the tape.
"""

import numpy as np

DEFAULT_DTYPE = np.float32


def _as_array(data, dtype):
    arr = np.asarray(data)
    if arr.dtype != dtype and not np.issubdtype(arr.dtype, np.floating):
        arr = arr.astype(dtype)
    elif arr.dtype not in (np.float32, np.float64):
        arr = arr.astype(dtype)
    return arr


class Tensor:
    __slots__ = ("data", "grad", "requires_grad", "_backward", "_prev", "_done")

    def __init__(self, data, requires_grad=False, dtype=None):
        self.data = _as_array(data, dtype or DEFAULT_DTYPE)
        self.grad = None
        self.requires_grad = requires_grad
        self._backward = None
        self._prev = ()
        self._done = False

    @property
    def shape(self):
        return self.data.shape

    @property
    def dtype(self):
        return self.data.dtype

    def zero_grad(self):
        self.grad = None

    def accumulate(self, g):
        if self.grad is None:
            self.grad = np.zeros_like(self.data)
        self.grad += g

    def detach(self):
        """Cut the graph: same data, no gradient flows upstream."""
        return Tensor(self.data, requires_grad=False)

    def item(self):
        return float(self.data)

    def backward(self):
        if self.data.size != 1:
            raise ValueError("backward() requires a scalar loss")
        if self._done:
            raise RuntimeError("backward() called twice on the same graph")
        self._done = True
        topo = []
        visited = set()
        stack = [(self, False)]
        while stack:
            node, expanded = stack.pop()
            if expanded:
                topo.append(node)
                continue
            if id(node) in visited:
                continue
            visited.add(id(node))
            stack.append((node, True))
            for child in node._prev:
                if id(child) not in visited:
                    stack.append((child, False))
        self.grad = np.ones_like(self.data)
        for node in reversed(topo):
            if node._backward is not None and node.grad is not None:
                node._backward(node.grad)

    def __repr__(self):
        return f"Tensor(shape={self.data.shape}, grad={self.grad is not None})"

    # convenience operators; the real work is in the functions below
    def __add__(self, other):
        return add(self, other)

    def __sub__(self, other):
        return sub(self, other)

    def __mul__(self, other):
        return mul(self, other)

    def __neg__(self):
        return mul(self, -1.0)

    def __matmul__(self, other):
        return matmul(self, other)

    def __getitem__(self, idx):
        return index(self, idx)


def _result(data, parents, backward_fn):
    out = Tensor(data, dtype=data.dtype)
    out.requires_grad = any(p.requires_grad for p in parents)
    if out.requires_grad:
        out._prev = tuple(parents)
        out._backward = backward_fn
    return out


def _coerce(x, like):
    if isinstance(x, Tensor):
        return x
    return Tensor(np.asarray(x, dtype=like.dtype))


def _unbroadcast(g, shape):
    """Sum gradient over axes that were broadcast in the forward pass."""
    while g.ndim > len(shape):
        g = g.sum(axis=0)
    for ax, dim in enumerate(shape):
        if dim == 1 and g.shape[ax] != 1:
            g = g.sum(axis=ax, keepdims=True)
    return g


def add(a, b):
    a = a if isinstance(a, Tensor) else Tensor(np.asarray(a))
    b = _coerce(b, a)

    def bwd(g):
        if a.requires_grad:
            a.accumulate(_unbroadcast(g, a.data.shape))
        if b.requires_grad:
            b.accumulate(_unbroadcast(g, b.data.shape))

    return _result(a.data + b.data, (a, b), bwd)


def sub(a, b):
    a = a if isinstance(a, Tensor) else Tensor(np.asarray(a))
    b = _coerce(b, a)

    def bwd(g):
        if a.requires_grad:
            a.accumulate(_unbroadcast(g, a.data.shape))
        if b.requires_grad:
            b.accumulate(-_unbroadcast(g, b.data.shape))

    return _result(a.data - b.data, (a, b), bwd)


def mul(a, b):
    a = a if isinstance(a, Tensor) else Tensor(np.asarray(a))
    b = _coerce(b, a)

    def bwd(g):
        if a.requires_grad:
            a.accumulate(_unbroadcast(g * b.data, a.data.shape))
        if b.requires_grad:
            b.accumulate(_unbroadcast(g * a.data, b.data.shape))

    return _result(a.data * b.data, (a, b), bwd)


def matmul(a, b):
    def bwd(g):
        if a.requires_grad:
            a.accumulate(g @ b.data.T)
        if b.requires_grad:
            if a.data.ndim == 1:
                b.accumulate(np.outer(a.data, g))
            else:
                b.accumulate(a.data.reshape(-1, a.data.shape[-1]).T
                             @ g.reshape(-1, g.shape[-1]))

    return _result(a.data @ b.data, (a, b), bwd)


def sigmoid(a):
    out_data = 1.0 / (1.0 + np.exp(-a.data))

    def bwd(g):
        if a.requires_grad:
            a.accumulate(g * out_data * (1.0 - out_data))

    return _result(out_data, (a,), bwd)


def tanh(a):
    out_data = np.tanh(a.data)

    def bwd(g):
        if a.requires_grad:
            a.accumulate(g * (1.0 - out_data * out_data))

    return _result(out_data, (a,), bwd)


def relu(a):
    out_data = np.maximum(a.data, 0.0)

    def bwd(g):
        if a.requires_grad:
            a.accumulate(g * (a.data > 0))

    return _result(out_data, (a,), bwd)


def log(a):
    def bwd(g):
        if a.requires_grad:
            a.accumulate(g / a.data)

    return _result(np.log(a.data), (a,), bwd)


def tsum(a):
    def bwd(g):
        if a.requires_grad:
            a.accumulate(np.full_like(a.data, float(g)))

    return _result(np.asarray(a.data.sum(), dtype=a.data.dtype), (a,), bwd)


def mean(a):
    n = a.data.size

    def bwd(g):
        if a.requires_grad:
            a.accumulate(np.full_like(a.data, float(g) / n))

    return _result(np.asarray(a.data.mean(), dtype=a.data.dtype), (a,), bwd)


def index(a, idx):
    """Static indexing (ints/slices/tuples); backward scatters."""
    out_data = a.data[idx]

    def bwd(g):
        if a.requires_grad:
            if a.grad is None:
                a.grad = np.zeros_like(a.data)
            np.add.at(a.grad, idx, g)

    return _result(np.ascontiguousarray(out_data), (a,), bwd)


def concat(tensors, axis=0):
    datas = [t.data for t in tensors]
    sizes = [d.shape[axis] for d in datas]
    offsets = np.cumsum([0] + sizes)

    def bwd(g):
        for t, lo, hi in zip(tensors, offsets[:-1], offsets[1:]):
            if t.requires_grad:
                sl = [slice(None)] * g.ndim
                sl[axis] = slice(lo, hi)
                t.accumulate(g[tuple(sl)])

    return _result(np.concatenate(datas, axis=axis), tuple(tensors), bwd)


def embedding(weight, ids):
    """Row gather from an embedding matrix. ids is an integer ndarray."""
    ids = np.asarray(ids)
    out_data = weight.data[ids]

    def bwd(g):
        if weight.requires_grad:
            if weight.grad is None:
                weight.grad = np.zeros_like(weight.data)
            np.add.at(weight.grad, ids.ravel(),
                      g.reshape(-1, weight.data.shape[1]))

    return _result(out_data, (weight,), bwd)


def tile_rows(a, k):
    """Repeat a (1, D) tensor into (k, D); backward sums over the copies."""
    def bwd(g):
        if a.requires_grad:
            a.accumulate(g.sum(axis=0, keepdims=True))

    return _result(np.repeat(a.data, k, axis=0), (a,), bwd)


def softmax(a):
    """Stable softmax over the last axis (max-subtracted)."""
    if not np.all(np.isfinite(a.data)):
        raise ValueError("softmax requires finite inputs")
    shifted = a.data - a.data.max(axis=-1, keepdims=True)
    e = np.exp(shifted)
    out_data = e / e.sum(axis=-1, keepdims=True)

    def bwd(g):
        if a.requires_grad:
            dot = (g * out_data).sum(axis=-1, keepdims=True)
            a.accumulate((g - dot) * out_data)

    return _result(out_data, (a,), bwd)


def log_softmax(a):
    if not np.all(np.isfinite(a.data)):
        raise ValueError("log_softmax requires finite inputs")
    shifted = a.data - a.data.max(axis=-1, keepdims=True)
    lse = np.log(np.exp(shifted).sum(axis=-1, keepdims=True))
    out_data = shifted - lse

    def bwd(g):
        if a.requires_grad:
            p = np.exp(out_data)
            a.accumulate(g - g.sum(axis=-1, keepdims=True) * p)

    return _result(out_data, (a,), bwd)


def bce_with_logits(logits, targets):
    """Mean binary cross-entropy from raw scores; numerically stable."""
    t = np.asarray(targets, dtype=logits.data.dtype)
    x = logits.data
    loss = np.maximum(x, 0) - x * t + np.log1p(np.exp(-np.abs(x)))
    n = x.size

    def bwd(g):
        if logits.requires_grad:
            p = 1.0 / (1.0 + np.exp(-x))
            logits.accumulate((p - t) * (float(g) / n))

    return _result(np.asarray(loss.mean(), dtype=x.dtype), (logits,), bwd)


def gru_sequence(x, h0, w, u, b, mask=None):
    """Run a GRU over a (B, T, D) input, returning all hiddens (B, T, H).

    Gate layout along the 3H axis is [update z | reset r | candidate n]:
        z = sigmoid(x W_z + h U_z + b_z)
        r = sigmoid(x W_r + h U_r + b_r)
        n = tanh(x W_n + r * (h U_n) + b_n)
        h' = (1 - z) * n + z * h
    `mask` (B, T) freezes the hidden state on padded steps. Backward is a
    fused BPTT pass over saved gate activations.
    """
    xd = x.data
    B, T, D = xd.shape
    H = u.data.shape[0]
    A = xd.reshape(B * T, D) @ w.data + b.data         # input projections
    A = A.reshape(B, T, 3 * H)
    m = None if mask is None else np.asarray(mask, dtype=xd.dtype)

    hs = np.empty((B, T, H), dtype=xd.dtype)
    zs = np.empty((B, T, H), dtype=xd.dtype)
    rs = np.empty((B, T, H), dtype=xd.dtype)
    ns = np.empty((B, T, H), dtype=xd.dtype)
    gns = np.empty((B, T, H), dtype=xd.dtype)

    h = h0.data
    for t in range(T):
        gh = h @ u.data
        z = 1.0 / (1.0 + np.exp(-(A[:, t, :H] + gh[:, :H])))
        r = 1.0 / (1.0 + np.exp(-(A[:, t, H:2 * H] + gh[:, H:2 * H])))
        gn = gh[:, 2 * H:]
        n = np.tanh(A[:, t, 2 * H:] + r * gn)
        h_new = (1.0 - z) * n + z * h
        if m is not None:
            mt = m[:, t:t + 1]
            h_new = mt * h_new + (1.0 - mt) * h
        zs[:, t] = z
        rs[:, t] = r
        ns[:, t] = n
        gns[:, t] = gn
        hs[:, t] = h_new
        h = h_new

    parents = (x, h0, w, u, b)

    def bwd(g):
        dA = np.zeros((B, T, 3 * H), dtype=xd.dtype)
        dU = np.zeros_like(u.data) if u.requires_grad else None
        dh = np.zeros((B, H), dtype=xd.dtype)
        ut = u.data.T
        for t in range(T - 1, -1, -1):
            dht = dh + g[:, t]
            h_prev = h0.data if t == 0 else hs[:, t - 1]
            if m is not None:
                mt = m[:, t:t + 1]
                dh_new = dht * mt
                dh_pass = dht * (1.0 - mt)
            else:
                dh_new = dht
                dh_pass = 0.0
            z = zs[:, t]
            r = rs[:, t]
            n = ns[:, t]
            gn = gns[:, t]
            dz = dh_new * (h_prev - n) * z * (1.0 - z)
            dn = dh_new * (1.0 - z) * (1.0 - n * n)
            dr = dn * gn * r * (1.0 - r)
            dgn = dn * r
            dg = np.concatenate([dz, dr, dgn], axis=1)
            dA[:, t, :H] = dz
            dA[:, t, H:2 * H] = dr
            dA[:, t, 2 * H:] = dn
            if dU is not None:
                dU += h_prev.T @ dg
            dh = dh_new * z + dg @ ut + dh_pass
        if u.requires_grad:
            u.accumulate(dU)
        if w.requires_grad:
            w.accumulate(xd.reshape(B * T, D).T @ dA.reshape(B * T, 3 * H))
        if b.requires_grad:
            b.accumulate(dA.sum(axis=(0, 1)))
        if x.requires_grad:
            x.accumulate((dA.reshape(B * T, 3 * H) @ w.data.T).reshape(B, T, D))
        if h0.requires_grad:
            h0.accumulate(dh)

    return _result(hs, parents, bwd)
