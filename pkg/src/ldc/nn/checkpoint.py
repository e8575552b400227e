"""Checkpoint container: magic "LDC1", a manifest of (name, dims, offset)
entries, then little-endian float32 payloads. Round-trips bit-exactly."""

import struct

import numpy as np

MAGIC = b"LDC1"


class CheckpointError(Exception):
    pass


def save_tensors(path, tensors):
    """tensors: dict name -> ndarray (stored as little-endian float32)."""
    names = list(tensors.keys())
    manifest = bytearray()
    payload = bytearray()
    for name in names:
        arr = np.ascontiguousarray(tensors[name], dtype="<f4")
        nb = name.encode("utf-8")
        manifest += struct.pack("<H", len(nb)) + nb
        manifest += struct.pack("<B", arr.ndim)
        for d in arr.shape:
            manifest += struct.pack("<I", d)
        manifest += struct.pack("<Q", len(payload))
        payload += arr.tobytes()
    with open(path, "wb") as f:
        f.write(MAGIC)
        f.write(struct.pack("<I", len(names)))
        f.write(bytes(manifest))
        f.write(bytes(payload))


def load_tensors(path):
    """Inverse of save_tensors; returns dict name -> float32 ndarray."""
    with open(path, "rb") as f:
        blob = f.read()
    if blob[:4] != MAGIC:
        raise CheckpointError(f"{path}: bad magic {blob[:4]!r}")
    (count,) = struct.unpack_from("<I", blob, 4)
    pos = 8
    entries = []
    for _ in range(count):
        (nlen,) = struct.unpack_from("<H", blob, pos)
        pos += 2
        name = blob[pos:pos + nlen].decode("utf-8")
        pos += nlen
        (ndim,) = struct.unpack_from("<B", blob, pos)
        pos += 1
        dims = struct.unpack_from(f"<{ndim}I", blob, pos) if ndim else ()
        pos += 4 * ndim
        (offset,) = struct.unpack_from("<Q", blob, pos)
        pos += 8
        entries.append((name, dims, offset))
    base = pos
    out = {}
    for name, dims, offset in entries:
        n = int(np.prod(dims)) if dims else 1
        start = base + offset
        arr = np.frombuffer(blob, dtype="<f4", count=n, offset=start)
        out[name] = arr.reshape(dims).copy()
    return out


def save_module(path, module):
    save_tensors(path, {k: v.data for k, v in module.named_parameters().items()})


def load_module(path, module):
    loaded = load_tensors(path)
    params = module.named_parameters()
    missing = set(params) - set(loaded)
    if missing:
        raise CheckpointError(f"{path}: missing tensors {sorted(missing)[:5]}")
    for name, t in params.items():
        arr = loaded[name]
        if arr.shape != t.data.shape:
            raise CheckpointError(
                f"{path}: shape mismatch for {name}: {arr.shape} vs {t.data.shape}")
        t.data = arr.astype(t.data.dtype)
    return module
