# equivarifier/nn/functional.py
"""
Stateless numpy kernels for the network engine.

Tensors are plain ndarrays in row-major, channels-last layout. Image ops take
h×w×c or N×h×w×c; dense takes n or N×n. Backward kernels consume the cache
their forward produced.
"""

from typing import Dict, List, Mapping, Sequence, Tuple

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from ..errors import LabelError, ParameterError, ShapeError


def _batched(x: np.ndarray, rank: int) -> Tuple[np.ndarray, bool]:
    """Add a batch axis when x has exactly `rank` dims."""
    x = np.asarray(x)
    if x.ndim == rank:
        return x[None], True
    if x.ndim == rank + 1:
        return x, False
    raise ShapeError(f"Expected a tensor of rank {rank} or {rank + 1}, got shape {x.shape}")


def same_padding(k: int) -> Tuple[int, int]:
    """(before, after) padding that keeps the spatial size for kernel size k."""
    before = (k - 1) // 2
    return before, k - 1 - before


# --- convolution -------------------------------------------------------------

def _im2col(xp: np.ndarray, kh: int, kw: int) -> np.ndarray:
    """Rows are receptive fields in (kh, kw, c) order, one per output pixel."""
    n, hp, wp, c = xp.shape
    windows = sliding_window_view(xp, (kh, kw), axis=(1, 2))  # n, ho, wo, c, kh, kw
    ho, wo = hp - kh + 1, wp - kw + 1
    return windows.transpose(0, 1, 2, 4, 5, 3).reshape(n * ho * wo, kh * kw * c)


def conv2d_forward_cached(
    x: np.ndarray,
    weights: np.ndarray,
    bias: np.ndarray,
    stride: int = 1,
    padding: str = "same",
) -> Tuple[np.ndarray, dict]:
    """
    2-D cross-correlation; weights are kh×kw×c_in×c_out.

    Only stride 1 is supported, with 'same' or 'valid' padding. Returns the
    output and a cache for conv2d_backward.
    """
    if stride not in (1, (1, 1)):
        raise ShapeError(f"Only stride 1 is supported, got {stride}")
    xb, squeezed = _batched(x, 3)
    if weights.ndim != 4:
        raise ShapeError(f"Conv weights must be kh×kw×c_in×c_out, got shape {weights.shape}")
    kh, kw, c_in, c_out = weights.shape
    if xb.shape[-1] != c_in:
        raise ShapeError(f"Input has {xb.shape[-1]} channels, weights expect {c_in}")
    if bias.shape != (c_out,):
        raise ShapeError(f"Bias must have shape ({c_out},), got {bias.shape}")

    if padding == "same":
        pads = ((0, 0), same_padding(kh), same_padding(kw), (0, 0))
        xp = np.pad(xb, pads) if kh > 1 or kw > 1 else xb
    elif padding == "valid":
        pads = ((0, 0), (0, 0), (0, 0), (0, 0))
        xp = xb
    else:
        raise ShapeError(f"Unknown padding {padding!r}")
    n, hp, wp, _ = xp.shape
    ho, wo = hp - kh + 1, wp - kw + 1
    if ho < 1 or wo < 1:
        raise ShapeError(f"Kernel {kh}x{kw} does not fit input {xb.shape[1:3]}")

    cols = _im2col(xp, kh, kw)
    y = (cols @ weights.reshape(kh * kw * c_in, c_out) + bias).reshape(n, ho, wo, c_out)
    cache = {"cols": cols, "weights": weights, "pads": pads, "squeezed": squeezed}
    return (y[0] if squeezed else y), cache


def conv2d_forward(x, weights, bias, stride=1, padding="same") -> np.ndarray:
    """Convolution output only (see conv2d_forward_cached)."""
    return conv2d_forward_cached(x, weights, bias, stride, padding)[0]


def conv2d_backward(grad_y: np.ndarray, cache: dict) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Return (grad_x, grad_weights, grad_bias).

    grad_x is a valid cross-correlation of grad_y, padded by k-1 minus the
    forward padding on each side, with the flipped kernel whose in/out
    channels are swapped.
    """
    cols, weights, pads = cache["cols"], cache["weights"], cache["pads"]
    kh, kw, c_in, c_out = weights.shape
    gy, _ = _batched(grad_y, 3)
    n, ho, wo, _ = gy.shape

    g2 = gy.reshape(n * ho * wo, c_out)
    grad_w = (cols.T @ g2).reshape(weights.shape)
    grad_b = g2.sum(axis=0)

    (_, _), (top, bottom), (left, right), _ = pads
    gp = np.pad(gy, ((0, 0), (kh - 1 - top, kh - 1 - bottom), (kw - 1 - left, kw - 1 - right), (0, 0)))
    flipped = weights[::-1, ::-1].transpose(0, 1, 3, 2).reshape(kh * kw * c_out, c_in)
    h, w = gp.shape[1] - kh + 1, gp.shape[2] - kw + 1
    grad_x = (_im2col(gp, kh, kw) @ flipped).reshape(n, h, w, c_in)
    if cache["squeezed"]:
        grad_x = grad_x[0]
    return grad_x, grad_w, grad_b


# --- pooling -----------------------------------------------------------------

def maxpool_forward_cached(x: np.ndarray, pool: int) -> Tuple[np.ndarray, dict]:
    """
    Non-overlapping p×p max pooling (stride p). Ties resolve to the first
    maximal entry in row-major window order.
    """
    xb, squeezed = _batched(x, 3)
    n, h, w, c = xb.shape
    if pool < 1 or h % pool or w % pool:
        raise ShapeError(f"Spatial dims {h}x{w} are not divisible by pool size {pool}")
    ho, wo = h // pool, w // pool
    windows = xb.reshape(n, ho, pool, wo, pool, c).transpose(0, 1, 3, 5, 2, 4).reshape(n, ho, wo, c, pool * pool)
    argmax = windows.argmax(axis=-1)
    y = np.take_along_axis(windows, argmax[..., None], axis=-1)[..., 0]
    cache = {"argmax": argmax, "shape": xb.shape, "pool": pool, "squeezed": squeezed}
    return (y[0] if squeezed else y), cache


def maxpool_forward(x: np.ndarray, pool: int) -> np.ndarray:
    return maxpool_forward_cached(x, pool)[0]


def maxpool_backward(grad_y: np.ndarray, cache: dict) -> np.ndarray:
    gy, _ = _batched(grad_y, 3)
    n, h, w, c = cache["shape"]
    pool = cache["pool"]
    ho, wo = h // pool, w // pool
    grad_windows = np.zeros((n, ho, wo, c, pool * pool), dtype=gy.dtype)
    np.put_along_axis(grad_windows, cache["argmax"][..., None], gy[..., None], axis=-1)
    grad_x = grad_windows.reshape(n, ho, wo, c, pool, pool).transpose(0, 1, 4, 2, 5, 3).reshape(n, h, w, c)
    return grad_x[0] if cache["squeezed"] else grad_x


# --- dense -------------------------------------------------------------------

def dense_forward(x: np.ndarray, weights: np.ndarray, bias: np.ndarray) -> np.ndarray:
    """Affine map x·W + b with W of shape n×m."""
    x = np.asarray(x)
    if weights.ndim != 2 or x.ndim not in (1, 2) or x.shape[-1] != weights.shape[0]:
        raise ShapeError(f"Cannot apply weights {weights.shape} to input {x.shape}")
    if bias.shape != (weights.shape[1],):
        raise ShapeError(f"Bias must have shape ({weights.shape[1]},), got {bias.shape}")
    return x @ weights + bias


def dense_backward(grad_y: np.ndarray, x: np.ndarray, weights: np.ndarray):
    """Return (grad_x, grad_weights, grad_bias); grad_weights is the outer product summed over the batch."""
    gy = np.atleast_2d(grad_y)
    xb = np.atleast_2d(x)
    grad_w = xb.T @ gy
    grad_b = gy.sum(axis=0)
    grad_x = grad_y @ weights.T
    return grad_x, grad_w, grad_b


# --- activations and loss ----------------------------------------------------

def relu(x: np.ndarray) -> np.ndarray:
    return np.maximum(x, 0)


def relu_backward(grad_y: np.ndarray, x: np.ndarray) -> np.ndarray:
    # Subgradient 0 at exactly 0.
    return grad_y * (x > 0)


def softmax(logits: np.ndarray) -> np.ndarray:
    """
    Softmax over the last axis.

    The normaliser sums the exponentials in sorted order, so permuting the
    logits permutes the probabilities bit for bit.
    """
    z = np.asarray(logits)
    e = np.exp(z - z.max(axis=-1, keepdims=True))
    total = np.sort(e, axis=-1).sum(axis=-1, keepdims=True)
    return e / total


def softmax_backward(grad_y: np.ndarray, probs: np.ndarray) -> np.ndarray:
    return probs * (grad_y - (grad_y * probs).sum(axis=-1, keepdims=True))


def validate_one_hot(target: np.ndarray) -> np.ndarray:
    t = np.asarray(target)
    ones = (t == 1).sum(axis=-1)
    if not np.all((t == 0) | (t == 1)) or not np.all(ones == 1):
        raise LabelError("Target must be one-hot along the last axis")
    return t


def softmax_cross_entropy(logits: np.ndarray, target: np.ndarray) -> Tuple[float, np.ndarray]:
    """
    Mean cross-entropy of softmax(logits) against one-hot targets.

    Returns (loss, grad) with grad = (softmax - target) / N, N the batch
    size (1 for unbatched input).
    """
    z = np.asarray(logits)
    t = validate_one_hot(target)
    if z.shape != t.shape:
        raise ShapeError(f"Logits {z.shape} and target {t.shape} differ in shape")
    zb = np.atleast_2d(z)
    tb = np.atleast_2d(t).astype(zb.dtype)
    m = zb.max(axis=-1, keepdims=True)
    log_norm = m[:, 0] + np.log(np.sort(np.exp(zb - m), axis=-1).sum(axis=-1))
    picked = (zb * tb).sum(axis=-1)
    n = zb.shape[0]
    loss = float((log_norm - picked).mean())
    grad = (softmax(zb) - tb) / n
    return loss, grad.reshape(z.shape)


# --- tensor plumbing ---------------------------------------------------------

def concat_channels(parts: Sequence[np.ndarray]) -> np.ndarray:
    """Concatenate along the last (channel) axis in list order."""
    if not parts:
        raise ShapeError("concat_channels needs at least one part")
    lead = parts[0].shape[:-1]
    for p in parts[1:]:
        if p.shape[:-1] != lead:
            raise ShapeError(f"Cannot concatenate parts with leading shapes {lead} and {p.shape[:-1]}")
    if len(parts) == 1:
        return parts[0]
    return np.concatenate(parts, axis=-1)


def split_channels(x: np.ndarray, n: int) -> List[np.ndarray]:
    """Inverse of concat_channels for n equal parts."""
    if x.shape[-1] % n:
        raise ShapeError(f"Channel count {x.shape[-1]} is not divisible by {n}")
    return np.split(x, n, axis=-1)


def sgd_step(
    params: Mapping[str, np.ndarray],
    grads: Mapping[str, np.ndarray],
    learning_rate: float,
) -> Dict[str, np.ndarray]:
    """Return p - lr·g for every registry entry; inputs are left untouched."""
    if set(params) != set(grads):
        missing = sorted(set(params) ^ set(grads))
        raise ParameterError(f"Parameter and gradient registries differ: {missing}")
    updated = {}
    for name, p in params.items():
        g = grads[name]
        if np.shape(p) != np.shape(g):
            raise ParameterError(f"{name}: parameter {np.shape(p)} vs gradient {np.shape(g)}")
        updated[name] = p - learning_rate * g
    return updated
