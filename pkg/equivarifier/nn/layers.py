# equivarifier/nn/layers.py
"""
Differentiable layers.

Every layer works on batched tensors (leading batch axis) and follows one
interface:

    y, cache = layer.forward(x)
    grad_x, param_grads = layer.backward(grad_y, cache)

param_grads is keyed by registry name (`<layer name>.<param>`). Containers
(Sequential, LiftedLayer) add no prefix of their own, so a shared layer keeps
one registry entry wherever it appears.
"""

import logging
from abc import ABC, abstractmethod
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from ..actions.base import PermutationAction
from ..errors import ShapeError
from . import functional as F

logger = logging.getLogger(__name__)

Shape = Tuple[int, ...]
Grads = Dict[str, np.ndarray]


def merge_grads(total: Grads, new: Grads) -> Grads:
    """Accumulate `new` into `total` in insertion order."""
    for key, g in new.items():
        if key in total:
            total[key] = total[key] + g
        else:
            total[key] = g
    return total


class Layer(ABC):
    """
    Abstract base class for all layers.

    Leaf layers own `params`; containers expose their children's.
    """

    kind: str = "layer"
    name: str

    def __init__(self, name: str):
        self.name = name
        self.params: Dict[str, np.ndarray] = {}

    @abstractmethod
    def forward(self, x: np.ndarray) -> Tuple[np.ndarray, Any]:
        pass

    @abstractmethod
    def backward(self, grad_y: np.ndarray, cache: Any) -> Tuple[np.ndarray, Grads]:
        pass

    @abstractmethod
    def output_shape(self, input_shape: Shape) -> Shape:
        """Per-sample output shape; raises ShapeError for incompatible input."""
        pass

    def __call__(self, x: np.ndarray) -> np.ndarray:
        return self.forward(x)[0]

    def children(self) -> Sequence["Layer"]:
        return ()

    def parameter_slots(self) -> Iterator[Tuple[str, "Layer", str]]:
        """(registry key, owning layer, local key) for every parameter, in order."""
        for local in self.params:
            yield f"{self.name}.{local}", self, local
        for child in self.children():
            yield from child.parameter_slots()

    def named_parameters(self) -> Dict[str, np.ndarray]:
        named: Dict[str, np.ndarray] = {}
        for key, owner, local in self.parameter_slots():
            named.setdefault(key, owner.params[local])
        return named

    @property
    def num_parameters(self) -> int:
        return int(sum(p.size for p in self.named_parameters().values()))

    def activation_pattern(self, cache: Any) -> List[np.ndarray]:
        """Discrete choices made in forward (relu masks, pool winners)."""
        return []

    def astype(self, dtype) -> "Layer":
        for _, owner, local in self.parameter_slots():
            owner.params[local] = owner.params[local].astype(dtype)
        return self

    def _grads(self, **grads: np.ndarray) -> Grads:
        return {f"{self.name}.{k}": v for k, v in grads.items()}

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.name})"


class Conv2D(Layer):
    kind = "conv2d"

    def __init__(
        self,
        in_channels: int,
        out_channels: int,
        kernel: int,
        rng: np.random.Generator,
        name: str = "conv",
        padding: str = "same",
    ):
        super().__init__(name)
        if min(in_channels, out_channels, kernel) < 1:
            raise ShapeError(f"{name}: channels and kernel size must be positive")
        self.in_channels = in_channels
        self.out_channels = out_channels
        self.kernel = kernel
        self.padding = padding
        fan_in = kernel * kernel * in_channels
        self.params["weight"] = rng.standard_normal((kernel, kernel, in_channels, out_channels)) * np.sqrt(2.0 / fan_in)
        self.params["bias"] = np.zeros(out_channels)

    def forward(self, x):
        return F.conv2d_forward_cached(x, self.params["weight"], self.params["bias"], padding=self.padding)

    def backward(self, grad_y, cache):
        grad_x, grad_w, grad_b = F.conv2d_backward(grad_y, cache)
        return grad_x, self._grads(weight=grad_w, bias=grad_b)

    def output_shape(self, input_shape):
        if len(input_shape) != 3 or input_shape[-1] != self.in_channels:
            raise ShapeError(f"{self.name}: expected h×w×{self.in_channels}, got {input_shape}")
        h, w, _ = input_shape
        if self.padding == "valid":
            h, w = h - self.kernel + 1, w - self.kernel + 1
        return (h, w, self.out_channels)


class MaxPool2D(Layer):
    kind = "maxpool"

    def __init__(self, pool: int, name: str = "pool"):
        super().__init__(name)
        self.pool = pool

    def forward(self, x):
        return F.maxpool_forward_cached(x, self.pool)

    def backward(self, grad_y, cache):
        return F.maxpool_backward(grad_y, cache), {}

    def output_shape(self, input_shape):
        if len(input_shape) != 3 or input_shape[0] % self.pool or input_shape[1] % self.pool:
            raise ShapeError(f"{self.name}: {input_shape} is not divisible by pool {self.pool}")
        h, w, c = input_shape
        return (h // self.pool, w // self.pool, c)

    def activation_pattern(self, cache):
        return [cache["argmax"]]


class Dense(Layer):
    kind = "dense"

    def __init__(self, n_in: int, n_out: int, rng: np.random.Generator, name: str = "dense"):
        super().__init__(name)
        self.n_in = n_in
        self.n_out = n_out
        self.params["weight"] = rng.standard_normal((n_in, n_out)) * np.sqrt(2.0 / n_in)
        self.params["bias"] = np.zeros(n_out)

    def forward(self, x):
        return F.dense_forward(x, self.params["weight"], self.params["bias"]), x

    def backward(self, grad_y, cache):
        grad_x, grad_w, grad_b = F.dense_backward(grad_y, cache, self.params["weight"])
        return grad_x, self._grads(weight=grad_w, bias=grad_b)

    def output_shape(self, input_shape):
        if tuple(input_shape) != (self.n_in,):
            raise ShapeError(f"{self.name}: expected ({self.n_in},), got {input_shape}")
        return (self.n_out,)


class ReLU(Layer):
    kind = "relu"

    def __init__(self, name: str = "relu"):
        super().__init__(name)

    def forward(self, x):
        return F.relu(x), x

    def backward(self, grad_y, cache):
        return F.relu_backward(grad_y, cache), {}

    def output_shape(self, input_shape):
        return tuple(input_shape)

    def activation_pattern(self, cache):
        return [cache > 0]


class Softmax(Layer):
    kind = "softmax"

    def __init__(self, name: str = "softmax"):
        super().__init__(name)

    def forward(self, x):
        probs = F.softmax(x)
        return probs, probs

    def backward(self, grad_y, cache):
        return F.softmax_backward(grad_y, cache), {}

    def output_shape(self, input_shape):
        return tuple(input_shape)


class Flatten(Layer):
    kind = "flatten"

    def __init__(self, name: str = "flatten"):
        super().__init__(name)

    def forward(self, x):
        return x.reshape(x.shape[0], -1), x.shape

    def backward(self, grad_y, cache):
        return grad_y.reshape(cache), {}

    def output_shape(self, input_shape):
        return (int(np.prod(input_shape)),)


class BlockPrecompose(Layer):
    """x ↦ transform[g](x) for a fixed permutation action and element g."""

    kind = "block_precompose"

    def __init__(self, action: PermutationAction, g: int, name: str = "precompose"):
        super().__init__(name)
        self.action = action
        self.g = action.group.validate_element(g)

    def forward(self, x):
        return self.action.apply(self.g, x), None

    def backward(self, grad_y, cache):
        return self.action.apply_transpose(self.g, grad_y), {}

    def output_shape(self, input_shape):
        if tuple(input_shape) != self.action.carrier_shape:
            raise ShapeError(f"{self.name}: expected {self.action.carrier_shape}, got {input_shape}")
        return tuple(input_shape)


class BlockProjection(Layer):
    """
    The projection p on a stacked G-product tensor: keep block 0 of
    `n_blocks` along the last axis.
    """

    kind = "block_projection"

    def __init__(self, n_blocks: int, name: str = "project"):
        super().__init__(name)
        self.n_blocks = n_blocks

    def forward(self, x):
        if x.shape[-1] % self.n_blocks:
            raise ShapeError(f"{self.name}: last axis {x.shape[-1]} is not {self.n_blocks} blocks")
        block = x.shape[-1] // self.n_blocks
        return x[..., :block], x.shape

    def backward(self, grad_y, cache):
        grad_x = np.zeros(cache, dtype=grad_y.dtype)
        grad_x[..., : grad_y.shape[-1]] = grad_y
        return grad_x, {}

    def output_shape(self, input_shape):
        if input_shape[-1] % self.n_blocks:
            raise ShapeError(f"{self.name}: last axis {input_shape[-1]} is not {self.n_blocks} blocks")
        return (*input_shape[:-1], input_shape[-1] // self.n_blocks)


class Sequential(Layer):
    kind = "sequential"

    def __init__(self, layers: Sequence[Layer], name: str = "sequential"):
        super().__init__(name)
        if not layers:
            raise ShapeError(f"{name}: a Sequential needs at least one layer")
        self.layers = list(layers)

    def children(self):
        return self.layers

    def forward(self, x):
        caches = []
        for layer in self.layers:
            x, cache = layer.forward(x)
            caches.append(cache)
        return x, caches

    def backward(self, grad_y, cache):
        grads: Grads = {}
        for layer, c in zip(reversed(self.layers), reversed(cache)):
            grad_y, g = layer.backward(grad_y, c)
            merge_grads(grads, g)
        return grad_y, grads

    def output_shape(self, input_shape):
        shape = tuple(input_shape)
        for layer in self.layers:
            shape = layer.output_shape(shape)
        return shape

    def activation_pattern(self, cache):
        pattern = []
        for layer, c in zip(self.layers, cache):
            pattern.extend(layer.activation_pattern(c))
        return pattern


class LiftedLayer(Layer):
    """
    The G-product lift of an inner layer:

        y = concat_k inner(transform[g_k⁻¹](x))   along the last axis

    The inner layer's parameters are shared by all |G| branches, so lifting
    adds no parameters. Branches are evaluated one call at a time, in
    element order.
    """

    kind = "lifted"

    def __init__(self, inner: Layer, action: PermutationAction, name: Optional[str] = None):
        super().__init__(name or f"lift({inner.name})")
        self.inner = inner
        self.action = action
        self.group = action.group
        self._inverses = [self.group.inverse(k) for k in self.group.elements]

    def children(self):
        return (self.inner,)

    def forward(self, x):
        outputs, caches = [], []
        for k in self.group.elements:
            y, cache = self.inner.forward(self.action.apply(self._inverses[k], x))
            outputs.append(y)
            caches.append(cache)
        return F.concat_channels(outputs), caches

    def backward(self, grad_y, cache):
        grad_x = None
        grads: Grads = {}
        for k, (g, c) in enumerate(zip(F.split_channels(grad_y, self.group.order), cache)):
            gx, pg = self.inner.backward(g, c)
            gx = self.action.apply_transpose(self._inverses[k], gx)
            grad_x = gx if grad_x is None else grad_x + gx
            merge_grads(grads, pg)
        return grad_x, grads

    def output_shape(self, input_shape):
        if tuple(input_shape) != self.action.carrier_shape:
            raise ShapeError(f"{self.name}: action carrier {self.action.carrier_shape} != input {tuple(input_shape)}")
        inner_shape = self.inner.output_shape(input_shape)
        return (*inner_shape[:-1], inner_shape[-1] * self.group.order)

    def activation_pattern(self, cache):
        pattern = []
        for c in cache:
            pattern.extend(self.inner.activation_pattern(c))
        return pattern
