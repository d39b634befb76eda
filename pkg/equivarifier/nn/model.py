# equivarifier/nn/model.py
import logging
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from ..actions.base import GroupAction
from ..errors import ParameterError, ShapeError
from . import functional as F
from .layers import Grads, Layer, Sequential, Shape

logger = logging.getLogger(__name__)


class Model:
    """
    A network plus the bookkeeping around it: per-sample input shape, the
    ordered parameter registry, and (for equivariant models) the actions on
    input and output.

    The registry order is the order parameters are first met walking the
    layers, which is stable across runs and used by checkpoints.
    """

    def __init__(
        self,
        network: Layer,
        input_shape: Shape,
        name: str = "model",
        domain_action: Optional[GroupAction] = None,
        codomain_action: Optional[GroupAction] = None,
        config: Optional[Dict[str, Any]] = None,
    ):
        self.network = network
        self.input_shape = tuple(input_shape)
        self.name = name
        self.domain_action = domain_action
        self.codomain_action = codomain_action
        self.config = dict(config or {})
        self.output_shape = network.output_shape(self.input_shape)
        self._check_unique_names()

    def _check_unique_names(self):
        owners: Dict[str, int] = {}
        for key, owner, _ in self.network.parameter_slots():
            if owners.setdefault(key, id(owner)) != id(owner):
                raise ParameterError(f"Two different layers register parameter '{key}'")

    # --- registry ----------------------------------------------------------

    def parameters(self) -> Dict[str, np.ndarray]:
        return self.network.named_parameters()

    @property
    def num_parameters(self) -> int:
        return self.network.num_parameters

    @property
    def dtype(self) -> np.dtype:
        params = list(self.parameters().values())
        return params[0].dtype if params else np.dtype(np.float64)

    def set_parameters(self, values: Dict[str, np.ndarray]):
        """Copy values into the registry in place (shapes must match)."""
        slots = {key: (owner, local) for key, owner, local in self.network.parameter_slots()}
        if set(values) != set(slots):
            raise ParameterError(f"Registry mismatch: {sorted(set(values) ^ set(slots))}")
        for key, value in values.items():
            owner, local = slots[key]
            target = owner.params[local]
            if target.shape != np.shape(value):
                raise ParameterError(f"{key}: expected shape {target.shape}, got {np.shape(value)}")
            target[...] = value

    def astype(self, dtype) -> "Model":
        self.network.astype(dtype)
        return self

    # --- evaluation --------------------------------------------------------

    def _batch(self, x: np.ndarray) -> Tuple[np.ndarray, bool]:
        x = np.asarray(x)
        if x.shape == self.input_shape:
            return x[None], True
        if x.shape[1:] == self.input_shape:
            return x, False
        raise ShapeError(f"{self.name}: expected input {self.input_shape} (optionally batched), got {x.shape}")

    def forward(self, x: np.ndarray) -> Tuple[np.ndarray, Any]:
        xb, _ = self._batch(x)
        return self.network.forward(xb.astype(self.dtype, copy=False))

    def predict(self, x: np.ndarray, batch_size: Optional[int] = None) -> np.ndarray:
        """Logits for one sample or a batch; batches run in fixed order."""
        xb, squeezed = self._batch(x)
        xb = xb.astype(self.dtype, copy=False)
        if batch_size is None or len(xb) <= batch_size:
            y = self.network.forward(xb)[0]
        else:
            y = np.concatenate([self.network.forward(xb[i:i + batch_size])[0] for i in range(0, len(xb), batch_size)])
        return y[0] if squeezed else y

    def __call__(self, x: np.ndarray) -> np.ndarray:
        return self.predict(x)

    def loss_and_gradients(self, x: np.ndarray, target: np.ndarray) -> Tuple[float, Grads]:
        """Mean softmax cross-entropy over the batch and its exact gradients."""
        xb, _ = self._batch(x)
        logits, cache = self.network.forward(xb.astype(self.dtype, copy=False))
        target = np.asarray(target)
        if target.ndim == 1:
            target = target[None]
        loss, grad = F.softmax_cross_entropy(logits, target)
        _, grads = self.network.backward(grad.astype(logits.dtype, copy=False), cache)
        return loss, self._complete(grads)

    def backward_from(self, x: np.ndarray, grad_output: np.ndarray) -> Grads:
        """Parameter gradients for an arbitrary upstream gradient on the output."""
        xb, _ = self._batch(x)
        _, cache = self.network.forward(xb.astype(self.dtype, copy=False))
        go = np.asarray(grad_output, dtype=self.dtype)
        if go.shape == self.output_shape:
            go = go[None]
        _, grads = self.network.backward(go, cache)
        return self._complete(grads)

    def _complete(self, grads: Grads) -> Grads:
        """Order gradients like the registry, zero-filling unused parameters."""
        return {key: grads.get(key, np.zeros_like(p)) for key, p in self.parameters().items()}

    def activation_pattern(self, x: np.ndarray) -> List[np.ndarray]:
        _, cache = self.forward(x)
        return self.network.activation_pattern(cache)

    def sgd_step(self, grads: Grads, learning_rate: float):
        """In-place p ← p - lr·g over the registry."""
        params = self.parameters()
        updated = F.sgd_step(params, grads, learning_rate)
        for key, p in params.items():
            p[...] = updated[key]

    def summary(self) -> str:
        lines = [f"{self.name}: input {self.input_shape} -> output {self.output_shape}"]
        for key, p in self.parameters().items():
            lines.append(f"  {key:<24} {str(p.shape):<20} {p.size}")
        lines.append(f"  total parameters: {self.num_parameters}")
        return "\n".join(lines)


def backward(model: Model, x: np.ndarray, target: np.ndarray) -> Grads:
    """Exact reverse-mode gradients of the cross-entropy loss for every parameter."""
    return model.loss_and_gradients(x, target)[1]


def sequential_model(layers: List[Layer], input_shape: Shape, name: str = "model", **kwargs) -> Model:
    return Model(Sequential(layers, name=f"{name}.body"), input_shape, name=name, **kwargs)
