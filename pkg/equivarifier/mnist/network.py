# equivarifier/mnist/network.py
"""
The rotation-equivariant digit/angle network and its plain reference.

    stage 1: lift(relu ∘ conv1)                against rot90        28×28×1   → 28×28×4c1
    stage 2: lift(relu ∘ conv2)                against block shift  28×28×4c1 → 28×28×4c2
    stage 3: lift(dense ∘ pool ∘ relu ∘ conv3) against block shift  28×28×4c2 → R^40

Logits come out in four blocks of ten, one per rotation; rotating the input
by 90° counterclockwise shifts them one block to the right.
"""

import logging
from typing import Any, Dict, List, Literal

import numpy as np
from pydantic import BaseModel, ValidationError, field_validator, model_validator

from ..actions.builtin import rot90_action
from ..errors import ConfigError
from ..groups.core import cyclic_group
from ..lifting.layerwise import compose_equivariant, equivarify_chain, equivarify_layer
from ..nn.layers import Conv2D, Dense, Flatten, Layer, MaxPool2D, ReLU, Sequential
from ..nn.model import Model
from .labels import NUM_ANGLES, NUM_DIGITS

logger = logging.getLogger(__name__)


class ModelConfig(BaseModel):
    c1: int = 8
    c2: int = 8
    c3: int = 16
    kernel: int = 5
    pool: int = 4
    image_size: int = 28
    seed: int = 0

    @field_validator("c1", "c2", "c3", "kernel", "pool", "image_size")
    @classmethod
    def _positive(cls, v: int) -> int:
        if v < 1:
            raise ValueError("must be positive")
        return v

    @model_validator(mode="after")
    def _pool_divides(self) -> "ModelConfig":
        if self.image_size % self.pool:
            raise ValueError(f"pool {self.pool} does not divide image size {self.image_size}")
        return self

    @classmethod
    def build(cls, **values: Any) -> "ModelConfig":
        try:
            return cls(**values)
        except ValidationError as e:
            raise ConfigError(f"Invalid model configuration: {e}") from e

    @classmethod
    def from_settings(cls, settings) -> "ModelConfig":
        return cls.build(
            c1=settings.c1, c2=settings.c2, c3=settings.c3,
            kernel=settings.kernel, pool=settings.pool, seed=settings.seed,
        )

    @property
    def dense_inputs(self) -> int:
        return (self.image_size // self.pool) ** 2 * self.c3


def _as_config(config) -> ModelConfig:
    if isinstance(config, ModelConfig):
        return config
    return ModelConfig.build(**dict(config or {}))


def _stages(config: ModelConfig, conv2_in: int, conv3_in: int) -> List[Layer]:
    rng = np.random.default_rng(config.seed)
    k = config.kernel
    return [
        Sequential([Conv2D(1, config.c1, k, rng, name="conv1"), ReLU("relu1")], name="stage1"),
        Sequential([Conv2D(conv2_in, config.c2, k, rng, name="conv2"), ReLU("relu2")], name="stage2"),
        Sequential(
            [
                Conv2D(conv3_in, config.c3, k, rng, name="conv3"),
                ReLU("relu3"),
                MaxPool2D(config.pool, name="pool"),
                Flatten("flatten"),
                Dense(config.dense_inputs, NUM_DIGITS, rng, name="dense"),
            ],
            name="stage3",
        ),
    ]


def build_model(config=None, dtype=np.float64) -> Model:
    """
    The equivariant network. Later stages see all four channel blocks of the
    previous one, so conv2 and conv3 take 4·c input channels.
    """
    config = _as_config(config)
    G = cyclic_group(NUM_ANGLES)
    s = config.image_size
    rotation = rot90_action(G, s, s, 1)

    layers = _stages(config, NUM_ANGLES * config.c1, NUM_ANGLES * config.c2)
    maps = []
    action = rotation
    for layer in layers:
        stage = equivarify_layer(layer, action, G)
        maps.append(stage)
        action = stage.codomain_action
    chain = compose_equivariant(maps)

    model = Model(
        chain.layer,
        (s, s, 1),
        name="equivariant_cnn",
        domain_action=rotation,
        codomain_action=chain.codomain_action,
        config=config.model_dump(),
    )
    model.astype(dtype)
    logger.info(f"🚀 Built equivariant model: {model.num_parameters} parameters, output {model.output_shape}")
    return model


def build_reference_model(config=None, dtype=np.float64) -> Model:
    """The same three stages without lifting: conv channels c1 → c2 → c3, 10 outputs."""
    config = _as_config(config)
    s = config.image_size
    layers = _stages(config, config.c1, config.c2)
    model = Model(Sequential(layers, name="reference"), (s, s, 1), name="reference_cnn", config=config.model_dump())
    return model.astype(dtype)


def equivarify_reference(reference: Model, mode: Literal["layerwise", "monolithic"] = "layerwise") -> Model:
    """
    Lift a reference network, sharing its parameter arrays.

    "layerwise" lifts stage 1, then each later stage precomposed with the
    projection; "monolithic" lifts the whole network at once. Both give the
    same function and the reference's parameter count.
    """
    G = cyclic_group(NUM_ANGLES)
    s = reference.input_shape[0]
    rotation = rot90_action(G, s, s, reference.input_shape[-1])
    stages = list(reference.network.children())

    if mode == "layerwise":
        chain = equivarify_chain(stages, rotation, G)
        network, codomain = chain.layer, chain.codomain_action
    elif mode == "monolithic":
        stage = equivarify_layer(reference.network, rotation, G)
        network, codomain = stage.layer, stage.codomain_action
    else:
        raise ConfigError(f"Unknown equivarification mode {mode!r}")
    return Model(
        network,
        reference.input_shape,
        name=f"{reference.name}_{mode}",
        domain_action=rotation,
        codomain_action=codomain,
        config=reference.config,
    )


def parameter_counts(config=None) -> Dict[str, int]:
    """Trainable parameters of the reference and of its two lifts."""
    reference = build_reference_model(config)
    return {
        "reference": reference.num_parameters,
        "layerwise": equivarify_reference(reference, "layerwise").num_parameters,
        "monolithic": equivarify_reference(reference, "monolithic").num_parameters,
        "equivariant": build_model(config).num_parameters,
    }
