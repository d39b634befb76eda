import time
import statistics

import numpy as np

from equivarifier.mnist.dataset import synthetic_images
from equivarifier.mnist.labels import encode_labels
from equivarifier.mnist.network import build_model, build_reference_model, equivarify_reference

# Forward passes per configuration, batch of 32 synthetic images
REPEATS = 5
BATCH = 32


def time_forward(model, x):
    latencies = []
    for _ in range(REPEATS):
        start = time.perf_counter()
        model.predict(x)
        latencies.append((time.perf_counter() - start) * 1000)
    return latencies


def time_training_step(model, x, target):
    latencies = []
    for _ in range(REPEATS):
        start = time.perf_counter()
        model.loss_and_gradients(x, target)
        latencies.append((time.perf_counter() - start) * 1000)
    return latencies


def run_benchmark():
    print("🏎️ Starting forward-pass benchmark...")
    x = synthetic_images(BATCH, seed=0)
    reference = build_reference_model(dtype=np.float32)
    suite = {
        "reference": reference,
        "equivariant": build_model(dtype=np.float32),
        "layerwise lift": equivarify_reference(reference, "layerwise"),
        "monolithic lift": equivarify_reference(reference, "monolithic"),
    }
    for name, model in suite.items():
        latencies = time_forward(model, x)
        print(f"   {name:<16} params={model.num_parameters:<8} "
              f"P50 {statistics.median(latencies):8.2f}ms  max {max(latencies):8.2f}ms")
    rng = np.random.default_rng(0)
    target = encode_labels(rng.integers(0, 10, size=BATCH), rng.integers(0, 4, size=BATCH), dtype=np.float32)
    step = statistics.median(time_training_step(suite["equivariant"], x, target))
    # 10k images, 5 epochs
    epochs_minutes = step / 1000 * (10000 // BATCH + 1) * 5 / 60
    print(f"   training step    P50 {step:8.2f}ms  (~{epochs_minutes:.1f} min for 5 epochs on 10k images)")
    print("-" * 30)


if __name__ == "__main__":
    run_benchmark()
