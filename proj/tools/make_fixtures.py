#!/usr/bin/env python3
# Copyright 2026 The qubopress Authors
#
#    Licensed under the Apache License, Version 2.0 (the "License");
#    you may not use this file except in compliance with the License.
#    You may obtain a copy of the License at
#
#        http://www.apache.org/licenses/LICENSE-2.0
#
#    Unless required by applicable law or agreed to in writing, software
#    distributed under the License is distributed on an "AS IS" BASIS,
#    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
#    See the License for the specific language governing permissions and
#    limitations under the License.
"""Regenerates the model fixtures under data/models.

Weights are synthetic (He-normal, fixed seed); only the layer shapes matter for
problem-size accounting. LeNet-5 ships raw float32 blobs, the larger networks
ship stats-only manifests at filter granularity.
"""

import json
import pathlib

import numpy as np

ROOT = pathlib.Path(__file__).resolve().parent.parent / "data" / "models"

# Three small layers, 20 variables in all.
TOY = [(4, 1, 3, 3), (3, 4, 3, 3), (4, 3, 3, 3)]
LENET5 = [(6, 1, 5, 5), (16, 6, 5, 5)]
GTSR_CNN = [(32, 3, 3, 3), (64, 32, 3, 3), (128, 64, 3, 3)]
RESNET9 = [
    (64, 3, 3, 3),
    (128, 64, 3, 3),
    (128, 128, 3, 3),
    (128, 128, 3, 3),
    (256, 128, 3, 3),
    (512, 256, 3, 3),
    (512, 512, 3, 3),
    (512, 512, 3, 3),
]
VGG16 = [
    (64, 3, 3, 3),
    (64, 64, 3, 3),
    (128, 64, 3, 3),
    (128, 128, 3, 3),
    (256, 128, 3, 3),
    (256, 256, 3, 3),
    (256, 256, 3, 3),
    (512, 256, 3, 3),
    (512, 512, 3, 3),
    (512, 512, 3, 3),
    (512, 512, 3, 3),
    (512, 512, 3, 3),
    (512, 512, 3, 3),
]


def he_normal(rng, shape):
    fan_in = shape[1] * shape[2] * shape[3]
    return (rng.standard_normal(shape) * np.sqrt(2.0 / fan_in)).astype("<f4")


def write_weights(name, shapes, seed):
    out = ROOT / name
    out.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(seed)
    layers = []
    for n, shape in enumerate(shapes):
        w = he_normal(rng, shape)
        blob = f"conv{n + 1}.bin"
        (out / blob).write_bytes(w.tobytes(order="C"))
        layers.append({"id": n, "shape": list(shape), "weights": blob})
    manifest = {"b_max": 8, "layers": layers}
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")


def write_stats(name, shapes, seed):
    out = ROOT / name
    out.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(seed)
    layers = []
    for n, shape in enumerate(shapes):
        w = he_normal(rng, shape).astype(np.float64)
        flat = np.abs(w.reshape(shape[0], -1))
        groups = [
            {
                "count": int(flat.shape[1]),
                "l1_norm": float(np.round(row.sum(), 9)),
                "max_abs": float(np.round(row.max(), 9)),
            }
            for row in flat
        ]
        layers.append({"id": n, "shape": list(shape), "groups": groups})
    manifest = {"b_max": 8, "granularity": "filter", "layers": layers}
    (out / "manifest.json").write_text(json.dumps(manifest, separators=(",", ":")) + "\n")


if __name__ == "__main__":
    write_weights("lenet5", LENET5, 5)
    write_stats("gtsr_cnn", GTSR_CNN, 43)
    write_stats("resnet9", RESNET9, 9)
    write_stats("vgg16", VGG16, 16)
    write_stats("toy", TOY, 20)
