#!/usr/bin/env python3
# Copyright 2026 The qnnsim Authors
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#     http://www.apache.org/licenses/LICENSE-2.0
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Build the desk-scale digit dataset shipped under data/desk/.

The full MNIST distribution needs a download (see fetch_mnist.py), so the
repository carries a small self-contained stand-in instead: the UCI
handwritten digits bundled with scikit-learn (1797 8x8 images), upscaled to
the 28x28 MNIST geometry and augmented with small shifts/rotations until each
class has 250 training and 100 test samples. Train and test draw from
disjoint source images. Output is the standard IDX format, gzipped.

Deterministic: fixed RNG seed, stable iteration order.

Usage: python3 scripts/make_desk_dataset.py [out_dir]
"""

import gzip
import struct
import sys
from pathlib import Path

import numpy as np
from scipy import ndimage
from sklearn.datasets import load_digits

TRAIN_PER_CLASS = 250
TEST_PER_CLASS = 100
SEED = 20260114
OUT_SIZE = 28


def write_idx_images(path: Path, images: np.ndarray) -> None:
    count, rows, cols = images.shape
    header = struct.pack(">IIII", 0x00000803, count, rows, cols)
    with open(path, "wb") as raw:
        with gzip.GzipFile(fileobj=raw, mode="wb", mtime=0) as f:
            f.write(header)
            f.write(images.astype(np.uint8).tobytes())


def write_idx_labels(path: Path, labels: np.ndarray) -> None:
    header = struct.pack(">II", 0x00000801, len(labels))
    with open(path, "wb") as raw:
        with gzip.GzipFile(fileobj=raw, mode="wb", mtime=0) as f:
            f.write(header)
            f.write(labels.astype(np.uint8).tobytes())


def augment(img28: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    angle = rng.uniform(-10.0, 10.0)
    out = ndimage.rotate(img28, angle, reshape=False, order=1, mode="constant")
    shift = rng.uniform(-2.0, 2.0, size=2)
    out = ndimage.shift(out, shift, order=1, mode="constant")
    out *= rng.uniform(0.85, 1.0)
    return np.clip(out, 0.0, 1.0)


def expand(pool: np.ndarray, want: int, rng: np.random.Generator) -> np.ndarray:
    """Upscale each 8x8 source to 28x28 and augment until `want` samples."""
    out = []
    i = 0
    while len(out) < want:
        src = pool[i % len(pool)] / 16.0
        img28 = ndimage.zoom(src, OUT_SIZE / 8.0, order=1)
        img28 = np.clip(img28, 0.0, 1.0)
        out.append(augment(img28, rng))
        i += 1
    return np.stack(out)


def main() -> None:
    out_dir = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("data/desk")
    out_dir.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(SEED)

    digits = load_digits()
    images = digits.images  # (1797, 8, 8), values 0..16
    labels = digits.target

    train_images, train_labels = [], []
    test_images, test_labels = [], []
    for cls in range(10):
        pool = images[labels == cls]
        order = rng.permutation(len(pool))
        split = int(round(len(pool) * 0.7))
        train_pool = pool[order[:split]]
        test_pool = pool[order[split:]]

        train_images.append(expand(train_pool, TRAIN_PER_CLASS, rng))
        train_labels.append(np.full(TRAIN_PER_CLASS, cls))
        test_images.append(expand(test_pool, TEST_PER_CLASS, rng))
        test_labels.append(np.full(TEST_PER_CLASS, cls))

    def interleave(chunks_img, chunks_lbl):
        img = np.concatenate(chunks_img)
        lbl = np.concatenate(chunks_lbl)
        order = rng.permutation(len(lbl))
        return img[order], lbl[order]

    tr_img, tr_lbl = interleave(train_images, train_labels)
    te_img, te_lbl = interleave(test_images, test_labels)

    tr_bytes = np.rint(tr_img * 255.0)
    te_bytes = np.rint(te_img * 255.0)

    write_idx_images(out_dir / "train-images-idx3-ubyte.gz", tr_bytes)
    write_idx_labels(out_dir / "train-labels-idx1-ubyte.gz", tr_lbl)
    write_idx_images(out_dir / "t10k-images-idx3-ubyte.gz", te_bytes)
    write_idx_labels(out_dir / "t10k-labels-idx1-ubyte.gz", te_lbl)
    print(f"wrote {len(tr_lbl)} train / {len(te_lbl)} test samples to {out_dir}")


if __name__ == "__main__":
    main()
