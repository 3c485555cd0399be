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
"""Download the full MNIST IDX files (gzipped) for the long-running
full-scale runs. The simulator reads the .gz files directly.

Usage: python3 scripts/fetch_mnist.py [out_dir]
"""

import sys
import urllib.request
from pathlib import Path

MIRRORS = [
    "https://ossci-datasets.s3.amazonaws.com/mnist/",
    "https://storage.googleapis.com/cvdf-datasets/mnist/",
]
FILES = [
    "train-images-idx3-ubyte.gz",
    "train-labels-idx1-ubyte.gz",
    "t10k-images-idx3-ubyte.gz",
    "t10k-labels-idx1-ubyte.gz",
]


def main() -> None:
    out_dir = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("data/mnist")
    out_dir.mkdir(parents=True, exist_ok=True)
    for name in FILES:
        dest = out_dir / name
        if dest.exists():
            print(f"{dest} already present, skipping")
            continue
        last_error = None
        for mirror in MIRRORS:
            url = mirror + name
            try:
                print(f"fetching {url}")
                urllib.request.urlretrieve(url, dest)
                break
            except OSError as e:
                last_error = e
        else:
            raise SystemExit(f"could not fetch {name}: {last_error}")
    print(f"MNIST ready under {out_dir}")


if __name__ == "__main__":
    main()
