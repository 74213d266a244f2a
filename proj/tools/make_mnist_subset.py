#!/usr/bin/env python3
# Copyright 2026 The RRA Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Writes MNIST IDX files from a CSV dump of 28x28 digits.

Each CSV row holds 784 pixel values (0-255) followed by the label. The
default input is the 5,000-image sample shipped with mlxtend. Images are
split per class into train and test sets, so both sets stay balanced.
"""

import argparse
import csv
import gzip
import pathlib
import random
import struct
import sys

IMAGE_MAGIC = 0x00000803
LABEL_MAGIC = 0x00000801


def default_source():
    try:
        import mlxtend.data.mnist as m
    except ImportError:
        return None
    return pathlib.Path(m.DATA_PATH)


def read_rows(path):
    opener = gzip.open if path.suffix == ".gz" else open
    with opener(path, "rt", newline="") as f:
        for row in csv.reader(f):
            if not row:
                continue
            pixels = bytes(int(float(v)) for v in row[:-1])
            if len(pixels) != 784:
                raise ValueError(f"{path}: row with {len(pixels)} pixels")
            yield pixels, int(float(row[-1]))


def write_idx(prefix, images, labels):
    with open(f"{prefix}-images-idx3-ubyte", "wb") as f:
        f.write(struct.pack(">IIII", IMAGE_MAGIC, len(images), 28, 28))
        for img in images:
            f.write(img)
    with open(f"{prefix}-labels-idx1-ubyte", "wb") as f:
        f.write(struct.pack(">II", LABEL_MAGIC, len(labels)))
        f.write(bytes(labels))


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--csv", type=pathlib.Path, default=default_source())
    p.add_argument("--out", type=pathlib.Path, required=True)
    p.add_argument("--train-per-class", type=int, default=300)
    p.add_argument("--test-per-class", type=int, default=200)
    p.add_argument("--prefix", default="")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--skip-existing", action="store_true",
                   help="do nothing when the output files already exist")
    args = p.parse_args()
    stems = ("train", "t10k") if not args.prefix else (
        f"{args.prefix}train", f"{args.prefix}t10k")
    if args.skip_existing and all(
            (args.out / f"{s}-{kind}").exists() for s in stems
            for kind in ("images-idx3-ubyte", "labels-idx1-ubyte")):
        print(f"{args.out}: IDX files present")
        return
    if args.csv is None:
        sys.exit("no --csv given and mlxtend is not installed")

    by_class = {}
    for pixels, label in read_rows(args.csv):
        by_class.setdefault(label, []).append(pixels)
    rng = random.Random(args.seed)
    train, test = [], []
    need = args.train_per_class + args.test_per_class
    for label in sorted(by_class):
        images = by_class[label]
        if len(images) < need:
            sys.exit(f"class {label}: {len(images)} images, need {need}")
        rng.shuffle(images)
        train += [(img, label) for img in images[:args.train_per_class]]
        test += [(img, label) for img in images[args.train_per_class:need]]
    rng.shuffle(train)
    rng.shuffle(test)

    args.out.mkdir(parents=True, exist_ok=True)
    pre = args.prefix
    for name, rows in (("train", train), ("t10k", test)):
        if not rows:
            continue
        stem = f"{pre}{name}" if pre else name
        write_idx(args.out / stem, [r[0] for r in rows], [r[1] for r in rows])
        print(f"{name}: {len(rows)} images -> {args.out / stem}-*")


if __name__ == "__main__":
    main()
