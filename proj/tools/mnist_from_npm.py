#!/usr/bin/env python3
"""Convert the digit arrays shipped in the npm `mnist` package to IDX files.

    npm pack mnist && tar xzf mnist-*.tgz
    python3 tools/mnist_from_npm.py package data/mnist

Writes train-{images-idx3,labels-idx1}-ubyte (9000 digits) and
t10k-{images-idx3,labels-idx1}-ubyte (1000 digits). The split is a seeded
shuffle, so reruns produce identical bytes.
"""

import argparse
import json
import pathlib
import random
import struct

SIDE = 28
PIXELS = SIDE * SIDE


def load_digits(package: pathlib.Path):
    samples = []
    for label in range(10):
        path = package / "src" / "digits" / f"{label}.json"
        values = json.loads(path.read_text())["data"]
        if len(values) % PIXELS:
            raise SystemExit(f"{path}: length {len(values)} is not a multiple of {PIXELS}")
        for start in range(0, len(values), PIXELS):
            pixels = bytes(min(255, max(0, round(v * 255))) for v in values[start:start + PIXELS])
            samples.append((pixels, label))
    return samples


def write_idx(out: pathlib.Path, stem: str, samples):
    images = struct.pack(">IIII", 0x803, len(samples), SIDE, SIDE) + b"".join(p for p, _ in samples)
    labels = struct.pack(">II", 0x801, len(samples)) + bytes(l for _, l in samples)
    (out / f"{stem}-images-idx3-ubyte").write_bytes(images)
    (out / f"{stem}-labels-idx1-ubyte").write_bytes(labels)


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("package", type=pathlib.Path, help="extracted npm package directory")
    ap.add_argument("out", type=pathlib.Path, help="output directory")
    ap.add_argument("--test", type=int, default=1000, help="digits held out for t10k files")
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()

    samples = load_digits(args.package)
    random.Random(args.seed).shuffle(samples)
    args.out.mkdir(parents=True, exist_ok=True)
    write_idx(args.out, "t10k", samples[:args.test])
    write_idx(args.out, "train", samples[args.test:])
    print(f"wrote {len(samples) - args.test} train and {args.test} test digits to {args.out}")


if __name__ == "__main__":
    main()
