#!/usr/bin/env python3
"""Convert the digit JSON files shipped in the npm `mnist` package to IDX.

The package bundles 10,000 MNIST digits as src/digits/<d>.json, each holding a
flat list of 784-pixel images scaled to [0, 1] with three decimals. This
script writes them back to the standard IDX container as
train-images-idx3-ubyte / train-labels-idx1-ubyte so the regular loader
can read them.

    npm pack mnist && tar xzf mnist-*.tgz
    python3 tools/scripts/mnist_npm_to_idx.py package/ /path/to/data
"""
import argparse
import json
import pathlib
import struct


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("package_dir", type=pathlib.Path)
    parser.add_argument("out_dir", type=pathlib.Path)
    args = parser.parse_args()

    images = bytearray()
    labels = bytearray()
    count = 0
    for digit in range(10):
        path = args.package_dir / "src" / "digits" / f"{digit}.json"
        data = json.loads(path.read_text())["data"]
        if len(data) % 784:
            raise SystemExit(f"{path}: length {len(data)} is not a multiple of 784")
        n = len(data) // 784
        images.extend(min(255, max(0, round(v * 255))) for v in data)
        labels.extend([digit] * n)
        count += n

    args.out_dir.mkdir(parents=True, exist_ok=True)
    with open(args.out_dir / "train-images-idx3-ubyte", "wb") as f:
        f.write(struct.pack(">IIII", 0x00000803, count, 28, 28))
        f.write(images)
    with open(args.out_dir / "train-labels-idx1-ubyte", "wb") as f:
        f.write(struct.pack(">II", 0x00000801, count))
        f.write(labels)
    print(f"wrote {count} images to {args.out_dir}")


if __name__ == "__main__":
    main()
