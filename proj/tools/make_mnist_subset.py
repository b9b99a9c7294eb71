#!/usr/bin/env python3
"""Write the 5000-image MNIST subset bundled with mlxtend as a label-first
MNIST CSV (label, 784 pixels per row), gzip-compressed.

usage: make_mnist_subset.py <mlxtend wheel or mnist_5k.csv.gz> <output.csv.gz>
"""
import gzip
import sys
import zipfile

MEMBER = "mlxtend/data/data/mnist_5k.csv.gz"


def read_source(path):
    if path.endswith(".whl"):
        with zipfile.ZipFile(path) as wheel:
            return gzip.decompress(wheel.read(MEMBER)).decode()
    with gzip.open(path, "rt") as fh:
        return fh.read()


def main():
    if len(sys.argv) != 3:
        sys.exit(__doc__)
    rows = read_source(sys.argv[1]).splitlines()
    out = []
    for line in rows:
        cols = line.strip().split(",")
        if len(cols) != 785:
            sys.exit(f"unexpected column count {len(cols)}")
        out.append(",".join([cols[-1]] + cols[:-1]))
    # mtime=0 keeps the archive byte-stable
    with open(sys.argv[2], "wb") as raw:
        with gzip.GzipFile(fileobj=raw, mode="wb", mtime=0) as fh:
            fh.write(("\n".join(out) + "\n").encode())


if __name__ == "__main__":
    main()
