#!/usr/bin/env python3
"""Fetch a desk-scale MNIST pool and write it as standard IDX files.

The source is the `mnist` npm package (10,000 labeled digits stored as
normalized floats). Pixels are converted back to bytes and written to
  <out_dir>/train-images-idx3-ubyte
  <out_dir>/train-labels-idx1-ubyte
which is the single pool the qconv tools split into train/test subsets.

Usage: python3 scripts/fetch_mnist.py [out_dir]   (default: data/mnist)
"""

import io
import json
import shutil
import struct
import subprocess
import sys
import tarfile
import tempfile
import urllib.request
from pathlib import Path

PACKAGE = "mnist"
VERSION = "1.1.0"
REGISTRY_URL = f"https://registry.npmjs.org/{PACKAGE}/-/{PACKAGE}-{VERSION}.tgz"


def fetch_tarball(tmp: Path) -> Path:
    """Try the npm CLI first (works behind package mirrors), then the registry."""
    if shutil.which("npm"):
        try:
            out = subprocess.run(
                ["npm", "pack", f"{PACKAGE}@{VERSION}"],
                cwd=tmp, check=True, capture_output=True, text=True,
            ).stdout.strip().splitlines()
            return tmp / out[-1]
        except subprocess.CalledProcessError as err:
            print(f"npm pack failed ({err}); falling back to the registry")
    dest = tmp / f"{PACKAGE}-{VERSION}.tgz"
    with urllib.request.urlopen(REGISTRY_URL) as resp:
        dest.write_bytes(resp.read())
    return dest


def main() -> int:
    out_dir = Path(sys.argv[1] if len(sys.argv) > 1 else "data/mnist")
    out_dir.mkdir(parents=True, exist_ok=True)

    images = []
    labels = []
    with tempfile.TemporaryDirectory() as tmpdir:
        tmp = Path(tmpdir)
        tarball = fetch_tarball(tmp)
        with tarfile.open(tarball, "r:gz") as tar:
            for digit in range(10):
                member = tar.getmember(f"package/src/digits/{digit}.json")
                data = json.load(io.TextIOWrapper(tar.extractfile(member)))["data"]
                count = len(data) // 784
                for i in range(count):
                    px = data[i * 784 : (i + 1) * 784]
                    images.append(bytes(min(255, max(0, round(p * 255))) for p in px))
                    labels.append(digit)
                print(f"digit {digit}: {count} images")

    img_path = out_dir / "train-images-idx3-ubyte"
    with open(img_path, "wb") as f:
        f.write(struct.pack(">IIII", 0x00000803, len(images), 28, 28))
        for img in images:
            f.write(img)
    lbl_path = out_dir / "train-labels-idx1-ubyte"
    with open(lbl_path, "wb") as f:
        f.write(struct.pack(">II", 0x00000801, len(labels)))
        f.write(bytes(labels))

    print(f"wrote {len(images)} images to {img_path}")
    print(f"wrote {len(labels)} labels to {lbl_path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
