#!/usr/bin/env python3
"""Regenerate the desk image set under tests/data from scikit-image's bundled images.

Every cover is converted to 8-bit luminance, center-cropped to a square and
resampled to 512x512. The logo is the horse silhouette binarized at 64x64.
"""
import pathlib
import sys

import numpy as np
from skimage import color, data, transform, util

COVERS = [
    "camera", "astronaut", "brick", "grass", "gravel", "moon", "coffee",
    "chelsea", "coins", "immunohistochemistry", "clock", "rocket",
]


def write_pgm(path, img):
    img = np.ascontiguousarray(img, dtype=np.uint8)
    h, w = img.shape
    with open(path, "wb") as f:
        f.write(b"P5\n%d %d\n255\n" % (w, h))
        f.write(img.tobytes())


def to_gray_square(img, size):
    if img.ndim == 3:
        img = color.rgb2gray(img[..., :3])
    img = util.img_as_float(img)
    h, w = img.shape
    s = min(h, w)
    top, left = (h - s) // 2, (w - s) // 2
    img = img[top:top + s, left:left + s]
    if s != size:
        img = transform.resize(img, (size, size), anti_aliasing=True)
    return np.clip(np.rint(img * 255.0), 0, 255).astype(np.uint8)


def main():
    root = pathlib.Path(sys.argv[1] if len(sys.argv) > 1 else "tests/data")
    (root / "desk").mkdir(parents=True, exist_ok=True)
    for name in COVERS:
        write_pgm(root / "desk" / f"{name}.pgm", to_gray_square(getattr(data, name)(), 512))
    horse = util.img_as_float(data.horse())
    logo = transform.resize(horse, (64, 80), anti_aliasing=True)[:, 8:72]
    write_pgm(root / "logo64.pgm", np.where(logo >= 0.5, 255, 0))


if __name__ == "__main__":
    main()
