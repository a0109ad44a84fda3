"""Reading and writing label masks as image files.

Two formats, both with one byte per pixel interpreted literally as a
label ID (0 = background, no thresholding, no palette): 8-bit grayscale
PNG and binary PGM (P5, maxval <= 255). PNG goes through Pillow; the PGM
parser is self-contained since the format is a short header plus raw
bytes.
"""

from __future__ import annotations

import io
import os

import numpy as np
from PIL import Image

from .mask import LabelMask

_PNG_MAGIC = b"\x89PNG\r\n\x1a\n"


def _load_png(path: str) -> np.ndarray:
    with Image.open(path) as img:
        if img.mode == "L":
            return np.asarray(img, dtype=np.uint8)
        if img.mode in ("I", "I;16", "I;16B", "I;16L", "F", "1"):
            raise ValueError(
                f"{path}: unsupported bit depth (mode {img.mode}); "
                "masks must be 8-bit grayscale"
            )
        raise ValueError(
            f"{path}: color image (mode {img.mode}); masks must be 8-bit grayscale"
        )


def _pgm_token(stream: io.BufferedReader) -> bytes:
    """Next whitespace-delimited header token, skipping '#' comments."""
    token = b""
    while True:
        ch = stream.read(1)
        if not ch:
            raise ValueError("truncated PGM header")
        if ch == b"#":
            while ch and ch != b"\n":
                ch = stream.read(1)
            continue
        if ch.isspace():
            if token:
                return token
            continue
        token += ch


def _load_pgm(path: str) -> np.ndarray:
    with open(path, "rb") as f:
        magic = f.read(2)
        if magic != b"P5":
            raise ValueError(f"{path}: not a binary PGM (P5) file")
        width = int(_pgm_token(f))
        height = int(_pgm_token(f))
        maxval = int(_pgm_token(f))
        if width < 1 or height < 1:
            raise ValueError(f"{path}: invalid PGM dimensions {width}x{height}")
        if maxval < 1:
            raise ValueError(f"{path}: invalid PGM maxval {maxval}")
        if maxval > 255:
            raise ValueError(
                f"{path}: unsupported bit depth (maxval {maxval}); "
                "masks must be 8-bit grayscale"
            )
        payload = f.read(width * height)
        if len(payload) != width * height:
            raise ValueError(
                f"{path}: truncated PGM payload, expected {width * height} bytes, "
                f"got {len(payload)}"
            )
    return np.frombuffer(payload, dtype=np.uint8).reshape(height, width)


def load_mask(path, expected_dims=None) -> LabelMask:
    """Load a mask file, sniffing PNG vs PGM from the leading bytes.

    ``expected_dims`` is (width, height); a mismatch is an error so a
    wrong pairing fails before any metric runs.
    """
    path = os.fspath(path)
    try:
        with open(path, "rb") as f:
            head = f.read(8)
    except OSError as exc:
        raise ValueError(f"{path}: unreadable file ({exc.strerror})") from exc
    if head.startswith(_PNG_MAGIC):
        arr = _load_png(path)
    elif head.startswith(b"P5"):
        arr = _load_pgm(path)
    else:
        raise ValueError(
            f"{path}: unrecognized format; expected 8-bit grayscale PNG or binary PGM"
        )
    if expected_dims is not None:
        ew, eh = expected_dims
        h, w = arr.shape
        if (w, h) != (ew, eh):
            raise ValueError(
                f"{path}: dimension mismatch, file is {w}x{h}, expected {ew}x{eh}"
            )
    return LabelMask(arr)


def save_mask(mask: LabelMask, path):
    """Write a mask by file suffix: .png or .pgm."""
    path = os.fspath(path)
    suffix = os.path.splitext(path)[1].lower()
    if suffix == ".png":
        Image.fromarray(np.asarray(mask.labels), mode="L").save(path, format="PNG")
    elif suffix == ".pgm":
        header = f"P5\n{mask.width} {mask.height}\n255\n".encode("ascii")
        with open(path, "wb") as f:
            f.write(header)
            f.write(mask.labels.tobytes())
    else:
        raise ValueError(f"{path}: unsupported output suffix {suffix!r}; use .png or .pgm")
