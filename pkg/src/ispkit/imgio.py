"""8-bit PNG / binary PPM input and output for the float pipeline domain.

Stored samples map to floats as v / 255; floats quantize back with
round-half-to-even so golden images are stable across platforms.
"""

from __future__ import annotations

import io
from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError

from .errors import ImageFormatError

PNG_MAGIC = b"\x89PNG\r\n\x1a\n"


def to_bytes(img) -> np.ndarray:
    """Quantize a [0, 1] float image to uint8 (round half to even)."""
    arr = np.asarray(img, dtype=float)
    return np.rint(np.clip(arr, 0.0, 1.0) * 255.0).astype(np.uint8)


def from_bytes(raw: np.ndarray) -> np.ndarray:
    """Map uint8 samples to floats in [0, 1]."""
    return np.asarray(raw, dtype=float) / 255.0


def _decode_ppm(data: bytes) -> np.ndarray:
    # Binary PPM (P6), maxval 255. Header tokens may be separated by any
    # whitespace or comment lines.
    tokens = []
    pos = 2  # past "P6"
    while len(tokens) < 3:
        while pos < len(data) and data[pos : pos + 1].isspace():
            pos += 1
        if pos < len(data) and data[pos : pos + 1] == b"#":
            while pos < len(data) and data[pos : pos + 1] != b"\n":
                pos += 1
            continue
        start = pos
        while pos < len(data) and not data[pos : pos + 1].isspace():
            pos += 1
        if start == pos:
            raise ImageFormatError("truncated PPM header")
        tokens.append(data[start:pos])
    pos += 1  # single whitespace after maxval
    try:
        width, height, maxval = (int(tok) for tok in tokens)
    except ValueError as exc:
        raise ImageFormatError(f"malformed PPM header: {exc}") from exc
    if maxval != 255:
        raise ImageFormatError(f"unsupported PPM maxval {maxval}; only 255 (8-bit) supported")
    if width < 1 or height < 1:
        raise ImageFormatError(f"invalid PPM dimensions {width}x{height}")
    payload = data[pos : pos + width * height * 3]
    if len(payload) != width * height * 3:
        raise ImageFormatError(
            f"truncated PPM payload: expected {width * height * 3} bytes, got {len(payload)}"
        )
    return np.frombuffer(payload, dtype=np.uint8).reshape(height, width, 3)


def _decode_png(data: bytes) -> np.ndarray:
    try:
        with Image.open(io.BytesIO(data)) as im:
            if im.mode not in ("RGB", "RGBA", "L", "P", "LA"):
                raise ImageFormatError(f"unsupported PNG mode {im.mode}")
            return np.asarray(im.convert("RGB"), dtype=np.uint8)
    except UnidentifiedImageError as exc:
        raise ImageFormatError(f"malformed PNG data: {exc}") from exc


def decode_image(data: bytes) -> np.ndarray:
    """Decode PNG or binary PPM bytes to a float image in [0, 1]."""
    if data.startswith(PNG_MAGIC):
        raw = _decode_png(data)
    elif data.startswith(b"P6"):
        raw = _decode_ppm(data)
    else:
        raise ImageFormatError("unsupported image format (expected PNG or binary PPM)")
    return from_bytes(raw)


def load_image(path) -> np.ndarray:
    """Load a PNG or PPM file as a float image in [0, 1]."""
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"no such image file: {path}")
    return decode_image(path.read_bytes())


def encode_png(img) -> bytes:
    buf = io.BytesIO()
    Image.fromarray(to_bytes(img), mode="RGB").save(buf, format="PNG")
    return buf.getvalue()


def encode_ppm(img) -> bytes:
    raw = to_bytes(img)
    height, width = raw.shape[:2]
    return b"P6\n%d %d\n255\n" % (width, height) + raw.tobytes()


def save_image(img, path, fmt: str | None = None) -> None:
    """Write a [0, 1] float image as 8-bit PNG or binary PPM.

    Format is taken from ``fmt`` ("png" or "ppm") or the file suffix.
    """
    path = Path(path)
    if fmt is None:
        fmt = path.suffix.lstrip(".").lower() or "png"
    fmt = fmt.lower()
    if fmt == "png":
        path.write_bytes(encode_png(img))
    elif fmt == "ppm":
        path.write_bytes(encode_ppm(img))
    else:
        raise ImageFormatError(f"unsupported output format {fmt!r} (png or ppm)")
