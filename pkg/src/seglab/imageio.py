"""8-bit image and label-map files: binary PGM (P5), PPM (P6) and PNG.

Netpbm files are parsed and written directly; PNG goes through Pillow.
Intensities are returned as floats in [0, 1], shape ``(H, W)`` for gray and
``(H, W, 3)`` for colour.
"""

from __future__ import annotations

import os

import numpy as np

from .penalty import ParameterError

# Label visualisation palette; label k is drawn with PALETTE[k % 16].
PALETTE = (
    (0, 0, 0), (230, 25, 75), (60, 180, 75), (255, 225, 25),
    (0, 130, 200), (245, 130, 48), (145, 30, 180), (70, 240, 240),
    (240, 50, 230), (210, 245, 60), (250, 190, 212), (0, 128, 128),
    (220, 190, 255), (170, 110, 40), (255, 250, 200), (128, 0, 0),
)


class ImageFormatError(OSError):
    """Unsupported, malformed or truncated image file."""


def _format_from_path(path, fmt):
    if fmt:
        return fmt.lower()
    ext = os.path.splitext(str(path))[1].lower().lstrip(".")
    if ext in ("pgm", "ppm", "png"):
        return ext
    raise ImageFormatError(f"cannot infer image format from {path!r}")


def _read_netpbm(path):
    with open(path, "rb") as fh:
        data = fh.read()
    # header: magic, width, height, maxval separated by whitespace, '#' comments
    tokens = []
    pos = 0
    while len(tokens) < 4:
        while pos < len(data) and data[pos:pos + 1].isspace():
            pos += 1
        if pos >= len(data):
            raise ImageFormatError(f"{path}: truncated Netpbm header")
        if data[pos:pos + 1] == b"#":
            while pos < len(data) and data[pos:pos + 1] not in (b"\n", b"\r"):
                pos += 1
            continue
        start = pos
        while pos < len(data) and not data[pos:pos + 1].isspace():
            pos += 1
        tokens.append(data[start:pos])
    pos += 1  # single whitespace byte before the raster
    magic = tokens[0]
    if magic not in (b"P5", b"P6"):
        raise ImageFormatError(f"{path}: unsupported Netpbm magic {magic!r} (need P5 or P6)")
    try:
        width, height, maxval = (int(t) for t in tokens[1:])
    except ValueError as exc:
        raise ImageFormatError(f"{path}: malformed Netpbm header") from exc
    if width <= 0 or height <= 0:
        raise ImageFormatError(f"{path}: invalid dimensions {width}x{height}")
    if not 0 < maxval < 256:
        raise ImageFormatError(f"{path}: maxval {maxval} unsupported, only 8-bit images are read")
    channels = 1 if magic == b"P5" else 3
    n = width * height * channels
    raster = data[pos:pos + n]
    if len(raster) < n:
        raise ImageFormatError(f"{path}: truncated raster ({len(raster)} of {n} bytes)")
    arr = np.frombuffer(raster, dtype=np.uint8).reshape(height, width, channels)
    return (arr[..., 0] if channels == 1 else arr.copy()), maxval


def _read_png(path):
    from PIL import Image

    try:
        with Image.open(path) as im:
            im.load()
            if im.format != "PNG":
                raise ImageFormatError(f"{path}: not a PNG file")
            if im.mode in ("I", "I;16", "I;16B", "F"):
                raise ImageFormatError(f"{path}: {im.mode} PNG unsupported, only 8-bit images are read")
            if im.mode == "P":
                im = im.convert("RGB")
            elif im.mode == "LA":
                im = im.convert("L")
            elif im.mode == "RGBA":
                im = im.convert("RGB")
            elif im.mode not in ("L", "RGB", "1"):
                raise ImageFormatError(f"{path}: unsupported PNG mode {im.mode}")
            if im.mode == "1":
                im = im.convert("L")
            return np.asarray(im, dtype=np.uint8).copy()
    except ImageFormatError:
        raise
    except OSError as exc:
        raise ImageFormatError(f"{path}: {exc}") from exc


def read_raw(path, fmt=None):
    """Raw uint8 raster of an image file."""
    fmt = _format_from_path(path, fmt)
    if not os.path.exists(path):
        raise FileNotFoundError(f"no such image file: {path}")
    if fmt in ("pgm", "ppm"):
        return _read_netpbm(path)[0]
    if fmt == "png":
        return _read_png(path)
    raise ImageFormatError(f"unsupported format {fmt!r}")


def load_image(path, fmt=None):
    """Load an 8-bit image as floats in [0, 1]."""
    fmt = _format_from_path(path, fmt)
    if fmt in ("pgm", "ppm"):
        if not os.path.exists(path):
            raise FileNotFoundError(f"no such image file: {path}")
        raw, maxval = _read_netpbm(path)
        return raw.astype(float) / maxval
    return read_raw(path, fmt).astype(float) / 255.0


def quantize(field):
    """Map [0, 1] floats to bytes with round-half-up."""
    f = np.asarray(field, dtype=float)
    if not np.all(np.isfinite(f)) or f.min() < 0 or f.max() > 1:
        raise ValueError("image values must be finite and lie in [0, 1]")
    return np.floor(f * 255.0 + 0.5).astype(np.uint8)


def _write_netpbm(raw, path):
    if raw.ndim == 2:
        magic = b"P5"
    elif raw.ndim == 3 and raw.shape[2] == 3:
        magic = b"P6"
    else:
        raise ValueError(f"cannot write array of shape {raw.shape} as Netpbm")
    h, w = raw.shape[:2]
    with open(path, "wb") as fh:
        fh.write(magic + b"\n%d %d\n255\n" % (w, h))
        fh.write(np.ascontiguousarray(raw, dtype=np.uint8).tobytes())


def write_raw(raw, path, fmt=None):
    fmt = _format_from_path(path, fmt)
    raw = np.asarray(raw, dtype=np.uint8)
    if fmt == "pgm" and raw.ndim != 2:
        raise ValueError("PGM needs a single-channel image")
    if fmt == "ppm" and (raw.ndim != 3 or raw.shape[2] != 3):
        raise ValueError("PPM needs a 3-channel image")
    if fmt in ("pgm", "ppm"):
        _write_netpbm(raw, path)
    elif fmt == "png":
        from PIL import Image

        Image.fromarray(raw).save(path, format="PNG")
    else:
        raise ImageFormatError(f"unsupported format {fmt!r}")


def write_image(field, path, fmt=None):
    """Write a [0, 1] image (``(H, W)`` or ``(H, W, 3)``) as 8 bits."""
    write_raw(quantize(field), path, fmt)


def write_label_map(labels, path, fmt=None):
    """Store a label map; PGM keeps raw indices, PNG uses ``PALETTE``."""
    labels = np.asarray(labels)
    if labels.ndim != 2:
        raise ValueError("label map must be 2-D")
    if labels.size and (labels.min() < 0 or labels.max() > 255):
        raise ParameterError("label maps are limited to 256 labels (0..255)")
    fmt = _format_from_path(path, fmt)
    idx = labels.astype(np.uint8)
    if fmt == "pgm":
        _write_netpbm(idx, path)
    elif fmt == "png":
        from PIL import Image

        im = Image.fromarray(idx)
        im.putpalette(palette_bytes())  # L -> P, indices unchanged
        im.save(path, format="PNG")
    else:
        raise ImageFormatError(f"label maps are written as PGM or PNG, not {fmt!r}")


def palette_bytes():
    return bytes(c for k in range(256) for c in PALETTE[k % 16])


def read_label_map(path, fmt=None):
    """Read back label indices (PGM raw values, or PNG palette indices)."""
    fmt = _format_from_path(path, fmt)
    if fmt == "png":
        from PIL import Image

        with Image.open(path) as im:
            if im.mode == "P":
                return np.asarray(im, dtype=np.uint8).astype(int)
    return read_raw(path, fmt).astype(int)
