"""MNIST IDX reading and writing, binarisation and split loading."""

from __future__ import annotations

import gzip
import struct
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, NamedTuple

import numpy as np

from .errors import BadMagic, CountMismatch, DimensionMismatch, IdxError, TruncatedFile

IMAGE_MAGIC = 0x00000803
LABEL_MAGIC = 0x00000801
DEFAULT_THRESHOLD = 127

# IDX layout: 4-byte big-endian magic, one big-endian uint32 per dimension,
# then the unsigned-byte payload in row-major order.


def _read_bytes(source) -> bytes:
    if isinstance(source, (bytes, bytearray, memoryview)):
        data = bytes(source)
    else:
        data = Path(source).read_bytes()
    if data[:2] == b"\x1f\x8b":
        data = gzip.decompress(data)
    return data


def _parse(data: bytes, magic: int, ndim: int) -> np.ndarray:
    header_len = 4 + 4 * ndim
    if len(data) < 4:
        raise TruncatedFile(f"file is {len(data)} bytes, too short for a magic number")
    (found,) = struct.unpack(">I", data[:4])
    if found != magic:
        raise BadMagic(f"bad magic {found} (0x{found:08x}), expected {magic} (0x{magic:08x})")
    if len(data) < header_len:
        raise TruncatedFile(f"header needs {header_len} bytes, file has {len(data)}")
    dims = struct.unpack(f">{ndim}I", data[4:header_len])
    expected = int(np.prod(dims, dtype=np.int64))
    payload = len(data) - header_len
    if payload < expected:
        raise TruncatedFile(f"header promises {expected} payload bytes, found {payload}")
    if payload > expected:
        raise DimensionMismatch(
            f"header dimensions {dims} need {expected} payload bytes, found {payload}"
        )
    return np.frombuffer(data, dtype=np.uint8, offset=header_len).reshape(dims)


def parse_idx_images(source) -> np.ndarray:
    """``(count, rows, cols)`` uint8 array from IDX image bytes or a file path."""
    return _parse(_read_bytes(source), IMAGE_MAGIC, 3)


def parse_idx_labels(source) -> np.ndarray:
    return _parse(_read_bytes(source), LABEL_MAGIC, 1)


def encode_idx_images(images) -> bytes:
    images = np.asarray(images, dtype=np.uint8)
    n, rows, cols = images.shape
    return struct.pack(">IIII", IMAGE_MAGIC, n, rows, cols) + images.tobytes()


def encode_idx_labels(labels) -> bytes:
    labels = np.asarray(labels, dtype=np.uint8)
    return struct.pack(">II", LABEL_MAGIC, len(labels)) + labels.tobytes()


def binarize(gray, threshold: int = DEFAULT_THRESHOLD) -> np.ndarray:
    """Object pixels are those strictly brighter than ``threshold``."""
    return np.asarray(gray) > threshold


class LabeledSample(NamedTuple):
    image: np.ndarray
    label: int


@dataclass(frozen=True)
class DatasetSplit:
    images: np.ndarray  # (n, rows, cols) bool
    labels: np.ndarray  # (n,) uint8
    provenance: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.labels)

    def __iter__(self) -> Iterator[LabeledSample]:
        for img, label in zip(self.images, self.labels):
            yield LabeledSample(img, int(label))


def load_split(image_path, label_path, threshold: int = DEFAULT_THRESHOLD, limit=None) -> DatasetSplit:
    """Load and binarise an image/label file pair in file order.

    ``limit`` keeps only the first ``limit`` samples.
    """
    images = parse_idx_images(image_path)
    labels = parse_idx_labels(label_path)
    if len(images) != len(labels):
        raise CountMismatch(
            f"{image_path} has {len(images)} images but {label_path} has {len(labels)} labels"
        )
    if labels.size and labels.max() > 9:
        raise IdxError(f"{label_path}: label {int(labels.max())} outside 0-9")
    if limit is not None:
        images = images[:limit]
        labels = labels[:limit]
    provenance = {
        "images": str(image_path),
        "labels": str(label_path),
        "threshold": threshold,
        "count": len(labels),
    }
    return DatasetSplit(binarize(images, threshold), labels.copy(), provenance)
