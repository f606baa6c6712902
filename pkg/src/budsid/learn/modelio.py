"""Binary model files.

BIDM holds float32 tensors (CNN weights or SVM support data); BIDQ holds the
int8 dynamic-range form of a CNN. Both are little-endian, versioned, and
byte-stable: the same model always serializes to the same bytes.
"""

from __future__ import annotations

import io
import struct

import numpy as np

from .cnn import TENSOR_ORDER, CnnModel
from .svm import BinaryProblem, SvmModel

MAGIC_FLOAT = b"BIDM"
MAGIC_QUANT = b"BIDQ"
FORMAT_VERSION = 1
KIND_CNN = 1
KIND_SVM = 2

_QUANT_WEIGHTS = ("conv_w", "w1", "w2", "w3")
_QUANT_BIASES = ("conv_b", "b1", "b2", "b3")


def _pack_array(out: io.BytesIO, arr: np.ndarray, dtype: str) -> None:
    out.write(struct.pack("<I", arr.ndim))
    out.write(struct.pack(f"<{arr.ndim}I", *arr.shape))
    out.write(np.ascontiguousarray(arr, dtype=np.dtype(dtype).newbyteorder("<")).tobytes())


def _unpack_array(buf: io.BytesIO, dtype: str) -> np.ndarray:
    (ndim,) = struct.unpack("<I", buf.read(4))
    shape = struct.unpack(f"<{ndim}I", buf.read(4 * ndim))
    dt = np.dtype(dtype).newbyteorder("<")
    count = int(np.prod(shape)) if shape else 1
    raw = buf.read(count * dt.itemsize)
    if len(raw) != count * dt.itemsize:
        raise ValueError("truncated tensor blob")
    return np.frombuffer(raw, dtype=dt).reshape(shape).astype(dtype)


def serialize_model(model) -> bytes:
    out = io.BytesIO()
    out.write(MAGIC_FLOAT)
    out.write(struct.pack("<I", FORMAT_VERSION))
    if isinstance(model, CnnModel):
        out.write(struct.pack("<III", KIND_CNN, model.n_samples, model.n_classes))
        for name in TENSOR_ORDER:
            _pack_array(out, getattr(model, name), "float32")
    elif isinstance(model, SvmModel):
        out.write(struct.pack("<III", KIND_SVM, model.n_features, len(model.problems)))
        out.write(struct.pack("<dd", model.c, model.gamma))
        out.write(struct.pack("<d", model.cv_accuracy))
        _pack_array(out, model.classes.astype(np.int32), "int32")
        for p in model.problems:
            out.write(struct.pack("<iid", p.positive, p.negative, p.bias))
            _pack_array(out, p.support_vectors, "float32")
            _pack_array(out, p.dual_coef, "float32")
    else:
        raise TypeError(f"cannot serialize {type(model).__name__}")
    return out.getvalue()


def deserialize_model(blob: bytes):
    buf = io.BytesIO(blob)
    magic = buf.read(4)
    if magic != MAGIC_FLOAT:
        raise ValueError(f"bad magic {magic!r}; expected {MAGIC_FLOAT!r}")
    (version,) = struct.unpack("<I", buf.read(4))
    if version != FORMAT_VERSION:
        raise ValueError(f"unsupported format version {version}")
    (kind,) = struct.unpack("<I", buf.read(4))
    if kind == KIND_CNN:
        n_samples, n_classes = struct.unpack("<II", buf.read(8))
        tensors = {name: _unpack_array(buf, "float32") for name in TENSOR_ORDER}
        return CnnModel(n_samples=n_samples, n_classes=n_classes, **tensors)
    if kind == KIND_SVM:
        n_features, n_problems = struct.unpack("<II", buf.read(8))
        c, gamma = struct.unpack("<dd", buf.read(16))
        (cv_accuracy,) = struct.unpack("<d", buf.read(8))
        classes = _unpack_array(buf, "int32").astype(np.int64)
        problems = []
        for _ in range(n_problems):
            pos, neg, bias = struct.unpack("<iid", buf.read(16))
            sv = _unpack_array(buf, "float32").astype(np.float64)
            coef = _unpack_array(buf, "float32").astype(np.float64)
            problems.append(BinaryProblem(pos, neg, sv, coef, bias))
        return SvmModel(n_features, classes, c, gamma, problems, cv_accuracy)
    raise ValueError(f"unknown model kind {kind}")


def serialize_quant(qmodel) -> bytes:
    from ..quant import QuantModel  # local import to avoid a cycle

    if not isinstance(qmodel, QuantModel):
        raise TypeError(f"cannot serialize {type(qmodel).__name__} as BIDQ")
    out = io.BytesIO()
    out.write(MAGIC_QUANT)
    out.write(struct.pack("<I", FORMAT_VERSION))
    out.write(struct.pack("<II", qmodel.n_samples, qmodel.n_classes))
    for name in _QUANT_WEIGHTS:
        out.write(struct.pack("<f", qmodel.scales[name]))
        _pack_array(out, qmodel.codes[name], "int8")
    for name in _QUANT_BIASES:
        _pack_array(out, qmodel.biases[name], "float32")
    return out.getvalue()


def deserialize_quant(blob: bytes):
    from ..quant import QuantModel

    buf = io.BytesIO(blob)
    magic = buf.read(4)
    if magic != MAGIC_QUANT:
        raise ValueError(f"bad magic {magic!r}; expected {MAGIC_QUANT!r}")
    (version,) = struct.unpack("<I", buf.read(4))
    if version != FORMAT_VERSION:
        raise ValueError(f"unsupported format version {version}")
    n_samples, n_classes = struct.unpack("<II", buf.read(8))
    scales = {}
    codes = {}
    for name in _QUANT_WEIGHTS:
        (scales[name],) = struct.unpack("<f", buf.read(4))
        codes[name] = _unpack_array(buf, "int8")
    biases = {name: _unpack_array(buf, "float32") for name in _QUANT_BIASES}
    return QuantModel(n_samples, n_classes, codes, scales, biases)


def save_model(path, model) -> None:
    from ..quant import QuantModel

    blob = serialize_quant(model) if isinstance(model, QuantModel) else serialize_model(model)
    with open(path, "wb") as fh:
        fh.write(blob)


def load_model(path):
    with open(path, "rb") as fh:
        blob = fh.read()
    if blob[:4] == MAGIC_QUANT:
        return deserialize_quant(blob)
    return deserialize_model(blob)
