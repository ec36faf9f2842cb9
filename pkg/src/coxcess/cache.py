"""On-disk cache of an enumerated group and its class structure.

File layout (all integers little-endian)::

    offset  size  content
    0       8     magic b"COXCESS\\x00"
    8       4     uint32 H, length of the JSON header
    12      H     UTF-8 JSON header
    12+H    P     payload: the arrays listed in the header, back to back
    end-32  32    SHA-256 of every preceding byte

The header holds ``format_version``, ``type`` (descriptor), ``group_order``,
``class_count``, ``npos`` and ``arrays``, a list of
``{"name", "dtype", "shape", "offset", "nbytes"}`` with offsets relative to
the payload start.  Arrays are stored C-contiguous.
"""

from __future__ import annotations

import hashlib
import json
import os
import struct
from pathlib import Path

import numpy as np

from .conjugacy import ClassStructure
from .coxeter import CoxeterSystem
from .errors import CacheChecksumError, CacheFormatError, CacheTypeMismatch, CacheVersionError
from .group import GroupTable

MAGIC = b"COXCESS\x00"
FORMAT_VERSION = 1
ENV_VAR = "COXCESS_CACHE"

_ARRAYS = (
    ("elems", lambda cs: cs.table.elems),
    ("class_index", lambda cs: cs.class_index),
    ("parent", lambda cs: cs.parent),
    ("parent_gen", lambda cs: cs.parent_gen),
    ("transporter", lambda cs: cs.transporter_index),
)


def cache_path(cache_dir: str | os.PathLike, system: CoxeterSystem) -> Path:
    return Path(cache_dir) / f"{system.descriptor}.v{FORMAT_VERSION}.cxc"


def default_cache_dir() -> str | None:
    return os.environ.get(ENV_VAR) or None


def dump_bytes(cs: ClassStructure) -> bytes:
    arrays = []
    payload = bytearray()
    for name, get in _ARRAYS:
        a = np.ascontiguousarray(get(cs))
        a = a.astype(a.dtype.newbyteorder("<"), copy=False)
        arrays.append(
            {"name": name, "dtype": a.dtype.str, "shape": list(a.shape), "offset": len(payload), "nbytes": a.nbytes}
        )
        payload += a.tobytes()
    header = {
        "format_version": FORMAT_VERSION,
        "type": cs.system.descriptor,
        "group_order": len(cs.table),
        "class_count": len(cs.classes),
        "npos": cs.system.npos,
        "arrays": arrays,
    }
    hbytes = json.dumps(header, sort_keys=True).encode()
    body = MAGIC + struct.pack("<I", len(hbytes)) + hbytes + bytes(payload)
    return body + hashlib.sha256(body).digest()


def store(cs: ClassStructure, path: str | os.PathLike) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_bytes(dump_bytes(cs))
    os.replace(tmp, path)
    return path


def read_header(data: bytes) -> tuple[dict, int]:
    if len(data) < len(MAGIC) + 4 + 32 or not data.startswith(MAGIC):
        raise CacheFormatError("not a coxcess cache file")
    body, digest = data[:-32], data[-32:]
    if hashlib.sha256(body).digest() != digest:
        raise CacheChecksumError("cache checksum mismatch")
    (hlen,) = struct.unpack_from("<I", data, len(MAGIC))
    start = len(MAGIC) + 4
    try:
        header = json.loads(data[start : start + hlen])
    except ValueError as exc:
        raise CacheFormatError(f"unreadable cache header: {exc}") from None
    return header, start + hlen


def load_bytes(data: bytes, system: CoxeterSystem) -> ClassStructure:
    header, base = read_header(data)
    if header.get("format_version") != FORMAT_VERSION:
        raise CacheVersionError(
            f"cache format version {header.get('format_version')} is not supported (expected {FORMAT_VERSION})"
        )
    if header.get("type") != system.descriptor:
        raise CacheTypeMismatch(f"cache holds {header.get('type')}, requested {system.descriptor}")
    if header.get("group_order") != system.group_order or header.get("npos") != system.npos:
        raise CacheFormatError("cache header disagrees with the group")
    arrays = {}
    payload_end = len(data) - 32
    for spec in header["arrays"]:
        lo = base + spec["offset"]
        hi = lo + spec["nbytes"]
        if hi > payload_end:
            raise CacheFormatError(f"array {spec['name']} runs past the payload")
        a = np.frombuffer(data, dtype=np.dtype(spec["dtype"]), count=int(np.prod(spec["shape"])), offset=lo)
        arrays[spec["name"]] = a.reshape(spec["shape"]).astype(np.dtype(spec["dtype"]).newbyteorder("="))
    missing = {name for name, _ in _ARRAYS} - arrays.keys()
    if missing:
        raise CacheFormatError(f"cache lacks arrays {sorted(missing)}")
    elems = arrays["elems"].astype(system.dtype)
    table = GroupTable(system, budget=system.group_order, elems=elems)
    cs = ClassStructure(table, _state=arrays)
    if len(cs.classes) != header["class_count"]:
        raise CacheFormatError("class count in header does not match the payload")
    return cs


def load(path: str | os.PathLike, system: CoxeterSystem) -> ClassStructure:
    return load_bytes(Path(path).read_bytes(), system)
