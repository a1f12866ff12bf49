import hashlib
import json
import math

import numpy as np


def round_half_away(value):
    """
    Round to the nearest integer, halves away from zero.

    :param value: real number
    :returns: python int
    """

    return int(math.copysign(math.floor(abs(value) + 0.5), value))


def to_builtin(value):
    """Convert numpy scalars and arrays (possibly nested) to json-friendly values."""
    if isinstance(value, dict):
        return {str(k): to_builtin(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_builtin(v) for v in value]
    if isinstance(value, np.ndarray):
        return to_builtin(value.tolist())
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, np.bool_):
        return bool(value)
    return value


def canonical_json(obj):
    """Serialize with sorted keys; parsing and dumping again gives identical text."""
    return json.dumps(to_builtin(obj), sort_keys=True, indent=2, ensure_ascii=False)


def file_digest(path, chunk_size=1 << 16):
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(chunk_size), b""):
            digest.update(chunk)
    return digest.hexdigest()


def parse_values(text, kind=int):
    """Parse comma separated list like "2,4,8"; blanks are ignored."""
    return [kind(part) for part in text.split(",") if part.strip()]
