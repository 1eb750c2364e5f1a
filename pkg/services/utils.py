from enum import Enum
from typing import Any

import numpy as np

from models.state import DensityMatrix, PureState


def complex_pair(z: complex) -> list[float]:
    z = complex(z)
    return [float(z.real), float(z.imag)]


def array_to_pairs(arr: np.ndarray) -> Any:
    """Complex array → nested lists with each entry as [re, im]."""
    if arr.ndim == 0:
        return complex_pair(arr.item())
    return [array_to_pairs(row) for row in arr]


def deep_serialize(obj: Any) -> Any:
    """
    Recursively convert objects to JSON-safe primitives.

    States serialize to their file formats, so a reported state can be
    fed straight back into `analyze`.
    """
    if obj is None:
        return None
    if isinstance(obj, DensityMatrix):
        return {"qubits": obj.qubits, "matrix": array_to_pairs(obj.mat)}
    if isinstance(obj, PureState):
        return {"qubits": obj.qubits, "amps": array_to_pairs(obj.amps)}
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, np.ndarray):
        if np.iscomplexobj(obj):
            return array_to_pairs(obj)
        return obj.tolist()
    if isinstance(obj, np.generic):
        return deep_serialize(obj.item())
    if isinstance(obj, complex):
        return complex_pair(obj)
    if hasattr(obj, "model_dump"):
        fields = {name: getattr(obj, name) for name in type(obj).model_fields}
        return deep_serialize(fields)
    if isinstance(obj, dict):
        return {k: deep_serialize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set)):
        return [deep_serialize(v) for v in obj]
    if isinstance(obj, (str, int, float, bool)):
        return obj
    try:
        return deep_serialize(obj.__dict__)
    except Exception:
        return str(obj)
