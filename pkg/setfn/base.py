# -*- coding: utf-8 -*-
from fractions import Fraction
from typing import Any

import numpy as np
from pydantic import BaseModel


class BaseSchema(BaseModel):
    class Config:
        orm_mode = True
        allow_mutation = False
        arbitrary_types_allowed = True
        json_encoders = {
            np.ndarray: lambda v: v.tolist(),
            np.floating: float,
            np.integer: int,
            Fraction: float,
        }


def frozen_array(value: Any, dtype: Any = float, ndim: int = 1) -> np.ndarray:
    """
    Coerce ``value`` to a read-only numpy array; used by the field validators of every schema holding tables
    """
    array = np.array(value, dtype=dtype)
    if array.ndim != ndim:
        raise ValueError(f"expected a {ndim}-dimensional array, got shape {array.shape}")
    if dtype is float and not np.all(np.isfinite(array)):
        raise ValueError("array entries must be finite")
    array.flags.writeable = False
    return array
