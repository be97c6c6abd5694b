# -*- coding: utf-8 -*-
import hashlib
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Sequence, TypeVar

import numpy as np

T = TypeVar("T")
R = TypeVar("R")


def derive_seed(seed: int, *keys) -> int:
    """
    Per-instance seed = hash(seed, keys...); stable across processes and worker counts
    """
    digest = hashlib.blake2b(repr((int(seed),) + tuple(keys)).encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "little") >> 1


def make_rng(seed: int, *keys) -> np.random.Generator:
    return np.random.default_rng(derive_seed(seed, *keys) if keys else seed)


def run_ordered(func: Callable[[T], R], items: Sequence[T], workers: int = 1) -> List[R]:
    """
    Map ``func`` over ``items`` and return results in item order whatever the worker count
    """
    if workers <= 1 or len(items) <= 1:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items))


def format_float(value: float) -> str:
    return format(float(value), ".17g")


def snake_to_kebab(name: str) -> str:
    return name.strip("_").replace("_", "-")
