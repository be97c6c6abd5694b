# -*- coding: utf-8 -*-
from functools import lru_cache

from pydantic import BaseSettings, confloat, conint


class Settings(BaseSettings):
    workers: conint(ge=1) = 1  # type: ignore[valid-type]
    tol: confloat(gt=0) = 1e-9  # type: ignore[valid-type]
    identity_tol: confloat(gt=0) = 1e-12  # type: ignore[valid-type]
    # calibration constant of the convexity bound; only used to check estimates against it
    c_star: confloat(gt=0) = 2.0  # type: ignore[valid-type]
    rejection_budget: conint(ge=1) = 10_000  # type: ignore[valid-type]
    lp_iteration_cap: conint(ge=1) = 1_000_000  # type: ignore[valid-type]
    bisection_tol: confloat(gt=0) = 1e-10  # type: ignore[valid-type]
    bisection_max_iter: conint(ge=1) = 200  # type: ignore[valid-type]
    exact_max_atoms: conint(ge=1, le=16) = 8  # type: ignore[valid-type]
    log_level: str = "INFO"

    class Config:
        env_prefix = "SETFN_"

    @property
    def workers_from_env(self) -> bool:
        return "workers" in self.__fields_set__


@lru_cache()
def get_settings() -> Settings:
    return Settings()
