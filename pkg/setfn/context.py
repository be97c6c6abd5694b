# -*- coding: utf-8 -*-
import time
from typing import Any, Callable, Dict, List, Optional, Sequence, TypeVar

import numpy as np

from setfn.config import Settings
from setfn.configs import RunConfig
from setfn.reports import ReportRecord
from setfn.signals import record_emitted
from setfn.types import Sense
from setfn.utils import derive_seed, make_rng, run_ordered

T = TypeVar("T")


class RunContext:
    def __init__(self, command, config: RunConfig, settings: Settings):
        self.command = command
        self.config = config
        self.settings = settings
        self.records: List[ReportRecord] = []

    @property
    def workers(self) -> int:
        return self.settings.workers if self.settings.workers_from_env else self.config.workers

    def instance_seed(self, index: int, *keys: Any) -> int:
        return derive_seed(self.config.seed, self.command.name, index, *keys)

    def rng(self, index: int, *keys: Any) -> np.random.Generator:
        return make_rng(self.config.seed, self.command.name, index, *keys)

    def record(
        self,
        id: str,
        params: Dict[str, Any],
        measured: Dict[str, Optional[float]],
        key: Optional[str] = None,
        bound: Optional[float] = None,
        sense: Sense = Sense.LE,
        slack: Optional[float] = None,
    ) -> ReportRecord:
        return ReportRecord(
            id=id,
            params=params,
            measured=measured,
            key=key,
            bound=bound,
            sense=sense,
            slack=self.config.tol if slack is None else slack,
        )

    def emit(self, record: ReportRecord) -> ReportRecord:
        self.records.append(record)
        record_emitted.send(self.command, record=record)
        return record

    def run_instances(self, func: Callable[[int, T], ReportRecord], items: Sequence[T]) -> List[ReportRecord]:
        """
        func(index, item) per instance across workers; records are emitted in instance order
        """

        def timed(index: int) -> ReportRecord:
            start_time = time.time()
            record = func(index, items[index])
            if self.config.timing:
                record = record.copy(update={"ms": (time.time() - start_time) * 1000.0})
            return record

        return [self.emit(record) for record in run_ordered(timed, list(range(len(items))), self.workers)]
