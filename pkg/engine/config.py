import os
import json
from dataclasses import dataclass, fields, replace
from typing import Any, Dict, Optional

from errors import ContractViolation
from logger import logger


CONFIG_FILE_PATH = os.path.join(os.path.dirname(__file__), "config.json")
MEMORY_BUDGET_ENV = "MMRANK_MEMORY_BUDGET"


@dataclass(frozen=True)
class EngineConfig:
    step_limit: int = 10_000_000
    fp_bit_cap: int = 32
    cache_capacity: int = 3_000_000
    shard_count: int = 997
    thread_count: int = 1
    memory_budget: int = 8 << 30

    @classmethod
    def load(cls, path: Optional[str] = None, **overrides: Any) -> "EngineConfig":
        """Defaults from the JSON file, then MMRANK_MEMORY_BUDGET, then non-None overrides."""
        path = path or CONFIG_FILE_PATH
        try:
            with open(path, "r") as f:
                values: Dict[str, Any] = json.load(f)
        except json.JSONDecodeError as e:
            raise ContractViolation(f"invalid config file {path}: {e}")
        known = {f.name for f in fields(cls)}
        unknown = set(values) - known
        if unknown:
            raise ContractViolation(f"unknown config keys in {path}: {sorted(unknown)}")
        if values.get("thread_count") is None:
            values["thread_count"] = os.cpu_count() or 1
        budget = os.environ.get(MEMORY_BUDGET_ENV)
        if budget:
            try:
                values["memory_budget"] = int(float(budget))
            except ValueError:
                raise ContractViolation(f"{MEMORY_BUDGET_ENV}={budget!r} is not a byte count")
        for key, value in overrides.items():
            if key not in known:
                raise ContractViolation(f"unknown config override {key!r}")
            if value is not None:
                values[key] = value
        config = cls(**values)
        config.validate()
        logger.debug("engine config loaded", extra={"path": path, **values})
        return config

    def with_overrides(self, **overrides: Any) -> "EngineConfig":
        config = replace(self, **{k: v for k, v in overrides.items() if v is not None})
        config.validate()
        return config

    def validate(self):
        checks = [
            (self.step_limit >= 1, "step_limit must be >= 1"),
            (1 <= self.fp_bit_cap <= 32, "fp_bit_cap must be in 1..32"),
            (self.cache_capacity >= 2, "cache_capacity must be >= 2"),
            (self.shard_count >= 1, "shard_count must be >= 1"),
            (self.thread_count >= 1, "thread_count must be >= 1"),
            (self.memory_budget > 0, "memory_budget must be positive"),
        ]
        for ok, message in checks:
            if not ok:
                raise ContractViolation(message)
