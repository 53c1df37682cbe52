from dataclasses import dataclass, fields
from typing import Any, Dict, List
from chargedfock.scalar import MODES, Scalar, ScalarContext
from chargedfock.truncation import Truncation


FAULTS = ("none", "sugawara")


@dataclass
class RunConfig:
    alpha0: str = "1/2"
    alpha_multiplier: int = 1
    beta_multiplier: int = 0
    level_cutoff: int = 10
    j_min: int = -2
    j_max: int = 2
    lam: str = "0"
    arithmetic: str = "exact-rational"
    tolerance: float = 0.0
    seed: int = 0
    output: str = None
    n_max: int = 512
    m_list: str = "0"
    m_range: int = 2
    interior_buffer: int = 6
    samples: int = 2
    inject_fault: str = "none"

    def validate(self) -> None:
        if self.arithmetic not in MODES:
            raise ValueError(f"arithmetic must be one of {MODES}, got {self.arithmetic!r}")
        if self.inject_fault not in FAULTS:
            raise ValueError(f"inject_fault must be one of {FAULTS}, got {self.inject_fault!r}")
        if self.level_cutoff < 0 or self.interior_buffer < 0 or self.samples < 0 or self.m_range < 0:
            raise ValueError("level_cutoff, interior_buffer, samples and m_range must be nonnegative")
        if self.n_max < 1:
            raise ValueError("n_max must be positive")
        ctx = self.context()
        self.truncation(ctx)
        self.lambda_value(ctx)
        self.m_values()

    def context(self) -> ScalarContext:
        return ScalarContext(self.arithmetic, self.tolerance)

    def alpha0_value(self, ctx: ScalarContext = None) -> Scalar:
        return (ctx or self.context()).parse(self.alpha0)

    def alpha(self, ctx: ScalarContext = None) -> Scalar:
        return self.alpha_multiplier * self.alpha0_value(ctx)

    def lambda_value(self, ctx: ScalarContext = None) -> Scalar:
        return (ctx or self.context()).parse(self.lam)

    def truncation(self, ctx: ScalarContext = None) -> Truncation:
        return Truncation(self.level_cutoff, self.j_min, self.j_max, self.alpha0_value(ctx))

    def m_values(self) -> List[int]:
        try:
            return [int(token) for token in self.m_list.replace(",", " ").split()]
        except ValueError as e:
            raise ValueError(f"m_list must be a list of integers, got {self.m_list!r}") from e

    def to_dict(self) -> Dict[str, Any]:
        return {RunConfigBuilder.key_of(f.name): getattr(self, f.name) for f in fields(self)}


class RunConfigBuilder:
    """defaults < key=value config file < command-line flags"""
    RENAMED = {"lambda": "lam"}

    @staticmethod
    def key_of(field_name: str) -> str:
        for key, name in RunConfigBuilder.RENAMED.items():
            if name == field_name:
                return key
        return field_name

    @staticmethod
    def field_of(key: str) -> str:
        return RunConfigBuilder.RENAMED.get(key, key)

    def __init__(self):
        self.types: Dict[str, type] = {f.name: f.type for f in fields(RunConfig)}

    def convert(self, key: str, text: str) -> Any:
        name = self.field_of(key)
        if name not in self.types:
            raise ValueError(f"Unknown config key: {key}")
        kind = self.types[name]
        if kind is int:
            return int(text)
        if kind is float:
            return float(text)
        return text

    def read_config_file(self, path: str) -> Dict[str, Any]:
        values = {}
        with open(path, "r") as f:
            for lineno, line in enumerate(f, start=1):
                line = line.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise ValueError(f"{path}:{lineno}: expected key=value, got {line!r}")
                key, text = (token.strip() for token in line.split("=", 1))
                try:
                    values[self.field_of(key)] = self.convert(key, text)
                except ValueError as e:
                    raise ValueError(f"{path}:{lineno}: {e}") from e
        return values

    def build(self, config_file: str = None, overrides: Dict[str, Any] = None) -> RunConfig:
        values = {}
        if config_file:
            values.update(self.read_config_file(config_file))
        for key, value in (overrides or {}).items():
            if value is None:
                continue
            name = self.field_of(key)
            if name not in self.types:
                raise ValueError(f"Unknown config key: {key}")
            values[name] = value
        config = RunConfig(**values)
        config.validate()
        return config
