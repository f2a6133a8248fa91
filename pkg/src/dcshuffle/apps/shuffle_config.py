import dataclasses
from dataclasses import dataclass
from dataclasses import field
from pathlib import Path
from typing import Any
from typing import Dict
from typing import Literal
from typing import Optional
from typing import Union

from dcshuffle.apps.config import ConfigFile
from dcshuffle.apps.config import ConfigOptions
from dcshuffle.errors import ConfigError

STRATEGIES = ("default", "maximal", "exhaustive")


@dataclass
class ShuffleConfig(ConfigOptions):
    """Main dcshuffle configuration object

    Budgets and strategy knobs for the region computations.
    """

    #: Control application logging level
    loglevel: Literal["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"] = "INFO"

    #: Max subsets examined by the acyclic-subset search (0 = unlimited)
    enumeration_budget: int = 0

    #: Hard cap on intermediate inequalities during elimination
    fme_row_cap: int = 20000

    #: Row count above which an elimination step runs LP redundancy removal
    redundancy_threshold: int = 40

    #: Max dimension handed to vertex enumeration
    vertex_dim_cap: int = 12

    #: Decoding-choice strategy: default, maximal or exhaustive
    strategy: str = "default"

    #: Exhaustive choices only when every sender holds at most this many messages
    exhaustive_set_cap: int = 3

    #: Max decoding choices produced by a strategy
    max_choices: int = 4096

    #: Above this many eliminated variables the inner region is checked by LP only
    inner_fme_max_victims: int = 160

    #: Restrict composites to the family scheme windows
    pair_only: bool = False

    #: Worker threads for independent computations
    threads: int = 1

    #: Bits per IV; scales simulated message length, never the rate region
    t_prime: int = 1

    def validate(self) -> None:
        if self.strategy not in STRATEGIES:
            raise ConfigError(f"Unknown strategy {self.strategy!r}, expected one of {STRATEGIES}")
        for name in (
            "enumeration_budget",
            "fme_row_cap",
            "redundancy_threshold",
            "vertex_dim_cap",
            "exhaustive_set_cap",
            "max_choices",
            "inner_fme_max_victims",
        ):
            if getattr(self, name) < 0:
                raise ConfigError(f"{name} must be nonnegative")
        if self.threads < 1:
            raise ConfigError("threads must be at least 1")
        if self.t_prime < 1:
            raise ConfigError("t_prime must be at least 1")

    def overridden(self, **overrides: Any) -> "ShuffleConfig":
        """Copy with the given non-None options replaced."""
        updates = {k: v for k, v in overrides.items() if v is not None}
        unknown = set(updates) - {f.name for f in dataclasses.fields(self)}
        if unknown:
            raise ConfigError(f"Unknown config options: {sorted(unknown)}")
        cfg = dataclasses.replace(self, **updates)
        cfg.validate()
        return cfg

    def as_dict(self) -> Dict[str, Any]:
        return dataclasses.asdict(self)


@dataclass
class DcShuffleConfig:
    """dcshuffle configuration loaded from the home (or given) directory.

    If the config file does not exist, a default will be created.
    """

    config_dir: Optional[Union[str, Path]] = None

    main: ShuffleConfig = field(default_factory=ShuffleConfig)

    # Private storage for config files
    _main_config_file: Optional[ConfigFile] = None

    def __post_init__(self) -> None:
        self._main_config_file = ConfigFile(
            name="main",
            config_type=ShuffleConfig,
            config_format="yaml",
            config_dir=self.config_dir,
        )

        main = self._main_config_file.get_config()
        assert isinstance(main, ShuffleConfig)
        main.validate()
        self.main = main

    def save(self) -> None:
        assert self._main_config_file is not None
        self.main.validate()
        self._main_config_file.save_config(self.main)
