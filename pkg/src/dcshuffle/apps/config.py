"""dcshuffle.apps.config module"""
import json
import logging
from datetime import datetime
from pathlib import Path
from typing import Any
from typing import Literal
from typing import Optional
from typing import Type
from typing import Union

import yaml
from clamfig import deserialize
from clamfig import Serializable
from clamfig import serialize

from dcshuffle.errors import ConfigError
from dcshuffle.utils.home import dcshuffle_homedir

logger = logging.getLogger(__name__)

config_formats = Literal["yaml", "json"]


class ConfigOptions(Serializable):
    """Dataclass of options persisted in a config file

    Subclasses declare one attribute per option, with its default.
    """

    pass


class ConfigFile:
    """Configuration File

    Loads and stores a `ConfigOptions` object as a human readable
    YAML or JSON file. A default file is written when none exists.
    """

    @property
    def config_file(self) -> Path:
        return self.config_dir / f"{self.name}.{self.config_format}"

    def __init__(
        self,
        name: str,
        config_type: Type[ConfigOptions],
        config_dir: Optional[Union[str, Path]] = None,
        config_format: config_formats = "yaml",
    ) -> None:
        """Open (or create) a config file

        Args:
            name:
                Config filename (without extension)

            config_type:
                `ConfigOptions` subclass stored in the file

            config_dir:
                Config file folder. If None, the dcshuffle home directory is used.

            config_format:
                Either 'yaml' or 'json'

        """
        if config_format not in ("yaml", "json"):
            raise ConfigError(f"Invalid config file type: {config_format}")

        self.name = name
        self.config_type = config_type
        self.config_dir = dcshuffle_homedir(config_dir)
        self.config_format = config_format

        if self.config_file.exists():
            _ = self.get_config()
        else:
            self.save_config(self.config_type())

    def _read_state(self) -> Any:
        with open(self.config_file, "r") as f:
            if self.config_format == "yaml":
                return yaml.safe_load(f)
            return json.load(f)

    def get_config(self) -> ConfigOptions:
        """Load the configuration from file"""
        try:
            config = deserialize(self._read_state())
        except Exception as e:
            raise ConfigError(f"Error reading config file {self.config_file}") from e

        if not isinstance(config, self.config_type):
            raise ConfigError(
                f"Config file {self.config_file} holds {type(config).__name__}, "
                f"expected {self.config_type.__name__}"
            )
        return config

    def save_config(self, config: ConfigOptions) -> None:
        """Save configuration to file, backing up any existing file"""
        try:
            self.config_file.parent.mkdir(parents=True, exist_ok=True)

            if self.config_file.exists():
                dt_str = datetime.now().strftime("%Y%m%d-%H%M%S")
                path = self.config_file
                backup_file = path.with_name(path.stem + "_" + dt_str + path.suffix + ".bak")
                self.config_file.replace(backup_file)

            state = serialize(config)
            with open(self.config_file, "w") as f:
                if self.config_format == "yaml":
                    yaml.safe_dump(state, f, sort_keys=False)
                else:
                    f.write(json.dumps(state, indent=2))

            logger.info("Saved config '{}' to {}".format(self.name, self.config_file))

        except OSError as e:
            logger.error("Error saving {} to {}".format(self.name, self.config_file))
            raise ConfigError(f"Cannot write config file {self.config_file}") from e
