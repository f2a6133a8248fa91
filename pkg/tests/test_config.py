"""
Unit tests covering dcshuffle config options.
"""
from dataclasses import dataclass
from dataclasses import field

import pytest
import yaml
from click.testing import CliRunner

from dcshuffle.apps.config import ConfigFile
from dcshuffle.apps.config import ConfigOptions
from dcshuffle.apps.shuffle_config import DcShuffleConfig
from dcshuffle.apps.shuffle_config import ShuffleConfig
from dcshuffle.cli.main import main
from dcshuffle.errors import ConfigError


@dataclass
class SubConfig(ConfigOptions):
    option_c: str = "abc"


@dataclass
class MyOptions(ConfigOptions):
    option_a: int = 1
    option_b: SubConfig = field(default_factory=SubConfig)


@pytest.mark.parametrize("config_format", ["yaml", "json"])
def test_config_file(tmp_path, config_format):
    config_file = tmp_path / f"myconfig.{config_format}"
    assert not config_file.exists()

    cf = ConfigFile(name="myconfig", config_type=MyOptions, config_dir=tmp_path, config_format=config_format)

    # default was created
    assert cf.config_file.exists()
    options = cf.get_config()
    assert options.option_a == 1
    assert options.option_b.option_c == "abc"

    options.option_a = 3
    cf.save_config(options)
    assert list(tmp_path.glob("myconfig*.bak"))

    cf2 = ConfigFile(name="myconfig", config_type=MyOptions, config_dir=tmp_path, config_format=config_format)
    assert cf2.get_config().option_a == 3


def test_bad_format(tmp_path):
    with pytest.raises(ConfigError):
        ConfigFile(name="x", config_type=MyOptions, config_dir=tmp_path, config_format="toml")


def test_corrupt_file(tmp_path):
    (tmp_path / "main.yaml").write_text("loglevel: [unclosed")
    with pytest.raises(ConfigError):
        DcShuffleConfig(config_dir=tmp_path)


def test_main_config(tmp_path):
    cfg = DcShuffleConfig(config_dir=tmp_path)
    assert cfg.main == ShuffleConfig()
    assert (tmp_path / "main.yaml").exists()

    cfg.main.strategy = "exhaustive"
    cfg.save()
    assert DcShuffleConfig(config_dir=tmp_path).main.strategy == "exhaustive"


def test_overrides():
    cfg = ShuffleConfig()
    new = cfg.overridden(strategy="maximal", threads=None)
    assert new.strategy == "maximal"
    assert new.threads == 1
    assert cfg.strategy == "default"

    with pytest.raises(ConfigError):
        cfg.overridden(strategy="random")
    with pytest.raises(ConfigError):
        cfg.overridden(threads=0)
    with pytest.raises(ConfigError):
        cfg.overridden(no_such_option=1)


def test_config_cmd(tmp_path):
    runner = CliRunner()
    result = runner.invoke(main, ["--config_dir", str(tmp_path), "config", "init"])
    assert not result.exception
    assert (tmp_path / "main.yaml").exists()

    result = runner.invoke(main, ["--config_dir", str(tmp_path), "config", "set", "--strategy", "maximal"])
    assert result.exit_code == 0

    result = runner.invoke(main, ["--config_dir", str(tmp_path), "config", "show"])
    assert yaml.safe_load(result.output)["strategy"] == "maximal"

    result = runner.invoke(main, ["--config_dir", str(tmp_path), "config", "set", "--strategy", "random"])
    assert result.exit_code == 2
    assert "Invalid value for '--strategy'" in result.output
    assert "maximal" in result.output


def test_config_cmd_t_prime(tmp_path):
    runner = CliRunner()
    result = runner.invoke(main, ["--config_dir", str(tmp_path), "config", "set", "--t-prime", "4"])
    assert result.exit_code == 0
    assert DcShuffleConfig(config_dir=tmp_path).main.t_prime == 4

    result = runner.invoke(main, ["--config_dir", str(tmp_path), "config", "set", "--t-prime", "0"])
    assert result.exit_code == 2
    assert DcShuffleConfig(config_dir=tmp_path).main.t_prime == 4
