"""Pytest fixtures used for testing dcshuffle"""
import pytest

from dcshuffle.apps.shuffle_config import DcShuffleConfig
from dcshuffle.data.instance_catalog import instance_catalog
from dcshuffle.model.instance import derive_shuffle_problem


@pytest.fixture
def ex1_instance():
    """Three nodes mapping two of three batches each"""
    return instance_catalog.get("ex1")


@pytest.fixture
def ex2_instance():
    """Six nodes mapping two of three batches each"""
    return instance_catalog.get("ex2")


@pytest.fixture
def ex1_problem(ex1_instance):
    return derive_shuffle_problem(ex1_instance)


@pytest.fixture
def ex2_problem(ex2_instance):
    return derive_shuffle_problem(ex2_instance)


@pytest.fixture
def config_dir(tmp_path):
    """Temporary config directory with console logging kept quiet"""
    cfg = DcShuffleConfig(config_dir=tmp_path)
    cfg.main.loglevel = "ERROR"
    cfg.save()
    return tmp_path
