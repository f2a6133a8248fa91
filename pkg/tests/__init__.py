"""Test dcshuffle and dcshuffle subpackages."""
