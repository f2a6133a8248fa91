from typing import Any
from typing import Callable

import networkx
import numpy

import dcshuffle


def show_versions(caller: Callable[[Any], None] = print, include_deps: bool = True) -> None:
    caller(f"dcshuffle {dcshuffle.__version__}")
    if include_deps:
        caller(f"networkx: Version {networkx.__version__}")
        caller(f"numpy: Version {numpy.__version__}")
