import pathlib
from pathlib import Path
from typing import Optional
from typing import Union

DCSHUFFLE_ROOT = Path(__file__).parent.parent


def default_homedir() -> pathlib.Path:
    """Return default home directory, creating it if necessary

    Returns:
        pathlib.Path : Path to home directory
    """
    homedir = (Path.home() / "dcshuffle").resolve().absolute()
    homedir.mkdir(parents=True, exist_ok=True)
    return homedir


def dcshuffle_homedir(homedir: Optional[Union[str, Path]] = None) -> Path:
    """dcshuffle home directory

    Returns the default home Path when none is provided.
    A homedir that is provided is created if it does not exist yet.
    """
    if homedir is None:
        return default_homedir()

    result = Path(homedir).expanduser().resolve().absolute()
    if result.exists() and not result.is_dir():
        raise NotADirectoryError(f"Not a directory: {homedir}")
    result.mkdir(parents=True, exist_ok=True)
    return result
