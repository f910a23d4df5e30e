"""Packaged default characterization data.

The shipped files are synthetic but physically plausible 22 nm-class
numbers; see the repository README for provenance notes and the
``tools/gen_fixtures.py`` script that regenerates them.
"""

from importlib import resources


def fixture_path(name: str):
    """Filesystem path of a packaged fixture file."""
    path = resources.files(__package__) / name
    if not path.is_file():
        raise FileNotFoundError(f"no packaged fixture named {name!r}")
    return path
