"""Search and enumeration bounds, overridable from the environment.

``PPBASS_ENUM_CAP``, ``PPBASS_SEARCH_CAP``, ``PPBASS_RING_CAP`` and
``PPBASS_MASK_CAP`` replace the defaults when set.
"""
import os
from contextlib import contextmanager

DEFAULTS = {
    "ring": 256,
    "enum": 65536,
    "search": 1 << 20,
    "mask": 1 << 24,
}

_current = {}


def _load():
    for key, default in DEFAULTS.items():
        raw = os.environ.get(f"PPBASS_{key.upper()}_CAP")
        _current[key] = int(raw) if raw else default


_load()


def get(key):
    return _current[key]


def reload():
    """Re-read the environment (used by the CLI after parsing options)."""
    _load()


@contextmanager
def override(**values):
    saved = dict(_current)
    _current.update(values)
    try:
        yield
    finally:
        _current.clear()
        _current.update(saved)
