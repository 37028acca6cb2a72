"""Preferences persistence for trispec.

Stores a small JSON file under ``~/.trispec/prefs.json``; set ``TRISPEC_HOME``
to use another directory. Provides ``load_prefs()``, ``save_prefs()``,
``reset_prefs()`` and the seed resolution used by seeded commands.
"""
import json
import os
from pathlib import Path
from typing import Optional

from .core import DomainError
from .settings import DEFAULTS

DEFAULT_PREFS = {
    'seed': DEFAULTS['default_seed'],
    'jobs': 0,  # 0: one worker per CPU
    'format': 'text',
    'include_zeros': False,
    'verbose': 0,
}

FORMATS = ('text', 'json', 'csv')


def config_dir() -> Path:
    home = os.environ.get('TRISPEC_HOME')
    return Path(home) if home else Path.home() / '.trispec'


def config_path() -> Path:
    return config_dir() / 'prefs.json'


def coerce_value(key: str, value):
    """Coerce ``value`` to the type of the default for ``key``.

    Raises DomainError for unknown keys or values that cannot be coerced.
    """
    if key not in DEFAULT_PREFS:
        raise DomainError(f'unknown preference {key!r}')
    default_val = DEFAULT_PREFS[key]
    try:
        if isinstance(default_val, bool):
            if isinstance(value, str):
                text = value.strip().lower()
                if text not in ('1', '0', 'true', 'false', 'yes', 'no', 'on', 'off'):
                    raise ValueError(value)
                return text in ('1', 'true', 'yes', 'on')
            return bool(value)
        if isinstance(default_val, int):
            return int(value)
    except (TypeError, ValueError):
        raise DomainError(f'invalid value {value!r} for {key}') from None
    if key == 'format' and value not in FORMATS:
        raise DomainError(f'format must be one of {", ".join(FORMATS)}')
    return str(value)


def load_prefs() -> dict:
    try:
        path = config_path()
        if path.exists():
            with open(path, 'r', encoding='utf-8') as f:
                data = json.load(f)
            # merge defaults
            prefs = DEFAULT_PREFS.copy()
            for key in prefs:
                if key in data:
                    try:
                        prefs[key] = coerce_value(key, data[key])
                    except DomainError:
                        pass
            return prefs
    except Exception:
        pass
    return DEFAULT_PREFS.copy()


def save_prefs(prefs: dict) -> None:
    """Write only known keys, each coerced to the default's type."""
    out = {key: coerce_value(key, prefs.get(key, default_val))
           for key, default_val in DEFAULT_PREFS.items()}
    config_dir().mkdir(parents=True, exist_ok=True)
    with open(config_path(), 'w', encoding='utf-8') as f:
        json.dump(out, f, indent=2)


def set_pref(key: str, value) -> dict:
    prefs = load_prefs()
    prefs[key] = coerce_value(key, value)
    save_prefs(prefs)
    return prefs


def reset_prefs() -> dict:
    """Reset preferences to defaults."""
    save_prefs(DEFAULT_PREFS.copy())
    return DEFAULT_PREFS.copy()


def resolve_seed(explicit: Optional[int] = None, prefs: Optional[dict] = None) -> int:
    """``explicit`` > ``TRISPEC_SEED`` > prefs ``seed`` > the built-in default."""
    if explicit is not None:
        return int(explicit)
    env = os.environ.get('TRISPEC_SEED')
    if env is not None and env.strip():
        try:
            return int(env)
        except ValueError:
            raise DomainError(f'TRISPEC_SEED={env!r} is not an integer') from None
    prefs = load_prefs() if prefs is None else prefs
    seed = prefs.get('seed')
    return int(seed) if seed is not None else DEFAULTS['default_seed']
