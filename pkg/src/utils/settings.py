"""
Configuration loader
Reads the YAML files under config/ and applies .env overrides
"""

import copy
import os
from functools import lru_cache
from pathlib import Path

import yaml
from dotenv import load_dotenv

ROOT_DIR = Path(__file__).resolve().parents[2]
CONFIG_DIR = ROOT_DIR / 'config'

load_dotenv(ROOT_DIR / '.env')


@lru_cache(maxsize=None)
def _read_yaml(path):
    with open(path, 'r') as f:
        return yaml.safe_load(f) or {}


def load_settings(name, config_dir=None):
    """
    Load one configuration file by name

    Args:
        name: File stem under config/ ('sampling', 'bench', 'file_paths')
        config_dir: Alternative config directory

    Returns:
        dict: Parsed settings (a private copy, safe to mutate)
    """
    directory = Path(config_dir) if config_dir else CONFIG_DIR
    path = directory / f"{name}.yaml"
    if not path.exists():
        raise FileNotFoundError(f"Missing config file: {path}")
    return copy.deepcopy(_read_yaml(str(path)))


def env_flag(key, default):
    """Read a boolean environment variable ('1', 'true', 'yes' are true)"""
    value = os.getenv(key)
    if value is None:
        return default
    return value.strip().lower() in ('1', 'true', 'yes', 'on')


def resolve_path(path):
    """Resolve a config-relative path ('./logs/') against the repository root"""
    path = Path(path)
    return path if path.is_absolute() else ROOT_DIR / path
