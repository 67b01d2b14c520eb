import os
from typing import Optional

import yaml

from core.config import get_settings

PACKAGED_CONFIG = os.path.join(
    os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "config", "config.yaml"
)


def load_config(config_path: Optional[str] = None) -> dict:
    if config_path is None:
        config_path = get_settings().CONFIG_PATH or PACKAGED_CONFIG
    with open(config_path, "r", encoding="utf-8") as file:
        config = yaml.safe_load(file)
    return config or {}


def merged_section(section: str, override_path: Optional[str] = None) -> dict:
    """Packaged defaults for one section, overlaid with a user YAML file"""
    values = dict(load_config().get(section) or {})
    if override_path is not None:
        values.update(load_config(override_path).get(section) or {})
    return values
