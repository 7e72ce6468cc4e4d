"""
TreeCode Hub - Configuration Manager
Loads benchmark, codec and output settings from a JSON file
"""

import copy
import json
import logging
from pathlib import Path
from typing import Any, Dict, Union

from .errors import ConfigError

logger = logging.getLogger(__name__)

DEFAULT_CONFIG_FILE = "treecode_config.json"

DEFAULT_CONFIG: Dict[str, Dict[str, Any]] = {
    "benchmark": {
        "n_min": 1,
        "n_max": 50,
        "samples_per_n": 10000,
        "seed": 2023,
        "exhaustive_threshold": 10000,
        "workers": 1,
    },
    "codec": {
        "decode_search_limit": 200000,
    },
    "output": {
        "float_precision": 4,
        "log_level": "WARNING",
    },
}


class ConfigManager:
    """Manage settings stored in a JSON document of named sections"""

    def __init__(self, config_path: Union[str, Path, None] = DEFAULT_CONFIG_FILE,
                 create: bool = True):
        self.config_path = Path(config_path) if config_path is not None else None
        self.create = create
        self.config_data = self._load_config()

    def _load_config(self) -> Dict[str, Any]:
        """Load the file, writing the defaults when it does not exist yet"""
        if self.config_path is None:
            return copy.deepcopy(DEFAULT_CONFIG)
        if self.config_path.exists():
            try:
                with open(self.config_path, "r", encoding="utf-8") as f:
                    data = json.load(f)
            except (OSError, json.JSONDecodeError) as exc:
                raise ConfigError(f"cannot read {self.config_path}: {exc}") from None
            if not isinstance(data, dict) or not all(isinstance(v, dict) for v in data.values()):
                raise ConfigError(f"{self.config_path} must map section names to objects")
            return data

        data = copy.deepcopy(DEFAULT_CONFIG)
        if self.create:
            self._save_config(data)
            logger.info("wrote default configuration to %s", self.config_path)
        return data

    def _save_config(self, data: Dict[str, Any]):
        with open(self.config_path, "w", encoding="utf-8") as f:
            json.dump(data, f, indent=2)
            f.write("\n")

    def get(self, section: str, key: str, default: Any = None) -> Any:
        """File value, then built-in default, then ``default``"""
        value = self.config_data.get(section, {}).get(key)
        if value is not None:
            return value
        return DEFAULT_CONFIG.get(section, {}).get(key, default)

    def section(self, name: str) -> Dict[str, Any]:
        merged = dict(DEFAULT_CONFIG.get(name, {}))
        merged.update(self.config_data.get(name, {}))
        return merged
