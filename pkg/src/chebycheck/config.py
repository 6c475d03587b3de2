import os
import sys
import pathlib
import threading
from pathlib import Path
from typing import Dict, Any, Optional

import yaml
from ruamel.yaml import YAML

from chebycheck.errors import ConfigError

PROJECT_FOLDER = ".chebycheck"
PANELS_ENV_VAR = "CHEBY_DEFAULT_PANELS"


def load_yaml_file(file_path: str) -> Dict[str, Any]:
    """
    Reads and parses a YAML file, returning its contents as a Python dictionary.

    Parameters:
        file_path (str): The path to the YAML file to be read.

    Returns:
        dict: The contents of the YAML file as a dictionary. If the file is not found
        or an error occurs during parsing, an empty dictionary is returned.
    """
    try:
        with open(file_path, 'r') as yaml_file:
            return yaml.safe_load(yaml_file) or {}
    except FileNotFoundError:
        print(f"File {file_path} not found.", file=sys.stderr)
        return {}
    except yaml.YAMLError:
        print(f"Error decoding YAML from {file_path}", file=sys.stderr)
        return {}


def deep_merge(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
    """Merges override into base in place, descending into nested dictionaries."""
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(base.get(key), dict):
            deep_merge(base[key], value)
            continue
        base[key] = value
    return base


class Config:
    _debug = False
    _instance = None
    _lock = threading.RLock()  # Class-level lock for thread safety

    # ------------------------------------------------------------------------
    # Initialization
    # ------------------------------------------------------------------------

    def __new__(cls, *args, **kwargs):
        """
        Ensures that only one instance of Config exists.

        Returns:
            Config: The singleton instance of the Config class.
        """
        with cls._lock:
            if not cls._instance:
                cls._instance = super(Config, cls).__new__(cls)
        return cls._instance

    def __init__(self, root_path: Optional[str] = None):
        """
        Initializes the Config object: locates an optional project folder and loads
        the packaged defaults with any project overrides on top.
        """
        if not hasattr(self, 'is_initialized'):  # Prevent re-initialization
            self.is_initialized = True

            self.defaults_path = Path(__file__).parent / "setup_files"
            self.project_root = self.find_project_root(root_path)
            self.config_path = self.project_root / PROJECT_FOLDER if self.project_root else None

            self.data = {}
            self.load_all_configurations()

    @classmethod
    def reset(cls, root_path=None):
        """
        Completely resets the Config singleton, allowing for re-initialization.
        """
        cls._instance = None
        return cls(root_path=root_path)

    def find_project_root(self, root_path: Optional[str] = None) -> Optional[pathlib.Path]:
        # An explicit root must contain the project folder
        if root_path:
            custom_root = pathlib.Path(root_path).resolve()
            if (custom_root / PROJECT_FOLDER).is_dir():
                if self._debug: print(f"Using custom project root: {custom_root}")
                return custom_root
            raise FileNotFoundError(f"No {PROJECT_FOLDER} found in custom root path: {custom_root}")

        current_dir = pathlib.Path.cwd().resolve()
        while current_dir != current_dir.parent:
            if (current_dir / PROJECT_FOLDER).is_dir():
                if self._debug: print(f"Found {PROJECT_FOLDER} directory at: {current_dir}")
                return current_dir
            current_dir = current_dir.parent

        # No project folder: run on packaged defaults
        return None

    # ------------------------------------------------------------------------
    # Configuration Loading
    # ------------------------------------------------------------------------

    def load_all_configurations(self):
        """
        Loads every YAML file of the packaged defaults, then merges the project folder's files over them.
        """
        with self._lock:
            self.data = self._load_tree(self.defaults_path)
            if self.config_path is not None:
                deep_merge(self.data, self._load_tree(self.config_path))

    def _load_tree(self, root: Path) -> Dict[str, Any]:
        tree: Dict[str, Any] = {}
        for subdir, dirs, files in os.walk(root):
            dirs[:] = [d for d in dirs if d != '__pycache__']
            for file in sorted(files):
                if not file.endswith(('.yaml', '.yml')):
                    continue
                subdir_path = pathlib.Path(subdir)
                relative_path = subdir_path.relative_to(root)
                nested_dict = self.get_nested_dict(tree, relative_path.parts)

                data = load_yaml_file(str(subdir_path / file))
                if data:
                    nested_dict[os.path.splitext(file)[0]] = data
        return tree

    # ------------------------------------------------------------------------
    # Save Configuration Method
    # ------------------------------------------------------------------------

    def save(self):
        """
        Saves changes to the system settings back to the project's system.yaml file,
        preserving structure, formatting, and comments. Packaged defaults are never written.
        """
        if self.config_path is None:
            return

        with Config._lock:
            system_yaml_path = self.config_path / 'settings' / 'system.yaml'

            _yaml = YAML()
            _yaml.preserve_quotes = True

            try:
                existing_data = {}
                if system_yaml_path.exists():
                    with open(system_yaml_path, 'r') as yaml_file:
                        existing_data = _yaml.load(yaml_file) or {}

                for key, value in self.data['settings']['system'].items():
                    if isinstance(value, dict) and key in existing_data:
                        existing_data[key].update(value)
                        continue
                    existing_data[key] = value

                system_yaml_path.parent.mkdir(parents=True, exist_ok=True)
                with open(system_yaml_path, 'w') as yaml_file:
                    _yaml.dump(existing_data, yaml_file)
            except Exception as e:
                print(f"Error saving configuration to {system_yaml_path}: {e}", file=sys.stderr)

    # ------------------------------------------------------------------------
    # Settings Access
    # ------------------------------------------------------------------------

    @property
    def settings(self) -> Dict[str, Any]:
        return self.data.get('settings', {})

    def numeric(self, key: str) -> Any:
        """
        Returns a value from numerics.yaml, applying the CHEBY_DEFAULT_PANELS override for 'panels'.

        Raises:
            ConfigError: If the key is unknown or the environment override is not a positive integer.
        """
        numerics = self.settings.get('numerics', {})
        if key == 'panels' and os.environ.get(PANELS_ENV_VAR):
            return self.panels_from_env(os.environ[PANELS_ENV_VAR])
        if key not in numerics:
            raise ConfigError(f"Unknown numeric setting '{key}'.")
        return numerics[key]

    @staticmethod
    def panels_from_env(raw: str) -> int:
        try:
            panels = int(raw)
        except ValueError:
            raise ConfigError(f"{PANELS_ENV_VAR} must be a positive integer, got '{raw}'.") from None
        if panels < 1:
            raise ConfigError(f"{PANELS_ENV_VAR} must be a positive integer, got '{raw}'.")
        return panels

    def campaign_defaults(self) -> Dict[str, Any]:
        return dict(self.settings.get('campaign', {}))

    # ------------------------------------------------------------------------
    # Utility Methods
    # ------------------------------------------------------------------------

    @staticmethod
    def get_nested_dict(data: dict, path_parts: tuple):
        """
        Gets or creates a nested dictionary given the parts of a relative path.

        Args:
            data (dict): The top-level dictionary to start from.
            path_parts (tuple): A tuple of path components leading to the desired nested dictionary.

        Returns:
            A reference to the nested dictionary at the end of the path.
        """
        for part in path_parts:
            if part not in data:
                data[part] = {}
            data = data[part]
        return data

    def reload(self):
        """
        Re-reads every settings file, picking up edits made since start-up.
        """
        self.load_all_configurations()
