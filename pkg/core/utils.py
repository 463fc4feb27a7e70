#!/usr/bin/env python3
# See LICENSE for details

import logging
import os
from typing import Dict

import yaml

logger = logging.getLogger(__name__)


def dict_deep_merge(dict1: Dict, dict2: Dict) -> Dict:
    """Recursively merges dict2 into dict1, overwriting only leaf values.

    Args:
        dict1: The base dictionary (will be modified).
        dict2: The dictionary to merge into dict1.

    Returns:
        dict1 (modified).
    """
    for key, value in dict2.items():
        if key in dict1 and isinstance(dict1[key], dict) and isinstance(value, dict):
            dict_deep_merge(dict1[key], value)
        else:
            dict1[key] = value
    return dict1


def read_yaml(file_path: str):
    """Reads a YAML file and returns its content as a Python dictionary.

    Args:
        file_path: The path to the YAML file.

    Returns:
        A dictionary representing the YAML content, or None if an error occurs.
    """
    try:
        with open(file_path, 'r') as f:
            return yaml.safe_load(f)
    except FileNotFoundError:
        logger.error(f'YAML file not found at {file_path}')
        return None
    except yaml.YAMLError as e:
        logger.error(f'Error parsing YAML file {file_path}: {e}')
        return None


def write_yaml(data: dict, file_path: str):
    """Writes a Python dictionary to a YAML file, creating the parent directory if needed.

    Returns:
        True if successful, False otherwise.
    """
    try:
        directory = os.path.dirname(file_path)
        if directory and not os.path.exists(directory):
            os.makedirs(directory)
            logger.info(f'Created directory for YAML output: {directory}')

        with open(file_path, 'w') as f:
            yaml.safe_dump(data, f, default_flow_style=False, sort_keys=False)
        return True
    except (yaml.YAMLError, OSError) as e:
        logger.error(f'Error writing YAML to file {file_path}: {e}')
        return False


def ensure_parent_dir(file_path: str) -> None:
    directory = os.path.dirname(file_path)
    if directory:
        os.makedirs(directory, exist_ok=True)
