"""
Per-user settings, merged over DEFAULT_SETTINGS.

The settings file lives at ``~/.config/AutomaForge/settings.json`` or under
``$AUTOMAFORGE_CONFIG_DIR`` when that variable is set. CLI flags override
whatever is loaded here.
"""

import json
import os
from pathlib import Path
from typing import Any, Dict, Optional

APP_NAME = "AutomaForge"
APP_CONFIG_FILENAME = "settings.json"
CONFIG_DIR_ENV = "AUTOMAFORGE_CONFIG_DIR"

COUNTER_CONVENTIONS = ("require_zero", "ignore")

DEFAULT_SETTINGS = {
    "tolerance": 1e-9,
    "max_len_limit": 16,
    "check_wf_max_len": 6,
    "counter_acceptance": "require_zero",
    "jobs": 1,
    "component_limit": 64,
}


def config_dir() -> Path:
    base = os.environ.get(CONFIG_DIR_ENV)
    if base:
        return Path(base)
    return Path.home() / ".config" / APP_NAME


def config_path() -> Path:
    return config_dir() / APP_CONFIG_FILENAME


def _clamped_int(value: Any, fallback: int, low: int, high: int) -> int:
    try:
        number = int(value)
    except Exception:
        number = fallback
    return max(low, min(high, number))


def normalize_settings(settings: Optional[Dict[str, Any]]) -> Dict[str, Any]:
    base = dict(DEFAULT_SETTINGS)
    if not isinstance(settings, dict):
        return base
    merged = base.copy()
    merged.update({k: v for k, v in settings.items() if k in base})

    try:
        tolerance = float(merged["tolerance"])
    except Exception:
        tolerance = base["tolerance"]
    if not 0 < tolerance < 1:
        tolerance = base["tolerance"]
    merged["tolerance"] = tolerance

    merged["max_len_limit"] = _clamped_int(merged["max_len_limit"], base["max_len_limit"], 0, 64)
    merged["check_wf_max_len"] = _clamped_int(merged["check_wf_max_len"], base["check_wf_max_len"], 0, 16)
    merged["jobs"] = _clamped_int(merged["jobs"], base["jobs"], 1, os.cpu_count() or 1)
    merged["component_limit"] = _clamped_int(merged["component_limit"], base["component_limit"], 1, 100000)
    if merged["counter_acceptance"] not in COUNTER_CONVENTIONS:
        merged["counter_acceptance"] = base["counter_acceptance"]
    return merged


def load_settings(path: Optional[Path] = None) -> Dict[str, Any]:
    """Defaults merged with the settings file; a broken file only warns."""
    path = Path(path) if path is not None else config_path()
    if not path.exists():
        return dict(DEFAULT_SETTINGS)
    try:
        with open(path, encoding="utf-8") as f:
            data = json.load(f)
    except Exception as e:
        print(f"Warning: failed to load settings from {path}: {e}")
        return dict(DEFAULT_SETTINGS)
    return normalize_settings(data)


def save_settings(settings: Dict[str, Any], path: Optional[Path] = None) -> None:
    path = Path(path) if path is not None else config_path()
    payload = {"version": 1, "kind": "settings", **normalize_settings(settings)}
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8") as f:
            json.dump(payload, f, indent=2)
    except Exception as e:
        print(f"Warning: failed to save settings to {path}: {e}")
