"""HTTP service: configuration, model registry, and the FastAPI app."""

from .app import create_app
from .config import CONFIG_ENV_VAR, ServiceConfig, load_config
from .registry import ModelRegistry, ModelRegistryEntry

__all__ = [
    "CONFIG_ENV_VAR",
    "ModelRegistry",
    "ModelRegistryEntry",
    "ServiceConfig",
    "create_app",
    "load_config",
]
