"""HTTP service wrapping the core package."""

from .app import build_filter, create_app, serve
from .state import AppState, ServiceConfig

__all__ = ["AppState", "ServiceConfig", "build_filter", "create_app", "serve"]
