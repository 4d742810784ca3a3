"""FastAPI service exposing the core package over HTTP."""

from .app import app, create_app

__all__ = ["app", "create_app"]
