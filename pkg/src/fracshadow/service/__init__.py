"""HTTP service layer: pydantic request models and the FastAPI app."""

from .app import ServiceError, app, create_app

__all__ = ["app", "create_app", "ServiceError"]
