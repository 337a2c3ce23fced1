"""HTTP facade over the library: pydantic contracts and the FastAPI app."""
from .app import create_app

__all__ = ["create_app"]
