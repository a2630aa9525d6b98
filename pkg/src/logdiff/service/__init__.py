"""HTTP service layer: pydantic schemas, handlers, FastAPI app."""

from .handlers import HANDLERS, DomainError

__all__ = ["HANDLERS", "DomainError"]
