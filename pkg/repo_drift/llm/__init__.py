"""Chat-service access and prompt templates."""
from .cache import ResponseCache
from .service import ChatServiceClient, system_user

__all__ = ["ChatServiceClient", "ResponseCache", "system_user"]
