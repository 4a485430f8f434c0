from abc import ABC, abstractmethod
from typing import Any

from evidential.core.logging_config import get_logger

logger = get_logger(__name__)


class BaseService(ABC):
    """Base class for all services in the application."""

    def __init__(self):
        """Initialize the base service."""
        self.logger = logger

    @abstractmethod
    def initialize(self) -> None:
        """Initialize the service.

        Implementations acquire whatever state they need before the first
        call, such as loading a network file.
        """

    @abstractmethod
    def cleanup(self) -> None:
        """Release any state held by the service."""

    def __enter__(self) -> "BaseService":
        """Context manager entry."""
        self.initialize()
        return self

    def __exit__(self, exc_type: Any, exc_val: Any, exc_tb: Any) -> None:
        """Context manager exit."""
        self.cleanup()
