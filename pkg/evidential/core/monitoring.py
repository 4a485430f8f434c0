from datetime import datetime
from typing import Any, Dict

from evidential.core.logging_config import get_logger
from evidential.services.base_service import BaseService

logger = get_logger(__name__)


class MonitoringService(BaseService):
    def __init__(self):
        super().__init__()
        self.metrics: Dict[str, Any] = {
            "commands": 0,
            "errors": 0,
            "durations": {},
            "last_error": None,
            "start_time": datetime.now(),
        }

    def initialize(self) -> None:
        """Initialize monitoring service"""
        logger.debug("Initializing monitoring service")

    def cleanup(self) -> None:
        """Clean up monitoring resources"""
        logger.debug("Cleaning up monitoring service")

    def track_request(self, operation: str, duration: float) -> None:
        """Track operation timing"""
        self.metrics["commands"] += 1
        self.metrics["durations"].setdefault(operation, []).append(duration)
        logger.info(f"{operation} completed in {duration:.4f}s")

    def track_error(self, error: Exception) -> None:
        """Track error metrics"""
        self.metrics["errors"] += 1
        self.metrics["last_error"] = {
            "message": str(error),
            "type": type(error).__name__,
            "timestamp": datetime.now().isoformat(),
        }
        logger.info(f"Error occurred: {str(error)}")

    def get_metrics(self) -> Dict[str, Any]:
        """Get current metrics"""
        all_durations = [d for ds in self.metrics["durations"].values() for d in ds]
        average = sum(all_durations) / len(all_durations) if all_durations else 0.0

        return {
            "total_commands": self.metrics["commands"],
            "total_errors": self.metrics["errors"],
            "average_duration": average,
            "per_operation": {
                name: len(ds) for name, ds in sorted(self.metrics["durations"].items())
            },
            "uptime": (datetime.now() - self.metrics["start_time"]).total_seconds(),
            "last_error": self.metrics["last_error"],
        }
