from evidential.services.base_service import BaseService

__all__ = ["BaseService"]
