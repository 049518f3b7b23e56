"""Dependency injection container"""

from pathlib import Path
from typing import Any, Dict, Optional

from .config import Config


class Container:
    """Dependency injection container for the command-line services"""

    def __init__(self, config: Config, out_dir: Optional[Path] = None):
        self._config = config
        self._out_dir = Path(out_dir) if out_dir is not None else config.out_dir
        self._services: Dict[str, Any] = {}
        self._singletons: Dict[str, Any] = {}
        self._register_services()

    def _register_services(self):
        """Register all services"""
        from ..services.exporter import ExportService
        from ..utils.error_handler import ErrorHandler
        from ..utils.logging import LoggerFactory

        self._singletons["config"] = self._config

        # Logger (singleton)
        logger = LoggerFactory.create(
            name="dpgauss",
            log_dir=self._config.log_dir if self._config.log_to_file else None,
            level=self._config.log_level,
            rotation=self._config.log_rotation,
        )
        self._singletons["logger"] = logger
        self._singletons["error_handler"] = ErrorHandler(logger)

        # Output directory is created on first use only
        self._services["exporter"] = lambda container: ExportService(
            out_dir=self._out_dir, logger=container.get("logger")
        )

    def get(self, service_name: str) -> Optional[Any]:
        """Get a service by name"""
        if service_name in self._singletons:
            return self._singletons[service_name]

        if service_name in self._services:
            factory = self._services[service_name]
            instance = factory(self)
            return instance

        return None
