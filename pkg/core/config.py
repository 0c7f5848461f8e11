"""
FoldShip - Core Configuration Module

Runtime settings for the design toolkit and its JSON service:
- Logging destinations and format
- Sweep worker pool size
- Output directory and default project file
- Service host/port and CORS origins

Project-level engineering inputs (design parameters, plant, gains,
power model) are NOT stored here; they live in the versioned project JSON
loaded by api.project_config.

Version: 1.0.0
"""

import os
import logging
from dataclasses import dataclass, field
from typing import List

logger = logging.getLogger(__name__)


@dataclass
class Config:
    """
    Process-wide runtime configuration.

    Every field defaults from an environment variable so a `.env` file
    (loaded by the entry points with python-dotenv) can override it.
    """

    # =================== ENVIRONMENT ===================
    environment: str = field(
        default_factory=lambda: os.getenv('ENV', 'development')
    )  # development | production

    debug_mode: bool = field(
        default_factory=lambda: os.getenv('DEBUG', 'False').lower() == 'true'
    )

    # =================== PROJECT FILES ===================
    project_config_path: str = field(
        default_factory=lambda: os.getenv('FOLDSHIP_PROJECT', 'config/project.json')
    )
    output_dir: str = field(
        default_factory=lambda: os.getenv('FOLDSHIP_OUTPUT_DIR', 'out')
    )

    # =================== SWEEP WORKERS ===================
    sweep_workers: int = field(
        default_factory=lambda: int(os.getenv('FOLDSHIP_WORKERS', '1'))
    )
    max_sweep_workers: int = 32

    # =================== SERVICE ===================
    api_host: str = field(default_factory=lambda: os.getenv('API_HOST', '0.0.0.0'))
    api_port: int = field(default_factory=lambda: int(os.getenv('API_PORT', '5000')))
    cors_origins: List[str] = field(
        default_factory=lambda: os.getenv('CORS_ORIGINS', '*').split(',')
    )
    max_sweep_points_per_request: int = 20000  # guard for POST /designs/sweep

    # =================== LOGGING ===================
    log_level: str = field(
        default_factory=lambda: os.getenv('LOG_LEVEL', 'INFO')
    )  # DEBUG | INFO | WARNING | ERROR | CRITICAL

    log_format: str = "[%(asctime)s] %(levelname)s in %(module)s: %(message)s"
    log_date_format: str = "%Y-%m-%d %H:%M:%S"

    log_to_file: bool = field(
        default_factory=lambda: os.getenv('LOG_TO_FILE', 'False').lower() == 'true'
    )
    log_file_path: str = field(
        default_factory=lambda: os.getenv('LOG_FILE_PATH', 'logs/foldship.log')
    )
    log_rotation_size_mb: int = 10
    log_backup_count: int = 5

    def __post_init__(self):
        """Validate and normalize after dataclass creation."""
        self.log_level = self.log_level.upper()
        if self.log_level not in ('DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL'):
            logger.warning(f"⚠️  Unknown LOG_LEVEL '{self.log_level}', using INFO")
            self.log_level = 'INFO'

        if self.sweep_workers < 1:
            logger.warning(f"⚠️  FOLDSHIP_WORKERS={self.sweep_workers} is invalid, using 1")
            self.sweep_workers = 1
        elif self.sweep_workers > self.max_sweep_workers:
            logger.warning(
                f"⚠️  FOLDSHIP_WORKERS={self.sweep_workers} capped at {self.max_sweep_workers}"
            )
            self.sweep_workers = self.max_sweep_workers

        if self.environment == 'production' and '*' in self.cors_origins:
            logger.warning("⚠️  CORS allows all origins in production")


# =================== GLOBAL CONFIG INSTANCE ===================
_config_instance = None


def get_config() -> Config:
    """
    Get global configuration instance (singleton pattern).

    Returns:
        Config: The global configuration object
    """
    global _config_instance
    if _config_instance is None:
        _config_instance = Config()
    return _config_instance

