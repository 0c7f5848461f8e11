"""
Main Application - FoldShip design and mission service

Flask app factory plus the development server entry point.
Production: gunicorn -c gunicorn_config.py "main:create_app()"
"""

import os
import sys
import time
from flask import Flask, g, jsonify, request
from flask_cors import CORS
import logging
from logging.handlers import RotatingFileHandler
from datetime import datetime, timezone
from typing import Optional
from dotenv import load_dotenv

if sys.platform == "win32":
    sys.stdout.reconfigure(encoding='utf-8')
    sys.stderr.reconfigure(encoding='utf-8')

load_dotenv()

project_root = os.path.dirname(os.path.abspath(__file__))
if project_root not in sys.path:
    sys.path.insert(0, project_root)

from core import __version__
from core.config import get_config

from api.routes import api_bp
from api.response_formatter import error_response
from api.project_config import ProjectConfig, load_project_config

# =================== CONFIGURATION ===================

runtime = get_config()


class Config:
    """Flask application configuration."""
    HOST = runtime.api_host
    PORT = runtime.api_port
    DEBUG = runtime.debug_mode

    API_VERSION = 'v1'
    API_PREFIX = f'/api/{API_VERSION}'

    CORS_ORIGINS = runtime.cors_origins

    LOG_LEVEL = getattr(logging, runtime.log_level)
    LOG_TO_FILE = runtime.log_to_file
    LOG_FILE = runtime.log_file_path
    LOG_MAX_BYTES = runtime.log_rotation_size_mb * 1024 * 1024
    LOG_BACKUP_COUNT = runtime.log_backup_count

    MAX_CONTENT_LENGTH = 1 * 1024 * 1024  # 1 MB, bodies are small JSON

    PROJECT_CONFIG_PATH = runtime.project_config_path

# =================== LOGGING CONFIGURATION ===================

# Loggers that share the service handlers: Flask's own plus the toolkit packages
SERVICE_LOGGERS = ('core', 'api')


def _service_handlers(app):
    formatter = logging.Formatter(runtime.log_format, datefmt=runtime.log_date_format)
    handlers = [logging.StreamHandler(sys.stdout)]
    if app.config['LOG_TO_FILE']:
        log_dir = os.path.dirname(app.config['LOG_FILE'])
        if log_dir:
            os.makedirs(log_dir, exist_ok=True)
        handlers.append(RotatingFileHandler(
            app.config['LOG_FILE'],
            maxBytes=app.config['LOG_MAX_BYTES'],
            backupCount=app.config['LOG_BACKUP_COUNT'],
            encoding='utf-8'
        ))
    for handler in handlers:
        handler.setFormatter(formatter)
    return handlers


def configure_logging(app):
    """Route app.logger and the core/api module loggers to stdout (and the rotating file when enabled)."""
    handlers = _service_handlers(app)
    for logger in [app.logger] + [logging.getLogger(name) for name in SERVICE_LOGGERS]:
        logger.handlers.clear()
        logger.setLevel(app.config['LOG_LEVEL'])
        logger.propagate = False
        for handler in handlers:
            logger.addHandler(handler)

    logging.getLogger('werkzeug').setLevel(logging.INFO if app.config['DEBUG'] else logging.WARNING)

# =================== PROJECT LOADING ===================

def load_project(app, project: Optional[ProjectConfig] = None):
    """Attach the project config to the app; a missing project file means the reference project."""
    app.logger.info("=" * 70)
    app.logger.info(f"FOLDSHIP v{__version__} - WORKER {os.getpid()} STARTING")
    app.logger.info("=" * 70)

    if project is None:
        path = app.config['PROJECT_CONFIG_PATH']
        if path and os.path.exists(path):
            project = load_project_config(path)
        else:
            app.logger.warning(f"⚠️  Project file {path} not found, using reference project")
            project = load_project_config(None)
    app.project = project

    app.logger.info(f"📋 Project: {project.source}")
    app.logger.info(f"   • Config hash: {project.config_hash[:12]}")
    app.logger.info(f"   • Nominal design: n={project.design_inputs.n} m={project.design_inputs.m} "
                    f"lambda={project.design_inputs.lam}")
    app.logger.info(f"   • Sweep workers: {runtime.sweep_workers}")
    app.logger.info(f"✅ WORKER {os.getpid()} READY")

# =================== ERROR HANDLERS ===================

# Status codes the app answers itself (routing, body size, crashes)
APP_ERRORS = {
    400: ("Bad request", "BAD_REQUEST"),
    404: ("Resource not found", "NOT_FOUND"),
    405: ("Method not allowed", "METHOD_NOT_ALLOWED"),
    413: ("Request body too large (limit 1 MB)", "PAYLOAD_TOO_LARGE"),
    500: ("Internal server error", "INTERNAL"),
}


def register_error_handlers(app):
    """One JSON envelope per status in APP_ERRORS."""

    def make_handler(status, message, code):
        def handler(e):
            if status >= 500:
                app.logger.error(f"❌ {status} on {request.path}: {e}")
            elif status == 400:
                app.logger.warning(f"⚠️  400 on {request.path}: {e}")
            return error_response(message, status, code=code)
        return handler

    for status, (message, code) in APP_ERRORS.items():
        app.register_error_handler(status, make_handler(status, message, code))

# =================== REQUEST/RESPONSE HOOKS ===================

def register_hooks(app):
    """Request timing in debug mode, security headers always."""

    @app.before_request
    def start_timer():
        g.started = time.perf_counter()

    @app.after_request
    def finish_request(response):
        if app.config['DEBUG']:
            elapsed_ms = (time.perf_counter() - g.get('started', time.perf_counter())) * 1000.0
            app.logger.debug(f"{request.method} {request.path} -> {response.status_code} ({elapsed_ms:.1f} ms)")
        response.headers['X-Content-Type-Options'] = 'nosniff'
        response.headers['X-Frame-Options'] = 'DENY'
        return response

# =================== FLASK APP FACTORY ===================

def create_app(config_class=Config, project: Optional[ProjectConfig] = None):
    """Create and configure the Flask application."""
    app = Flask(__name__)
    app.config.from_object(config_class)

    configure_logging(app)

    CORS(app, resources={
        f"{config_class.API_PREFIX}/*": {
            "origins": config_class.CORS_ORIGINS,
            "methods": ["GET", "POST", "OPTIONS"],
            "allow_headers": ["Content-Type", "X-Request-ID"],
            "expose_headers": ["X-Request-ID"],
        }
    })

    load_project(app, project)

    app.register_blueprint(api_bp, url_prefix=config_class.API_PREFIX)
    register_error_handlers(app)
    register_hooks(app)

    @app.route('/')
    def index():
        prefix = config_class.API_PREFIX
        return jsonify({
            'name': 'FoldShip',
            'version': __version__,
            'api_version': config_class.API_VERSION,
            'status': 'running',
            'endpoints': {
                'health': f"{prefix}/health",
                'evaluate': f"{prefix}/designs/evaluate",
                'sweep': f"{prefix}/designs/sweep",
                'energy': f"{prefix}/energy/curve",
                'simulate': f"{prefix}/simulations",
            },
            'timestamp': datetime.now(timezone.utc).isoformat()
        })

    return app

# =================== MAIN EXECUTION ===================

def main():
    """Development server entry point."""
    try:
        app = create_app()
        print(f"""
🚀 FoldShip v{__version__} development server
   • Host: {app.config['HOST']}
   • Port: {app.config['PORT']}
   • API: http://{app.config['HOST']}:{app.config['PORT']}{Config.API_PREFIX}/health

Press Ctrl+C to stop the server
""")
        app.run(host=app.config['HOST'], port=app.config['PORT'], debug=app.config['DEBUG'])
    except KeyboardInterrupt:
        print("\n🛑 Server stopped")
    except Exception as e:
        print(f"❌ Failed to start server: {e}")
        sys.exit(1)


if __name__ == '__main__':
    main()
