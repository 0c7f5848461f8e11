"""
Gunicorn configuration for the FoldShip service

    gunicorn -c gunicorn_config.py "main:create_app()"
"""

import os
import multiprocessing

# Server socket
bind = f"{os.getenv('API_HOST', '0.0.0.0')}:{os.getenv('API_PORT', '5000')}"
backlog = 512

# Sweeps and simulations are CPU bound: sync workers, one per core
workers = int(os.getenv('WORKERS', multiprocessing.cpu_count()))
worker_class = 'sync'
max_requests = int(os.getenv('MAX_REQUESTS', 500))
max_requests_jitter = int(os.getenv('MAX_REQUESTS_JITTER', 50))
timeout = int(os.getenv('TIMEOUT', 300))
keepalive = int(os.getenv('KEEPALIVE', 5))

daemon = False
pidfile = None

# Logging
accesslog = '-'
errorlog = '-'
loglevel = os.getenv('LOG_LEVEL', 'info').lower()
access_log_format = '%(h)s "%(r)s" %(s)s %(b)s %(D)sus'

proc_name = 'foldship'


def on_starting(server):
    print("=" * 70)
    print("FOLDSHIP - PRODUCTION SERVER STARTING")
    print(f"Workers: {workers}  Bind: {bind}")
    print("=" * 70)


def when_ready(server):
    print("✅ SERVER READY - ACCEPTING CONNECTIONS")


def on_exit(server):
    print("🛑 SERVER SHUTDOWN COMPLETE")


def worker_abort(worker):
    worker.log.info(f"Worker {worker.pid} received SIGABRT (request exceeded {timeout}s?)")
