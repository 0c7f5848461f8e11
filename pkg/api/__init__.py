"""
API module for FoldShip: Flask routes, project config loader and report writers
"""

__version__ = "1.0.0"
