"""
Shared fixtures: reference design inputs, nominal geometry, power model,
plant, gains and the Flask test client.
"""

import os
import sys

import pytest

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
if ROOT not in sys.path:
    sys.path.insert(0, ROOT)

from api.project_config import default_document, load_project_config
from core.energy_planner import PowerModel
from core.flight_controller import AxisGains
from core.flight_sim import PlantParams
from core.kresling_geometry import KreslingParams, derive_segment
from core.mass_model import DesignInputs

PROJECT_FILE = os.path.join(ROOT, "config", "project.json")


@pytest.fixture
def inputs():
    return DesignInputs()


@pytest.fixture
def nominal_params():
    """n=7, m=4, lambda=0.9 in the 720 x 320 mm envelope: R=360, h0=80."""
    return KreslingParams.from_envelope(7, 4, 0.9, D=720.0, H0=320.0)


@pytest.fixture
def nominal_geom(nominal_params):
    return derive_segment(nominal_params)


@pytest.fixture
def power_model():
    return PowerModel()


@pytest.fixture
def plant():
    return PlantParams.reference()


@pytest.fixture
def gains():
    return {axis: AxisGains(**g) for axis, g in default_document()["gains"].items()}


@pytest.fixture
def project():
    return load_project_config(None)


@pytest.fixture
def app(project):
    from main import create_app
    app = create_app(project=project)
    app.config['TESTING'] = True
    return app


@pytest.fixture
def client(app):
    return app.test_client()
