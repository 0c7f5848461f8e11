"""
Response Formatter - FoldShip service

Every endpoint answers with the same JSON envelope:
    success: {'success': True,  'data': ...,  'metadata': {...}}
    failure: {'success': False, 'error': {'message', 'status_code', 'code'?, 'details'?}, 'metadata': {...}}

metadata always carries the request id (echoed from X-Request-ID), tool
version and UTC timestamp; design endpoints add the project provenance line
and any validation warnings.
"""

import uuid
from datetime import datetime, timezone
from typing import Any, Dict, List, Optional, Tuple

from flask import has_request_context, jsonify, request

from core import __version__
from core.exceptions import FoldShipError, SimulationError

Envelope = Tuple[Any, int]


# =================== ENVELOPES ===================

def success_response(
    data: Any,
    status_code: int = 200,
    provenance: Optional[str] = None,
    warnings: Optional[List[str]] = None,
) -> Envelope:
    """Wrap a JSON-ready payload; provenance and warnings land in metadata."""
    metadata = _metadata(status_code)
    if provenance:
        metadata['provenance'] = provenance
    if warnings:
        metadata['warnings'] = list(warnings)
    return jsonify({'success': True, 'data': data, 'metadata': metadata}), status_code


def error_response(
    message: str,
    status_code: int = 400,
    code: Optional[str] = None,
    details: Optional[Dict[str, Any]] = None,
) -> Envelope:
    """Failure envelope; code is a stable machine-readable tag."""
    error: Dict[str, Any] = {'message': message, 'status_code': status_code}
    if code:
        error['code'] = code
    if details:
        error['details'] = details
    return jsonify({'success': False, 'error': error, 'metadata': _metadata(status_code)}), status_code


def validation_error_response(validation: Dict[str, Any]) -> Envelope:
    """400 from a validator result dict (errors, plus warnings when present)."""
    details: Dict[str, Any] = {'errors': validation['errors']}
    if validation.get('warnings'):
        details['warnings'] = validation['warnings']
    return error_response('Validation failed', 400, code='VALIDATION_ERROR', details=details)


def exception_response(exc: Exception) -> Envelope:
    """
    Toolkit exceptions to HTTP:
        SimulationError      -> 422 NUMERIC_FAILURE
        FoldShipError/ValueError -> 400, code = exception class name
        anything else        -> 500
    """
    if isinstance(exc, SimulationError):
        return error_response(f"Numeric failure: {exc}", 422, code='NUMERIC_FAILURE')
    if isinstance(exc, (FoldShipError, ValueError)):
        return error_response(f"Invalid input: {exc}", 400, code=type(exc).__name__)
    return error_response("Internal server error", 500)


# =================== METADATA ===================

def _metadata(status_code: int) -> Dict[str, Any]:
    metadata: Dict[str, Any] = {
        'request_id': _request_id(),
        'api_version': __version__,
        'status_code': status_code,
        'timestamp': datetime.now(timezone.utc).isoformat(),
    }
    if has_request_context():
        metadata['method'] = request.method
        metadata['path'] = request.path
    return metadata


def _request_id() -> str:
    if has_request_context() and request.headers.get('X-Request-ID'):
        return request.headers['X-Request-ID']
    return uuid.uuid4().hex
