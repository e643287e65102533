"""Validation of input documents and command-line arguments."""

import re
from typing import Any, Dict, Optional, Tuple

import jsonschema

from sepforge.exceptions import ParseError, UsageError

_VERTEX_LIST = {'type': 'array', 'items': {'type': 'integer', 'minimum': 0}}

_SEPARATION = {
    'type': 'object',
    'properties': {'A': _VERTEX_LIST, 'B': _VERTEX_LIST},
    'required': ['A', 'B'],
}

_TREE_DECOMPOSITION = {
    'type': 'object',
    'properties': {
        'nodes': {
            'type': 'array',
            'minItems': 1,
            'items': {
                'type': 'object',
                'properties': {'id': {'type': 'integer', 'minimum': 0}, 'part': _VERTEX_LIST},
                'required': ['id', 'part'],
            },
        },
        'edges': {
            'type': 'array',
            'items': {
                'type': 'object',
                'properties': {
                    'u': {'type': 'integer', 'minimum': 0},
                    'v': {'type': 'integer', 'minimum': 0},
                    'adhesion': _VERTEX_LIST,
                },
                'required': ['u', 'v'],
            },
        },
    },
    'required': ['nodes', 'edges'],
}

_PROFILE = {
    'type': 'object',
    'properties': {
        'bound': {'type': 'integer', 'minimum': 0},
        'oriented': {'type': 'array', 'items': _SEPARATION},
        'provenance': {'type': 'string'},
        'block': {'anyOf': [_VERTEX_LIST, {'type': 'null'}]},
    },
    'required': ['bound', 'oriented'],
}

# JSON schemas for the documents sepforge reads
DOCUMENT_SCHEMAS: Dict[str, Dict[str, Any]] = {
    'graph': {
        'type': 'object',
        'properties': {
            'n': {'type': 'integer', 'minimum': 0},
            'edges': {
                'type': 'array',
                'items': {
                    'type': 'array',
                    'items': {'type': 'integer', 'minimum': 0},
                    'minItems': 2,
                    'maxItems': 2,
                },
            },
            'name': {'type': 'string'},
        },
        'required': ['n', 'edges'],
        'additionalProperties': True,
    },
    'separation-set': {'type': 'array', 'items': _SEPARATION},
    'decomposition': _TREE_DECOMPOSITION,
    'profile': _PROFILE,
    'profiles': {'type': 'array', 'items': _PROFILE},
}


def validate_document(kind: str, data: Any) -> Any:
    """Validate a decoded JSON document against its schema.

    Args:
        kind: Key into DOCUMENT_SCHEMAS.
        data: Decoded JSON value.

    Returns:
        The validated document.

    Raises:
        ParseError: If the document does not match, naming the JSON path.
    """
    schema = DOCUMENT_SCHEMAS[kind]
    try:
        jsonschema.validate(instance=data, schema=schema)
    except jsonschema.ValidationError as e:
        path = '/'.join(str(p) for p in e.absolute_path) or '$'
        raise ParseError(f'Invalid {kind} document: {e.message}', offset=path)
    return data


def detect_document_kind(data: Any) -> str:
    """Guess which schema a decoded document follows."""
    if isinstance(data, dict) and 'nodes' in data and 'edges' in data:
        return 'decomposition'
    if isinstance(data, dict) and 'level' in data and 'td' in data:
        return 'tree-of-decompositions'
    if isinstance(data, dict) and 'bound' in data:
        return 'profile'
    if isinstance(data, list) and all(isinstance(x, dict) and 'bound' in x for x in data) and data:
        return 'profiles'
    if isinstance(data, list):
        return 'separation-set'
    raise ParseError('Unrecognised document: expected a decomposition, profile or separation list')


_PROFILE_SOURCE = re.compile(r'^(tangles|blocks):(\d+)(?:\.\.(\d+))?$')


def parse_profile_source(argument: str) -> Tuple[str, Optional[int], Optional[int], Optional[str]]:
    """Parse a ``--profiles`` argument.

    Accepted forms are ``tangles:k``, ``tangles:i..j``, ``blocks:k`` and
    ``file:<path>``.

    Returns:
        Tuple of (source, low order, high order, path).

    Raises:
        UsageError: If the argument is malformed.
    """
    if argument.startswith('file:'):
        path = argument[len('file:'):]
        if not path:
            raise UsageError('--profiles file: needs a path')
        return 'file', None, None, path

    match = _PROFILE_SOURCE.match(argument)
    if not match:
        raise UsageError(f'Invalid profile source {argument!r}; use tangles:k, tangles:i..j, blocks:k or file:<path>')
    source, low, high = match.group(1), int(match.group(2)), match.group(3)
    high = int(high) if high is not None else low
    if low < 1 or high < low:
        raise UsageError(f'Invalid order range in {argument!r}')
    if source == 'blocks' and high != low:
        raise UsageError('blocks takes a single k')
    return source, low, high, None
