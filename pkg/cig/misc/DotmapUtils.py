from __future__ import division
from __future__ import print_function
from __future__ import absolute_import

from dotmap import DotMap


def get_required_argument(dotmap, key, message, default=None):
    val = dotmap.get(key, default)
    if val is default or (isinstance(val, DotMap) and len(val) == 0):
        raise ValueError(message)
    return val


def to_plain(obj):
    """Recursively turns a DotMap (or numpy content) into JSON-friendly builtins."""
    if isinstance(obj, DotMap):
        obj = obj.toDict()
    if isinstance(obj, dict):
        return {str(key): to_plain(val) for key, val in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_plain(val) for val in obj]
    if hasattr(obj, 'tolist'):
        return obj.tolist()
    if callable(obj) or isinstance(obj, type):
        return getattr(obj, '__name__', repr(obj))
    return obj
