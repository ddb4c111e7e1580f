from __future__ import division
from __future__ import print_function
from __future__ import absolute_import

import json
import os

import numpy as np
import pandas as pd

from cig.misc.DotmapUtils import to_plain
from cig.misc.errors import InvalidInputError


def read_counts_csv(path):
    """Integer counts from a CSV with a header row: one column, or one row of values."""
    table = _read_csv(path)
    if table.shape[1] == 1:
        values = table.iloc[:, 0].to_numpy()
    elif table.shape[0] == 1:
        values = table.iloc[0].to_numpy()
    else:
        raise InvalidInputError("%s: counts must be a single column or a single row." % path)
    if not np.issubdtype(values.dtype, np.integer):
        raise InvalidInputError("%s: counts must be integers." % path)
    return values.astype(int)


def read_observations_csv(path):
    """Raw observations from the first numeric column of a CSV with a header row."""
    table = _read_csv(path).select_dtypes(include=[np.number])
    if table.shape[1] == 0:
        raise InvalidInputError("%s: no numeric column." % path)
    return table.iloc[:, 0].to_numpy(dtype=float)


def _read_csv(path):
    try:
        table = pd.read_csv(path)
    except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise InvalidInputError("Cannot read %s: %s" % (path, e))
    if table.empty:
        raise InvalidInputError("%s has no data rows." % path)
    return table


def read_json(path):
    try:
        with open(path, encoding='utf-8') as f:
            return json.load(f)
    except (OSError, ValueError) as e:
        raise InvalidInputError("Cannot read %s: %s" % (path, e))


def dumps(payload):
    return json.dumps(to_plain(payload), sort_keys=True, indent=2, allow_nan=True)


def write_json(path, payload):
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, 'w', encoding='utf-8') as f:
        f.write(dumps(payload) + '\n')


def write_table(path, table):
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    table.to_csv(path, index=False, float_format='%.17g', lineterminator='\n')
