import json
import math
import os

import numpy as np

CSV_FLOAT_FORMAT = '%.10g'


def find_file(target_file_names, from_path, max_search_depth=16):
    """
    Search upwards from ``from_path`` for a file named any of
    ``target_file_names``, through a maximum of ``max_search_depth`` parent
    directories. In each directory the names are tried in order. Raise
    ``FileNotFoundError`` if no file is located.
    
    :param target_file_names: The candidate filenames.
    :param from_path: The directory in which to begin the search.
    :param max_search_depth: The maximum number of parent directories to search
        up through.
    :return: The absolute path of the located file.
    """
    
    path = os.path.abspath(from_path)
    
    for _ in range(max_search_depth):
        for name in target_file_names:
            candidate = os.path.join(path, name)
            if os.path.isfile(candidate):
                return candidate
        
        parent = os.path.dirname(path)
        if parent == path:
            break
        
        path = parent
    
    raise FileNotFoundError(f'Could not find any of: {", ".join(target_file_names)}.')


def ensure_dir(path):
    
    os.makedirs(path, exist_ok=True)
    
    return path


def _plain(value):
    """
    Convert ``value`` to JSON-compatible builtins, with NaN and infinities
    as ``null``.
    """
    
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    
    if isinstance(value, (list, tuple, np.ndarray)):
        return [_plain(v) for v in value]
    
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    
    if isinstance(value, (int, np.integer)):
        return int(value)
    
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else None
    
    return value


def write_json(data, path):
    """
    Write ``data`` to ``path`` as JSON with sorted keys and two-space
    indentation, so identical data gives byte-identical files.
    """
    
    with open(path, 'w', newline='\n') as f:
        f.write(json.dumps(_plain(data), sort_keys=True, indent=2))
        f.write('\n')
    
    return path


def write_csv(frame, path):
    """
    Write the ``pandas.DataFrame`` ``frame`` to ``path`` with a header row,
    no index and a fixed float format.
    """
    
    frame.to_csv(path, index=False, float_format=CSV_FLOAT_FORMAT, lineterminator='\n')
    
    return path


def write_table(frame, out_dir, stem, fmt='csv'):
    """
    Write ``frame`` to ``out_dir/stem.csv`` or, with ``fmt='json'``, to
    ``out_dir/stem.json`` as a list of records.
    
    :return: The path written.
    """
    
    ensure_dir(out_dir)
    path = os.path.join(out_dir, f'{stem}.{fmt}')
    
    if fmt == 'json':
        return write_json(frame.to_dict(orient='records'), path)
    
    return write_csv(frame, path)
