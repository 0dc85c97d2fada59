# core/tables.py
"""Tabular output: CSV files, aligned text, run manifests, state files, grid sweeps."""

import json
import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np
import pandas as pd

from .exceptions import ConfigurationError

logger = logging.getLogger(__name__)

CSV_FLOAT_FORMAT = '%.10g'


# ===================================================================
# GRID SWEEPS
# ===================================================================

def run_grid(function, items, workers=1):
    """Map `function` over `items`, optionally on a thread pool; results keep input order."""
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [function(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(function, items))


# ===================================================================
# CSV AND TEXT
# ===================================================================

def write_csv(frame, path, columns):
    """Write `frame` with exactly `columns` as header, deterministic float format."""
    missing = [name for name in columns if name not in frame.columns]
    if missing:
        raise ValueError(f'table is missing columns {missing}')
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame[columns].to_csv(path, index=False, float_format=CSV_FLOAT_FORMAT, lineterminator='\n')
    logger.info('wrote %d rows to %s', len(frame), path)
    return path


def render_text(frame):
    return frame.to_string(index=False, float_format=lambda value: f'{value:.6g}')


def key_value_frame(values):
    return pd.DataFrame({'quantity': list(values.keys()), 'value': list(values.values())})


# ===================================================================
# RUN MANIFEST
# ===================================================================

@dataclass
class RunManifest:
    command: str
    config_snapshot: str
    code_version: str
    wall_time_seconds: float = 0.0
    outputs: list = field(default_factory=list)

    def add_output(self, path):
        self.outputs.append(str(path))

    def write(self, path):
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(asdict(self), indent=2, sort_keys=True) + '\n', encoding='utf-8')
        return path


class Stopwatch:
    def __enter__(self):
        self.start = time.perf_counter()
        self.elapsed = 0.0
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start
        return False


def manifest_path(output_path):
    output_path = Path(output_path)
    return output_path.with_name(output_path.name + '.manifest.json')


# ===================================================================
# PLAIN-TEXT STATE FILES
# ===================================================================
# Header line, then one "re,im" pair per amplitude in row-major product order:
#   # l_a=1 l_b=1 w=1 anchors_a=0 anchors_b=0
#   0.7071067812,0
#   ...

def write_state_file(path, psi, basis):
    window_a, window_b = basis.window_a, basis.window_b
    header = (f'# l_a={window_a.l_ref!r} l_b={window_b.l_ref!r} w={window_a.half_width} '
              f'anchors_a={";".join(repr(a) for a in window_a.requested_anchors)} '
              f'anchors_b={";".join(repr(a) for a in window_b.requested_anchors)}')
    lines = [header] + [f'{value.real!r},{value.imag!r}' for value in np.asarray(psi, dtype=complex)]
    Path(path).write_text('\n'.join(lines) + '\n', encoding='utf-8')
    return Path(path)


def read_state_file(path):
    """Return (header dict, amplitude vector) of a state file."""
    try:
        text = Path(path).read_text(encoding='utf-8').splitlines()
    except OSError as exc:
        raise ConfigurationError(f'cannot read state file {path}: {exc}') from exc
    if not text or not text[0].startswith('#'):
        raise ConfigurationError(f'{path}: missing "# l_a=... l_b=..." header line')
    header = {}
    for token in text[0].lstrip('#').split():
        key, _, value = token.partition('=')
        header[key] = value
    for key in ('l_a', 'l_b', 'w', 'anchors_a', 'anchors_b'):
        if key not in header:
            raise ConfigurationError(f'{path}: header lacks {key}')
    amplitudes = []
    for number, line in enumerate(text[1:], start=2):
        if not line.strip():
            continue
        try:
            real, imag = line.split(',')
            amplitudes.append(complex(float(real), float(imag)))
        except ValueError:
            raise ConfigurationError(f'{path}:{number}: expected "re,im", got {line!r}') from None
    parsed = {
        'l_a': float(header['l_a']),
        'l_b': float(header['l_b']),
        'w': int(header['w']),
        'anchors_a': [float(a) for a in header['anchors_a'].split(';')],
        'anchors_b': [float(a) for a in header['anchors_b'].split(';')],
    }
    return parsed, np.array(amplitudes, dtype=complex)
