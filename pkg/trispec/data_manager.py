"""Data loading helpers for the packaged CSV files in `data/`.

Provides `get_data_path` and `load_group_catalog` for `groups.csv`, the
catalog naming each co-compact non-hyperbolic triangle group family.
"""

import csv
from functools import lru_cache
from pathlib import Path
from typing import Dict, List, Optional, Tuple
import importlib.resources as pkg_resources

from .settings import data_path


def get_data_path(*parts: str) -> Path:
    """Return a `Path` inside the package `data/` directory.

    Usage: `get_data_path('groups.csv')`.
    Paths are resolved relative to this file's parent directory.
    """
    try:
        data_dir = pkg_resources.files(__package__).joinpath('data')
    except Exception:
        data_dir = data_path('')
    return Path(data_dir).joinpath(*parts)


def load_group_catalog(csv_filename: str = 'groups.csv') -> List[Dict]:
    """Load the group catalog.

    Each dict contains `p`, `q` (int), `r` (int, or None for the dihedral
    family row whose `r` column is `n`), `geometry`, `name` and `symmetry`.

    Raises FileNotFoundError if the CSV is missing.
    """
    path = get_data_path(csv_filename)
    if not path.exists():
        raise FileNotFoundError(f"Group catalog not found: {path}")
    rows: List[Dict] = []
    with open(path, newline='', encoding='utf-8') as fh:
        reader = csv.DictReader(fh)
        for row in reader:
            try:
                r_text = row['r'].strip()
                entry = {
                    'p': int(row['p']),
                    'q': int(row['q']),
                    'r': None if r_text == 'n' else int(r_text),
                    'geometry': row['geometry'].strip(),
                    'name': row['name'].strip(),
                    'symmetry': row.get('symmetry', '').strip(),
                }
            except Exception:
                continue
            rows.append(entry)
    return rows


@lru_cache(maxsize=1)
def _catalog_index() -> Tuple[Dict[Tuple[int, int, int], Dict], Optional[Dict]]:
    exact: Dict[Tuple[int, int, int], Dict] = {}
    family = None
    for row in load_group_catalog():
        if row['r'] is None:
            family = row
        else:
            exact[(row['p'], row['q'], row['r'])] = row
    return exact, family


def lookup_group(sig) -> Optional[Dict]:
    """Return the catalog row for a sorted signature, or None.

    Dihedral signatures `(2, 2, n)` resolve to the family row with the
    symmetry label specialised to `D_n`.
    """
    p, q, r = tuple(sig)
    exact, family = _catalog_index()
    if (p, q, r) in exact:
        return dict(exact[(p, q, r)])
    if family is not None and (p, q) == (family['p'], family['q']):
        row = dict(family)
        row['r'] = r
        row['symmetry'] = row['symmetry'].replace('_n', f'_{r}')
        return row
    return None
