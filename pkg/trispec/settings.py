from pathlib import Path

# Project root is directory containing this file
PROJECT_ROOT = Path(__file__).resolve().parent
DATA_DIR = PROJECT_ROOT / 'data'

# Default settings
DEFAULTS = {
    # numerical gates
    'integrality_tol': 1e-6,
    'dedup_tol': 1e-9,
    'relation_tol': 1e-9,
    'rank_tol': 1e-8,
    'rank_gap': 1e3,
    'eisenstein_tol': 1e-9,
    'periodicity_tol': 1e-9,
    'torus_rotation_tol': 1e-9,
    'gram_tol': 1e-8,
    'euclidean_weyl_tol': 0.01,
    # sweep limits used by `verify` when --max is not given
    'charsum_max_degree': 2000,
    'charsum_max_n': 60,
    'lattice_max': 100000,
    'eisenstein_max_l': 10000,
    'eisenstein_max_n': 200,
    'weyl_max_degree': 5000,
    'weyl_window': 200,
    'euclidean_weyl_lambda': 100000,
    'eigenlab_max_degree': 20,
    'eigenlab_max_lambda': 200,
    'max_dihedral_n': 200,
    # reproducibility / output
    'default_seed': 20240101,
    'float_digits': 12,
}

NORMALIZATION_NOTE = (
    'unit sphere; hexagonal translations (4pi/sqrt3, 0), (2pi/sqrt3, 2pi); '
    'square translations (2pi, 0), (0, 2pi)'
)


def data_path(filename: str) -> Path:
    return DATA_DIR / filename
