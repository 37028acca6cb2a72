"""Top-level package for trispec.

Exact Laplace spectra of the spherical and euclidean triangle orbifolds.
Access the package version via ``trispec.__version__``. Submodules such as
``trispec.spherical`` and ``trispec.euclidean`` can be imported directly.
"""

__all__ = ["__version__", "core", "spherical", "euclidean"]

# Keep version in one place; update here when releasing.
__version__ = "0.1.0"
