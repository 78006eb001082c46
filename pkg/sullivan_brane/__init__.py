"""Sullivan Brane - exact Sullivan-model computations for sphere mapping spaces."""

__version__ = "0.1.0"
