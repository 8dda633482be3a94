"""layerlab: desk-scale numerical studies of viscous MHD wall layers."""

__version__ = "0.1.0"
