"""Numerical engine for the z-sliced Hamiltonian description of a free scalar field."""
from .dispersion import MassParam, MomentumTriple, Region, SpatialMomentum, lambda_of
from .propagator import QuadratureSpec, SpacetimePoint, propagator_4d, propagator_tform, propagator_zform
from .transfer_oracle import LatticeSpec4D, compare_slicings

__version__ = "0.1.0"

__all__ = [
    "MassParam",
    "MomentumTriple",
    "Region",
    "SpatialMomentum",
    "lambda_of",
    "QuadratureSpec",
    "SpacetimePoint",
    "propagator_zform",
    "propagator_tform",
    "propagator_4d",
    "LatticeSpec4D",
    "compare_slicings",
    "__version__",
]
