"""Exact toric-variety toolkit: toric ideals, implicit degrees, toric patches,
moment-map inversion, real-part meshes and implicitization."""

__version__ = "0.1.0"

from .lattice import ExponentSet, integer_kernel_basis, enumerate_kernel_vectors, lift
from .polytope import LatticePolytope, convex_hull, implicit_degree, lattice_points, volume
from .ideal import Binomial, binomials_from_kernel, is_toric_binomial, quadratic_binomials
from .patch import ControlScheme, ProjectivePoint, curve_basepoints, patch_eval, patch_point
from .moment import MomentQuery, algebraic_moment, moment_inverse, moment_map
from .implicitize import ImplicitForm, degree_search, implicitize
from .realmesh import Mesh, chart_sample, export_obj, nonneg_patch_via_moment, orthant_sample
from .models import Model, ModelError, load_fixture, load_model

__all__ = [
    "ExponentSet", "integer_kernel_basis", "enumerate_kernel_vectors", "lift",
    "LatticePolytope", "convex_hull", "implicit_degree", "lattice_points", "volume",
    "Binomial", "binomials_from_kernel", "is_toric_binomial", "quadratic_binomials",
    "ControlScheme", "ProjectivePoint", "curve_basepoints", "patch_eval", "patch_point",
    "MomentQuery", "algebraic_moment", "moment_inverse", "moment_map",
    "ImplicitForm", "degree_search", "implicitize",
    "Mesh", "chart_sample", "export_obj", "nonneg_patch_via_moment", "orthant_sample",
    "Model", "ModelError", "load_fixture", "load_model",
]
