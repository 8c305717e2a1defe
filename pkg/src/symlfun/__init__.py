"""Symmetric power L-functions of level-1 eigenforms and checks of the Siegel-zero argument."""

from .archimedean import analytic_conductor, gamma_factors, zero_free_endpoint
from .auxiliary import expand_coeffs, factor_multiset, pole_order, target_multiplicity
from .decomposition import multiset_A, multiset_B, verify_global_identity, verify_multiset_identity
from .hecke_forms import Eigenform, delta, eigenform_numeric, hecke_eigenform, satake
from .lvalue import kernel_closed_form, kernel_quadrature, l_value_at_1, lower_bound
from .sym_power import DirichletSeries, dirichlet_coeffs, local_params

__version__ = "0.1.0"
