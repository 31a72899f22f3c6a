"""Graph rigidity analysis and desk-scale unlabeled distance-geometry tools."""

from .errors import (CapExceeded, DeficientSpan, DimensionTooSmall,
                     NonGenericInput, NotA2Separation, NotLocallyRigid,
                     PreconditionFailed, RigidgeoError, ScaleExceeded,
                     ShapeMismatch)
from .exact import (Configuration, RationalMatrix, kernel_basis,
                    left_kernel_basis, random_generic_configuration, rank)
from .graphs import (EdgeBijection, OrderedGraph, VertexMap, automorphisms,
                     are_isomorphic, canonical_form, cone, enumerate_circuits,
                     enumerate_graphs, is_cycle_isomorphism, is_forest,
                     random_graph, vertex_connectivity,
                     vertex_map_from_edge_bijection, whitney_reversal)
from .rigidity import (Framework, MeasurementVector, RigidityReport,
                       StressMatrix, StressVector, affine_measurement_map_rank,
                       analyze, gauss_fiber_dim, hendrickson_check,
                       is_generically_globally_rigid,
                       is_generically_locally_rigid, is_infinitesimally_rigid,
                       is_redundantly_rigid, measure, measurement_variety_dim,
                       rigidity_matrix, shared_stress_kernel_dim, stress_basis,
                       stress_matrix)
from .unlabeled import (DistanceMultiset, RealizationResult,
                        ReconstructOptions, ReconstructionResult, certify,
                        congruent, is_member, not_rr_pair, realize,
                        reconstruct, same_measurement_variety_sampled)

__version__ = "0.1.0"
