"""Exact local models of parabolic bundles, root-stack modules, and the
direct-image / pullback functors on both sides, with randomized
differential verification that the two sides agree.
"""

__version__ = "0.1.0"

from .errors import (AmbientMismatch, InadmissibleProfile, InadmissibleWeight,
                     InvalidChain, InvalidGrading, NotAPairing, NotContained,
                     ParseError, ParstackError, ProfileMismatch, ShapeMismatch,
                     SingularBasis, ValidationError, ValueLineMismatch)
from .fields import QQ, FpElement, PrimeField, RationalField, field_from_name
from .localring import LocalElement
from .lattice import (Lattice, apply_matrix, canonicalize, direct_sum,
                      lattice_intersect, lattice_sum, quotient_dim)
from .parabolic import (ParabolicBundle, ParabolicPoint, SplitLines,
                        is_morphism, is_point_morphism, make_weight,
                        parabolic_degree, split_into_lines, weights_of)
from .rootstack import (GradedModule, from_parabolic, graded_split_into_lines,
                        is_graded_morphism, to_parabolic)
from .functors import (Branch, CoverProfile, make_profile, pullback_graded,
                       pullback_matrix, pullback_parabolic,
                       pullback_parabolic_line, pushforward_graded,
                       pushforward_matrix, pushforward_parabolic,
                       restrict_scalars)
from .pairing import (ANTISYMMETRIC, SYMMETRIC, ParabolicPairing,
                      check_pairing, dual_point, pullback_pairing,
                      pushforward_pairing)
from .harness import (MUTATIONS, TrialConfig, TrialReport, gen_parabolic_point,
                      run_mutation, verify_corollaries, verify_direct_image,
                      verify_pullback)
