"""Exact linear algebra over (Z_2)^n-commutative algebras.

Graded matrices with their transpose, trace and Berezinian, and the Koszul
complex whose top cohomology carries the Berezinian and trace as the group
and Lie algebra actions.
"""

from .algebra import (
    AlgebraElement,
    AlgebraPresentation,
    GeneratorSpec,
    clifford,
    custom,
    format_element,
    grassmann,
    invert,
    parse_element,
    preset,
    quaternion,
)
from .berezinian import UDLFactors, det_commutative, gber, study_det_oracle, super_ber_oracle, udl_decompose
from .errors import (
    DecompositionFailed,
    DegreeViolation,
    DifferentialNotInvariant,
    DimensionError,
    GradedError,
    InputError,
    MathError,
    NonHomogeneous,
    NotInvertible,
    ParseError,
    PresentationError,
    UndefinedDegree,
    UnsupportedDegree,
)
from .gmatrix import (
    GradedMatrix,
    graded_commutator,
    graded_trace,
    graded_transpose,
    identity,
    invert_matrix,
    new_matrix,
    scalar_mul,
)
from .grading import Degree, Grading, RankVector, scalar_product, standard_order
from .koszul import (
    KoszulContext,
    KoszulElement,
    check_d_invariance,
    cohomology_ranks,
    derivation,
    derivation_action_class,
    differential,
    group_action_class,
    homotopy_bracket,
    rho,
)
from .problem import ProblemFile, load_problem, read_problem

__version__ = "0.1.0"
