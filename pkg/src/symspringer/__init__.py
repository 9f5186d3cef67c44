"""Exact computations on affine Springer fibers of the GL_n x GL_n symmetric space."""

from .errors import (
    DivisionByZero,
    EvenCharacteristic,
    FieldMismatch,
    InsufficientPrecision,
    InvalidInput,
    NoEmbedding,
    NotPrime,
    NotRegular,
    OddDiscriminantValuation,
    SeriesSyntaxError,
    ShapeMismatch,
    Singular,
    SymSpringerError,
    TooLarge,
    Undetermined,
    ValuationOfZero,
    WindowExceeded,
)
from .gf import FieldElement, FieldSpec, embed, frobenius, make_field, parse_field
from .series import LaurentSeries, parse_series, working_precision
from .linalg import MatrixF, det, inverse, iwasawa_decompose, smith_normal_form, val_det
from .symspace import (
    CartanElement,
    SymPair,
    TorusElement,
    conjecture_dim,
    det_phi,
    dim_formula,
    make_gamma,
    phi_matrix,
    unitary_dim,
)
from .grassmann import Lattice, TorusPoint, enumerate_lattices, lattice_from_coset, torus_points
from .counting import PointCountTable, estimate_dimension
from .fiber import count_fiber_points, enumerate_u_fiber, window_fiber_search

__version__ = "0.1.0"
