"""Exact lattice computations for Brauer and Tate-Shafarevich groups of K3 surfaces."""

from .brauer import (
    SpecialBrauerClass,
    brauer_presentations,
    class_order,
    decompose,
    ker_restriction,
    restricted_core,
)
from .degrees import TwistedMukaiVector, degree_window, enumerate_degrees, tensor_shift
from .elliptic import fibre_check, jacobian_sequence_check, twist_transcendental
from .errors import (
    DegenerateForm,
    ImprimitiveClass,
    InvalidInput,
    NoPreimage,
    NotASublattice,
    NotCoprime,
    NotInCarrier,
    NotIsotropic,
    NotPresentable,
    NotPrimitive,
    NotWellDefined,
    ShaK3Error,
    ZeroClass,
)
from .k3 import K3Surface, bfield_project, hodge_decomposition, hodge_sequence_suite, k3_gram
from .lattice import (
    FinAbGroup,
    IntLattice,
    discriminant_group,
    divisibility,
    dual_lattice,
    orthogonal_complement,
    primitivity,
)
from .normal_forms import hnf, hnf_with_transform, snf_with_transform
from .qzmod import (
    INFINITE,
    ExactnessReport,
    QZModMorphism,
    QZModPresentation,
    element_order,
    induced_morphism,
    kernel_cokernel,
    verify_exact,
)
from .sha import (
    ShaGroup,
    degree_class,
    normalize_twist,
    same_twist,
    sha_group,
    sha_product,
    xi,
    zeta_map,
)

__version__ = "0.1.0"

__all__ = [
    "SpecialBrauerClass",
    "brauer_presentations",
    "class_order",
    "decompose",
    "ker_restriction",
    "restricted_core",
    "TwistedMukaiVector",
    "degree_window",
    "enumerate_degrees",
    "tensor_shift",
    "fibre_check",
    "jacobian_sequence_check",
    "twist_transcendental",
    "DegenerateForm",
    "ImprimitiveClass",
    "InvalidInput",
    "NoPreimage",
    "NotASublattice",
    "NotCoprime",
    "NotInCarrier",
    "NotIsotropic",
    "NotPresentable",
    "NotPrimitive",
    "NotWellDefined",
    "ShaK3Error",
    "ZeroClass",
    "K3Surface",
    "bfield_project",
    "hodge_decomposition",
    "hodge_sequence_suite",
    "k3_gram",
    "FinAbGroup",
    "IntLattice",
    "discriminant_group",
    "divisibility",
    "dual_lattice",
    "orthogonal_complement",
    "primitivity",
    "hnf",
    "hnf_with_transform",
    "snf_with_transform",
    "INFINITE",
    "ExactnessReport",
    "QZModMorphism",
    "QZModPresentation",
    "element_order",
    "induced_morphism",
    "kernel_cokernel",
    "verify_exact",
    "ShaGroup",
    "degree_class",
    "normalize_twist",
    "same_twist",
    "sha_group",
    "sha_product",
    "xi",
    "zeta_map",
]
