"""Separability and rationalizability of multidimensional (joint) choices."""

__version__ = "0.1.0"

from .core import (
    Alternative,
    DimensionSet,
    DimSubset,
    JointChoiceDataset,
    Menu,
    ProductSpace,
    dataset_document,
    load_dataset,
    project_alternative,
    project_choice_image,
    project_menu,
    projected_menu_family,
    validate_dataset,
)
from .errors import (
    JointChoiceError,
    InputError,
    SchemaError,
    EmptyMenuSet,
    ChoiceOutsideMenu,
    EmptyChoice,
    DuplicateMenu,
    UnknownItem,
    UnknownDimension,
    ScopeError,
    EmptySubset,
    TooManyDimensions,
    DuplicateMember,
    EmptyMember,
    InvalidOrder,
    InvalidFilter,
    MissingBranchValue,
    PreconditionError,
    NotSingleValued,
    NotSeparable,
    NotSeparablePreference,
    CyclicRelation,
    FamilyNotSelective,
    LabellingSearchExceeded,
    InternalError,
    ReconstructionMismatch,
    InternalSelectivityFailure,
)
from .generators import (
    MenuDomain,
    ModelSpec,
    gen_additive,
    gen_envy_free,
    gen_limited_attention,
    gen_random,
    gen_rational,
    gen_status_quo,
    generate,
)
from .preferences import (
    AdditiveUtility,
    PreferenceRelation,
    additive_choice,
    induced_preference,
    is_acyclic,
    is_rationalizable,
    is_S_rich,
    is_S_separable_preference,
    maximal_elements,
    rationalizability_via_selective_family,
    revealed_choice,
    revealed_preference,
)
from .selective import (
    SelectiveFamily,
    as_family,
    index_sets,
    is_selective,
    minimal_selective_family,
    sel_size,
)
from .separability import (
    check_menus_betweenness,
    check_S_betweenness,
    decompose_components,
    is_S_separable,
    is_separable,
    is_separable_bruteforce,
    separability_via_selective_family,
    separable_subsets,
)
from .witness import Witness, WitnessKind
