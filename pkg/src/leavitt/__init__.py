"""Symbolic Leavitt path algebras over exact fields.

The package works with a directed graph E and the algebra generated by
its vertices, arrows, and dual arrows.  Elements are kept in a canonical
form, left ideals of the dual subalgebra get staircase bases, and a
family of irreducible module constructions can be built and probed at a
chosen degree bound.  Everything is exact: scalars are rationals or
prime field elements, never floats.
"""

from .algebra import (
    Element,
    equals_cohn,
    equals_leavitt,
    is_normal_form,
    mono_str,
    normal_form,
    parse_element,
)
from .digraph import (
    Arrow,
    CycleTail,
    DiGraph,
    GeneratorTail,
    InfiniteWord,
    Path,
    classify_word,
    generator_word,
    ghost_sort_key,
    parse_graph,
    parse_path,
    path_sort_key,
    periodic_word,
    tail_equivalent,
    thue_morse_word,
)
from .division import (
    AlgebraElement,
    StructureAlgebra,
    check_poly,
    field_extension,
    is_irreducible,
    parse_algebra,
    poly_eval,
    quaternion_algebra,
    reciprocal,
    represents_zero,
)
from .errors import (
    InvariantError,
    LeavittError,
    ParseError,
    PreconditionError,
    UsageError,
)
from .fields import PrimeField, RationalField, parse_field
from .probes import (
    annihilator_member_fn,
    annihilator_staircase,
    chain_candidates,
    chen_annihilator_membership,
    composition_probe,
    cyclic_submodule,
    endomorphism_probe,
    ghost_annihilated,
    ghost_socle,
    simplicity_probe,
    socle_filter,
    span_closure,
)
from .representations import (
    ChenModule,
    CohnJacobsonModule,
    HilbertModule,
    LeftIdealPresentation,
    LinearExampleModule,
    ManteseModule,
    PrefixModule,
    RangaswamyModule,
    chen_module,
    cohn_jacobson_module,
    hilbert_module,
    linear_example_module,
    mantese_module,
    mantese_rangaswamy_presentation,
    rangaswamy_module,
    rangaswamy_module_infinite,
    rangaswamy_module_regular,
    substitute,
    verify_representation,
)
from .schreier import (
    SchreierStaircase,
    element_to_ghost,
    ghost_to_element,
    is_open,
    lewin_schreier_rank,
    not_open_up_to,
    power_ideal_generators,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
