"""Invariant almost-product structures on the Iwasawa manifold.

Library layout:

* exterior   - exact/float exterior algebra on oriented R^6
* nilalgebra - structure equations, CE differential, Levi-Civita connection
* ops        - oriented 2-planes, adapted frames, (m, n) type, rho projection
* torsion    - intrinsic torsion, Naveira components, class signatures
* scanner    - families, classification sweeps, moment map and polytope checks
* verify     - the acceptance suite driven by the `iwaops verify` command
"""

from .exterior import (
    KForm,
    basis_form,
    format_form,
    hodge,
    inner,
    interior,
    is_simple,
    norm,
    parse_form,
    wedge,
)
from .nilalgebra import (
    ConnectionTable,
    CoTensorField,
    StructureTable,
    ce_differential,
    levi_civita,
    nabla_form,
)
from .ops import (
    MNType,
    OpsPoint,
    Splitting,
    adapted_splitting,
    from_plucker,
    from_vectors,
    is_j1_invariant,
    mn_type,
    rho_projection,
    sample_uniform,
)
from .scanner import (
    FamilySpec,
    MomentPoint,
    SweepReport,
    generate,
    moment_map,
    sweep,
    verify_moment_images,
)
from .torsion import (
    ClassSignature,
    NaveiraComponents,
    TorsionTensor,
    alternation_check,
    classify,
    frobenius_integrable_h,
    frobenius_integrable_v,
    intrinsic_torsion,
    naveira_project,
    tau_kernel,
    tau_rank,
)

__version__ = "0.1.0"
