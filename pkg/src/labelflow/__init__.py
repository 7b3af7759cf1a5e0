"""Static information-flow control via labeled secret blocks.

Programs wrap secrets in an opaque labeled container, touch them only
inside labeled secret blocks that a pre-compilation transform pass rewrites
and checks, and release them only through audited declassify operations.
A module that the transform pass accepts enforces termination-insensitive
noninterference up to its declassify sites and unsafe_region escapes.
"""

from . import std  # noqa: F401
from .capabilities import (  # noqa: F401
    AllowlistEntry,
    MutCell,
    invisible_side_effect_free,
    is_allowlisted,
)
from .core import (  # noqa: F401
    Secret,
    Vetted,
    declassify,
    declassify_ref,
    declassify_ref_mut,
    declassify_transmute,
    secret_block,
    side_effect_free,
    unsafe_region,
    unwrap_secret,
    unwrap_secret_mut_ref,
    unwrap_secret_ref,
    wrap_secret,
)
from .errors import (  # noqa: F401
    CapabilityError,
    LatticeError,
    Rejection,
    TransformRequiredError,
)
from .lattice import (  # noqa: F401
    LabelFamily,
    PolicyTag,
    SecrecyLabel,
    generate_lattice,
    render_declarations,
)
from .transform import (  # noqa: F401
    compile_secret_source,
    install_import_hook,
    load_secret_module,
    transform_module,
    transform_source,
    uninstall_import_hook,
)

__version__ = "0.1.0"
