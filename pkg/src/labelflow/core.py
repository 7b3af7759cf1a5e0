"""Secret container, vetted-return wrapper, declassification, block anchor.

Secrets are erased at run time: the executed expansion of a secret block
manipulates the bare payload, so a wrapped value has exactly the run-time
representation of its payload (no wrapper object, no copy, no allocation).
All labeling and access control happens in the transform pass; the
operations here are the run-time halves that generated code calls, and they
are identities.

The wrap/unwrap surface names and ``secret_block`` are *not* operations:
they are syntax recognized by the transformer.  Reaching one at run time
means the module was imported without the transform pass, and they fail
loudly.
"""

from __future__ import annotations

from .errors import CapabilityError, TransformRequiredError

SECRET_TUPLE_MAX = 4  # widest secret collection a block may return

# Name-mangled slot a hand-rolled wrapper would use; the transform pass
# rejects any attribute access to it (the conformance corpus probes this).
RESERVED_PAYLOAD_SLOT = "_Secret__payload"


class Secret:
    """Opaque labeled container; a typing construct with zero run-time cost.

    ``Secret[int, Label_A]`` appears in annotations and is interpreted by
    the transform pass.  The underscore staticmethods are the restricted
    constructors/accessors instantiated by generated code inside trusted
    escape regions; application code may not name them.
    """

    def __init__(self, *_a, **_k):
        raise TransformRequiredError(
            "Secret values are created with wrap_secret(...) inside a "
            "secret block, never constructed directly")

    def __class_getitem__(cls, item):
        return cls  # annotation-position use only

    @staticmethod
    def _new(value, label):
        return value

    @staticmethod
    def _unwrap(value, label):
        return value

    @staticmethod
    def _unwrap_ref(value, label):
        return value

    @staticmethod
    def _unwrap_mut_ref(value, label):
        return value


class Vetted:
    """Marker for returns of verified side-effect-free functions.

    Construction is restricted to expansions emitted by the transformer;
    the transform pass rejects hand-written construction or projection.
    """

    def __init__(self, *_a, **_k):
        raise TransformRequiredError(
            "Vetted values exist only inside generated side-effect-free "
            "expansions")

    def __class_getitem__(cls, item):
        return cls

    @staticmethod
    def _wrap(value):
        return value

    @staticmethod
    def _project(value):
        return value


def call_closure(label, body):
    """Anchor of every expanded secret block: run the body closure once.

    The capture and return-label constraints attached to this call are
    discharged statically by the transform pass; at run time the label is
    inert and the closure simply executes.
    """
    return body()


def _not_a_function(name: str):
    def stub(*_a, **_k):
        raise TransformRequiredError(
            f"{name} is not a defined function outside a transformed secret "
            f"block; run the module through the transform pass")
    stub.__name__ = name
    return stub


wrap_secret = _not_a_function("wrap_secret")
unwrap_secret = _not_a_function("unwrap_secret")
unwrap_secret_ref = _not_a_function("unwrap_secret_ref")
unwrap_secret_mut_ref = _not_a_function("unwrap_secret_mut_ref")


def secret_block(_label):
    """Surface form of a secret block; rewritten away by the transformer."""
    raise TransformRequiredError(
        "secret_block requires the transform pass; import this module via "
        "labelflow.load_secret_module or the import hook")


def side_effect_free(_func):
    """Surface annotation for side-effect-free functions; rewritten away."""
    raise TransformRequiredError(
        "side_effect_free requires the transform pass; import this module "
        "via labelflow.load_secret_module or the import hook")


def declassify(secret):
    """Trusted, audited release of a secret value. Callable anywhere."""
    return secret


def declassify_ref(secret):
    """Read-only variant of declassify; identical at run time."""
    return secret


def declassify_ref_mut(secret):
    """Writable variant of declassify; identical at run time."""
    return secret


def declassify_transmute(container):
    """Reinterpret a container of secrets as a container of payloads.

    Because secrets share their payload's representation, this moves no
    data and allocates nothing: the very same container object is returned.
    """
    return container


def unsafe_region(value):
    """Trusted escape marker: the transformer skips checks inside it.

    Generated code wraps each restricted operation in a minimal region;
    application code may use it too, forfeiting the guarantees at that
    site (audit by grepping for unsafe_region).
    """
    return value


_DEFAULTS = {int: 0, float: 0.0, bool: False, str: "", bytes: b"",
             tuple: (), type(None): None}


def register_default(cls, factory):
    _DEFAULTS[cls] = None  # presence marker; factory kept separately
    _DEFAULT_FACTORIES[cls] = factory


_DEFAULT_FACTORIES = {}


def default_for(cls):
    """Default payload used when a panicking block is contained."""
    if cls in _DEFAULT_FACTORIES:
        return _DEFAULT_FACTORIES[cls]()
    if cls in (list,):
        return []
    if cls in (dict,):
        return {}
    if cls in (set,):
        return set()
    if cls in _DEFAULTS:
        return _DEFAULTS[cls]
    try:
        return cls()
    except Exception as exc:
        raise CapabilityError(
            f"{cls.__name__} provides no default value for panic "
            f"containment") from exc
