"""Diagnostic categories and the rejection error raised by the transform pass.

Every rejection carries a stable category code so conformance tests can
assert the *reason* a program was refused, not merely that it was refused.
"""

from __future__ import annotations

# Category codes, keyed by the rule they enforce.  The conformance corpus has
# at least one negative program per code.
READ_UP = "E-READ-UP"                    # unwrap of a value more secret than the block
WRITE_DOWN = "E-WRITE-DOWN"              # writable access at a label != block label
ASSIGN_SECRET = "E-ASSIGN-SECRET"        # assignment target is (or contains) a secret
MUT_CAPTURE = "E-MUT-CAPTURE"            # write to a captured non-secret variable/object
UNVETTED_CALL = "E-UNVETTED-CALL"        # callee neither allowlisted nor marked side effect free
OPERATOR_OVERLOAD = "E-OPERATOR-OVERLOAD"  # overloadable op on non-builtin
CUSTOM_DROP = "E-CUSTOM-DROP"            # type with a custom destructor in a secret context
CUSTOM_DEREF = "E-CUSTOM-DEREF"          # type with custom attribute-access hooks
INTERIOR_MUT = "E-INTERIOR-MUT"          # shared-mutable cell in a payload, field, or capture
CLOSURE_IN_BLOCK = "E-CLOSURE-IN-BLOCK"  # lambda/def/comprehension inside a secret context
MACRO_IN_BLOCK = "E-MACRO-IN-BLOCK"      # dynamic code construction inside a secret context
MACRO_OPACITY = "E-MACRO-OPACITY"        # foreign decorator wrapping a secret block / sef fn
VETTED_FORGERY = "E-VETTED-FORGERY"      # constructing Vetted (or reserved internals) by hand
DISPATCH_CALL = "E-DISPATCH-CALL"        # calling a sef dispatch function from ordinary code
PAYLOAD_ACCESS = "E-PAYLOAD-ACCESS"      # naming the secret payload slot directly
OUTSIDE_BLOCK = "E-OUTSIDE-BLOCK"        # wrap/unwrap form used outside any secret block
BAD_LABEL = "E-BAD-LABEL"                # label name not in the declared family
RETURN_LABEL = "E-RETURN-LABEL"          # block result is not a secret collection at the block label
NESTED_BLOCK = "E-NESTED-BLOCK"          # secret block inside a secret context
NO_DEFAULT = "E-NO-DEFAULT"              # block result type has no default for panic containment
ISEF = "E-ISEF"                          # value of a type not known invisible-side-effect-free
RESERVED_NAME = "E-RESERVED-NAME"        # application code uses a reserved generated-name prefix
UNSUPPORTED = "E-UNSUPPORTED"            # expression/statement form outside the supported surface

ALL_CATEGORIES = (
    READ_UP, WRITE_DOWN, ASSIGN_SECRET, MUT_CAPTURE, UNVETTED_CALL,
    OPERATOR_OVERLOAD, CUSTOM_DROP, CUSTOM_DEREF, INTERIOR_MUT,
    CLOSURE_IN_BLOCK, MACRO_IN_BLOCK, MACRO_OPACITY, VETTED_FORGERY,
    DISPATCH_CALL, PAYLOAD_ACCESS, OUTSIDE_BLOCK, BAD_LABEL, RETURN_LABEL,
    NESTED_BLOCK, NO_DEFAULT, ISEF, RESERVED_NAME, UNSUPPORTED,
)


class LatticeError(ValueError):
    """Invalid lattice construction (duplicate policy, size cap, family mix)."""


class CapabilityError(TypeError):
    """Runtime capability violation (safe operator misuse, bad derive)."""


class TransformRequiredError(RuntimeError):
    """A secret-context form was executed without the transform pass.

    Outside transformed code the wrap/unwrap/block forms are not defined
    operations; reaching one at run time means the module was imported raw.
    """


class Rejection(SyntaxError):
    """Compile-time refusal, prefixed with its stable category code."""

    def __init__(self, category: str, message: str, *,
                 filename: str = "<secret>", lineno: int = 0):
        if category not in ALL_CATEGORIES:
            raise ValueError(f"unknown rejection category: {category}")
        self.category = category
        super().__init__(f"{category}: {message}")
        self.filename = filename
        self.lineno = lineno or None

    def __str__(self) -> str:
        loc = f" ({self.filename}:{self.lineno})" if self.lineno else ""
        return f"{self.args[0]}{loc}"


def reject(category: str, message: str, node=None, filename: str = "<secret>"):
    """Raise a Rejection anchored at an AST node's location."""
    lineno = getattr(node, "lineno", 0) if node is not None else 0
    raise Rejection(category, message, filename=filename, lineno=lineno)
