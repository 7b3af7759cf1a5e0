"""Secrecy-label lattice: generation, ordering, and emitted declarations.

A label is a finite set of policy tags; label L1 is at least as secret as L2
iff L1 is a superset of L2.  The full family over n base policies (all 2^n
subsets plus the superset order) is generated ahead of build time and emitted
as a declarations module; the transform pass consults the emitted order
relation as its set of type-level constraints.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .errors import LatticeError

# Bounds the 2^n label family; see README for rationale.
MAX_POLICIES = 5


@dataclass(frozen=True)
class PolicyTag:
    """An atomic secrecy privilege, e.g. one per principal."""

    name: str

    def __post_init__(self):
        if not self.name or not self.name.isidentifier():
            raise LatticeError(f"policy name must be a non-empty identifier: {self.name!r}")


@dataclass(frozen=True)
class SecrecyLabel:
    """A set of policy tags; the empty set is the lowest label."""

    policies: frozenset[str]

    @property
    def canonical_name(self) -> str:
        return canonical_label_name(self.policies)

    def __contains__(self, policy: str) -> bool:
        return policy in self.policies


def canonical_label_name(policies: frozenset[str] | set[str]) -> str:
    """Stable textual form used in emitted declarations and diagnostics.

    Single-character policies concatenate ("Label_AB"); longer names join
    with underscores to keep the mapping injective per family.
    """
    if not policies:
        return "Label_Empty"
    names = sorted(policies)
    if all(len(n) == 1 for n in names):
        return "Label_" + "".join(names).upper()
    return "Label_" + "_".join(n.upper() for n in names)


@dataclass
class LabelFamily:
    """All labels over a fixed policy set, with the superset order relation.

    ``order`` holds (higher, lower) canonical-name pairs, meaning the first
    label is at least as secret as the second.  It is reflexive and
    transitive by construction, and every label sits above Label_Empty.
    """

    base_policies: list[PolicyTag]
    labels: dict[str, SecrecyLabel] = field(default_factory=dict)
    order: frozenset[tuple[str, str]] = frozenset()

    def label(self, name: str) -> SecrecyLabel:
        try:
            return self.labels[name]
        except KeyError:
            raise LatticeError(f"label {name!r} is not in this family") from None

    def has_label(self, name: str) -> bool:
        return name in self.labels

    def _require_member(self, lbl: SecrecyLabel) -> str:
        name = lbl.canonical_name
        if name not in self.labels or self.labels[name] != lbl:
            raise LatticeError(f"label {name} does not belong to this family")
        return name

    def at_least_as_secret(self, l1: SecrecyLabel, l2: SecrecyLabel) -> bool:
        """True iff l1 may read l2, i.e. l2's policies are contained in l1's.

        Answered from the generated order relation (the emitted constraints),
        not recomputed from the sets.
        """
        return (self._require_member(l1), self._require_member(l2)) in self.order

    def at_least_by_name(self, hi: str, lo: str) -> bool:
        if hi not in self.labels or lo not in self.labels:
            raise LatticeError(f"label pair ({hi}, {lo}) not in this family")
        return (hi, lo) in self.order

    def join(self, l1: SecrecyLabel, l2: SecrecyLabel) -> SecrecyLabel:
        """Least upper bound: the policy-set union."""
        self._require_member(l1)
        self._require_member(l2)
        return self.labels[canonical_label_name(l1.policies | l2.policies)]

    def join_names(self, n1: str, n2: str) -> str:
        return self.join(self.label(n1), self.label(n2)).canonical_name


def generate_lattice(base_policies: list[PolicyTag | str]) -> LabelFamily:
    """Build the full 2^n label family over the given policies.

    Rejects duplicate policy names, more than MAX_POLICIES policies, and
    policy sets whose canonical label names would collide.
    """
    tags = [p if isinstance(p, PolicyTag) else PolicyTag(p) for p in base_policies]
    names = [t.name for t in tags]
    if len(set(names)) != len(names):
        raise LatticeError(f"duplicate policy names: {sorted(names)}")
    if len(tags) > MAX_POLICIES:
        raise LatticeError(
            f"{len(tags)} policies exceed the maximum of {MAX_POLICIES}; "
            f"split the policy set or raise MAX_POLICIES deliberately")

    labels: dict[str, SecrecyLabel] = {}
    for r in range(len(names) + 1):
        for combo in itertools.combinations(sorted(names), r):
            lbl = SecrecyLabel(frozenset(combo))
            key = lbl.canonical_name
            if key in labels:
                raise LatticeError(
                    f"canonical name collision at {key}; rename policies so "
                    f"label names stay distinct")
            labels[key] = lbl

    order = frozenset(
        (hi.canonical_name, lo.canonical_name)
        for hi in labels.values()
        for lo in labels.values()
        if lo.policies <= hi.policies
    )
    return LabelFamily(base_policies=tags, labels=labels, order=order)


def render_declarations(family: LabelFamily) -> str:
    """Emit the family as a declarations module, byte-stable per input.

    Each label becomes a class; each order pair becomes one entry of the
    MORE_SECRET_THAN constraint set consumed at transform time.
    """
    lines = [
        '"""Generated secrecy-label declarations. Do not edit by hand."""',
        "",
        "from labelflow.lattice import generate_lattice",
        "",
        f"POLICIES = {sorted(t.name for t in family.base_policies)!r}",
        "",
        "",
        "class Label:",
        '    """Marker base for generated labels."""',
        "",
        "    policies: frozenset = frozenset()",
        "",
    ]
    for name in sorted(family.labels):
        lbl = family.labels[name]
        lines.append("")
        lines.append(f"class {name}(Label):")
        lines.append(f"    policies = frozenset({sorted(lbl.policies)!r})")
        lines.append("")
    pairs = ",\n".join(f"    {pair!r}" for pair in sorted(family.order))
    lines.append("")
    lines.append("MORE_SECRET_THAN = frozenset((")
    lines.append(pairs)
    lines.append("))")
    lines.append("")
    lines.append("FAMILY = generate_lattice(POLICIES)")
    lines.append("assert frozenset(FAMILY.order) == MORE_SECRET_THAN")
    lines.append("")
    return "\n".join(lines)


def write_declarations(family: LabelFamily, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(render_declarations(family))
