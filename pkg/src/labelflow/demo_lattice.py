"""Generated secrecy-label declarations. Do not edit by hand."""

from labelflow.lattice import generate_lattice

POLICIES = ['a', 'b']


class Label:
    """Marker base for generated labels."""

    policies: frozenset = frozenset()


class Label_A(Label):
    policies = frozenset(['a'])


class Label_AB(Label):
    policies = frozenset(['a', 'b'])


class Label_B(Label):
    policies = frozenset(['b'])


class Label_Empty(Label):
    policies = frozenset([])


MORE_SECRET_THAN = frozenset((
    ('Label_A', 'Label_A'),
    ('Label_A', 'Label_Empty'),
    ('Label_AB', 'Label_A'),
    ('Label_AB', 'Label_AB'),
    ('Label_AB', 'Label_B'),
    ('Label_AB', 'Label_Empty'),
    ('Label_B', 'Label_B'),
    ('Label_B', 'Label_Empty'),
    ('Label_Empty', 'Label_Empty')
))

FAMILY = generate_lattice(POLICIES)
assert frozenset(FAMILY.order) == MORE_SECRET_THAN
