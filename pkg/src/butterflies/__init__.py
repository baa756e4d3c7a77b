"""Exact computation with crossed modules of finite groups, strict 2-groups,
butterflies between them, and the classification of group extensions."""

__version__ = "0.1.0"
