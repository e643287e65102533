"""sepforge: separations, profiles and canonical tree-decompositions of finite graphs."""

__version__ = "0.3.0"
__description__ = "Canonical tree-decompositions distinguishing tangles and k-blocks at desk scale"
