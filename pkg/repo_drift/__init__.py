"""Repository drift toolkit: commit-window manifests, alias maps, delta datasets and alias-aware scoring."""
from .constants import VERSION

__version__ = VERSION
