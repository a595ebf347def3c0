"""Information-sharing network formation: stable networks, welfare and reductions."""
from .model import NEG_INF, Instance, Network
from .stability import exists_stable_network, is_k_stable

__all__ = ["NEG_INF", "Instance", "Network", "exists_stable_network", "is_k_stable"]
__version__ = "0.1.0"
