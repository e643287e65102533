"""Graph, profile and decomposition services."""
