"""Self-hostable character-cast service: graph, prompt assembly, generation."""

__version__ = "0.1.0"
