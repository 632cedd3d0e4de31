"""In-context-learning prompt composition."""
from .composer import ICLPrompt, compose_for_question, compose_prompt, render_delta, select_deltas

__all__ = ["ICLPrompt", "compose_for_question", "compose_prompt", "render_delta", "select_deltas"]
