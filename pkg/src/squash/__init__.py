"""SQUASH: turn documents into general-to-specific question-answer trees."""

__version__ = "0.1.0"
