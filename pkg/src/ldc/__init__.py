"""Cooking text-game toolkit: procedural game generation, a pruned-action
actor-critic agent, helper classifiers, and an evaluation harness."""

__version__ = "0.1.0"
