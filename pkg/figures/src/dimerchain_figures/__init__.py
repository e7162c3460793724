"""Render publication-style figures from dimerchain CLI artifacts."""

__version__ = "0.1.0"

from .recipes import RECIPES, FigureRecipe, RecipeError, load_run
from .render import render

__all__ = ["RECIPES", "FigureRecipe", "RecipeError", "load_run", "render"]
