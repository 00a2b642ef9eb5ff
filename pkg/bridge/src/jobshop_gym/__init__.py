"""Gym-style front end over the jobshop environment."""

from .env import BoxSpace, DiscreteSpace, JobShopGym, make

__all__ = ["BoxSpace", "DiscreteSpace", "JobShopGym", "make"]
__version__ = "0.1.0"
