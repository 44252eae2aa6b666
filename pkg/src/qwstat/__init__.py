"""Stationary measures of one-dimensional discrete-time quantum walks."""

from ._backend import BACKEND
from .coin import CoinCase, UnitaryCoin, classify, coin_angles, decompose, hadamard, make_coin, u_theta
from .lattice import AmplitudeField, Measure, StateGenerator, evolve, sample_window, step, to_measure

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "AmplitudeField",
    "CoinCase",
    "Measure",
    "StateGenerator",
    "UnitaryCoin",
    "classify",
    "coin_angles",
    "decompose",
    "evolve",
    "hadamard",
    "make_coin",
    "sample_window",
    "step",
    "to_measure",
    "u_theta",
]
