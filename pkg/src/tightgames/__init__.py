"""Tight game forms, their vector generalisations, and shortest-path games."""

from .core_forms import GameForm, InvalidFormError, basic_strategies, is_rectangular, is_simple, supports
from .graph_games import GameGraph, normal_form, solve_win_lose
from .nf_solvers import is_nash_solvable, lex_safe_ne, nash_equilibria, saddle_point, solvability_report
from .sp_games import SpInstance, bisp_check, normalize
from .tightness import TightnessWitness, is_tight, tightness_witness
from .vform import VForm, embed, is_v_tight
from .vplus import WC, VPlusForm, is_vplus_tight, ne_set

__version__ = "0.1.0"

__all__ = [
    "GameForm",
    "InvalidFormError",
    "basic_strategies",
    "is_rectangular",
    "is_simple",
    "supports",
    "GameGraph",
    "normal_form",
    "solve_win_lose",
    "is_nash_solvable",
    "lex_safe_ne",
    "nash_equilibria",
    "saddle_point",
    "solvability_report",
    "SpInstance",
    "bisp_check",
    "normalize",
    "TightnessWitness",
    "is_tight",
    "tightness_witness",
    "VForm",
    "embed",
    "is_v_tight",
    "WC",
    "VPlusForm",
    "is_vplus_tight",
    "ne_set",
]
