"""Search algorithms and their shared machinery."""
from .archive import Archive, update_archive
from .budget import SearchClock, StoppingCondition, Timeline
from .ranking import crowding_distance, non_dominated_fronts, preference_sort, tournament
from .search import (
    ALGORITHMS, GaConfig, MioConfig, RunResult, SearchContext, active_goals, goal_dependencies,
    run_algorithm, run_dynamosa, run_mio, run_mosa, run_random, run_whole_suite,
)

__all__ = [
    "ALGORITHMS", "Archive", "GaConfig", "MioConfig", "RunResult", "SearchClock", "SearchContext",
    "StoppingCondition", "Timeline", "active_goals", "crowding_distance", "goal_dependencies",
    "non_dominated_fronts", "preference_sort", "run_algorithm", "run_dynamosa", "run_mio",
    "run_mosa", "run_random", "run_whole_suite", "tournament", "update_archive",
]
