"""Transaction-cost optimum, sharing games and dispute analysis."""

from .dispute import (
    DisputeModel,
    Institution,
    build_dispute_game,
    grand_total,
    sequential_solve,
    simultaneous_equilibria,
)
from .efficiency import (
    exposure_sweep,
    minimize_cost,
    relevant_set,
    surface_export,
)
from .games import BimatrixGame, mixed_equilibria, pure_equilibria
from .model import ChoiceSet, TransactionType, total_cost, validate_type, yield_value
from .sharing import (
    SharingRule,
    build_game,
    design_balanced_rule,
    fixed_share_rule,
    is_optimizer,
    pay_for_mistake_rule,
    regret_profile,
)

__version__ = "0.1.0"
