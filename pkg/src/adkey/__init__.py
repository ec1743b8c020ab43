"""Conditional-entropy bounds for advantage-distillation QKD via hypothesis testing."""

from adkey.errors import DegenerateScenarioError, NumericGuardError, ValidationError
from adkey.matcore import DensityMatrix, chernoff_q, fidelity, petz_q, sandwiched_q
from adkey.adqkd import Scenario, TripartiteInput, BoundReport, Verdict, block_entropy_bounds
from adkey.classical_ht import ErrorBracket, product_error
from adkey.entropy import CqState, ErrorCurve, entropy_integral, exact_cond_entropy

__version__ = '0.1.0'

__all__ = [
    'BoundReport', 'CqState', 'DegenerateScenarioError', 'DensityMatrix', 'ErrorBracket', 'ErrorCurve',
    'NumericGuardError', 'Scenario', 'TripartiteInput', 'ValidationError', 'Verdict',
    'block_entropy_bounds', 'chernoff_q', 'entropy_integral', 'exact_cond_entropy', 'fidelity',
    'petz_q', 'product_error', 'sandwiched_q',
]
