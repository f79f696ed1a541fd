"""Built-in demonstration models and graphs.

Two minimal three-variable demos (one confounded, one collided), the M-shaped
graph, and the sodium/blood-pressure generator whose collider is proteinuria.
The repo fixtures under ``fixtures/`` and ``figures/`` are serialized from
these constructors; tests assert the round trip.
"""

from __future__ import annotations

from .graph import Dag, build_dag
from .sem import Assignment, CompiledSem, Indicator, Noise, SemSpec, Term, compile_sem

# canonical column names of the sodium/blood-pressure generator
AGE = "Age_years"
SODIUM = "Sodium_gr"
SBP = "sbp_in_mmHg"
HYPERTENSION = "hypertension"
PROTEINURIA = "Proteinuria_in_mg"

# short node labels used by the graph fixtures
AGE_NODE = "AGE"
SODIUM_NODE = "SOD"
SBP_NODE = "SBP"
PROTEINURIA_NODE = "PRO"


def confounder_demo() -> CompiledSem:
    """W a common cause of A and Y; the A -> Y effect is 0.3."""
    return compile_sem(SemSpec(assignments=(
        Assignment("W"),
        Assignment("A", parents=(Term("W", 0.5),)),
        Assignment("Y", parents=(Term("A", 0.3), Term("W", 0.4))),
    )))


def collider_demo() -> CompiledSem:
    """C a common effect of A and Y; the A -> Y effect is 0.3."""
    return compile_sem(SemSpec(assignments=(
        Assignment("A"),
        Assignment("Y", parents=(Term("A", 0.3),)),
        Assignment("C", parents=(Term("A", 1.2), Term("Y", 0.9))),
    )))


def sodium_pressure_spec(beta1: float = 1.05, beta2: float = 2.00,
                         alpha1: float = 2.80, alpha2: float = 2.00,
                         include_hypertension: bool = True) -> SemSpec:
    """Sodium intake / systolic blood pressure generator.

    ``beta1`` is the causal sodium -> SBP effect and ``beta2`` the age -> SBP
    effect; ``alpha1`` and ``alpha2`` attach the proteinuria collider to
    sodium and SBP. Hypertension is a strict ``> 140`` indicator on SBP
    (ties have probability zero).
    """
    indicators = (Indicator(HYPERTENSION, SBP, 140.0, "gt"),) if include_hypertension else ()
    return SemSpec(
        assignments=(
            Assignment(AGE, noise=Noise(65.0, 5.0)),
            Assignment(SODIUM, parents=(Term(AGE, 1.0 / 18.0),)),
            Assignment(SBP, parents=(Term(SODIUM, beta1), Term(AGE, beta2))),
            Assignment(PROTEINURIA, parents=(Term(SBP, alpha2), Term(SODIUM, alpha1))),
        ),
        indicators=indicators,
    )


def sodium_pressure_model(beta1: float = 1.05, beta2: float = 2.00,
                          alpha1: float = 2.80, alpha2: float = 2.00,
                          include_hypertension: bool = True) -> CompiledSem:
    return compile_sem(sodium_pressure_spec(beta1, beta2, alpha1, alpha2,
                                            include_hypertension))


def confounding_triangle_dag() -> Dag:
    """W -> A, W -> Y, A -> Y: W confounds the A -> Y effect."""
    return build_dag(["A", "W", "Y"], [("W", "A"), ("W", "Y"), ("A", "Y")])


def collider_triangle_dag() -> Dag:
    """A -> C <- Y with A -> Y: C is a collider between exposure and outcome."""
    return build_dag(["A", "C", "Y"], [("A", "C"), ("Y", "C"), ("A", "Y")])


def m_bias_dag() -> Dag:
    """C is the child of two causes that separately drive exposure and outcome."""
    return build_dag(
        ["A", "C", "W1", "W2", "Y"],
        [("W1", "A"), ("W1", "C"), ("W2", "C"), ("W2", "Y"), ("A", "Y")],
    )


def sodium_pressure_dag() -> Dag:
    """Short-label graph of the sodium/blood-pressure generator (no indicator)."""
    return build_dag(
        [AGE_NODE, SODIUM_NODE, SBP_NODE, PROTEINURIA_NODE],
        [
            (AGE_NODE, SODIUM_NODE),
            (AGE_NODE, SBP_NODE),
            (SODIUM_NODE, SBP_NODE),
            (SODIUM_NODE, PROTEINURIA_NODE),
            (SBP_NODE, PROTEINURIA_NODE),
        ],
    )
