"""Agent-based staker entry, used to cross-check the closed-form node count.

Beacon nodes join the network in batches. Every step, the network's
validators are split evenly over the active nodes and a candidate batch
joins only if each node would still cover its annual cost. Once a whole
batch no longer fits, the members of that batch try to join one at a time
(in seed-dependent order) until the next one would make nodes unprofitable.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, NonConvergenceError
from .pos import PosScenario, staker_annual_cost, validator_annual_return, validator_count
from .units import HOURS_PER_YEAR


@dataclass(frozen=True)
class SimConfig:
    scenario: PosScenario
    entry_batch: int = 100
    max_steps: int = 100_000
    seed: int = 0

    def __post_init__(self) -> None:
        if self.entry_batch < 1:
            raise ConfigError(f"entry_batch must be >= 1, got {self.entry_batch}")
        if self.max_steps < 1:
            raise ConfigError(f"max_steps must be >= 1, got {self.max_steps}")
        if not 0 <= self.seed < 2**64:
            raise ConfigError(f"seed must be a 64-bit unsigned integer, got {self.seed}")


@dataclass(frozen=True)
class SimOutcome:
    node_count: int
    validators_assigned: float  # validators per active node
    total_energy: float  # TWh/yr
    converged: bool
    steps_used: int


def simulate_equilibrium(config: SimConfig) -> SimOutcome:
    scenario = config.scenario
    n_val = validator_count(scenario.total_stake, scenario.stake_per_validator)
    g_val = validator_annual_return(
        scenario.total_stake, scenario.token_price, scenario.reward_constant
    )
    cost = staker_annual_cost(scenario.hardware, scenario.weighted, scenario.depreciation_years)

    def profitable(nodes: int) -> bool:
        return n_val / nodes * g_val >= cost

    rng = np.random.default_rng(config.seed)
    nodes = 0
    steps = 0
    batch = config.entry_batch
    while True:
        if steps >= config.max_steps:
            raise NonConvergenceError(
                f"still profitable to enter after {steps} steps ({nodes} nodes)"
            )
        steps += 1
        if profitable(nodes + batch):
            nodes += batch
            continue
        # Refine inside the rejected batch. Entry order only decides which
        # agent ids get in, not how many.
        order = rng.permutation(batch)
        admitted = 0
        for _ in order:
            if not profitable(nodes + admitted + 1):
                break
            admitted += 1
        nodes += admitted
        break

    per_node = n_val / nodes if nodes else 0.0
    energy = HOURS_PER_YEAR * scenario.hardware.power_w * nodes / 1e12
    return SimOutcome(
        node_count=nodes,
        validators_assigned=per_node,
        total_energy=energy,
        converged=True,
        steps_used=steps,
    )
