"""
Mixed quantum states over configuration keys.

A QuantumState is kept as an ensemble of unnormalized pure components
(ρ = Σ_k |ψ_k⟩⟨ψ_k|). When the ensemble grows past ``component_limit`` it
switches to a sparse density operator. Both forms evolve under the same
channel ρ -> Σ_ω E_ω ρ E_ω†.
"""

from collections import defaultdict
from typing import Callable, Dict, Hashable, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from ..core.numerics import DROP_THRESHOLD, sort_key

Config = Hashable
# config -> [(ω, target config, amplitude)]
ColumnFn = Callable[[Config], Iterable[Tuple[str, Config, complex]]]
Component = Dict[Config, complex]
Density = Dict[Tuple[Config, Config], complex]

DEFAULT_COMPONENT_LIMIT = 64


def _prune(vector: Dict, threshold: float = DROP_THRESHOLD) -> Dict:
    return {k: v for k, v in vector.items() if abs(v) >= threshold}


class QuantumState:
    def __init__(
        self,
        components: Optional[List[Component]] = None,
        density: Optional[Density] = None,
    ):
        if components is not None and density is not None:
            raise ValueError("give either components or a density operator, not both")
        self.components: Optional[List[Component]] = None
        self.density: Optional[Density] = None
        if density is not None:
            self.density = _prune(density)
        else:
            self.components = [c for c in (_prune(c) for c in components or []) if c]

    @classmethod
    def pure(cls, config: Config) -> "QuantumState":
        return cls(components=[{config: 1 + 0j}])

    @property
    def is_density(self) -> bool:
        return self.density is not None

    def __repr__(self) -> str:
        if self.is_density:
            return f"QuantumState(density with {len(self.density)} entries, trace={self.trace():.6g})"
        return f"QuantumState({len(self.components)} components, trace={self.trace():.6g})"

    # ── Observables ──────────────────────────────────────────────────────

    def diagonal(self) -> Dict[Config, float]:
        out: Dict[Config, float] = defaultdict(float)
        if self.is_density:
            for (k1, k2), v in self.density.items():
                if k1 == k2:
                    out[k1] += v.real
        else:
            for comp in self.components:
                for k, a in comp.items():
                    out[k] += abs(a) ** 2
        return dict(out)

    def trace(self) -> float:
        return sum(self.diagonal().values())

    def probability(self, predicate: Callable[[Config], bool]) -> float:
        return sum(p for k, p in self.diagonal().items() if predicate(k))

    def support(self) -> List[Config]:
        return sorted(self.diagonal(), key=sort_key)

    def to_density(self) -> Density:
        if self.is_density:
            return dict(self.density)
        rho: Density = defaultdict(complex)
        for comp in self.components:
            for k1, a1 in comp.items():
                for k2, a2 in comp.items():
                    rho[(k1, k2)] += a1 * a2.conjugate()
        return _prune(rho)

    def density_matrix(self, order: Sequence[Config]) -> np.ndarray:
        index = {k: i for i, k in enumerate(order)}
        out = np.zeros((len(order), len(order)), dtype=complex)
        for (k1, k2), v in self.to_density().items():
            out[index[k1], index[k2]] += v
        return out

    # ── Evolution ────────────────────────────────────────────────────────

    def apply(self, columns: ColumnFn) -> Dict[str, "QuantumState"]:
        """Split into ω -> E_ω ρ E_ω†."""
        cache: Dict[Config, Dict[str, List[Tuple[Config, complex]]]] = {}

        def column(config: Config) -> Dict[str, List[Tuple[Config, complex]]]:
            col = cache.get(config)
            if col is None:
                col = defaultdict(list)
                for omega, target, amplitude in columns(config):
                    col[omega].append((target, amplitude))
                cache[config] = col
            return col

        if self.is_density:
            out: Dict[str, Density] = defaultdict(lambda: defaultdict(complex))
            for (k1, k2), v in self.density.items():
                col1, col2 = column(k1), column(k2)
                for omega, targets1 in col1.items():
                    targets2 = col2.get(omega)
                    if not targets2:
                        continue
                    part = out[omega]
                    for t1, a1 in targets1:
                        scaled = a1 * v
                        for t2, a2 in targets2:
                            part[(t1, t2)] += scaled * a2.conjugate()
            return {omega: QuantumState(density=dict(rho)) for omega, rho in out.items()}

        branches: Dict[str, List[Component]] = defaultdict(list)
        for comp in self.components:
            images: Dict[str, Component] = defaultdict(lambda: defaultdict(complex))
            for k, a in comp.items():
                for omega, targets in column(k).items():
                    image = images[omega]
                    for t, amp in targets:
                        image[t] += amp * a
            for omega, image in images.items():
                branches[omega].append(dict(image))
        return {omega: QuantumState(components=comps) for omega, comps in branches.items()}

    @staticmethod
    def merge(states: Iterable["QuantumState"], component_limit: int = DEFAULT_COMPONENT_LIMIT) -> "QuantumState":
        """Sum of states; falls back to a density operator past ``component_limit``."""
        states = list(states)
        if not any(s.is_density for s in states):
            comps = [c for s in states for c in s.components]
            if len(comps) <= component_limit:
                return QuantumState(components=comps)
        rho: Density = defaultdict(complex)
        for s in states:
            for key, v in s.to_density().items():
                rho[key] += v
        return QuantumState(density=dict(rho))
