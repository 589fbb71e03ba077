from ..automata.bca import balanced_dbca, compile_pipeline
from ..automata.gfa import build_Lijk_gfa, build_neq_gfa
from ..core.builder import MachineBuilder
from ..core.descriptors import Integer
from ..core.registry import builder


@builder("Lijk_gfa", kind="gfa")
class LijkBuilder(MachineBuilder):
    """GFA positive exactly on aⁱbʲcᵏ with pairwise distinct i, j, k ≥ 1."""

    def build(self):
        return build_Lijk_gfa()


@builder("Lijk0_gfa", kind="gfa")
class Lijk0Builder(MachineBuilder):
    """GFA positive exactly on aⁱbʲcᵏ with pairwise distinct i, j, k ≥ 0."""

    def build(self):
        return build_Lijk_gfa(allow_empty=True)


@builder("neq_gfa", kind="gfa")
class NeqBuilder(MachineBuilder):
    """GFA positive exactly when every pair of letter counts differs."""

    t = Integer("Letter pairs", default=1, min_val=1)

    def build(self):
        return build_neq_gfa(self.t)


@builder("bal_witness_gfa", kind="gfa")
class BalancedWitnessBuilder(MachineBuilder):
    """Compiled G ⊗ G for the balanced-count machine: zero exactly on members."""

    k = Integer("Counters", default=1, min_val=1, max_val=13)

    def build(self):
        g2, _ = compile_pipeline(balanced_dbca(self.k))
        return g2
