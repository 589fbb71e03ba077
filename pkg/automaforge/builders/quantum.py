from ..core.builder import MachineBuilder
from ..core.descriptors import Bool, Integer
from ..core.registry import builder
from ..quantum.constructions import (
    build_qft_probe,
    build_upal1_qfa,
    build_upal_qbca,
    build_upal_star_qbca,
    build_upal_t_qfa,
)


@builder("upal", kind="qbca_realtime")
class UpalBuilder(MachineBuilder):
    """Realtime one-counter machine for aⁿbⁿ."""

    N = Integer("QFT size", default=2, min_val=2)

    def build(self):
        return build_upal_qbca(self.N)


@builder("upal_star", kind="qbca_realtime")
class UpalStarBuilder(MachineBuilder):
    """Realtime one-counter machine for (aⁿbⁿ)*."""

    N = Integer("QFT size", default=2, min_val=2)

    def build(self):
        return build_upal_star_qbca(self.N)


@builder("upal1", kind="qfa_oneway")
class Upal1Builder(MachineBuilder):
    """One-way machine for aⁿbaⁿ."""

    N = Integer("QFT size", default=2, min_val=2)

    def build(self):
        return build_upal1_qfa(self.N)


@builder("upal_t", kind="qfa_oneway")
class UpalTBuilder(MachineBuilder):
    """One-way machine for t nested a-block pairs separated by b."""

    t = Integer("Stages", default=2, min_val=1)
    N = Integer("QFT size", default=2, min_val=2)

    def build(self):
        return build_upal_t_qfa(self.t, self.N)


@builder("qft_probe", kind="qbca_realtime")
class QftProbeBuilder(MachineBuilder):
    """N equal paths meeting a QFT together or at distinct counter values."""

    N = Integer("QFT size", default=2, min_val=2)
    staggered = Bool("Distinct counters per path", default=False)

    def build(self):
        return build_qft_probe(self.N, self.staggered)
