from ..automata.bca import balanced_dbca, build_lsay_nbca
from ..automata.multihead import (
    build_twin_dkfa,
    build_twin_p2fa,
    build_twin_pkfa,
    coinflip_pbca,
    normalize_pbca,
    pbca_from_dbca,
    simulate_bca_as_3fa,
)
from ..core.builder import MachineBuilder
from ..core.descriptors import Bool, Integer
from ..core.registry import builder


@builder("lsay_nbca", kind="nbca")
class LsayBuilder(MachineBuilder):
    """Nondeterministic one-counter machine for L_say."""

    def build(self):
        return build_lsay_nbca()


@builder("bal_dbca", kind="dbca")
class BalancedBuilder(MachineBuilder):
    """Deterministic k-counter machine for equal letter pairs."""

    k = Integer("Counters", default=1, min_val=1, max_val=13)

    def build(self):
        return balanced_dbca(self.k)


@builder("coinflip_pbca", kind="pbca")
class CoinflipBuilder(MachineBuilder):
    """Probabilistic one-counter machine incrementing on a with probability 1/2."""

    def build(self):
        return coinflip_pbca()


@builder("bca3fa", kind="pkfa")
class Bca3faBuilder(MachineBuilder):
    """Three-head simulation of a probabilistic one-counter machine."""

    coinflip = Bool("Simulate the coin-flip machine instead of M_bal", default=False)

    def build(self):
        source = coinflip_pbca() if self.coinflip else pbca_from_dbca(balanced_dbca(1))
        return simulate_bca_as_3fa(normalize_pbca(source))


@builder("twin_dkfa", kind="pkfa")
class TwinDeterministicBuilder(MachineBuilder):
    """Deterministic k-head machine for L_twin(C(k,2))."""

    k = Integer("Heads", default=2, min_val=2)

    def build(self):
        return build_twin_dkfa(self.k)


@builder("twin_pkfa", kind="pkfa")
class TwinBranchingBuilder(MachineBuilder):
    """Two-branch k-head machine for L_twin(2·C(k,2)), error 1/2."""

    k = Integer("Heads", default=2, min_val=2)

    def build(self):
        return build_twin_pkfa(self.k)


@builder("twin_p2fa", kind="pkfa")
class TwinPickBuilder(MachineBuilder):
    """Two-head machine for L_twin(t) checking one random pair."""

    t = Integer("Pairs", default=2, min_val=1)

    def build(self):
        return build_twin_p2fa(self.t)
