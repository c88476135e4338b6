"""Lipschitz polytope volumes and growth constants of graphs."""

from fractions import Fraction

from ._lipvol import (
    Graph,
    ResourceError,
    __version__,
    annealed_slice_mean,
    count_hom,
    count_lipschitz,
    count_violating_pairs,
    ehrhart_c,
    flatness_anchor,
    gen_gnp,
    giant_fraction_fixed_point,
    graph_spec,
    kdd_volume_exact as _kdd_volume_exact,
    lifting_check,
    log_q_pochhammer_inf,
    make_complete,
    make_complete_bipartite,
    make_cycle,
    make_hypercube,
    make_path,
    profile_gain,
    q_pochhammer_inf,
    run_experiment,
    sis_volume,
    smc_log_volume,
    tail_census,
    zeta_integral,
)


def kdd_volume_exact(d):
    """Vol(P_{K_{d,d}}) as a Fraction."""
    return Fraction(_kdd_volume_exact(d))


__all__ = [name for name in dir() if not name.startswith("_")]
