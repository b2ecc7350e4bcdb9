"""Reversible arithmetic builders: adders, modular ops, table lookups,
Montgomery multiplication, Kaliski inversion, division, curve additions
and the windowed discrete-log circuit with its streaming counter."""

from .adders import (
    build_add,
    build_ctrl_add,
    build_ctrl_add_ext,
    build_less_than_flip,
    build_cswap_regs,
)
from .semiclassical import (
    build_const_add,
    build_const_sub,
    build_ctrl_const_add,
    build_const_compare_flip,
    build_mod_negate,
)
from .modular import (
    build_reduce_v1,
    build_reduce_v2,
    build_reduce_v3,
    build_mod_add,
    build_mod_sub,
    build_mod_double,
)
from .lookup import (
    build_multi_ctrl_not,
    build_load,
    build_unload,
    lookup_summary,
    table_stats,
    fixup_bundle,
)
from .montgomery import (
    build_mont_dirty_mul,
    build_mont_dirty_square,
    build_mont_clean_mul,
    build_mont_clean_square,
    build_mont_square_subtract,
)
from .inversion import build_kaliski_step, build_mod_inverse
from .division import build_mod_div
from .ecpoints import build_ec_add_lookup, build_ec_scalar_mul
from .shor import build_shor_f, count_shor, shor_count_bundle, MAX_BUILD_BITS

__all__ = [name for name in dir() if name.startswith(("build_", "count_", "lookup_", "table_", "fixup_", "shor_"))] + [
    "MAX_BUILD_BITS"
]
