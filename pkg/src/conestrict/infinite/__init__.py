from .nat import (
    NatEndo,
    NatModel,
    WitnessReport,
    cantor_pair,
    cantor_unpair,
    nat_alpha,
    nat_alpha_term,
    nat_find_witness,
    nat_self_cone,
    parse_nat,
)
from .stream import (
    PositionalMap,
    StreamModel,
    equal_up_to_depth,
    parse_positional,
    positional_compose,
    section,
    stream_alpha_same_cones,
    stream_cone,
    stream_pair,
    stream_same_cones_choice,
    stream_self_cone,
    stream_strict_cones,
    stream_triple_cone,
)

__all__ = [
    "NatEndo",
    "NatModel",
    "PositionalMap",
    "StreamModel",
    "WitnessReport",
    "cantor_pair",
    "cantor_unpair",
    "equal_up_to_depth",
    "nat_alpha",
    "nat_alpha_term",
    "nat_find_witness",
    "nat_self_cone",
    "parse_nat",
    "parse_positional",
    "positional_compose",
    "section",
    "stream_alpha_same_cones",
    "stream_cone",
    "stream_pair",
    "stream_same_cones_choice",
    "stream_self_cone",
    "stream_strict_cones",
    "stream_triple_cone",
]
