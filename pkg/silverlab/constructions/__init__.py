from silverlab.constructions.baire import (
    e_word,
    escape_witness,
    g_n,
    h_map,
    in_Cn,
    in_Fn,
    oplus,
    witness_in_F,
    witness_out_F,
)
from silverlab.constructions.forcing import (
    SpineMap,
    UniformFiniteTree,
    build_delta_tree,
    densify,
    meet_dense,
)
from silverlab.constructions.kary import monochromatize, verify_monochrome
from silverlab.constructions.oracles import DenseOracle
