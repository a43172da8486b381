from silverlab.swr.derivations import (
    Derivation,
    DerivationStep,
    FinitePermutation,
    UtilityStream,
    check_derivation,
    check_step,
)
from silverlab.swr.welfare import WitnessBundle, case_witness, decompose, oe_maps
