from silverlab.experiments.base import ExperimentBase, ExperimentResult, argument
from silverlab.experiments.catalog import (
    AntiDemocracyExperiment,
    BuildTreeExperiment,
    CheckCertExperiment,
    DensityExperiment,
    EscapeExperiment,
    ForcingExperiment,
    IrrelevanceExperiment,
    MonochromeExperiment,
    SwrWitnessExperiment,
    TriplesExperiment,
    WitnessFExperiment,
)
