//! Error probabilities, `δ_n`, sample complexity, VC dimension, the
//! sample-size upper bound, and the search for simple strings a compressor
//! cannot shorten.

mod delta;
mod distribution;
mod lemma1;
mod vc;

pub use delta::{
    delta_curve, delta_n, error_prob, sample_complexity, worst_case_n, worst_case_n_over, DeltaEvaluator, DeltaMode,
    DeltaPoint, SampleComplexityReport, WorstCase, EXACT_WORK_CAP,
};
pub use distribution::{default_family, DistributionSpec};
pub use lemma1::{lemma1_search, tau, tau_inverse, GammaSpec, Lemma1Report, Witness, LEMMA1_MAX_LEN, TAU_SCAN_CAP};
pub use vc::{prop1_bound, vc_dimension, VC_CLASS_CAP};
