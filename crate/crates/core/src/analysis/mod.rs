//! From generation records to accuracy curves, critical lengths, decay fits,
//! correlations, the linear critical-length predictor, and filtering reports.

mod curve;
mod decay;
mod filter;
mod pipeline;
mod regression;
mod stats;

use thiserror::Error;

pub use curve::{build_curve, AccuracyCurve, Bucket, LengthSample, DEFAULT_BUCKETS, DEFAULT_MIN_PER_BUCKET};
pub use decay::{fit_decay, DecayFit};
pub use filter::{aggregate_filtering, evaluate_filtering, FilterReport, FilterSummary};
pub use pipeline::{
    analyze_records, filter_records, write_filter_report, AnalysisOptions, AnalysisOutput, CellCurve, CellFilter, PairAnalysis,
    PairKey,
};
pub use regression::{fit_lstar_model, predict_lstar, CriticalLengthModel, LstarPoint, Prediction, RegressionFile, RegressionFit};
pub use stats::{correlate_complexity, pearson, Correlations};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error("insufficient data: {0}")]
    Insufficient(String),
    #[error("undefined correlation: {0}")]
    ZeroVariance(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("rank-deficient design: {0}; sweep more distinct (k, n) values")]
    RankDeficient(String),
}

impl AnalysisError {
    pub fn code(&self) -> &'static str {
        match self {
            AnalysisError::Insufficient(_) => "INSUFFICIENT_DATA",
            AnalysisError::ZeroVariance(_) => "ZERO_VARIANCE",
            AnalysisError::Degenerate(_) => "DEGENERATE",
            AnalysisError::RankDeficient(_) => "RANK_DEFICIENT",
        }
    }
}
