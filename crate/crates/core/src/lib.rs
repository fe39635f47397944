//! Quantitative analysis of photo-sharing social datasets.
//!
//! * [`dataset`]: immutable domain model (users, photos, tags, contacts,
//!   comments, favorites, groups, memberships, pools) and per-user activity.
//! * [`ingest`]: the nine-file TSV interchange format.
//! * [`synth`]: seeded heavy-tailed synthetic corpora.
//! * [`harvest`]: resumable crawl over a paged source.
//! * [`metrics`]: Lorenz curves, Gini, functionality table, segmentation,
//!   id coverage, top sample, reciprocity.
//! * [`typology`]: correlations, Jacobi PCA, least squares.
//! * [`groupgraph`]: thematic and social group graphs, social density and tag
//!   dispersion.
//!
//! Numeric code is generic over [`Scalar`] (`f32` or `f64`); the aliases below
//! fix it to `f64`.

pub mod dataset;
pub mod groupgraph;
pub mod harvest;
pub mod ingest;
pub mod metrics;
pub mod scalar;
pub mod synth;
pub mod typology;

pub use dataset::{
    ActivityVector, BuildMode, Dataset, DatasetError, GroupId, PhotoId, Records, Table, UserId,
};
pub use scalar::Scalar;

pub type Distribution = metrics::Distribution<f64>;
pub type LorenzCurve = metrics::LorenzCurve<f64>;
pub type FunctionalityStats = metrics::FunctionalityStats<f64>;
pub type Segmentation = metrics::Segmentation<f64>;
pub type IdCoverage = metrics::IdCoverage<f64>;
pub type RankedUser = metrics::RankedUser<f64>;
pub type VariableMatrix = typology::VariableMatrix<f64>;
pub type CorrelationMatrix = typology::CorrelationMatrix<f64>;
pub type PcaResult = typology::PcaResult<f64>;
pub type OlsResult = typology::OlsResult<f64>;
pub type TagCorpusStats = groupgraph::TagCorpusStats<f64>;
pub type ThematicGraph = groupgraph::ThematicGraph<f64>;
pub type GroupIndicators = groupgraph::GroupIndicators<f64>;
