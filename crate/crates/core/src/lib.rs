pub mod agreement;
pub mod corpus;
pub mod error;
pub mod featurize;
pub mod geninfo;
pub mod learners;
pub mod pipeline;
pub mod reporting;
pub mod ruleminer;
pub mod suffixes;
pub mod synth;
pub mod task;
pub mod vocabulary;
pub mod wordorder;

pub use error::{Error, Result};
