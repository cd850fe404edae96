pub mod classifier;
pub mod corpus;
pub mod embedding;
pub mod error;
pub mod harness;
pub mod joint;
pub mod jsonl;
pub mod kmeans;
pub mod linalg;
pub mod pipeline;
pub mod question;
pub mod senses;
pub mod skipgram;
pub mod solvers;

pub use error::{Error, Result};
