pub mod cli;
pub mod compact;
pub mod constructive;
pub mod error;
pub mod exact;
mod linalg;
pub mod pade;
pub mod report;
pub mod scenario;
pub mod series;
