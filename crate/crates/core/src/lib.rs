pub mod combtypes;
pub mod cyclespec;
pub mod error;
pub mod exactlin;
pub mod irreducibility;
pub mod modulifan;
pub mod paramcurves;
pub mod report;

pub use error::{Error, Result};
