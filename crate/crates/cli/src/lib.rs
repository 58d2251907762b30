//! Library side of the `cy8` binary: prime lists, report types, output
//! formats and the verification pipelines.

pub mod checks;
pub mod output;
pub mod primes;
pub mod report;
