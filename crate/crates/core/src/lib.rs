pub mod error;
pub mod golden;
pub mod graph;
pub mod ngons;
pub mod rays;
pub mod spectra;
pub mod parity;
pub mod scan;
pub mod reference;
pub mod report;
pub mod cli;
