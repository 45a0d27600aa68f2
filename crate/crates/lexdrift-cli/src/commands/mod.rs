pub mod estimate;
pub mod freq;
pub mod ingest;
pub mod rates;
pub mod ratio_sweep;
pub mod report;
pub mod simulate;
