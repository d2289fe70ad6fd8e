pub mod ansatz_bench;
pub mod brg_sweep;
pub mod noise_bench;
pub mod pes;
pub mod simple;
