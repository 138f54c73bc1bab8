pub mod aqec;
pub mod cli;
pub mod codes;
pub mod config;
pub mod engine;
pub mod error;
pub mod fockspace;
pub mod gates;
pub mod ncft;
pub mod phase_space;
pub mod protocols;
pub mod special;
