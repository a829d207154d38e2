//! Experiment runner for `ier-core`: file formats, JSON configuration,
//! bounded parallel execution and the five command modes.

#![forbid(unsafe_code)]

pub mod app;
pub mod config;
pub mod error;
pub mod exec;
pub mod experiments;
pub mod formats;

pub use error::{IerError, Result};
