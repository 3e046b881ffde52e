//! Shared helpers for the integration tests.

#![allow(dead_code)]

pub mod bruteforce;
pub mod programs;
