//! Core library for enumerating fusion rings and categorifying them.
//!
//! Everything in here is pure computation over `alloc` collections; IO, file
//! formats and parallel dispatch live in the companion CLI crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod arith;
pub mod catdata;
pub mod eqgen;
pub mod gauge;
pub mod groupext;
pub mod polysolve;
pub mod ring;
pub mod search;
pub mod spectra;
pub mod zerosat;
pub mod zlinalg;
