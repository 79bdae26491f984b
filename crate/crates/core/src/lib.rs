//! GRANDAB hard-decision decoding for arbitrary binary linear codes.
//!
//! - [`gf2`]: packed GF(2) vectors and matrices
//! - [`code`]: linear codes (CRC construction, parity-check loading)
//! - [`grand`]: the serial reference decoder and pattern enumeration
//! - [`dial`]: cycle-accurate model of the two-dial parallel architecture
//! - [`channel`]: BPSK/AWGN hard-decision channel
//! - [`harness`]: Monte Carlo sweeps, throughput model, CSV output

pub mod channel;
pub mod code;
pub mod dial;
pub mod error;
pub mod gf2;
pub mod grand;
pub mod harness;
pub mod syndrome;

pub use code::{CrcSpec, LinearCode};
pub use error::{Error, Result};
pub use gf2::{BitMatrix, BitVector};
pub use grand::{DecodeResult, DecodeStatus, GrandConfig};
