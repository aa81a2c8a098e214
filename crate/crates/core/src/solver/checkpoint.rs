//! Binary restart files.
//!
//! Layout, all little-endian: the 5-byte magic `GSQG1`, n (u64), γ (f64),
//! time (f64), step count (u64), then n² coefficients in row-major order as
//! (re, im) pairs of f64.

use std::fs;
use std::io::Write;
use std::path::Path;

use rustfft::num_complex::Complex;

use super::state::SolverState;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::spectral::{Grid, SpectralField};

pub const CHECKPOINT_MAGIC: &[u8; 5] = b"GSQG1";
const HEADER_LEN: usize = 5 + 8 * 4;

pub fn encode_checkpoint<T: Scalar>(state: &SolverState<T>) -> Vec<u8> {
    let g = state.theta.grid();
    let mut out = Vec::with_capacity(HEADER_LEN + 16 * g.len());
    out.extend_from_slice(CHECKPOINT_MAGIC);
    out.extend_from_slice(&(g.n() as u64).to_le_bytes());
    out.extend_from_slice(&state.gamma.as_f64().to_le_bytes());
    out.extend_from_slice(&state.time.to_le_bytes());
    out.extend_from_slice(&state.step_count.to_le_bytes());
    for c in state.theta.coeffs() {
        out.extend_from_slice(&c.re.as_f64().to_le_bytes());
        out.extend_from_slice(&c.im.as_f64().to_le_bytes());
    }
    out
}

pub fn decode_checkpoint<T: Scalar>(bytes: &[u8]) -> Result<SolverState<T>> {
    if bytes.len() < HEADER_LEN || &bytes[..5] != CHECKPOINT_MAGIC {
        return Err(Error::Checkpoint("bad magic or truncated header".into()));
    }
    let word = |i: usize| -> [u8; 8] { bytes[5 + 8 * i..13 + 8 * i].try_into().unwrap() };
    let n = u64::from_le_bytes(word(0)) as usize;
    let gamma = f64::from_le_bytes(word(1));
    let time = f64::from_le_bytes(word(2));
    let step_count = u64::from_le_bytes(word(3));
    let grid = Grid::new(n).map_err(|e| Error::Checkpoint(format!("header: {e}")))?;
    let body = &bytes[HEADER_LEN..];
    if body.len() != 16 * grid.len() {
        return Err(Error::Checkpoint(format!(
            "expected {} body bytes for n = {n}, found {}",
            16 * grid.len(),
            body.len()
        )));
    }
    let coeffs: Vec<Complex<T>> = body
        .chunks_exact(16)
        .map(|c| {
            let re = f64::from_le_bytes(c[..8].try_into().unwrap());
            let im = f64::from_le_bytes(c[8..].try_into().unwrap());
            Complex::new(T::lit(re), T::lit(im))
        })
        .collect();
    let theta = SpectralField::new(grid, coeffs).map_err(|e| Error::Checkpoint(e.to_string()))?;
    let mut state =
        SolverState::new(theta, T::lit(gamma)).map_err(|e| Error::Checkpoint(e.to_string()))?;
    state.time = time;
    state.step_count = step_count;
    Ok(state)
}

/// Writes through a temporary file so a crash never leaves a torn checkpoint.
pub fn write_checkpoint<T: Scalar>(path: &Path, state: &SolverState<T>) -> Result<()> {
    let tmp = path.with_extension("tmp");
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(&encode_checkpoint(state))?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

pub fn read_checkpoint<T: Scalar>(path: &Path) -> Result<SolverState<T>> {
    decode_checkpoint(&fs::read(path)?)
}
