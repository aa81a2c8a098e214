//! Littlewood-Paley analysis: dyadic partition, blocks, Besov norms,
//! c(ℕ) tails, the K₁/K₂ kernels, Bernstein ratios and increment norms.

mod besov;
mod blocks;
mod estimates;
mod kernel;
mod partition;
pub mod profile;

pub use besov::{besov_norm, cn_tail_profile, shell_norms, ShellEntry, ShellNormProfile};
pub use blocks::{dyadic_block, low_pass, BlockKind};
pub use estimates::{bernstein_ratios, gradient_magnitude_norm, increment_norm};
pub use kernel::{kernel_convolve, Kernel};
pub use partition::DyadicPartition;
