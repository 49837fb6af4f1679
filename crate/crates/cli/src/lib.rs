//! Library surface of the command-line front end, exposed so the
//! integration suite can drive the same pipelines the binary runs.

pub mod fixture;
pub mod ops;
pub mod paper;
pub mod report;

/// Hex digest used to stamp reports with their input.
pub fn digest(bytes: &[u8]) -> String {
    use sha2::{Digest, Sha256};
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    let out = hasher.finalize();
    out.iter().map(|b| format!("{b:02x}")).collect()
}
