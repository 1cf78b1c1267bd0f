//! Regenerates `data/synthetic_spectrum.csv`, the noiseless spectrum used by
//! the `fit` round-trip tests.

use planck_radiation::constants::PhysicalConstants;
use planck_radiation::fit::{geometric_grid, synthesize_spectrum};
use planck_radiation::spectral::SpectralParams;

fn main() {
    let pc = PhysicalConstants::reference();
    let sp = SpectralParams::from_hk(pc.h, pc.k).expect("reference constants are positive");
    let nus = geometric_grid(1e12, 3e15, 40).expect("valid grid");
    let table = synthesize_spectrum(&[300.0, 1000.0, 3000.0], &nus, &sp, pc.c, 0.0, 0).expect("valid inputs");
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/synthetic_spectrum.csv");
    std::fs::write(path, table.to_csv()).expect("write fixture");
    println!("wrote {path} ({} rows)", table.len());
}
