//! Unit conversions used at the I/O boundary.

use std::f64::consts::PI;

/// One atomic unit of time in femtoseconds.
pub const FS_PER_AU: f64 = 0.024188843;

/// Period of the hydrogen ground-state electron, `T_e = 2π` a.u.
pub const ELECTRON_PERIOD: f64 = 2.0 * PI;

pub fn fs_to_au(fs: f64) -> f64 {
    fs / FS_PER_AU
}

pub fn au_to_fs(au: f64) -> f64 {
    au * FS_PER_AU
}
