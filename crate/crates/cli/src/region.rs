//! CSV datasets for the `|ζ0|²` contour and the accessible `ξ` simplex.

use std::f64::consts::{FRAC_PI_4, PI};
use std::fmt::Write as _;

use qvk::canon2q::{recover_angles, zeta, CanonicalAngles, SchmidtSpectrum4};
use qvk::prodgeom::region_sample;

use crate::args::{RegionArgs, RegionMode};
use crate::error::{CliError, CliResult};

pub const CONTOUR_HEADER: &str = "alpha2_over_pi,alpha3_over_pi,zeta0_sq";
pub const TERNARY_HEADER: &str = "xi1,xi2,xi3,alpha1_over_pi,alpha2_over_pi,alpha3_over_pi,ordered";

pub fn region(args: &RegionArgs) -> CliResult<String> {
    if args.grid < 2 {
        return Err(CliError::Usage(format!("--grid must be at least 2, got {}", args.grid)));
    }
    match args.mode {
        RegionMode::Contour => {
            if args.zeta0.is_some() {
                return Err(CliError::Usage("--zeta0 only applies to ternary mode".into()));
            }
            Ok(contour(args.grid))
        }
        RegionMode::Ternary => {
            let z = args
                .zeta0
                .ok_or_else(|| CliError::Usage("ternary mode needs --zeta0".into()))?;
            if !(z > 0.5 && z < 1.0) {
                return Err(CliError::Usage(format!("--zeta0 must lie in (0.5, 1), got {z}")));
            }
            Ok(ternary(z, args.grid))
        }
    }
}

/// Node `i` of `n` evenly spaced points on `[0, 1/4]`, in units of π.
fn node(i: usize, n: usize) -> f64 {
    0.25 * i as f64 / (n - 1) as f64
}

/// `|ζ0|²` of `U(π/4, α2, α3)` on an `n × n` grid over `[0, π/4]²`.
pub fn contour(n: usize) -> String {
    let mut out = String::from(CONTOUR_HEADER);
    out.push('\n');
    for i in 0..n {
        for j in 0..n {
            let (a2, a3) = (node(i, n), node(j, n));
            let z0 = zeta(&CanonicalAngles::new(FRAC_PI_4, a2 * PI, a3 * PI))[0].norm_sqr();
            writeln!(out, "{a2},{a3},{z0}").expect("writing to a String");
        }
    }
    out
}

/// Points of `[0, π/4]³` with the given `|ζ0|`, parametrized by `C2, C3` on an
/// `n × n` grid of `[0, 1]²` and solved for `C1`, where `C_k = cos 2α_k` and
/// `4|ζ0|² = 1 + C1C2 + C1C3 + C2C3`.
///
/// Each emitted point is kept only if its sorted spectrum inverts to
/// canonical angles.
pub fn ternary(zeta0: f64, n: usize) -> String {
    let target = 4.0 * zeta0 * zeta0 - 1.0;
    let mut out = String::from(TERNARY_HEADER);
    out.push('\n');
    for i in 0..n {
        for j in 0..n {
            let c2 = i as f64 / (n - 1) as f64;
            let c3 = j as f64 / (n - 1) as f64;
            let sum = c2 + c3;
            if sum < 1e-12 {
                continue;
            }
            let c1 = (target - c2 * c3) / sum;
            if !(0.0..=1.0).contains(&c1) {
                continue;
            }
            let angles = CanonicalAngles::new(c1.acos() / 2.0, c2.acos() / 2.0, c3.acos() / 2.0);
            let Ok(sample) = region_sample(&angles) else {
                continue;
            };
            if recover_angles(&SchmidtSpectrum4::from_angles(&angles), 1e-9).is_err() {
                continue;
            }
            let [x1, x2, x3] = sample.xi;
            let [a1, a2, a3] = angles.as_array().map(|a| a / PI);
            let ordered = a1 >= a2 && a2 >= a3;
            writeln!(out, "{x1},{x2},{x3},{a1},{a2},{a3},{ordered}").expect("writing to a String");
        }
    }
    out
}
