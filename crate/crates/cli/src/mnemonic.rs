//! Built-in names for states and unitaries, with a fallback to matrix files.
//!
//! States: `plus`, `minus`, `bell`, `maxmixedN`, `basis:N:k`, `phi:ANGLE`,
//! `strong-continuity-3x3[:DELTA[:-]]`. Unitaries: `rot:ANGLE`, `idN`,
//! `strong-continuity-3x3`. Comma-separated names are tensored left to
//! right. Anything else is read as a matrix document.

use std::f64::consts::PI;

use hvt_core::axioms::instances::{strong_continuity_state, strong_continuity_unitary};
use hvt_core::format::read_matrix;
use hvt_core::qcore::{bell_state, minus_state, phi_state, plus_state, rotation, DEFAULT_TOL};
use hvt_core::{DensityMatrix, Error, Result, UnitaryMatrix};

fn bad(name: &str, why: &str) -> Error {
    Error::InvalidParameter(format!("'{name}': {why}"))
}

/// Parses `p/q`-multiples of pi exactly (`pi/8`, `-3pi/8`, `5*pi/8`, `pi`)
/// before converting to radians; plain numbers are radians.
pub fn parse_angle(text: &str) -> Result<f64> {
    let s = text.trim();
    let (sign, body) = match s.strip_prefix('-') {
        Some(rest) => (-1.0, rest.trim()),
        None => (1.0, s.strip_prefix('+').unwrap_or(s).trim()),
    };
    let Some(at) = body.find("pi") else {
        return body
            .parse::<f64>()
            .ok()
            .filter(|x| x.is_finite())
            .map(|x| sign * x)
            .ok_or_else(|| bad(text, "not an angle"));
    };
    let coeff = body[..at].trim().trim_end_matches('*').trim();
    let num: i64 = if coeff.is_empty() {
        1
    } else {
        coeff
            .parse()
            .map_err(|_| bad(text, "coefficient of pi must be an integer"))?
    };
    let rest = body[at + 2..].trim();
    let den: i64 = if rest.is_empty() {
        1
    } else {
        rest.strip_prefix('/')
            .and_then(|d| d.trim().parse().ok())
            .filter(|&d: &i64| d > 0)
            .ok_or_else(|| bad(text, "expected pi/DENOMINATOR"))?
    };
    Ok(sign * (num as f64) * PI / (den as f64))
}

fn dim_suffix(name: &str, prefix: &str) -> Option<Result<usize>> {
    let digits = name.strip_prefix(prefix)?;
    Some(
        digits
            .parse::<usize>()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| bad(name, "dimension must be a positive integer")),
    )
}

fn single_state(name: &str) -> Result<Option<DensityMatrix>> {
    let lower = name.to_ascii_lowercase();
    if let Some(n) = dim_suffix(&lower, "maxmixed") {
        return Ok(Some(DensityMatrix::maximally_mixed(n?)));
    }
    let parts: Vec<&str> = lower.split(':').collect();
    let state = match parts.as_slice() {
        ["plus"] => plus_state(),
        ["minus"] => minus_state(),
        ["bell"] => bell_state(),
        ["phi", angle] => phi_state(parse_angle(angle)?),
        ["basis", n, k] => {
            let n: usize = n.parse().map_err(|_| bad(name, "bad dimension"))?;
            let k: usize = k.parse().map_err(|_| bad(name, "bad index"))?;
            if k >= n {
                return Err(bad(name, "index out of range"));
            }
            DensityMatrix::basis(n, k)
        }
        ["strong-continuity-3x3"] => strong_continuity_state(0.1, 1.0),
        ["strong-continuity-3x3", delta] | ["strong-continuity-3x3", delta, "+"] => {
            strong_continuity_state(parse_delta(name, delta)?, 1.0)
        }
        ["strong-continuity-3x3", delta, "-"] => {
            strong_continuity_state(parse_delta(name, delta)?, -1.0)
        }
        _ => return Ok(None),
    };
    Ok(Some(state))
}

fn parse_delta(name: &str, delta: &str) -> Result<f64> {
    delta
        .parse::<f64>()
        .ok()
        .filter(|d| *d >= 0.0 && 2.0 * d * d <= 1.0)
        .ok_or_else(|| bad(name, "delta must satisfy 0 <= 2 delta^2 <= 1"))
}

fn single_unitary(name: &str) -> Result<Option<UnitaryMatrix>> {
    let lower = name.to_ascii_lowercase();
    if let Some(n) = dim_suffix(&lower, "id") {
        return Ok(Some(UnitaryMatrix::identity(n?)));
    }
    if let Some(angle) = lower.strip_prefix("rot:") {
        return Ok(Some(rotation(parse_angle(angle)?)));
    }
    if lower == "strong-continuity-3x3" {
        return Ok(Some(strong_continuity_unitary()));
    }
    Ok(None)
}

/// Splits on commas unless the whole string names an existing file.
fn factors(name: &str) -> Vec<&str> {
    if std::path::Path::new(name).exists() {
        vec![name]
    } else {
        name.split(',').map(str::trim).collect()
    }
}

pub fn state(name: &str) -> Result<DensityMatrix> {
    let mut acc: Option<DensityMatrix> = None;
    for f in factors(name) {
        let next = match single_state(f)? {
            Some(s) => s,
            None => DensityMatrix::new(read_matrix(f)?, DEFAULT_TOL)?,
        };
        acc = Some(match acc {
            Some(a) => a.kron(&next),
            None => next,
        });
    }
    acc.ok_or_else(|| bad(name, "empty state"))
}

pub fn unitary(name: &str) -> Result<UnitaryMatrix> {
    let mut acc: Option<UnitaryMatrix> = None;
    for f in factors(name) {
        let next = match single_unitary(f)? {
            Some(u) => u,
            None => UnitaryMatrix::new(read_matrix(f)?, DEFAULT_TOL)?,
        };
        acc = Some(match acc {
            Some(a) => a.kron(&next),
            None => next,
        });
    }
    acc.ok_or_else(|| bad(name, "empty unitary"))
}

#[cfg(test)]
mod tests {
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    use hvt_core::qcore::Complex64;
    use hvt_core::ComplexMatrix;

    use super::*;

    #[test]
    fn angles() {
        assert_eq!(parse_angle("pi/8").unwrap(), PI / 8.0);
        assert_eq!(parse_angle("-pi/8").unwrap(), -PI / 8.0);
        assert_eq!(parse_angle("5pi/8").unwrap(), 5.0 * PI / 8.0);
        assert_eq!(parse_angle("3*pi/8").unwrap(), 3.0 * PI / 8.0);
        assert_eq!(parse_angle("pi").unwrap(), PI);
        assert_eq!(parse_angle("0.25").unwrap(), 0.25);
        assert!(parse_angle("pi/0").is_err());
        assert!(parse_angle("1.5pi").is_err());
        assert!(parse_angle("tau").is_err());
    }

    #[test]
    fn closed_forms() {
        let h = FRAC_1_SQRT_2;
        let plus = state("plus").unwrap();
        let expected = ComplexMatrix::from_real_rows(&[&[0.5, 0.5], &[0.5, 0.5]]).unwrap();
        assert!(plus.matrix().max_abs_diff(&expected) <= 1e-12);
        let minus = state("minus").unwrap();
        assert!((minus.matrix().get(0, 1) + Complex64::new(0.5, 0.0)).norm() <= 1e-12);
        let mm = state("maxmixed3").unwrap();
        assert!(
            mm.matrix()
                .max_abs_diff(&ComplexMatrix::identity(3).scale(1.0 / 3.0))
                <= 1e-12
        );
        let phi = state("phi:pi/8").unwrap();
        let (c, s) = ((PI / 8.0).cos(), (PI / 8.0).sin());
        let expected = ComplexMatrix::from_real_rows(&[&[c * c, c * s], &[c * s, s * s]]).unwrap();
        assert!(phi.matrix().max_abs_diff(&expected) <= 1e-12);
        let bell = state("bell").unwrap();
        assert!((bell.matrix().get(0, 3).re - 0.5).abs() <= 1e-12);
        let r = unitary("rot:pi/4").unwrap();
        let expected = ComplexMatrix::from_real_rows(&[&[h, -h], &[h, h]]).unwrap();
        assert!(r.matrix().max_abs_diff(&expected) <= 1e-12);
        let sc = unitary("strong-continuity-3x3").unwrap();
        let expected =
            ComplexMatrix::from_real_rows(&[&[1.0, 0.0, 0.0], &[0.0, h, -h], &[0.0, h, h]])
                .unwrap();
        assert!(sc.matrix().max_abs_diff(&expected) <= 1e-12);
        assert_eq!(unitary("id3").unwrap(), UnitaryMatrix::identity(3));
    }

    #[test]
    fn tensor_products() {
        let u = unitary("rot:pi/8,id2").unwrap();
        assert_eq!(u.dim(), 4);
        assert_eq!(u, rotation(PI / 8.0).kron(&UnitaryMatrix::identity(2)));
        let rho = state("phi:pi/4,phi:pi/8").unwrap();
        assert_eq!(rho.dim(), 4);
    }

    #[test]
    fn three_level_states() {
        let a = state("strong-continuity-3x3:0.01").unwrap();
        let b = state("strong-continuity-3x3:0.01:-").unwrap();
        assert!((a.matrix().get(0, 2).re - b.matrix().get(0, 2).re.abs()).abs() < 1e-15);
        assert!(a.matrix().get(0, 2).re > 0.0 && b.matrix().get(0, 2).re < 0.0);
    }

    #[test]
    fn unknown_names_fall_through_to_files() {
        let err = state("no-such-file.json").unwrap_err();
        assert!(err.to_string().contains("no-such-file.json"));
    }
}
